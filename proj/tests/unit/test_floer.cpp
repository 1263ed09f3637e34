#include <gtest/gtest.h>

#include "conley/continuation.hpp"
#include "conley/errors.hpp"
#include "conley/floer.hpp"
#include "conley/scenarios.hpp"
#include "test_support.hpp"

using namespace conley;
using namespace conley::floer;
using cubical::GradedZ2Space;

namespace {

const CriticalPoint* find_index(const FloerComplex& c, int k) {
  for (const auto& g : c.generators)
    if (g.e_index == k) return &g;
  return nullptr;
}

}  // namespace

TEST(Shooting, DoubleWellSaddleReachesEachWellOnce) {
  const auto s = scenarios::builtin_scenario("double-well");
  const auto points = functional::find_critical_points(s.spec, s.level, s.region);
  ASSERT_EQ(points.size(), 3u);
  const CriticalPoint* saddle = nullptr;
  for (const auto& p : points)
    if (p.e_index == 1) saddle = &p;
  ASSERT_NE(saddle, nullptr);
  for (const auto& p : points) {
    if (&p == saddle) continue;
    const auto rep = count_connecting_orbits(s.spec, p, *saddle, s.level, {}, s.region, points);
    EXPECT_EQ(rep.count, 1);
    EXPECT_EQ(rep.orbits.size(), 1u);
    EXPECT_GT(rep.orbits[0].margin, 0.0);
  }
}

TEST(Shooting, IndexGapIsAPreconditionViolation) {
  const auto s = scenarios::builtin_scenario("double-well");
  const auto points = functional::find_critical_points(s.spec, s.level, s.region);
  std::vector<CriticalPoint> wells;
  for (const auto& p : points)
    if (p.e_index == 0) wells.push_back(p);
  ASSERT_EQ(wells.size(), 2u);
  EXPECT_THROW(count_connecting_orbits(s.spec, wells[0], wells[1], s.level), PreconditionViolation);
}

TEST(Shooting, TinyMarginIsNonTransverse) {
  const auto s = scenarios::builtin_scenario("cancel-pair");
  FloerParams p;
  p.shooting.transv_tol = 1e6;
  EXPECT_THROW(build_floer_complex(s.spec, s.region, s.level, p), NonTransverse);
}

TEST(Shooting, ShortHorizonIsInconclusive) {
  const auto s = scenarios::builtin_scenario("cancel-pair");
  FloerParams p;
  p.shooting.t_max = 0.05;
  EXPECT_THROW(build_floer_complex(s.spec, s.region, s.level, p), Inconclusive);
}

TEST(FloerComplex, SinglePointIsOneGenerator) {
  const auto s = scenarios::builtin_scenario("quadratic-point-plane");
  const auto c = build_floer_complex(s.spec, s.region, s.level);
  EXPECT_EQ(c.generators.size(), 1u);
  EXPECT_EQ(c.rank(0), 1);
  EXPECT_EQ(floer_cohomology(c), GradedZ2Space(std::map<int, int>{{0, 1}}));
}

TEST(FloerComplex, CancellingPairHasZeroCohomology) {
  const auto s = scenarios::builtin_scenario("cancel-pair");
  const auto c = build_floer_complex(s.spec, s.region, s.level);
  EXPECT_EQ(c.rank(0), 1);
  EXPECT_EQ(c.rank(1), 1);
  ASSERT_NE(c.boundary_at(0), nullptr);
  EXPECT_EQ(c.boundary_at(0)->rank(), 1u);
  EXPECT_TRUE(floer_cohomology(c).is_zero());
  EXPECT_TRUE(boundary_squares_to_zero(c));
}

TEST(FloerComplex, DoubleWellHasRankOneInDegreeZero) {
  const auto s = scenarios::builtin_scenario("double-well");
  const auto c = build_floer_complex(s.spec, s.region, s.level);
  EXPECT_EQ(c.rank(0), 2);
  EXPECT_EQ(c.rank(1), 1);
  EXPECT_TRUE(boundary_squares_to_zero(c));
  EXPECT_EQ(floer_cohomology(c), GradedZ2Space(std::map<int, int>{{0, 1}}));
  ASSERT_NE(find_index(c, 1), nullptr);
}

TEST(FloerComplex, SameSeedSameComplex) {
  const auto s = scenarios::builtin_scenario("double-well");
  FloerParams p;
  p.seeds.random = 4;
  p.seeds.rng_seed = 17;
  const auto a = build_floer_complex(s.spec, s.region, s.level, p);
  const auto b = build_floer_complex(s.spec, s.region, s.level, p);
  ASSERT_EQ(a.generators.size(), b.generators.size());
  for (std::size_t i = 0; i < a.generators.size(); ++i) EXPECT_EQ(a.generators[i].coords, b.generators[i].coords);
  EXPECT_EQ(a.boundary, b.boundary);
}

TEST(FloerConleyComparison, ScenarioVerdictsAreEqual) {
  for (const std::string name : {"quadratic-point-plane", "cancel-pair", "double-well"}) {
    const auto s = scenarios::builtin_scenario(name);
    VerifyOptions o;
    o.flow = s.flow;
    o.resolution = s.resolution;
    const auto r = verify_main_theorem(s.spec, s.region, s.level, s.ladder, o);
    EXPECT_EQ(r.verdict, Verdict::equal) << name;
    EXPECT_EQ(r.floer, r.conley.limit.ranks) << name;
  }
}

TEST(FloerConleyComparison, CorruptedBoundaryIsUnequal) {
  const auto s = scenarios::builtin_scenario("cancel-pair");
  VerifyOptions o;
  o.flow = s.flow;
  o.resolution = s.resolution;
  o.corrupt_boundary = true;
  EXPECT_EQ(verify_main_theorem(s.spec, s.region, s.level, s.ladder, o).verdict, Verdict::unequal);
}

TEST(FloerConleyComparison, ShortLadderIsInconclusive) {
  const auto s = scenarios::builtin_scenario("quadratic-point-plane");
  VerifyOptions o;
  o.flow = s.flow;
  EXPECT_EQ(verify_main_theorem(s.spec, s.region, s.level, {{1, 1}, {2, 2}}, o).verdict, Verdict::inconclusive);
}

TEST(Continuation, SegmentFieldBecomesFreeOfInvariantSets) {
  const auto s = scenarios::builtin_scenario("cancel-pair");
  const auto rep = continuation_trivialize(s.spec, s.level, s.region, s.resolution, 8, s.flow);
  EXPECT_TRUE(rep.isolation_maintained);
  EXPECT_FALSE(rep.breaking_tau.has_value());
  EXPECT_TRUE(rep.final_invariant_empty);
  EXPECT_LT(rep.F3_first_max, 0.0);
  ASSERT_EQ(rep.samples.size(), 9u);
  EXPECT_DOUBLE_EQ(rep.samples.back().tau, 3.0);
  EXPECT_GT(rep.samples.front().invariant_cubes, 0u);
}

TEST(Continuation, ZeroStepsOnlySamplesTheStart) {
  const auto s = scenarios::builtin_scenario("cancel-pair");
  const auto rep = continuation_trivialize(s.spec, s.level, s.region, s.resolution, 0, s.flow);
  ASSERT_EQ(rep.samples.size(), 1u);
  EXPECT_FALSE(rep.final_invariant_empty);
}

TEST(Continuation, PathEndpointsMatchTheStages) {
  const auto s = scenarios::builtin_scenario("cancel-pair");
  const auto field = index::gradient_field(s.spec, s.level);
  const auto path = continuation_path(field);
  Vector x(2);
  x << 0.3, 0.2;
  EXPECT_TRUE(path.at(0.0).eval(x).isApprox(field.eval(x)));
  EXPECT_TRUE(path.at(1.0).eval(x).isApprox(path.F1.eval(x)));
  EXPECT_TRUE(path.at(3.0).eval(x).isApprox(path.F3.eval(x)));
  EXPECT_GT(path.M, 0.0);
}

TEST(SublevelTriple, CancellingPairIsExactWithRankOneConnectingMap) {
  const auto s = scenarios::builtin_scenario("cancel-pair");
  const auto c = build_floer_complex(s.spec, s.region, s.level);
  ASSERT_EQ(c.generators.size(), 2u);
  const auto rp = index::index_pair_for_region(s.spec, s.level, s.region, s.resolution, s.flow);
  const auto& lo = c.generators[0];
  const auto& hi = c.generators[1];
  const auto t = sublevel_triple(s.spec, rp.pair, rp.map, lo, hi, 0.5 * (lo.value + hi.value), s.ladder);
  EXPECT_TRUE(t.exact_everywhere);
  for (const auto& l : t.levels) {
    EXPECT_TRUE(l.exact);
    int total = 0;
    for (auto [k, r] : l.delta_rank) total += r;
    EXPECT_EQ(total, 1);
    EXPECT_EQ(l.delta_rank.count(lo.e_index) ? l.delta_rank.at(lo.e_index) : 0, 1);
  }
}

TEST(SublevelTriple, LevelMustSeparateThePoints) {
  const auto s = scenarios::builtin_scenario("cancel-pair");
  const auto c = build_floer_complex(s.spec, s.region, s.level);
  const auto rp = index::index_pair_for_region(s.spec, s.level, s.region, s.resolution, s.flow);
  EXPECT_THROW(sublevel_triple(s.spec, rp.pair, rp.map, c.generators[0], c.generators[1],
                               c.generators[1].value + 1.0, s.ladder),
               Error);
}
