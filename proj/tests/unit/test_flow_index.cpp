#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "conley/conley_index.hpp"
#include "conley/errors.hpp"
#include "conley/scenarios.hpp"
#include "test_support.hpp"

using namespace conley;
using namespace conley::index;
using cubical::CubeSet;
using cubical::GradedZ2Space;

namespace {

struct Fixture {
  scenarios::Scenario scenario;
  RegionPair region;
};

Fixture plane() {
  auto s = scenarios::builtin_scenario("quadratic-point-plane");
  auto rp = index_pair_for_region(s.spec, s.level, s.region, s.resolution, s.flow);
  return {std::move(s), std::move(rp)};
}

/// Every sampled trajectory of the time-T map lands in the image box of the
/// cube it starts in, or the cube is flagged as escaping.
void expect_sound(const scenarios::Scenario& s, const Grid& grid, std::uint64_t seed) {
  const VectorField field = gradient_field(s.spec, s.level);
  const MultivaluedMap map = outer_map(field, grid, s.flow);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> cube(0, grid.cube_count() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int misses = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::uint64_t c = cube(rng);
    const auto idx = grid.decode_cube(c);
    Vector x(static_cast<Eigen::Index>(grid.dim()));
    for (std::size_t i = 0; i < grid.dim(); ++i)
      x[static_cast<Eigen::Index>(i)] = grid.axis(i).cube_lo(idx[i]) + unit(rng) * grid.axis(i).width();
    const Vector y = flow(field, x, map.map_time(), map.time_step());
    std::vector<double> yv(y.data(), y.data() + y.size());
    const auto target = grid.locate(yv);
    if (target ? !map.image_contains(c, *target) : !map.escapes(c)) ++misses;
  }
  EXPECT_EQ(misses, 0) << s.name;
}

}  // namespace

TEST(OuterMap, SoundOnQuadraticGrid) {
  const auto s = scenarios::builtin_scenario("quadratic-point-plane");
  expect_sound(s, region_grid(s.region, s.level, s.resolution), 1);
}

TEST(OuterMap, SoundOnDoubleWellGrid) {
  const auto s = scenarios::builtin_scenario("double-well");
  expect_sound(s, region_grid(s.region, s.level, s.resolution), 2);
}

TEST(OuterMap, SoundOnCancelPairGrid) {
  const auto s = scenarios::builtin_scenario("cancel-pair");
  expect_sound(s, region_grid(s.region, s.level, s.resolution), 3);
}

TEST(OuterMap, ImagesContainTheCentreImage) {
  const auto s = scenarios::builtin_scenario("quadratic-point-plane");
  const Grid g = region_grid(s.region, s.level, 9);
  const auto field = gradient_field(s.spec, s.level);
  const auto map = outer_map(field, g, s.flow);
  for (std::uint64_t c = 0; c < g.cube_count(); ++c) {
    const auto centre = g.cube_center(c);
    const Vector x = Eigen::Map<const Vector>(centre.data(), static_cast<Eigen::Index>(centre.size()));
    const Vector y = flow(field, x, map.map_time(), map.time_step());
    std::vector<double> yv(y.data(), y.data() + y.size());
    if (auto t = g.locate(yv)) EXPECT_TRUE(map.image_contains(c, *t));
  }
}

TEST(Flow, ReversedFlowUndoesForwardFlow) {
  const auto s = scenarios::builtin_scenario("double-well");
  const auto field = gradient_field(s.spec, s.level);
  Vector x(2);
  x << 0.4, 0.1;
  const Vector back = flow(field, flow(field, x, 0.5, 1e-3), -0.5, 1e-3);
  EXPECT_LT((back - x).norm(), 1e-8);
}

TEST(InvariantPart, QuadraticSaddleSitsAtTheOrigin) {
  const auto f = plane();
  const auto& S = f.region.pair.invariant;
  ASSERT_FALSE(S.empty());
  for (auto c : S.cubes())
    for (double x : S.grid().cube_center(c)) EXPECT_LT(std::abs(x), 0.25);
  EXPECT_TRUE(is_isolating(CubeSet::full(S.grid()), f.region.map));
}

TEST(IndexPair, RegionPairSatisfiesTheAxioms) {
  const auto f = plane();
  EXPECT_TRUE(f.region.pair.regular);
  EXPECT_EQ(check_index_pair(f.region.pair, f.region.map), "");
  EXPECT_TRUE(std::isfinite(f.region.pair.exit_time_bound));
}

TEST(IndexPair, CheckReportsBrokenPair) {
  auto f = plane();
  IndexPair broken = f.region.pair;
  broken.N0 = cubical::set_union(broken.N0, broken.invariant);
  EXPECT_NE(check_index_pair(broken, f.region.map), "");
}

TEST(IndexPair, RegionThroughTheSaddleIsNotIsolating) {
  const auto s = scenarios::builtin_scenario("quadratic-point-plane");
  functional::Box cut{{0.0, -0.5}, {1.0, 0.5}};
  EXPECT_THROW(index_pair_for_region(s.spec, s.level, cut, s.resolution, s.flow), NonIsolating);
}

TEST(IndexPair, EmptyInvariantSetGivesTrivialPair) {
  const auto s = scenarios::builtin_scenario("quadratic-point-plane");
  functional::Box away{{0.6, -0.5}, {1.4, 0.5}};
  const auto rp = index_pair_for_region(s.spec, s.level, away, 9, s.flow);
  EXPECT_TRUE(rp.pair.invariant.empty());
  EXPECT_TRUE(cubical::relative_cohomology(rp.pair.as_pair()).is_zero());
}

TEST(IndexPair, SerializationRoundTrip) {
  const auto f = plane();
  std::stringstream ss;
  write_index_pair(ss, f.region.pair);
  const IndexPair back = read_index_pair(ss);
  EXPECT_EQ(back.N1, f.region.pair.N1);
  EXPECT_EQ(back.N0, f.region.pair.N0);
  EXPECT_EQ(back.invariant, f.region.pair.invariant);
  EXPECT_EQ(back.level, f.region.pair.level);
  EXPECT_EQ(back.regular, f.region.pair.regular);
  EXPECT_DOUBLE_EQ(back.exit_time_bound, f.region.pair.exit_time_bound);
}

TEST(IndexPair, ReadRejectsWrongHeader) {
  std::stringstream ss("indexpair v9\n");
  EXPECT_THROW(read_index_pair(ss), Error);
}

TEST(ExitTime, InvariantCubesNeverLeave) {
  const auto f = plane();
  const auto field = gradient_field(f.scenario.spec, f.scenario.level);
  Vector origin = Vector::Zero(2);
  const auto t = exit_time(f.region.pair, field, origin, f.scenario.flow);
  EXPECT_TRUE(std::isinf(t.upper));
  Vector far(2);
  far << 0.0, 0.49;
  const auto u = exit_time(f.region.pair, field, far, f.scenario.flow);
  EXPECT_LT(u.upper, 2.0);
  EXPECT_LE(u.lower, u.upper);
}

TEST(Squeeze, KeepsAnIndexPairWithTheSameCohomology) {
  const auto f = plane();
  const auto base = cubical::relative_cohomology(f.region.pair.as_pair());
  for (double t : {0.5, 1.0, 2.0}) {
    for (bool forward : {true, false}) {
      const IndexPair q = forward ? squeeze_forward(f.region.pair, f.region.map, t)
                                  : squeeze_backward(f.region.pair, f.region.map, t);
      EXPECT_EQ(check_index_pair(q, f.region.map), "") << "t=" << t << " forward=" << forward;
      EXPECT_EQ(cubical::relative_cohomology(q.as_pair()), base);
    }
  }
}

TEST(Squeeze, ZeroTimeIsIdentity) {
  const auto f = plane();
  EXPECT_EQ(squeeze_forward(f.region.pair, f.region.map, 0.0).N1, f.region.pair.N1);
  EXPECT_EQ(squeeze_backward(f.region.pair, f.region.map, 0.0).N0, f.region.pair.N0);
}

TEST(ProductPair, AddsDiscsAroundTheInvariantSet) {
  const auto f = plane();
  const IndexPair p = product_index_pair(f.region.pair, {2, 2});
  EXPECT_EQ(p.level, (functional::TruncationLevel{2, 2}));
  EXPECT_EQ(p.N1.grid().dim(), 4u);
  EXPECT_EQ(p.N1.size(), f.region.pair.N1.size() * 5);
  EXPECT_EQ(p.invariant.size(), f.region.pair.invariant.size());
  EXPECT_THROW(product_grid(f.region.pair.N1.grid(), {2, 2}, ProductDiscs{0.5, 3}), ConfigError);
}

TEST(ConleyIndex, SaddleOfThePlaneHasRankOneInDegreeZero) {
  const auto f = plane();
  const auto r = conley_index(f.region.pair, f.scenario.ladder);
  EXPECT_TRUE(r.limit.stabilized);
  EXPECT_EQ(r.limit.ranks, GradedZ2Space(std::map<int, int>{{0, 1}}));
}

TEST(ConleyIndex, LadderMustCoverThePair) {
  const auto f = plane();
  EXPECT_THROW(conley_index(f.region.pair, {{0, 1}, {1, 1}}), Error);
}

TEST(ConleyIndex, IrregularPairIsRejected) {
  auto f = plane();
  f.region.pair.regular = false;
  EXPECT_THROW(conley_index(f.region.pair, f.scenario.ladder), PreconditionViolation);
}

TEST(ConleyIndex, IndependentOfTheIsolatingBox) {
  const auto s = scenarios::builtin_scenario("quadratic-point-plane");
  const auto a = index_pair_for_region(s.spec, s.level, s.region, 15, s.flow);
  const auto b = index_pair_for_region(s.spec, s.level, {{-0.8, -0.8}, {0.8, 0.8}}, 25, s.flow);
  const auto rep = verify_independence(a.pair, b.pair, s.ladder);
  EXPECT_TRUE(rep.equal);
  EXPECT_EQ(rep.first.ranks, rep.second.ranks);
}
