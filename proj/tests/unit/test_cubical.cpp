#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "conley/cubeset_io.hpp"
#include "conley/cubical.hpp"
#include "conley/errors.hpp"
#include "test_support.hpp"

using namespace conley;
using namespace conley::cubical;
using conley::testing::random_blob;
using conley::testing::random_subset;
using conley::testing::square_grid;

namespace {

CubeSet annulus(const Grid& g) {
  // Every cube of a 3x3 block except the middle one.
  std::vector<std::vector<int>> idx;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != 1 || j != 1) idx.push_back({i, j});
  return CubeSet::from_indices(g, idx);
}

}  // namespace

TEST(Grid, CubeCodesRoundTrip) {
  Grid g(functional::TruncationLevel{2, 1}, {Axis{-1, 1, 3}, Axis{0, 1, 4}, Axis{-2, 2, 5}});
  EXPECT_EQ(g.cube_count(), 60u);
  for (std::uint64_t c = 0; c < g.cube_count(); ++c) EXPECT_EQ(g.cube_code(g.decode_cube(c)), c);
  for (std::uint64_t c = 0; c < g.cell_count(); c += 7) EXPECT_EQ(g.cell_code(g.decode_cell(c)), c);
}

TEST(Grid, CubeCellIsTopDimensional) {
  Grid g = square_grid(3, 4);
  for (std::uint64_t c = 0; c < g.cube_count(); ++c) EXPECT_EQ(g.cell_dim(g.cube_cell(c)), 3);
}

TEST(Grid, LocateAndCentre) {
  Grid g = square_grid(2, 4);
  std::vector<double> x{-0.9, 0.6};
  const auto code = g.locate(x);
  ASSERT_TRUE(code.has_value());
  EXPECT_EQ(g.decode_cube(*code), (std::vector<int>{0, 3}));
  const auto c = g.cube_center(*code);
  EXPECT_DOUBLE_EQ(c[0], -0.75);
  EXPECT_DOUBLE_EQ(c[1], 0.75);
  std::vector<double> outside{1.5, 0.0};
  EXPECT_FALSE(g.locate(outside).has_value());
}

TEST(Grid, ZeroCubeNeedsOddResolution) {
  EXPECT_EQ((Axis{-1, 1, 5}).zero_cube(), 2);
  EXPECT_EQ((Axis{-1, 1, 4}).zero_cube(), -1);
}

TEST(CubeSet, SetAlgebra) {
  Grid g = square_grid(2, 4);
  CubeSet a(g, {0, 1, 2, 5});
  CubeSet b(g, {2, 5, 9});
  EXPECT_EQ(set_union(a, b).size(), 5u);
  EXPECT_EQ(set_intersection(a, b), CubeSet(g, {2, 5}));
  EXPECT_EQ(set_difference(a, b), CubeSet(g, {0, 1}));
  EXPECT_TRUE(CubeSet(g, {2, 5}).subset_of(a));
  EXPECT_FALSE(b.subset_of(a));
}

TEST(CubeSet, ClosureOfOneSquare) {
  Grid g = square_grid(2, 3);
  CubeSet s(g, {4});
  EXPECT_EQ(closure_cells(s).size(), 9u);  // 4 vertices, 4 edges, 1 face
}

TEST(Cohomology, PointAndEmpty) {
  Grid g = square_grid(2, 3);
  EXPECT_EQ(relative_cohomology({CubeSet(g, {4}), CubeSet(g)}), GradedZ2Space(std::map<int, int>{{0, 1}}));
  EXPECT_TRUE(relative_cohomology({CubeSet(g), CubeSet(g)}).is_zero());
  // A pair whose total equals its sub has zero relative cohomology.
  EXPECT_TRUE(relative_cohomology({CubeSet(g, {1, 4}), CubeSet(g, {1, 4})}).is_zero());
}

TEST(Cohomology, CircleAndTorusLikeRing) {
  Grid g = square_grid(2, 3);
  EXPECT_EQ(relative_cohomology({annulus(g), CubeSet(g)}), GradedZ2Space({{0, 1}, {1, 1}}));
}

TEST(Cohomology, DiscRelativeToBoundaryRing) {
  Grid g = square_grid(2, 5);
  CubeSet all = CubeSet::full(g);
  CubeSet ring = boundary_collar(all);
  // (disc, thickened boundary) has the cohomology of a 2-sphere relative to a point.
  EXPECT_EQ(relative_cohomology({all, ring}), GradedZ2Space(std::map<int, int>{{2, 1}}));
}

TEST(Cohomology, HollowCubeIsASphere) {
  Grid g = square_grid(3, 3);
  std::vector<std::uint64_t> shell;
  for (std::uint64_t c = 0; c < g.cube_count(); ++c)
    if (c != g.cube_code(std::vector<int>{1, 1, 1})) shell.push_back(c);
  EXPECT_EQ(relative_cohomology({CubeSet(g, shell), CubeSet(g)}), GradedZ2Space({{0, 1}, {2, 1}}));
}

TEST(Cohomology, SubMustBeContained) {
  Grid g = square_grid(2, 3);
  EXPECT_THROW((CubicalPair{CubeSet(g, {1}), CubeSet(g, {2})}.validate()), ShapeError);
  EXPECT_THROW((CubicalPair{CubeSet(g, {1}), CubeSet(square_grid(2, 4), {1})}.validate()), IncompatibleGrids);
}

TEST(GradedSpace, ShiftAndSum) {
  GradedZ2Space a({{0, 1}, {2, 3}});
  EXPECT_EQ(a.shifted(1), GradedZ2Space({{-1, 1}, {1, 3}}));
  EXPECT_EQ(a.total_rank(), 4);
  EXPECT_EQ(direct_sum(a, GradedZ2Space(std::map<int, int>{{2, 1}})).rank(2), 4);
}

TEST(MayerVietoris, CircleSplitIntoArcsIsExact) {
  Grid g = square_grid(2, 3);
  CubeSet ring = annulus(g);
  CubeSet left = CubeSet::from_indices(g, {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 2}});
  CubeSet right = CubeSet::from_indices(g, {{1, 0}, {1, 2}, {2, 0}, {2, 1}, {2, 2}});
  const auto mv = mayer_vietoris_sequence({ring, CubeSet(g)}, left, right);
  EXPECT_TRUE(check_exact(mv.cycle()));
  // Two contractible arcs meeting in two pieces: delta carries H^0 onto H^1.
  EXPECT_EQ(mv.delta.rank(0), 1);
}

TEST(MayerVietoris, ZeroedConnectingMapBreaksExactness) {
  Grid g = square_grid(2, 3);
  CubeSet ring = annulus(g);
  CubeSet left = CubeSet::from_indices(g, {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 2}});
  CubeSet right = CubeSet::from_indices(g, {{1, 0}, {1, 2}, {2, 0}, {2, 1}, {2, 2}});
  auto mv = mayer_vietoris_sequence({ring, CubeSet(g)}, left, right);
  mv.delta = GradedZ2Map(mv.delta.source(), mv.delta.target(), mv.delta.shift());
  EXPECT_FALSE(check_exact(mv.cycle()));
}

TEST(MayerVietoris, CoverMustBeExact) {
  Grid g = square_grid(2, 3);
  EXPECT_THROW(mayer_vietoris_sequence({annulus(g), CubeSet(g)}, CubeSet(g, {0}), CubeSet(g, {1})), CoverViolation);
}

TEST(MayerVietoris, RandomRelativeTriadsAreExact) {
  std::mt19937_64 rng(20260101);
  int instances = 0;
  for (int t = 0; t < 60; ++t) {
    const Grid g = square_grid(t % 3 == 0 ? 3 : 2, t % 3 == 0 ? 6 : 14);
    const CubeSet total = random_blob(g, 40 + (t * 7) % 160, rng);
    ASSERT_LE(total.size(), 200u);
    const CubeSet sub = random_subset(total, 0.15, rng);
    CubeSet a = random_subset(total, 0.6, rng);
    CubeSet b = set_union(set_difference(total, a), random_subset(a, 0.3, rng));
    const auto mv = mayer_vietoris_sequence({total, sub}, a, b);
    EXPECT_TRUE(check_exact(mv.cycle())) << "instance " << t;
    ++instances;
  }
  EXPECT_GE(instances, 50);
}

TEST(TripleSequence, RandomTriplesAreExact) {
  std::mt19937_64 rng(424242);
  int instances = 0;
  for (int t = 0; t < 60; ++t) {
    const Grid g = square_grid(t % 2 == 0 ? 2 : 3, t % 2 == 0 ? 14 : 6);
    const CubeSet total = random_blob(g, 30 + (t * 11) % 170, rng);
    ASSERT_LE(total.size(), 200u);
    const CubeSet sub1 = random_subset(total, 0.5, rng);
    const CubeSet sub2 = random_subset(sub1, 0.5, rng);
    const auto ts = triple_sequence(total, sub1, sub2);
    EXPECT_TRUE(check_exact(ts.cycle())) << "instance " << t;
    ++instances;
  }
  EXPECT_GE(instances, 50);
}

TEST(TripleSequence, ConnectingMapOfDiscBoundaryPoint) {
  // (disc, ring, empty): H^1(ring) -> H^2(disc, ring) is onto.
  Grid g = square_grid(2, 5);
  CubeSet all = CubeSet::full(g);
  CubeSet ring = boundary_collar(all);
  const auto ts = triple_sequence(all, ring, CubeSet(g));
  EXPECT_TRUE(check_exact(ts.cycle()));
  EXPECT_EQ(ts.delta.rank(1), 1);
}

TEST(ChainBoundary, SquaresToZero) {
  Grid g = square_grid(3, 3);
  for (std::uint64_t c = 0; c < g.cube_count(); ++c) {
    const Chain b = chain_boundary(g, {g.cube_cell(c)});
    EXPECT_EQ(b.size(), 6u);
    EXPECT_TRUE(chain_boundary(g, b).empty());
  }
}

TEST(CubesetIo, RoundTrip) {
  std::mt19937_64 rng(9);
  Grid g(functional::TruncationLevel{1, 2}, {Axis{-1, 1, 5}, Axis{-0.5, 0.5, 3}, Axis{0, 2, 4}});
  const CubeSet s = random_blob(g, 25, rng);
  std::stringstream ss;
  write_cubeset(ss, s);
  EXPECT_EQ(read_cubeset(ss), s);
}

TEST(CubesetIo, RejectsGarbage) {
  std::stringstream ss("not a cube set\n");
  EXPECT_THROW(read_cubeset(ss), Error);
}
