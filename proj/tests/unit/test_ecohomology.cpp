#include <gtest/gtest.h>

#include "conley/ecohomology.hpp"
#include "conley/errors.hpp"
#include "test_support.hpp"

using namespace conley;
using namespace conley::ecoh;
using conley::cubical::GradedZ2Space;
using functional::TruncationLevel;

namespace {

ShapeSpec shape(ShapeFamily family, double radius = 1.0) {
  ShapeSpec s;
  s.family = family;
  s.radius = radius;
  return s;
}

const LadderGrid kSmall{1.5, 7};

}  // namespace

TEST(Ladder, ExpandsPositiveCoordinateFirst) {
  const auto steps = expand_ladder({{1, 1}, {3, 2}});
  const std::vector<TruncationLevel> expected{{1, 1}, {2, 1}, {2, 2}, {3, 2}};
  EXPECT_EQ(steps, expected);
}

TEST(Ladder, RejectsNonMonotoneOrRepeatedLevels) {
  EXPECT_THROW(expand_ladder({{2, 2}, {1, 3}}), ConfigError);
  EXPECT_THROW(expand_ladder({{2, 2}, {2, 2}}), ConfigError);
  EXPECT_THROW(expand_ladder({{-1, 0}}), ConfigError);
}

TEST(Shapes, UnknownFamilyAndBadRadius) {
  EXPECT_THROW(parse_shape_family("torus"), ConfigError);
  EXPECT_EQ(parse_shape_family("sphere"), ShapeFamily::sphere);
  EXPECT_THROW(shape(ShapeFamily::ball, -1.0).validate(), ConfigError);
}

TEST(Shapes, LadderGridNeedsOddResolution) {
  EXPECT_THROW((LadderGrid{1.0, 8}).validate(), ConfigError);
  EXPECT_THROW((LadderGrid{0.0, 9}).validate(), ConfigError);
  const auto g = kSmall.at({1, 2});
  EXPECT_EQ(g.dim(), 3u);
  EXPECT_EQ(g.axis(0).zero_cube(), 3);
}

TEST(Shapes, ExplicitFamilyNeedsEveryLevel) {
  ShapeSpec s = shape(ShapeFamily::explicit_sets);
  EXPECT_THROW(slice(s, {0, 1}, kSmall.at({0, 1})), ShapeError);
}

TEST(NegativeTower, SphereHasOneClassInDegreeMinusOne) {
  const Tower t = tower_negative(shape(ShapeFamily::sphere), {2, 3, 4, 5}, kSmall);
  ASSERT_EQ(t.levels.size(), 4u);
  // Each finite slice is a round sphere; only the top class survives the limit.
  for (const auto& l : t.levels) {
    EXPECT_EQ(l.normalized.rank(-1), 1);
    EXPECT_EQ(l.normalized.rank(-l.level.n), 1);
  }
  const ELimit lim = stabilized_limit(t, 3);
  EXPECT_TRUE(lim.stabilized);
  EXPECT_EQ(lim.ranks, GradedZ2Space(std::map<int, int>{{-1, 1}}));
}

TEST(NegativeTower, CompactSetsAreTrivial) {
  for (auto family : {ShapeFamily::point, ShapeFamily::ball}) {
    ShapeSpec s = shape(family, 0.5);
    if (family == ShapeFamily::ball) s.confined_to = TruncationLevel{0, 2};
    const ELimit lim = stabilized_limit(tower_negative(s, {2, 3, 4, 5}, kSmall), 3);
    EXPECT_TRUE(lim.stabilized) << to_string(family);
    EXPECT_TRUE(lim.ranks.is_zero()) << to_string(family);
  }
}

TEST(NegativeTower, EmptyShapeIsTrivial) {
  const ELimit lim = stabilized_limit(tower_negative(shape(ShapeFamily::empty), {1, 2, 3}, kSmall), 3);
  EXPECT_TRUE(lim.ranks.is_zero());
}

TEST(PositiveTower, ConfinedSphereKeepsDegreesZeroAndTwo) {
  ShapeSpec s = shape(ShapeFamily::sphere);
  s.confined_to = TruncationLevel{3, 0};
  const Tower t = tower_positive(s, {3, 4, 5, 6}, kSmall);
  const ELimit lim = stabilized_limit(t, 3);
  EXPECT_TRUE(lim.stabilized);
  EXPECT_EQ(lim.ranks, GradedZ2Space(std::map<int, int>{{0, 1}, {2, 1}}));
}

TEST(Stabilization, ShortTowerIsNotCertified) {
  const Tower t = tower_negative(shape(ShapeFamily::sphere), {2, 3}, kSmall);
  const ELimit lim = stabilized_limit(t, 3);
  EXPECT_FALSE(lim.stabilized);
  EXPECT_FALSE(lim.reason.empty());
  EXPECT_THROW(stabilized_limit(t, 1), PreconditionViolation);
}

TEST(Tower, NegativeTowerRejectsPositiveLevels) {
  EXPECT_THROW(build_tower(TowerKind::negative, {{1, 1}, {1, 2}},
                           [](const TruncationLevel& l) {
                             const auto g = kSmall.at(l);
                             return cubical::CubicalPair{cubical::CubeSet::full(g), cubical::CubeSet(g)};
                           }),
               ConfigError);
}

TEST(EMorphism, IdentityIsAdmissible) {
  EMorphismSpec m;
  m.level = {2, 1};
  m.linear = functional::Matrix::Identity(3, 3);
  m.perturbation = functional::Matrix::Zero(3, 3);
  const auto rep = e_morphism_validate(m);
  EXPECT_TRUE(rep.ok);
  EXPECT_EQ(rep.perturbation_rank, 0);
  EXPECT_NEAR(rep.preimage_bound, 1.0, 1e-12);
}

TEST(EMorphism, DetectsMixingAndLeakingPerturbations) {
  EMorphismSpec m;
  m.level = {1, 1};
  m.linear = functional::Matrix::Identity(2, 2);
  m.linear(1, 0) = 1.0;  // positive coordinate leaks into the negative one
  EXPECT_FALSE(e_morphism_validate(m).preserves_positive);

  EMorphismSpec k;
  k.level = {2, 2};
  k.linear = functional::Matrix::Identity(4, 4);
  k.perturbation = functional::Matrix::Zero(4, 4);
  k.perturbation(1, 1) = 0.5;
  k.perturbation_support = 1;
  const auto rep = e_morphism_validate(k);
  EXPECT_FALSE(rep.finite_rank);
  EXPECT_EQ(rep.perturbation_rank, 1);
}

TEST(EMorphism, SingularAffinePartHasUnboundedPreimages) {
  EMorphismSpec m;
  m.level = {1, 1};
  m.linear = functional::Matrix::Identity(2, 2);
  m.perturbation = functional::Matrix::Zero(2, 2);
  m.perturbation(0, 0) = -1.0;
  const auto rep = e_morphism_validate(m);
  EXPECT_FALSE(rep.bounded_preimages);
  EXPECT_FALSE(rep.ok);
}

TEST(Tower, OversizedSliceIsAResolutionError) {
  const LadderGrid wide{1.0, 33};  // 33^4 cubes > kMaxTowerCubes
  EXPECT_THROW(build_tower(TowerKind::middle, {{2, 2}},
                           [&](const TruncationLevel& l) {
                             const auto g = wide.at(l);
                             return cubical::CubicalPair{cubical::CubeSet::full(g), cubical::CubeSet(g)};
                           }),
               ResolutionError);
}
