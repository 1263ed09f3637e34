#include <gtest/gtest.h>

#include <random>

#include "conley/errors.hpp"
#include "conley/functional.hpp"

using namespace conley;
using namespace conley::functional;

namespace {

FunctionalSpec spec_with(std::vector<double> eig, Nonlinearity b) {
  FunctionalSpec s;
  s.op = SpectralOperator(std::move(eig), 1.5, -2.0);
  s.nonlinearity = std::move(b);
  return s;
}

std::vector<FunctionalSpec> sample_specs() {
  return {
      spec_with({1, -1}, Nonlinearity()),
      spec_with({1, 2, -1}, Nonlinearity(NonlinearityFamily::double_well, {}, 2.0)),
      spec_with({1, 1, -1, -1}, Nonlinearity(NonlinearityFamily::double_well, {0.3}, 1.6)),
      spec_with({1, -1}, Nonlinearity(NonlinearityFamily::cancel_pair, {}, 2.0)),
      spec_with({2, -1, -3}, Nonlinearity(NonlinearityFamily::shifted_well, {0.4, -0.2}, 2.0)),
  };
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace

TEST(SpectralOperator, SplitsListedAndTailCoordinates) {
  SpectralOperator op({1, -1, 2}, 3.0, -4.0);
  EXPECT_EQ(op.listed_positive(), 2);
  EXPECT_EQ(op.listed_negative(), 1);
  const auto coords = op.coordinates({3, 2});
  ASSERT_EQ(coords.size(), 5u);
  // Positive coordinates first, in listed order, then the tail.
  EXPECT_DOUBLE_EQ(coords[0].eigenvalue, 1.0);
  EXPECT_DOUBLE_EQ(coords[1].eigenvalue, 2.0);
  EXPECT_DOUBLE_EQ(coords[2].eigenvalue, 3.0);
  EXPECT_DOUBLE_EQ(coords[3].eigenvalue, -1.0);
  EXPECT_DOUBLE_EQ(coords[4].eigenvalue, -4.0);
  EXPECT_EQ(coords[4].sign, Sign::negative);
}

TEST(SpectralOperator, WithoutTailsOnlyListedLevelsExist) {
  SpectralOperator op({1, -1});
  EXPECT_TRUE(op.supports({1, 1}));
  EXPECT_FALSE(op.supports({2, 1}));
  EXPECT_THROW(op.coordinates({2, 1}), DimensionMismatch);
}

TEST(SpectralOperator, RejectsZeroEigenvalue) {
  EXPECT_THROW(SpectralOperator({1, 0, -1}), ConfigError);
  EXPECT_THROW(SpectralOperator({1}, -1.0), ConfigError);
}

TEST(Nonlinearity, ParsesKnownFamilies) {
  EXPECT_EQ(parse_family("double-well"), NonlinearityFamily::double_well);
  EXPECT_EQ(parse_family("cancel-pair"), NonlinearityFamily::cancel_pair);
  EXPECT_EQ(to_string(NonlinearityFamily::shifted_well), "shifted-well");
  EXPECT_THROW(parse_family("cubic"), ConfigError);
  EXPECT_THROW(Nonlinearity(NonlinearityFamily::zero, {1.0}), ConfigError);
  EXPECT_THROW(Nonlinearity(NonlinearityFamily::double_well, {}, -1.0), ConfigError);
}

TEST(FunctionalSpec, SupportMustFitListedEigenvalues) {
  FunctionalSpec s;
  s.op = SpectralOperator({-1.0}, 1.0, -1.0);
  s.nonlinearity = Nonlinearity(NonlinearityFamily::shifted_well, {0.1, 0.2});
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(Functional, QuadraticValue) {
  FunctionalSpec s = spec_with({1, -1}, Nonlinearity());
  Vector x(2);
  x << 0.5, 2.0;
  EXPECT_DOUBLE_EQ(value(s, x, {1, 1}), 0.5 * (0.25 - 4.0));
}

TEST(Functional, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.4, 1.4);
  const double h = 1e-6;
  for (const auto& spec : sample_specs()) {
    const TruncationLevel level{spec.support_level().m + 1, spec.support_level().n + 1};
    for (int t = 0; t < 50; ++t) {
      Vector x(level.dim());
      for (int i = 0; i < level.dim(); ++i) x[i] = u(rng);
      const Evaluation e = eval(spec, x, level);
      for (int i = 0; i < level.dim(); ++i) {
        Vector xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double fd = (value(spec, xp, level) - value(spec, xm, level)) / (2 * h);
        EXPECT_LT(rel_err(fd, e.gradient[i]), 1e-5) << "coordinate " << i;
      }
    }
  }
}

TEST(Functional, HessianMatchesFiniteDifferences) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.4, 1.4);
  const double h = 1e-5;
  for (const auto& spec : sample_specs()) {
    const TruncationLevel level{spec.support_level().m + 1, spec.support_level().n + 1};
    for (int t = 0; t < 50; ++t) {
      Vector x(level.dim());
      for (int i = 0; i < level.dim(); ++i) x[i] = u(rng);
      const Evaluation e = eval(spec, x, level);
      for (int j = 0; j < level.dim(); ++j) {
        Vector xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const Vector fd = (eval(spec, xp, level).gradient - eval(spec, xm, level).gradient) / (2 * h);
        for (int i = 0; i < level.dim(); ++i) EXPECT_LT(rel_err(fd[i], e.hessian(i, j)), 1e-4);
      }
    }
  }
}

TEST(Functional, VectorFieldIsNegativeGradient) {
  const auto spec = sample_specs()[1];
  Vector x(3);
  x << 0.3, -0.2, 0.7;
  EXPECT_TRUE(vector_field(spec, x, {2, 1}).isApprox(-eval(spec, x, {2, 1}).gradient));
}

TEST(Functional, WrongDimensionIsRejected) {
  const auto spec = sample_specs()[0];
  EXPECT_THROW(value(spec, Vector::Zero(3), {1, 1}), DimensionMismatch);
}

TEST(CriticalPoints, QuadraticHasOneNondegeneratePoint) {
  const auto spec = spec_with({1, 1, -1, -1}, Nonlinearity());
  Box box{{-1, -1, -1, -1}, {1, 1, 1, 1}};
  const auto points = find_critical_points(spec, {2, 2}, box);
  ASSERT_EQ(points.size(), 1u);
  EXPECT_LT(points[0].coords.norm(), 1e-9);
  EXPECT_EQ(points[0].signature.negative, 2);
  EXPECT_EQ(points[0].e_index, 0);
}

TEST(CriticalPoints, DoubleWellHasTwoWellsAndASaddle) {
  const auto spec = spec_with({1, -1}, Nonlinearity(NonlinearityFamily::double_well, {}, 2.0));
  Box box{{-1.6, -0.5}, {1.6, 0.5}};
  const auto points = find_critical_points(spec, {1, 1}, box);
  ASSERT_EQ(points.size(), 3u);
  int saddles = 0, wells = 0;
  for (const auto& p : points) {
    EXPECT_NEAR(std::abs(p.coords[0]), p.e_index == 1 ? 0.0 : 1.0, 1e-8);
    (p.e_index == 1 ? saddles : wells) += 1;
  }
  EXPECT_EQ(saddles, 1);
  EXPECT_EQ(wells, 2);
}

TEST(CriticalPoints, IndexIsShiftedByNegativeTruncation) {
  // The same critical point seen at a larger level keeps its relative index.
  const auto spec = spec_with({1, 1, -1, -1}, Nonlinearity(NonlinearityFamily::double_well, {0.3}, 1.6));
  Vector x = Vector::Zero(4);
  x[0] = 0.3;
  const auto cp = classify_critical_point(spec, x, {2, 2});
  EXPECT_EQ(cp.e_index, 1);
  Vector y = Vector::Zero(6);
  y[0] = 0.3;
  EXPECT_EQ(classify_critical_point(spec, y, {3, 3}).e_index, 1);
}

TEST(CriticalPoints, RegionMustMatchLevel) {
  const auto spec = sample_specs()[0];
  EXPECT_THROW(find_critical_points(spec, {1, 1}, Box{{-1}, {1}}), DimensionMismatch);
}

TEST(Box, ContainsWithSlack) {
  Box b{{-1, -1}, {1, 1}};
  Vector x(2);
  x << 1.05, 0.0;
  EXPECT_FALSE(b.contains(x));
  EXPECT_TRUE(b.contains(x, 0.1));
}
