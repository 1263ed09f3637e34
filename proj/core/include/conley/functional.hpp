#pragma once

// The functional f(x) = 1/2 <Lx, x> + b(x) on a split Hilbert space, modelled
// by a diagonal self-adjoint isomorphism L and a nonlinearity b depending on
// finitely many leading coordinates.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace conley::functional {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Tolerances {
  double newton = 1e-10;
  double degeneracy = 1e-6;
  double dedup = 1e-6;
};

/// Number of retained positive (m) and negative (n) coordinates.
struct TruncationLevel {
  int m = 0;
  int n = 0;

  int dim() const { return m + n; }
  bool covers(const TruncationLevel& other) const { return m >= other.m && n >= other.n; }
  friend auto operator<=>(const TruncationLevel&, const TruncationLevel&) = default;
};

std::string to_string(const TruncationLevel& level);

enum class Sign { positive, negative };

/// One coordinate of a truncation: which global coordinate it is and the
/// eigenvalue of L along it.
struct Coordinate {
  int global = 0;
  double eigenvalue = 0.0;
  Sign sign = Sign::positive;
};

/// L = diag(lambda_1, lambda_2, ...). Listed eigenvalues come first; the
/// optional tails supply eigenvalues for positive/negative coordinates beyond
/// the listed ones so that truncations of any size exist.
class SpectralOperator {
 public:
  SpectralOperator() = default;
  explicit SpectralOperator(std::vector<double> eigenvalues, std::optional<double> tail_positive = std::nullopt,
                            std::optional<double> tail_negative = std::nullopt);

  const std::vector<double>& listed() const { return eigenvalues_; }
  std::optional<double> tail_positive() const { return tail_positive_; }
  std::optional<double> tail_negative() const { return tail_negative_; }

  int listed_positive() const { return static_cast<int>(positive_.size()); }
  int listed_negative() const { return static_cast<int>(negative_.size()); }

  /// Highest level representable; std::nullopt components mean unbounded.
  bool supports(const TruncationLevel& level) const;

  /// Truncation coordinates, positive ones first, each group in global order.
  std::vector<Coordinate> coordinates(const TruncationLevel& level) const;

 private:
  std::vector<double> eigenvalues_;
  std::optional<double> tail_positive_;
  std::optional<double> tail_negative_;
  std::vector<int> positive_;
  std::vector<int> negative_;
};

enum class NonlinearityFamily { zero, double_well, cancel_pair, shifted_well };

NonlinearityFamily parse_family(const std::string& name);
std::string to_string(NonlinearityFamily family);

/// Builtin nonlinearities. b depends only on the first support_dim() global
/// coordinates. Polynomial slope families are extended linearly (constant
/// second derivative) outside |s| > clamp_radius, so grad b is globally
/// Lipschitz.
class Nonlinearity {
 public:
  Nonlinearity() = default;
  Nonlinearity(NonlinearityFamily family, std::vector<double> params, double clamp_radius = 2.0);

  NonlinearityFamily family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  double clamp_radius() const { return clamp_radius_; }
  int support_dim() const { return support_dim_; }

  /// Arguments are the support coordinates x_1..x_d (global order).
  double value(const Vector& support, const std::vector<double>& lambdas) const;
  Vector gradient(const Vector& support, const std::vector<double>& lambdas) const;
  Matrix hessian(const Vector& support, const std::vector<double>& lambdas) const;

  /// b'(s) for the single-axis families (double-well, cancel-pair).
  double axis_slope(double s) const { return slope(s); }
  bool single_axis() const {
    return family_ == NonlinearityFamily::double_well || family_ == NonlinearityFamily::cancel_pair;
  }

  /// Global Lipschitz constant of grad b.
  double gradient_lipschitz() const;

 private:
  // Polynomial coefficients of b'(s) in ascending powers, on |s| <= R.
  std::vector<double> build_slope_poly() const;
  const std::vector<double>& slope_poly() const { return poly_; }
  double slope(double s) const;
  double slope_derivative(double s) const;
  double antiderivative(double s) const;

  NonlinearityFamily family_ = NonlinearityFamily::zero;
  std::vector<double> params_;
  double clamp_radius_ = 2.0;
  int support_dim_ = 0;
  std::vector<double> poly_;
};

struct FunctionalSpec {
  SpectralOperator op;
  Nonlinearity nonlinearity;

  /// Throws ConfigError when support_dim exceeds the listed eigenvalues.
  void validate() const;
  /// Lowest level retaining every support coordinate.
  TruncationLevel support_level() const;
  /// Lipschitz constant of grad f on the given truncation.
  double gradient_lipschitz(const TruncationLevel& level) const;
};

struct Evaluation {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;
};

Evaluation eval(const FunctionalSpec& spec, const Vector& x, const TruncationLevel& level);
Vector vector_field(const FunctionalSpec& spec, const Vector& x, const TruncationLevel& level);
double value(const FunctionalSpec& spec, const Vector& x, const TruncationLevel& level);

struct HessianSignature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};

struct CriticalPoint {
  Vector coords;
  double value = 0.0;
  HessianSignature signature;
  int e_index = 0;
};

/// Axis-aligned box in truncation coordinates.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dim() const { return lo.size(); }
  bool contains(const Vector& x, double slack = 0.0) const;
};

struct SeedSpec {
  int per_axis = 9;
  int random = 0;
  std::uint64_t rng_seed = 0;
};

std::vector<CriticalPoint> find_critical_points(const FunctionalSpec& spec, const TruncationLevel& level,
                                                const Box& region, const SeedSpec& seeds = {},
                                                const Tolerances& tol = {});

/// Classifies a point already known to be critical at `level`.
CriticalPoint classify_critical_point(const FunctionalSpec& spec, const Vector& x, const TruncationLevel& level,
                                       const Tolerances& tol = {});

int e_index(const FunctionalSpec& spec, const CriticalPoint& cp, const TruncationLevel& level,
            const Tolerances& tol = {});

}  // namespace conley::functional
