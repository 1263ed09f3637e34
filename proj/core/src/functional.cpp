#include "conley/functional.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "conley/errors.hpp"

namespace conley::functional {

std::string to_string(const TruncationLevel& level) {
  return "(" + std::to_string(level.m) + "," + std::to_string(level.n) + ")";
}

SpectralOperator::SpectralOperator(std::vector<double> eigenvalues, std::optional<double> tail_positive,
                                   std::optional<double> tail_negative)
    : eigenvalues_(std::move(eigenvalues)), tail_positive_(tail_positive), tail_negative_(tail_negative) {
  for (std::size_t i = 0; i < eigenvalues_.size(); ++i) {
    const double l = eigenvalues_[i];
    if (l == 0.0 || !std::isfinite(l))
      throw ConfigError("eigenvalue " + std::to_string(i + 1) + " must be a nonzero finite real");
    (l > 0 ? positive_ : negative_).push_back(static_cast<int>(i));
  }
  if (tail_positive_ && !(*tail_positive_ > 0)) throw ConfigError("positive tail eigenvalue must be > 0");
  if (tail_negative_ && !(*tail_negative_ < 0)) throw ConfigError("negative tail eigenvalue must be < 0");
}

bool SpectralOperator::supports(const TruncationLevel& level) const {
  if (level.m < 0 || level.n < 0) return false;
  if (level.m > listed_positive() && !tail_positive_) return false;
  if (level.n > listed_negative() && !tail_negative_) return false;
  return true;
}

std::vector<Coordinate> SpectralOperator::coordinates(const TruncationLevel& level) const {
  if (!supports(level))
    throw DimensionMismatch("operator has no truncation at level " + to_string(level));
  const int listed = static_cast<int>(eigenvalues_.size());
  std::vector<Coordinate> out;
  out.reserve(static_cast<std::size_t>(level.dim()));
  for (int i = 0; i < level.m; ++i) {
    if (i < listed_positive())
      out.push_back({positive_[i], eigenvalues_[positive_[i]], Sign::positive});
    else
      out.push_back({listed + 2 * (i - listed_positive()), *tail_positive_, Sign::positive});
  }
  for (int i = 0; i < level.n; ++i) {
    if (i < listed_negative())
      out.push_back({negative_[i], eigenvalues_[negative_[i]], Sign::negative});
    else
      out.push_back({listed + 2 * (i - listed_negative()) + 1, *tail_negative_, Sign::negative});
  }
  return out;
}

NonlinearityFamily parse_family(const std::string& name) {
  if (name == "zero") return NonlinearityFamily::zero;
  if (name == "double-well") return NonlinearityFamily::double_well;
  if (name == "cancel-pair") return NonlinearityFamily::cancel_pair;
  if (name == "shifted-well") return NonlinearityFamily::shifted_well;
  throw ConfigError("unknown nonlinearity family '" + name + "'");
}

std::string to_string(NonlinearityFamily family) {
  switch (family) {
    case NonlinearityFamily::zero: return "zero";
    case NonlinearityFamily::double_well: return "double-well";
    case NonlinearityFamily::cancel_pair: return "cancel-pair";
    case NonlinearityFamily::shifted_well: return "shifted-well";
  }
  return "zero";
}

Nonlinearity::Nonlinearity(NonlinearityFamily family, std::vector<double> params, double clamp_radius)
    : family_(family), params_(std::move(params)), clamp_radius_(clamp_radius) {
  if (!(clamp_radius_ > 0)) throw ConfigError("clamp radius must be positive");
  switch (family_) {
    case NonlinearityFamily::zero:
      if (!params_.empty()) throw ConfigError("family 'zero' takes no parameters");
      support_dim_ = 0;
      break;
    case NonlinearityFamily::double_well:
      if (params_.size() > 1) throw ConfigError("family 'double-well' takes at most one parameter (center)");
      support_dim_ = 1;
      break;
    case NonlinearityFamily::cancel_pair:
      if (!params_.empty()) throw ConfigError("family 'cancel-pair' takes no parameters");
      support_dim_ = 1;
      break;
    case NonlinearityFamily::shifted_well:
      if (params_.empty()) throw ConfigError("family 'shifted-well' needs the well location");
      support_dim_ = static_cast<int>(params_.size());
      break;
  }
  poly_ = build_slope_poly();
}

std::vector<double> Nonlinearity::build_slope_poly() const {
  switch (family_) {
    case NonlinearityFamily::double_well: {
      // b'(s) = u^3 - 2u - c with u = s - c: with lambda_1 = 1 the axis
      // restriction of f has critical points c - 1, c, c + 1.
      const double c = params_.empty() ? 0.0 : params_[0];
      return {c - c * c * c, 3 * c * c - 2, -3 * c, 1.0};
    }
    case NonlinearityFamily::cancel_pair:
      // b'(s) = s^2 - s - 1: with lambda_1 = 1, f' = s^2 - 1 on the axis.
      return {-1.0, -1.0, 1.0};
    default:
      return {};
  }
}

namespace {

double poly_eval(const std::vector<double>& c, double s) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
  return acc;
}

double poly_deriv(const std::vector<double>& c, double s) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * s + static_cast<double>(k) * c[k];
  return acc;
}

double poly_anti(const std::vector<double>& c, double s) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * s + c[k] / static_cast<double>(k + 1);
  return acc * s;
}

}  // namespace

double Nonlinearity::slope(double s) const {
  const auto& p = slope_poly();
  const double r = clamp_radius_;
  if (s > r) return poly_eval(p, r) + poly_deriv(p, r) * (s - r);
  if (s < -r) return poly_eval(p, -r) + poly_deriv(p, -r) * (s + r);
  return poly_eval(p, s);
}

double Nonlinearity::slope_derivative(double s) const {
  const auto& p = slope_poly();
  const double r = clamp_radius_;
  return poly_deriv(p, std::clamp(s, -r, r));
}

double Nonlinearity::antiderivative(double s) const {
  const auto& p = slope_poly();
  const double r = clamp_radius_;
  if (s > r) {
    const double d = s - r;
    return poly_anti(p, r) + poly_eval(p, r) * d + 0.5 * poly_deriv(p, r) * d * d;
  }
  if (s < -r) {
    const double d = s + r;
    return poly_anti(p, -r) + poly_eval(p, -r) * d + 0.5 * poly_deriv(p, -r) * d * d;
  }
  return poly_anti(p, s);
}

double Nonlinearity::value(const Vector& x, const std::vector<double>& lambdas) const {
  switch (family_) {
    case NonlinearityFamily::zero: return 0.0;
    case NonlinearityFamily::double_well:
    case NonlinearityFamily::cancel_pair: return antiderivative(x[0]);
    case NonlinearityFamily::shifted_well: {
      double acc = 0.0;
      for (int i = 0; i < support_dim_; ++i) acc -= lambdas[i] * params_[i] * x[i];
      return acc;
    }
  }
  return 0.0;
}

Vector Nonlinearity::gradient(const Vector& x, const std::vector<double>& lambdas) const {
  Vector g = Vector::Zero(support_dim_);
  switch (family_) {
    case NonlinearityFamily::zero: break;
    case NonlinearityFamily::double_well:
    case NonlinearityFamily::cancel_pair: g[0] = slope(x[0]); break;
    case NonlinearityFamily::shifted_well:
      for (int i = 0; i < support_dim_; ++i) g[i] = -lambdas[i] * params_[i];
      break;
  }
  return g;
}

Matrix Nonlinearity::hessian(const Vector& x, const std::vector<double>&) const {
  Matrix h = Matrix::Zero(support_dim_, support_dim_);
  if (family_ == NonlinearityFamily::double_well || family_ == NonlinearityFamily::cancel_pair)
    h(0, 0) = slope_derivative(x[0]);
  return h;
}

double Nonlinearity::gradient_lipschitz() const {
  if (family_ != NonlinearityFamily::double_well && family_ != NonlinearityFamily::cancel_pair) return 0.0;
  // b'' is a polynomial of degree <= 2 on [-R, R] and constant outside; its
  // extremum is at an endpoint or at the vertex.
  const auto& p = slope_poly();
  const double r = clamp_radius_;
  double best = std::max(std::abs(poly_deriv(p, r)), std::abs(poly_deriv(p, -r)));
  if (p.size() == 4 && p[3] != 0.0) {
    const double vertex = -p[2] / (3.0 * p[3]);
    if (std::abs(vertex) <= r) best = std::max(best, std::abs(poly_deriv(p, vertex)));
  }
  return best;
}

void FunctionalSpec::validate() const {
  const int d = nonlinearity.support_dim();
  if (d > static_cast<int>(op.listed().size()))
    throw ConfigError("nonlinearity support (" + std::to_string(d) + ") exceeds the listed eigenvalues (" +
                      std::to_string(op.listed().size()) + ")");
}

TruncationLevel FunctionalSpec::support_level() const {
  TruncationLevel level;
  for (int i = 0; i < nonlinearity.support_dim(); ++i) (op.listed()[i] > 0 ? level.m : level.n) += 1;
  return level;
}

double FunctionalSpec::gradient_lipschitz(const TruncationLevel& level) const {
  double lmax = 0.0;
  for (const auto& c : op.coordinates(level)) lmax = std::max(lmax, std::abs(c.eigenvalue));
  return lmax + nonlinearity.gradient_lipschitz();
}

namespace {

struct SupportMap {
  std::vector<int> position;  // truncation position of each support coordinate, -1 if absent
  std::vector<double> lambdas;
};

SupportMap support_map(const FunctionalSpec& spec, const std::vector<Coordinate>& coords) {
  const int d = spec.nonlinearity.support_dim();
  SupportMap map{std::vector<int>(static_cast<std::size_t>(d), -1), {}};
  map.lambdas.assign(spec.op.listed().begin(), spec.op.listed().begin() + d);
  for (std::size_t p = 0; p < coords.size(); ++p)
    if (coords[p].global < d) map.position[static_cast<std::size_t>(coords[p].global)] = static_cast<int>(p);
  return map;
}

}  // namespace

Evaluation eval(const FunctionalSpec& spec, const Vector& x, const TruncationLevel& level) {
  const auto coords = spec.op.coordinates(level);
  if (x.size() != static_cast<Eigen::Index>(coords.size()))
    throw DimensionMismatch("point has dimension " + std::to_string(x.size()) + " but level " + to_string(level) +
                            " has dimension " + std::to_string(coords.size()));
  const int d = spec.nonlinearity.support_dim();
  const auto map = support_map(spec, coords);
  Vector support = Vector::Zero(d);
  for (int i = 0; i < d; ++i)
    if (map.position[i] >= 0) support[i] = x[map.position[i]];

  Evaluation out;
  out.value = 0.0;
  out.gradient = Vector::Zero(x.size());
  out.hessian = Matrix::Zero(x.size(), x.size());
  for (Eigen::Index p = 0; p < x.size(); ++p) {
    const double l = coords[static_cast<std::size_t>(p)].eigenvalue;
    out.value += 0.5 * l * x[p] * x[p];
    out.gradient[p] = l * x[p];
    out.hessian(p, p) = l;
  }
  if (d > 0) {
    out.value += spec.nonlinearity.value(support, map.lambdas);
    const Vector gb = spec.nonlinearity.gradient(support, map.lambdas);
    const Matrix hb = spec.nonlinearity.hessian(support, map.lambdas);
    for (int i = 0; i < d; ++i) {
      if (map.position[i] < 0) continue;
      out.gradient[map.position[i]] += gb[i];
      for (int j = 0; j < d; ++j)
        if (map.position[j] >= 0) out.hessian(map.position[i], map.position[j]) += hb(i, j);
    }
  }
  return out;
}

Vector vector_field(const FunctionalSpec& spec, const Vector& x, const TruncationLevel& level) {
  return -eval(spec, x, level).gradient;
}

double value(const FunctionalSpec& spec, const Vector& x, const TruncationLevel& level) {
  return eval(spec, x, level).value;
}

bool Box::contains(const Vector& x, double slack) const {
  if (static_cast<std::size_t>(x.size()) != lo.size()) return false;
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (x[static_cast<Eigen::Index>(i)] < lo[i] - slack || x[static_cast<Eigen::Index>(i)] > hi[i] + slack)
      return false;
  return true;
}

CriticalPoint classify_critical_point(const FunctionalSpec& spec, const Vector& x, const TruncationLevel& level,
                                       const Tolerances& tol) {
  const auto e = eval(spec, x, level);
  CriticalPoint cp;
  cp.coords = x;
  cp.value = e.value;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(e.hessian, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double l = solver.eigenvalues()[i];
    if (std::abs(l) < tol.degeneracy)
      ++cp.signature.zero;
    else if (l > 0)
      ++cp.signature.positive;
    else
      ++cp.signature.negative;
  }
  if (cp.signature.zero != 0) {
    std::string where;
    for (Eigen::Index i = 0; i < x.size(); ++i) where += (i ? "," : "") + std::to_string(x[i]);
    throw DegenerateCriticalPoint("critical point (" + where + ") has a Hessian eigenvalue within " +
                                  std::to_string(tol.degeneracy) + " of zero");
  }
  cp.e_index = cp.signature.negative - level.n;
  return cp;
}

int e_index(const FunctionalSpec& spec, const CriticalPoint& cp, const TruncationLevel& level, const Tolerances& tol) {
  if (!level.covers(spec.support_level()))
    throw PreconditionViolation("level " + to_string(level) + " does not retain every support coordinate");
  return classify_critical_point(spec, cp.coords, level, tol).e_index;
}

namespace {

std::optional<Vector> newton(const FunctionalSpec& spec, Vector x, const TruncationLevel& level, double tol) {
  for (int iter = 0; iter < 100; ++iter) {
    auto e = eval(spec, x, level);
    double gnorm = e.gradient.norm();
    if (gnorm <= tol) return x;
    const Vector step = e.hessian.fullPivLu().solve(-e.gradient);
    if (!step.allFinite()) return std::nullopt;
    double t = 1.0;
    bool improved = false;
    for (int k = 0; k < 40; ++k) {
      const Vector trial = x + t * step;
      if (eval(spec, trial, level).gradient.norm() < gnorm) {
        x = trial;
        improved = true;
        break;
      }
      t *= 0.5;
    }
    if (!improved) return eval(spec, x, level).gradient.norm() <= tol ? std::optional<Vector>(x) : std::nullopt;
  }
  return eval(spec, x, level).gradient.norm() <= tol ? std::optional<Vector>(x) : std::nullopt;
}

}  // namespace

std::vector<CriticalPoint> find_critical_points(const FunctionalSpec& spec, const TruncationLevel& level,
                                                const Box& region, const SeedSpec& seeds, const Tolerances& tol) {
  const auto coords = spec.op.coordinates(level);
  const auto dim = coords.size();
  if (region.dim() != dim) throw DimensionMismatch("region dimension does not match level " + to_string(level));
  for (std::size_t i = 0; i < dim; ++i)
    if (!(region.lo[i] <= region.hi[i]) || !std::isfinite(region.lo[i]) || !std::isfinite(region.hi[i]))
      throw PreconditionViolation("region must be a bounded box");

  // Off-support coordinates enter f quadratically, so Newton lands on them in
  // one step; grid seeds only need to vary along support coordinates.
  const int d = spec.nonlinearity.support_dim();
  std::vector<std::vector<double>> axis_values(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const double lo = region.lo[i], hi = region.hi[i];
    if (coords[i].global < d && seeds.per_axis > 1) {
      for (int k = 0; k < seeds.per_axis; ++k)
        axis_values[i].push_back(lo + (hi - lo) * k / (seeds.per_axis - 1));
    } else {
      axis_values[i].push_back(0.5 * (lo + hi));
    }
  }
  std::vector<Vector> starts;
  std::vector<std::size_t> counter(dim, 0);
  while (true) {
    Vector s(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) s[static_cast<Eigen::Index>(i)] = axis_values[i][counter[i]];
    starts.push_back(s);
    std::size_t i = 0;
    while (i < dim && ++counter[i] == axis_values[i].size()) counter[i++] = 0;
    if (i == dim) break;
  }
  std::mt19937_64 rng(seeds.rng_seed);
  for (int r = 0; r < seeds.random; ++r) {
    Vector s(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i)
      s[static_cast<Eigen::Index>(i)] = std::uniform_real_distribution<double>(region.lo[i], region.hi[i])(rng);
    starts.push_back(s);
  }

  std::vector<Vector> found;
  const double slack = 1e-9;
  for (const auto& s : starts) {
    auto root = newton(spec, s, level, tol.newton);
    if (!root || !region.contains(*root, slack)) continue;
    bool duplicate = false;
    for (const auto& f : found)
      if ((f - *root).norm() <= tol.dedup) {
        duplicate = true;
        break;
      }
    if (!duplicate) found.push_back(*root);
  }
  std::sort(found.begin(), found.end(), [](const Vector& a, const Vector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  });
  std::vector<CriticalPoint> out;
  for (const auto& x : found) out.push_back(classify_critical_point(spec, x, level, tol));
  return out;
}

}  // namespace conley::functional
