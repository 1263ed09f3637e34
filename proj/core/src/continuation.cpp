#include "conley/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conley/errors.hpp"

namespace conley::floer {

using functional::Vector;
using index::VectorField;

namespace {

constexpr double kDiffStep = 1e-6;

// Value at (x, 0) and the y-Jacobian there, by central differences.
struct Linearization {
  Vector base;
  Eigen::MatrixXd jy;  // all rows, columns for every coordinate (segment column unused)
};

Linearization linearize(const VectorField& f, int axis, const Vector& p) {
  Vector q = Vector::Zero(p.size());
  q[axis] = p[axis];
  Linearization lin;
  lin.base = f.eval(q);
  lin.jy = Eigen::MatrixXd::Zero(p.size(), p.size());
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    if (j == axis) continue;
    Vector a = q, b = q;
    a[j] += kDiffStep;
    b[j] -= kDiffStep;
    lin.jy.col(j) = (f.eval(a) - f.eval(b)) / (2 * kDiffStep);
  }
  return lin;
}

Vector y_part(const Vector& p, int axis) {
  Vector y = p;
  y[axis] = 0.0;
  return y;
}

}  // namespace

VectorField ContinuationPath::at(double tau) const {
  const double t = std::clamp(tau, 0.0, 3.0);
  const int stage = std::min(static_cast<int>(std::floor(t)), 2);
  const double theta = t - stage;
  const VectorField* chain[] = {&F, &F1, &F2, &F3};
  const VectorField a = *chain[stage], b = *chain[stage + 1];
  if (theta == 0.0) return a;
  VectorField out;
  out.dim = F.dim;
  out.lipschitz = std::max(a.lipschitz, b.lipschitz);
  out.eval = [a, b, theta](const Vector& x) { return ((1.0 - theta) * a.eval(x) + theta * b.eval(x)).eval(); };
  return out;
}

ContinuationPath continuation_path(const VectorField& field, int axis, double lo, double hi) {
  if (axis < 0 || axis >= field.dim) throw DimensionMismatch("segment axis out of range");
  if (!(lo < hi)) throw ConfigError("segment is empty");
  ContinuationPath path;
  path.F = field;
  path.segment_axis = axis;
  path.segment_lo = lo;
  path.segment_hi = hi;

  constexpr int kSamples = 2001;
  path.M = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kSamples; ++i) {
    Vector p = Vector::Zero(field.dim);
    p[axis] = lo + (hi - lo) * i / (kSamples - 1);
    path.M = std::max(path.M, field.eval(p)[axis]);
  }

  // Derivatives of F enter the linearized fields, so their Lipschitz bound is
  // taken twice that of F.
  const double lip = 2.0 * field.lipschitz;
  auto make = [&](auto body) {
    VectorField v;
    v.dim = field.dim;
    v.lipschitz = lip;
    v.eval = body;
    return v;
  };
  const double shift = path.M + 1.0;
  path.F1 = make([field, axis](const Vector& p) {
    const Linearization lin = linearize(field, axis, p);
    Vector out = lin.jy * y_part(p, axis);
    out[axis] += lin.base[axis];
    return out;
  });
  path.F2 = make([field, axis](const Vector& p) {
    const Linearization lin = linearize(field, axis, p);
    Vector out = lin.jy * y_part(p, axis);
    out[axis] = lin.base[axis];
    return out;
  });
  path.F3 = make([field, axis, shift](const Vector& p) {
    const Linearization lin = linearize(field, axis, p);
    Vector out = lin.jy * y_part(p, axis);
    out[axis] = lin.base[axis] - shift;
    return out;
  });
  return path;
}

ContinuationReport continuation_trivialize(const VectorField& field, const cubical::Grid& grid, int steps,
                                           const index::FlowParams& params, int segment_axis) {
  if (steps < 0) throw ConfigError("steps must be non-negative");
  ContinuationReport rep;
  rep.path = continuation_path(field, segment_axis);
  const cubical::CubeSet N = cubical::CubeSet::full(grid);
  for (int j = 0; j <= steps; ++j) {
    const double tau = steps == 0 ? 0.0 : 3.0 * j / steps;
    const index::MultivaluedMap map = index::outer_map(rep.path.at(tau), grid, params);
    const cubical::CubeSet S = index::invariant_part(N, map);
    ContinuationSample s;
    s.tau = tau;
    s.invariant_cubes = S.size();
    s.isolating = set_intersection(S, cubical::boundary_collar(N)).empty();
    if (!s.isolating && rep.isolation_maintained) {
      rep.isolation_maintained = false;
      rep.breaking_tau = tau;
    }
    rep.samples.push_back(s);
  }
  rep.final_invariant_cubes = rep.samples.back().invariant_cubes;
  rep.final_invariant_empty = rep.final_invariant_cubes == 0;
  rep.F3_first_max = -std::numeric_limits<double>::infinity();
  for (std::uint64_t q = 0; q < grid.cube_count(); ++q) {
    const std::vector<double> c = grid.cube_center(q);
    const Vector p = Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size()));
    rep.F3_first_max = std::max(rep.F3_first_max, rep.path.F3.eval(p)[segment_axis]);
  }
  return rep;
}

ContinuationReport continuation_trivialize(const functional::FunctionalSpec& spec,
                                           const functional::TruncationLevel& level, const functional::Box& region,
                                           int resolution, int steps, const index::FlowParams& params) {
  return continuation_trivialize(index::gradient_field(spec, level), index::region_grid(region, level, resolution),
                                 steps, params, 0);
}

}  // namespace conley::floer
