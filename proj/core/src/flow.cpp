#include "conley/flow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "conley/errors.hpp"

namespace conley::index {

VectorField gradient_field(const FunctionalSpec& spec, const TruncationLevel& level) {
  spec.validate();
  const auto coords = spec.op.coordinates(level);
  const int d = spec.nonlinearity.support_dim();
  std::vector<double> diag;
  for (const auto& c : coords) diag.push_back(c.eigenvalue);
  std::vector<int> position(static_cast<std::size_t>(d), -1);
  for (std::size_t p = 0; p < coords.size(); ++p)
    if (coords[p].global < d) position[static_cast<std::size_t>(coords[p].global)] = static_cast<int>(p);
  std::vector<double> lambdas(spec.op.listed().begin(), spec.op.listed().begin() + d);
  const functional::Nonlinearity b = spec.nonlinearity;

  VectorField f;
  f.dim = level.dim();
  f.lipschitz = spec.gradient_lipschitz(level);
  if (d == 0 || b.single_axis() || b.family() == functional::NonlinearityFamily::shifted_well) {
    // Fast paths: grad b is either a function of one coordinate or constant.
    const int axis = d > 0 ? position[0] : -1;
    Vector constant = Vector::Zero(f.dim);
    if (b.family() == functional::NonlinearityFamily::shifted_well) {
      const Vector g = b.gradient(Vector::Zero(d), lambdas);
      for (int i = 0; i < d; ++i)
        if (position[i] >= 0) constant[position[i]] = -g[i];
    }
    const bool single = b.single_axis() && axis >= 0;
    f.eval = [diag, constant, b, axis, single](const Vector& x) {
      Vector v = constant;
      for (Eigen::Index p = 0; p < x.size(); ++p) v[p] -= diag[static_cast<std::size_t>(p)] * x[p];
      if (single) v[axis] -= b.axis_slope(x[axis]);
      return v;
    };
    return f;
  }
  f.eval = [diag, position, lambdas, b, d](const Vector& x) {
    Vector v(x.size());
    for (Eigen::Index p = 0; p < x.size(); ++p) v[p] = -diag[static_cast<std::size_t>(p)] * x[p];
    Vector s = Vector::Zero(d);
    for (int i = 0; i < d; ++i)
      if (position[i] >= 0) s[i] = x[position[i]];
    const Vector g = b.gradient(s, lambdas);
    for (int i = 0; i < d; ++i)
      if (position[i] >= 0) v[position[i]] -= g[i];
    return v;
  };
  return f;
}

double default_time_step(const Grid& grid, double lipschitz) {
  double diam2 = 0.0;
  for (const auto& a : grid.axes()) diam2 += a.width() * a.width();
  const double lip = std::max(lipschitz, 1e-12);
  return std::sqrt(diam2) / (4.0 * lip);
}

Vector flow(const VectorField& field, const Vector& x, double t, double h) {
  if (x.size() != field.dim) throw DimensionMismatch("flow start point has the wrong dimension");
  if (t == 0.0) return x;
  if (!(h > 0.0) || !std::isfinite(h) || h < 1e-14 * std::abs(t)) throw ResolutionError("flow step size underflow");
  const double dir = t < 0 ? -1.0 : 1.0;
  const auto steps = static_cast<long>(std::ceil(std::abs(t) / h - 1e-12));
  const double dt = std::abs(t) / static_cast<double>(steps);
  const double a = dir * dt;
  Vector y = x, tmp(x.size()), k1, k2, k3, k4;
  for (long s = 0; s < steps; ++s) {
    k1 = field.eval(y);
    tmp = y + (0.5 * a) * k1;
    k2 = field.eval(tmp);
    tmp = y + (0.5 * a) * k2;
    k3 = field.eval(tmp);
    tmp = y + a * k3;
    k4 = field.eval(tmp);
    y += (a / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  if (!y.allFinite()) throw ResolutionError("flow produced a non-finite state");
  return y;
}

Vector flow(const FunctionalSpec& spec, const Vector& x, double t, const TruncationLevel& level,
            const FlowParams& params, const Grid* grid) {
  const VectorField field = gradient_field(spec, level);
  double h = params.time_step;
  if (h <= 0.0) h = grid ? default_time_step(*grid, field.lipschitz) : 1e-3;
  return flow(field, x, t, h);
}

// ---------------------------------------------------------------- outer map

MultivaluedMap::MultivaluedMap(Grid grid, std::vector<std::int32_t> boxes, std::vector<char> escapes, double margin,
                               double h, double map_time)
    : grid_(std::move(grid)),
      boxes_(std::move(boxes)),
      escapes_(std::move(escapes)),
      margin_(margin),
      h_(h),
      map_time_(map_time) {}

std::pair<int, int> MultivaluedMap::box(std::uint64_t cube, std::size_t axis) const {
  const std::size_t base = static_cast<std::size_t>(cube) * 2 * grid_.dim() + 2 * axis;
  return {boxes_[base], boxes_[base + 1]};
}

void MultivaluedMap::for_each_image(std::uint64_t cube, const std::function<void(std::uint64_t)>& fn) const {
  const std::size_t d = grid_.dim();
  std::vector<int> lo(d), hi(d), k(d);
  for (std::size_t i = 0; i < d; ++i) {
    std::tie(lo[i], hi[i]) = box(cube, i);
    if (lo[i] > hi[i]) return;
  }
  k = lo;
  while (true) {
    fn(grid_.cube_code(k));
    std::size_t i = 0;
    for (; i < d; ++i) {
      if (k[i] < hi[i]) {
        ++k[i];
        break;
      }
      k[i] = lo[i];
    }
    if (i == d) return;
  }
}

bool MultivaluedMap::image_contains(std::uint64_t cube, std::uint64_t target) const {
  const std::vector<int> t = grid_.decode_cube(target);
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto [lo, hi] = box(cube, i);
    if (t[i] < lo || t[i] > hi) return false;
  }
  return true;
}

bool MultivaluedMap::image_leaves(std::uint64_t cube, const std::vector<char>& member) const {
  if (escapes(cube)) return true;
  bool leaves = false;
  for_each_image(cube, [&](std::uint64_t q) {
    if (!member[q]) leaves = true;
  });
  return leaves;
}

MultivaluedMap outer_map(const VectorField& field, const Grid& grid, const FlowParams& params) {
  if (field.dim != static_cast<int>(grid.dim())) throw DimensionMismatch("vector field and grid dimensions differ");
  if (!(params.map_time > 0.0)) throw ConfigError("map_time must be positive");
  const std::size_t d = grid.dim();
  double h = params.time_step > 0.0 ? params.time_step : default_time_step(grid, field.lipschitz);
  h = std::min(h, params.map_time);
  const double T = params.map_time;

  // Images of all grid vertices, shared between neighbouring cubes.
  std::vector<std::uint64_t> vstride(d);
  std::uint64_t vcount = 1;
  for (std::size_t i = 0; i < d; ++i) {
    vstride[i] = vcount;
    vcount *= static_cast<std::uint64_t>(grid.axis(i).resolution + 1);
  }
  std::vector<double> vimg(vcount * d);
  {
    std::vector<int> v(d, 0);
    Vector x(static_cast<Eigen::Index>(d));
    for (std::uint64_t code = 0; code < vcount; ++code) {
      std::uint64_t c = code;
      for (std::size_t i = 0; i < d; ++i) {
        const auto r = static_cast<std::uint64_t>(grid.axis(i).resolution + 1);
        v[i] = static_cast<int>(c % r);
        c /= r;
        x[static_cast<Eigen::Index>(i)] = grid.axis(i).lo + v[i] * grid.axis(i).width();
      }
      const Vector y = flow(field, x, T, h);
      for (std::size_t i = 0; i < d; ++i) vimg[code * d + i] = y[static_cast<Eigen::Index>(i)];
    }
  }

  double min_width = std::numeric_limits<double>::infinity();
  for (const auto& a : grid.axes()) min_width = std::min(min_width, a.width());

  const std::uint64_t n = grid.cube_count();
  std::vector<std::int32_t> boxes(static_cast<std::size_t>(n) * 2 * d);
  std::vector<char> escapes(static_cast<std::size_t>(n), 0);
  double max_margin = 0.0;
  std::vector<int> k(d);
  std::vector<double> lo(d), hi(d);
  for (std::uint64_t q = 0; q < n; ++q) {
    grid.decode_cube(q, k);
    std::fill(lo.begin(), lo.end(), std::numeric_limits<double>::infinity());
    std::fill(hi.begin(), hi.end(), -std::numeric_limits<double>::infinity());
    for (std::uint64_t corner = 0; corner < (std::uint64_t{1} << d); ++corner) {
      std::uint64_t vc = 0;
      for (std::size_t i = 0; i < d; ++i) vc += static_cast<std::uint64_t>(k[i] + ((corner >> i) & 1U)) * vstride[i];
      for (std::size_t i = 0; i < d; ++i) {
        lo[i] = std::min(lo[i], vimg[vc * d + i]);
        hi[i] = std::max(hi[i], vimg[vc * d + i]);
      }
    }
    const std::vector<double> c = grid.cube_center(q);
    const Vector yc = flow(field, Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(d)), T, h);
    double bulge = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double y = yc[static_cast<Eigen::Index>(i)];
      bulge = std::max({bulge, lo[i] - y, y - hi[i]});
      lo[i] = std::min(lo[i], y);
      hi[i] = std::max(hi[i], y);
    }
    const double margin = params.expansion_bound >= 0.0 ? params.expansion_bound : 2.0 * bulge + 1e-9 * min_width;
    max_margin = std::max(max_margin, margin);
    for (std::size_t i = 0; i < d; ++i) {
      const auto& a = grid.axis(i);
      const double l = lo[i] - margin, u = hi[i] + margin;
      if (l < a.lo || u > a.hi) escapes[q] = 1;
      int il = static_cast<int>(std::floor((l - a.lo) / a.width()));
      int iu = static_cast<int>(std::floor((u - a.lo) / a.width()));
      il = std::max(il, 0);
      iu = std::min(iu, a.resolution - 1);
      boxes[static_cast<std::size_t>(q) * 2 * d + 2 * i] = il;
      boxes[static_cast<std::size_t>(q) * 2 * d + 2 * i + 1] = iu;
    }
  }
  if (max_margin > min_width)
    throw ResolutionError("inflation radius " + std::to_string(max_margin) + " exceeds the cube width " +
                          std::to_string(min_width) + "; refine the grid");
  return MultivaluedMap(grid, std::move(boxes), std::move(escapes), max_margin, h, T);
}

MultivaluedMap outer_map(const FunctionalSpec& spec, const Grid& grid, const TruncationLevel& level,
                         const FlowParams& params) {
  if (!(grid.level() == level)) throw IncompatibleGrids("grid level differs from the flow level");
  return outer_map(gradient_field(spec, level), grid, params);
}

// ---------------------------------------------------------------- invariant sets

std::vector<char> membership(const CubeSet& set) {
  std::vector<char> m(static_cast<std::size_t>(set.grid().cube_count()), 0);
  for (std::uint64_t q : set.cubes()) m[q] = 1;
  return m;
}

CubeSet invariant_part(const CubeSet& N, const MultivaluedMap& map) {
  if (!(N.grid() == map.grid())) throw IncompatibleGrids("cube set and map use different grids");
  const auto& cubes = N.cubes();
  const std::size_t n = cubes.size();
  std::vector<std::int32_t> local(static_cast<std::size_t>(N.grid().cube_count()), -1);
  for (std::size_t i = 0; i < n; ++i) local[cubes[i]] = static_cast<std::int32_t>(i);

  // Edges inside N, forward and reverse CSR.
  std::vector<std::size_t> off(n + 1, 0);
  std::vector<std::int32_t> dst;
  for (std::size_t i = 0; i < n; ++i) {
    map.for_each_image(cubes[i], [&](std::uint64_t q) {
      if (local[q] >= 0) dst.push_back(local[q]);
    });
    off[i + 1] = dst.size();
  }
  std::vector<std::size_t> roff(n + 1, 0);
  for (std::int32_t t : dst) ++roff[static_cast<std::size_t>(t) + 1];
  for (std::size_t i = 0; i < n; ++i) roff[i + 1] += roff[i];
  std::vector<std::int32_t> src(dst.size());
  {
    std::vector<std::size_t> fill(roff.begin(), roff.end() - 1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t e = off[i]; e < off[i + 1]; ++e) src[fill[static_cast<std::size_t>(dst[e])]++] = static_cast<std::int32_t>(i);
  }

  std::vector<std::int32_t> outdeg(n), indeg(n);
  for (std::size_t i = 0; i < n; ++i) {
    outdeg[i] = static_cast<std::int32_t>(off[i + 1] - off[i]);
    indeg[i] = static_cast<std::int32_t>(roff[i + 1] - roff[i]);
  }
  std::vector<char> alive(n, 1);
  std::deque<std::int32_t> queue;
  for (std::size_t i = 0; i < n; ++i)
    if (outdeg[i] == 0 || indeg[i] == 0) queue.push_back(static_cast<std::int32_t>(i));
  while (!queue.empty()) {
    const auto v = static_cast<std::size_t>(queue.front());
    queue.pop_front();
    if (!alive[v]) continue;
    alive[v] = 0;
    for (std::size_t e = off[v]; e < off[v + 1]; ++e) {
      const auto w = static_cast<std::size_t>(dst[e]);
      if (alive[w] && --indeg[w] == 0) queue.push_back(static_cast<std::int32_t>(w));
    }
    for (std::size_t e = roff[v]; e < roff[v + 1]; ++e) {
      const auto u = static_cast<std::size_t>(src[e]);
      if (alive[u] && --outdeg[u] == 0) queue.push_back(static_cast<std::int32_t>(u));
    }
  }
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (alive[i]) out.push_back(cubes[i]);
  return CubeSet(N.grid(), std::move(out));
}

bool is_isolating(const CubeSet& N, const MultivaluedMap& map) {
  if (N.empty()) return true;
  const CubeSet inv = invariant_part(N, map);
  return set_intersection(inv, boundary_collar(N)).empty();
}

CubeSet forward_hull(const CubeSet& start, const CubeSet& within, const MultivaluedMap& map) {
  const std::vector<char> inside = membership(within);
  std::vector<char> seen(inside.size(), 0);
  std::deque<std::uint64_t> queue;
  for (std::uint64_t q : start.cubes())
    if (inside[q] && !seen[q]) {
      seen[q] = 1;
      queue.push_back(q);
    }
  std::vector<std::uint64_t> out;
  while (!queue.empty()) {
    const std::uint64_t q = queue.front();
    queue.pop_front();
    out.push_back(q);
    map.for_each_image(q, [&](std::uint64_t r) {
      if (inside[r] && !seen[r]) {
        seen[r] = 1;
        queue.push_back(r);
      }
    });
  }
  return CubeSet(within.grid(), std::move(out));
}

}  // namespace conley::index
