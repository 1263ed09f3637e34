#include "conley/shapes.hpp"

#include <algorithm>
#include <cmath>

#include "conley/errors.hpp"

namespace conley::ecoh {

ShapeFamily parse_shape_family(const std::string& name) {
  if (name == "empty") return ShapeFamily::empty;
  if (name == "point") return ShapeFamily::point;
  if (name == "ball") return ShapeFamily::ball;
  if (name == "sphere") return ShapeFamily::sphere;
  if (name == "box") return ShapeFamily::box;
  if (name == "sublevel") return ShapeFamily::sublevel;
  if (name == "explicit") return ShapeFamily::explicit_sets;
  throw ConfigError("unknown shape family '" + name + "'");
}

std::string to_string(ShapeFamily family) {
  switch (family) {
    case ShapeFamily::empty: return "empty";
    case ShapeFamily::point: return "point";
    case ShapeFamily::ball: return "ball";
    case ShapeFamily::sphere: return "sphere";
    case ShapeFamily::box: return "box";
    case ShapeFamily::sublevel: return "sublevel";
    case ShapeFamily::explicit_sets: return "explicit";
  }
  return "?";
}

void ShapeSpec::validate() const {
  if ((family == ShapeFamily::ball || family == ShapeFamily::sphere) && !(radius > 0.0))
    throw ConfigError("shape radius must be positive");
  if (confined_to && (confined_to->m < 0 || confined_to->n < 0)) throw ConfigError("negative confining level");
  if (family == ShapeFamily::box) {
    if (confined_to && intervals.size() != static_cast<std::size_t>(confined_to->dim()))
      throw ConfigError("box needs one interval per coordinate of its confining level");
    for (auto [a, b] : intervals)
      if (!(a <= b)) throw ConfigError("box interval with lo > hi");
    if (!(default_interval.first <= default_interval.second)) throw ConfigError("box interval with lo > hi");
  }
  if (family == ShapeFamily::sublevel) {
    if (!functional) throw ConfigError("sublevel shape needs a functional");
    functional->validate();
  }
}

void LadderGrid::validate() const {
  if (!(half_width > 0.0)) throw ConfigError("grid half_width must be positive");
  if (resolution < 1 || resolution % 2 == 0)
    throw ConfigError("grid resolution must be odd so that 0 lies inside a cube");
}

Grid LadderGrid::at(const TruncationLevel& level) const {
  validate();
  return Grid(level, std::vector<cubical::Axis>(static_cast<std::size_t>(level.dim()),
                                                cubical::Axis{-half_width, half_width, resolution}));
}

namespace {

struct AxisRole {
  bool allowed = true;  // coordinate present in the shape
  int interval = -1;    // index into ShapeSpec::intervals, or -1
};

std::vector<AxisRole> axis_roles(const ShapeSpec& shape, const TruncationLevel& level) {
  std::vector<AxisRole> roles(static_cast<std::size_t>(level.dim()));
  if (!shape.confined_to) return roles;
  const TruncationLevel c = *shape.confined_to;
  for (int i = 0; i < level.m; ++i) {
    roles[i].allowed = i < c.m;
    if (roles[i].allowed) roles[i].interval = i;
  }
  for (int j = 0; j < level.n; ++j) {
    auto& r = roles[static_cast<std::size_t>(level.m + j)];
    r.allowed = j < c.n;
    if (r.allowed) r.interval = c.m + j;
  }
  return roles;
}

// Collapsed interval of cube k on an axis.
std::pair<double, double> collapsed(const cubical::Axis& a, int k) {
  if (k == a.zero_cube()) return {0.0, 0.0};
  return {a.cube_lo(k), a.cube_hi(k)};
}

double min_sq(std::pair<double, double> iv) {
  if (iv.first <= 0.0 && 0.0 <= iv.second) return 0.0;
  const double m = std::min(std::abs(iv.first), std::abs(iv.second));
  return m * m;
}

double max_sq(std::pair<double, double> iv) {
  const double m = std::max(std::abs(iv.first), std::abs(iv.second));
  return m * m;
}

class Enumerator {
 public:
  Enumerator(const ShapeSpec& shape, const TruncationLevel& level, const Grid& grid)
      : shape_(shape), level_(level), grid_(grid), roles_(axis_roles(shape, level)) {
    if (shape.family == ShapeFamily::sublevel) lipschitz_ = shape.functional->gradient_lipschitz(level);
  }

  std::vector<std::uint64_t> run() {
    idx_.assign(grid_.dim(), 0);
    ivs_.assign(grid_.dim(), {0.0, 0.0});
    recurse(0, 0.0, 0.0);
    return std::move(out_);
  }

 private:
  // Returns false when no completion of the prefix can meet the shape.
  bool axis_ok(std::size_t axis, std::pair<double, double> iv) const {
    const AxisRole& role = roles_[axis];
    if (!role.allowed) return iv.first == 0.0 && iv.second == 0.0;
    if (shape_.family == ShapeFamily::box) {
      const auto lim = role.interval >= 0 ? shape_.intervals[static_cast<std::size_t>(role.interval)]
                                          : shape_.default_interval;
      return iv.first <= lim.second && lim.first <= iv.second;
    }
    if (shape_.family == ShapeFamily::point) return iv.first <= 0.0 && 0.0 <= iv.second;
    return true;
  }

  bool leaf_ok(double lo2, double hi2) const {
    const double r2 = shape_.radius * shape_.radius;
    switch (shape_.family) {
      case ShapeFamily::ball: return lo2 <= r2;
      case ShapeFamily::sphere: return lo2 <= r2 && r2 <= hi2;
      case ShapeFamily::sublevel: return sublevel_ok();
      default: return true;
    }
  }

  bool sublevel_ok() const {
    const std::size_t d = grid_.dim();
    functional::Vector center(static_cast<Eigen::Index>(d));
    double rho2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      center[static_cast<Eigen::Index>(i)] = 0.5 * (ivs_[i].first + ivs_[i].second);
      const double h = 0.5 * (ivs_[i].second - ivs_[i].first);
      rho2 += h * h;
    }
    const auto ev = functional::eval(*shape_.functional, center, level_);
    const double rho = std::sqrt(rho2);
    const double lower = ev.value - ev.gradient.norm() * rho - 0.5 * lipschitz_ * rho2;
    return lower <= shape_.threshold;
  }

  void recurse(std::size_t axis, double lo2, double hi2) {
    const bool radial = shape_.family == ShapeFamily::ball || shape_.family == ShapeFamily::sphere;
    const double r2 = shape_.radius * shape_.radius;
    if (axis == grid_.dim()) {
      if (leaf_ok(lo2, hi2)) out_.push_back(grid_.cube_code(idx_));
      return;
    }
    const cubical::Axis& a = grid_.axis(axis);
    for (int k = 0; k < a.resolution; ++k) {
      const auto iv = collapsed(a, k);
      if (!axis_ok(axis, iv)) continue;
      const double nlo = lo2 + min_sq(iv);
      if (radial && nlo > r2) continue;
      idx_[axis] = k;
      ivs_[axis] = iv;
      recurse(axis + 1, nlo, hi2 + max_sq(iv));
    }
  }

  const ShapeSpec& shape_;
  TruncationLevel level_;
  const Grid& grid_;
  std::vector<AxisRole> roles_;
  double lipschitz_ = 0.0;
  std::vector<int> idx_;
  std::vector<std::pair<double, double>> ivs_;
  std::vector<std::uint64_t> out_;
};

}  // namespace

CubeSet slice(const ShapeSpec& shape, const TruncationLevel& level, const Grid& grid) {
  shape.validate();
  if (!(grid.level() == level)) throw IncompatibleGrids("grid level differs from the requested slice level");
  if (grid.cube_count() == 0) throw ShapeError("empty grid");
  if (shape.family == ShapeFamily::empty) return CubeSet(grid);
  if (shape.family == ShapeFamily::explicit_sets) {
    auto it = shape.explicit_sets.find(level);
    if (it == shape.explicit_sets.end()) throw ShapeError("explicit shape undefined at level " + to_string(level));
    if (!(it->second.grid() == grid)) throw IncompatibleGrids("explicit slice uses a different grid");
    return it->second;
  }
  if (shape.family == ShapeFamily::sublevel && !shape.functional->op.supports(level))
    throw ShapeError("functional undefined at level " + to_string(level));
  return CubeSet(grid, Enumerator(shape, level, grid).run());
}

HalfSlices half_slices(const CubeSet& slice, std::size_t axis) {
  const Grid& g = slice.grid();
  if (axis >= g.dim()) throw DimensionMismatch("half-slice axis out of range");
  const int z = g.axis(axis).zero_cube();
  if (z < 0) throw IncompatibleGrids("half-slice axis has no zero cube");
  std::vector<std::uint64_t> hat, check, layer;
  const std::uint64_t stride = g.cube_stride(axis);
  const auto r = static_cast<std::uint64_t>(g.axis(axis).resolution);
  for (std::uint64_t q : slice.cubes()) {
    const auto k = static_cast<int>((q / stride) % r);
    if (k >= z) hat.push_back(q);
    if (k <= z) check.push_back(q);
    if (k == z) layer.push_back(q);
  }
  return {CubeSet(g, std::move(hat)), CubeSet(g, std::move(check)), CubeSet(g, std::move(layer))};
}

HalfSlices half_slices(const ShapeSpec& shape, const TruncationLevel& level, const Grid& grid) {
  if (level.n < 1) throw ShapeError("half slices need at least one negative coordinate");
  return half_slices(slice(shape, level, grid), grid.dim() - 1);
}

CubeSet collapse_axis(const CubeSet& set, std::size_t axis, const Grid& lower) {
  const Grid& g = set.grid();
  const int z = g.axis(axis).zero_cube();
  if (z < 0) throw IncompatibleGrids("collapsed axis has no zero cube");
  std::vector<std::uint64_t> out;
  std::vector<int> idx(g.dim()), small(g.dim() - 1);
  for (std::uint64_t q : set.cubes()) {
    g.decode_cube(q, idx);
    if (idx[axis] != z) continue;
    for (std::size_t i = 0, j = 0; i < idx.size(); ++i)
      if (i != axis) small[j++] = idx[i];
    out.push_back(lower.cube_code(small));
  }
  return CubeSet(lower, std::move(out));
}

}  // namespace conley::ecoh
