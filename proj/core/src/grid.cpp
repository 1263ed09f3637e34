#include "conley/grid.hpp"

#include <absl/container/flat_hash_set.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "conley/errors.hpp"

namespace conley::cubical {

int Axis::zero_cube() const {
  if (!(lo < 0.0 && 0.0 < hi)) return -1;
  const double pos = -lo / width();
  const double k = std::floor(pos);
  if (std::abs(pos - k) < 1e-9) return -1;  // 0 sits on a grid vertex
  return static_cast<int>(k);
}

Grid::Grid(TruncationLevel level, std::vector<Axis> axes) : level_(level), axes_(std::move(axes)) {
  if (level_.m < 0 || level_.n < 0) throw ConfigError("truncation level must be non-negative");
  if (static_cast<int>(axes_.size()) != level_.dim())
    throw DimensionMismatch("grid has " + std::to_string(axes_.size()) + " axes but level " + to_string(level_) +
                            " needs " + std::to_string(level_.dim()));
  constexpr std::uint64_t limit = std::uint64_t{1} << 62;
  for (const Axis& a : axes_) {
    if (a.resolution < 1) throw ConfigError("grid resolution must be at least 1 per axis");
    if (!(a.lo < a.hi)) throw ConfigError("grid axis needs lo < hi");
  }
  for (const Axis& a : axes_) {
    cube_stride_.push_back(cube_total_);
    cell_stride_.push_back(cell_total_);
    const auto r = static_cast<std::uint64_t>(a.resolution);
    if (cell_total_ > limit / (2 * r + 1)) throw ResolutionError("grid too large for 64-bit cell codes");
    cube_total_ *= r;
    cell_total_ *= 2 * r + 1;
  }
}

std::uint64_t Grid::cube_code(std::span<const int> index) const {
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) code += static_cast<std::uint64_t>(index[i]) * cube_stride_[i];
  return code;
}

void Grid::decode_cube(std::uint64_t code, std::span<int> index) const {
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const auto r = static_cast<std::uint64_t>(axes_[i].resolution);
    index[i] = static_cast<int>(code % r);
    code /= r;
  }
}

std::vector<int> Grid::decode_cube(std::uint64_t code) const {
  std::vector<int> index(axes_.size());
  decode_cube(code, index);
  return index;
}

std::uint64_t Grid::cell_code(std::span<const int> coords) const {
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) code += static_cast<std::uint64_t>(coords[i]) * cell_stride_[i];
  return code;
}

void Grid::decode_cell(std::uint64_t code, std::span<int> coords) const {
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const auto r = static_cast<std::uint64_t>(2 * axes_[i].resolution + 1);
    coords[i] = static_cast<int>(code % r);
    code /= r;
  }
}

std::vector<int> Grid::decode_cell(std::uint64_t code) const {
  std::vector<int> coords(axes_.size());
  decode_cell(code, coords);
  return coords;
}

int Grid::cell_dim(std::uint64_t code) const {
  int d = 0;
  for (const Axis& a : axes_) {
    const auto r = static_cast<std::uint64_t>(2 * a.resolution + 1);
    d += static_cast<int>((code % r) & 1U);
    code /= r;
  }
  return d;
}

std::uint64_t Grid::cube_cell(std::uint64_t cube) const {
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const auto r = static_cast<std::uint64_t>(axes_[i].resolution);
    code += (2 * (cube % r) + 1) * cell_stride_[i];
    cube /= r;
  }
  return code;
}

std::optional<std::uint64_t> Grid::locate(std::span<const double> x) const {
  if (x.size() != axes_.size()) throw DimensionMismatch("point dimension does not match grid");
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const Axis& a = axes_[i];
    if (!(x[i] >= a.lo && x[i] <= a.hi)) return std::nullopt;
    int k = static_cast<int>(std::floor((x[i] - a.lo) / a.width()));
    k = std::clamp(k, 0, a.resolution - 1);
    code += static_cast<std::uint64_t>(k) * cube_stride_[i];
  }
  return code;
}

std::vector<double> Grid::cube_center(std::uint64_t cube) const {
  std::vector<double> c(axes_.size());
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const auto r = static_cast<std::uint64_t>(axes_[i].resolution);
    const int k = static_cast<int>(cube % r);
    cube /= r;
    c[i] = 0.5 * (axes_[i].cube_lo(k) + axes_[i].cube_hi(k));
  }
  return c;
}

Grid extend_grid(const Grid& grid, const std::vector<Axis>& extra_positive, const std::vector<Axis>& extra_negative) {
  const TruncationLevel old = grid.level();
  std::vector<Axis> axes(grid.axes().begin(), grid.axes().begin() + old.m);
  axes.insert(axes.end(), extra_positive.begin(), extra_positive.end());
  axes.insert(axes.end(), grid.axes().begin() + old.m, grid.axes().end());
  axes.insert(axes.end(), extra_negative.begin(), extra_negative.end());
  return Grid({old.m + static_cast<int>(extra_positive.size()), old.n + static_cast<int>(extra_negative.size())},
              std::move(axes));
}

// ---------------------------------------------------------------- CubeSet

CubeSet::CubeSet(Grid grid, std::vector<std::uint64_t> cubes) : grid_(std::move(grid)), cubes_(std::move(cubes)) {
  std::sort(cubes_.begin(), cubes_.end());
  cubes_.erase(std::unique(cubes_.begin(), cubes_.end()), cubes_.end());
  if (!cubes_.empty() && cubes_.back() >= grid_.cube_count()) throw ShapeError("cube code outside the grid");
}

CubeSet CubeSet::from_indices(Grid grid, const std::vector<std::vector<int>>& indices) {
  std::vector<std::uint64_t> codes;
  codes.reserve(indices.size());
  for (const auto& idx : indices) {
    if (idx.size() != grid.dim()) throw DimensionMismatch("cube index has wrong dimension");
    for (std::size_t i = 0; i < idx.size(); ++i)
      if (idx[i] < 0 || idx[i] >= grid.axis(i).resolution) throw ShapeError("cube index outside resolution bounds");
    codes.push_back(grid.cube_code(idx));
  }
  return CubeSet(std::move(grid), std::move(codes));
}

CubeSet CubeSet::full(Grid grid) {
  std::vector<std::uint64_t> codes(grid.cube_count());
  for (std::uint64_t i = 0; i < codes.size(); ++i) codes[i] = i;
  return CubeSet(std::move(grid), std::move(codes));
}

bool CubeSet::contains(std::uint64_t cube) const { return std::binary_search(cubes_.begin(), cubes_.end(), cube); }

bool CubeSet::contains_index(std::span<const int> index) const {
  for (std::size_t i = 0; i < index.size(); ++i)
    if (index[i] < 0 || index[i] >= grid_.axis(i).resolution) return false;
  return contains(grid_.cube_code(index));
}

bool CubeSet::subset_of(const CubeSet& other) const {
  return grid_ == other.grid_ && std::includes(other.cubes_.begin(), other.cubes_.end(), cubes_.begin(), cubes_.end());
}

bool CubeSet::closure_contains_cell(std::uint64_t cell) const {
  if (cubes_.empty()) return false;
  const std::size_t d = grid_.dim();
  std::vector<int> c(d);
  grid_.decode_cell(cell, c);
  // Each vertex axis offers up to two adjacent cubes; walk all combinations.
  std::vector<int> lo(d), hi(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (c[i] & 1) {
      lo[i] = hi[i] = (c[i] - 1) / 2;
    } else {
      lo[i] = std::max(c[i] / 2 - 1, 0);
      hi[i] = std::min(c[i] / 2, grid_.axis(i).resolution - 1);
    }
  }
  std::vector<int> k = lo;
  while (true) {
    if (contains(grid_.cube_code(k))) return true;
    std::size_t i = 0;
    for (; i < d; ++i) {
      if (k[i] < hi[i]) {
        ++k[i];
        break;
      }
      k[i] = lo[i];
    }
    if (i == d) return false;
  }
}

namespace {

void require_same_grid(const CubeSet& a, const CubeSet& b) {
  if (!(a.grid() == b.grid())) throw IncompatibleGrids("cube sets live on different grids");
}

// Calls fn(code) for every grid cube sharing at least a vertex with `cube`.
template <typename Fn>
void for_each_adjacent(const Grid& grid, std::uint64_t cube, Fn&& fn) {
  const std::size_t d = grid.dim();
  std::vector<int> base = grid.decode_cube(cube);
  std::vector<int> off(d, -1);
  while (true) {
    bool inside = true;
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const int k = base[i] + off[i];
      if (k < 0 || k >= grid.axis(i).resolution) {
        inside = false;
        break;
      }
      code += static_cast<std::uint64_t>(k) * grid.cube_stride(i);
    }
    fn(inside ? std::optional<std::uint64_t>(code) : std::nullopt);
    std::size_t i = 0;
    for (; i < d; ++i) {
      if (off[i] < 1) {
        ++off[i];
        break;
      }
      off[i] = -1;
    }
    if (i == d) return;
  }
}

// Calls fn(cell) for every face (including the cube itself) of a cube.
template <typename Fn>
void for_each_face(const Grid& grid, std::uint64_t cube, Fn&& fn) {
  const std::size_t d = grid.dim();
  std::vector<int> base = grid.decode_cube(cube);
  std::vector<std::uint64_t> choice(d * 3);
  for (std::size_t i = 0; i < d; ++i) {
    const std::uint64_t s = grid.cell_stride(i);
    const auto b = static_cast<std::uint64_t>(2 * base[i]);
    choice[3 * i + 0] = (b + 1) * s;
    choice[3 * i + 1] = b * s;
    choice[3 * i + 2] = (b + 2) * s;
  }
  std::vector<int> sel(d, 0);
  while (true) {
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < d; ++i) code += choice[3 * i + sel[i]];
    fn(code);
    std::size_t i = 0;
    for (; i < d; ++i) {
      if (sel[i] < 2) {
        ++sel[i];
        break;
      }
      sel[i] = 0;
    }
    if (i == d) return;
  }
}

}  // namespace

CubeSet set_union(const CubeSet& a, const CubeSet& b) {
  require_same_grid(a, b);
  std::vector<std::uint64_t> out;
  std::set_union(a.cubes().begin(), a.cubes().end(), b.cubes().begin(), b.cubes().end(), std::back_inserter(out));
  return CubeSet(a.grid(), std::move(out));
}

CubeSet set_intersection(const CubeSet& a, const CubeSet& b) {
  require_same_grid(a, b);
  std::vector<std::uint64_t> out;
  std::set_intersection(a.cubes().begin(), a.cubes().end(), b.cubes().begin(), b.cubes().end(),
                        std::back_inserter(out));
  return CubeSet(a.grid(), std::move(out));
}

CubeSet set_difference(const CubeSet& a, const CubeSet& b) {
  require_same_grid(a, b);
  std::vector<std::uint64_t> out;
  std::set_difference(a.cubes().begin(), a.cubes().end(), b.cubes().begin(), b.cubes().end(),
                      std::back_inserter(out));
  return CubeSet(a.grid(), std::move(out));
}

CubeSet boundary_collar(const CubeSet& set) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q : set.cubes()) {
    bool edge = false;
    for_each_adjacent(set.grid(), q, [&](std::optional<std::uint64_t> nb) {
      if (!edge && (!nb || !set.contains(*nb))) edge = true;
    });
    if (edge) out.push_back(q);
  }
  return CubeSet(set.grid(), std::move(out));
}

CubeSet neighborhood(const CubeSet& set) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q : set.cubes())
    for_each_adjacent(set.grid(), q, [&](std::optional<std::uint64_t> nb) {
      if (nb) out.push_back(*nb);
    });
  return CubeSet(set.grid(), std::move(out));
}

std::vector<std::uint64_t> closure_cells(const CubeSet& set) {
  absl::flat_hash_set<std::uint64_t> seen;
  for (std::uint64_t q : set.cubes()) for_each_face(set.grid(), q, [&](std::uint64_t c) { seen.insert(c); });
  std::vector<std::uint64_t> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint64_t> relative_cells(const CubeSet& total, const CubeSet& sub) {
  require_same_grid(total, sub);
  const CubeSet free_part = set_difference(total, sub);
  absl::flat_hash_set<std::uint64_t> seen;
  std::vector<std::uint64_t> out;
  for (std::uint64_t q : free_part.cubes())
    for_each_face(total.grid(), q, [&](std::uint64_t c) {
      if (seen.insert(c).second && !sub.closure_contains_cell(c)) out.push_back(c);
    });
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- maps

Embedding Embedding::identity(const Grid& grid) { return between(grid, grid); }

Embedding Embedding::between(const Grid& small, const Grid& big) {
  const TruncationLevel s = small.level();
  const TruncationLevel b = big.level();
  if (!b.covers(s)) throw IncompatibleGrids("target level " + to_string(b) + " does not cover " + to_string(s));
  Embedding e;
  e.source_ = small;
  e.target_ = big;
  e.pinned_.assign(big.dim(), -1);
  for (int i = 0; i < s.m; ++i) e.axis_map_.push_back(i);
  for (int j = 0; j < s.n; ++j) e.axis_map_.push_back(b.m + j);
  for (std::size_t i = 0; i < small.dim(); ++i)
    if (!(small.axis(i) == big.axis(static_cast<std::size_t>(e.axis_map_[i]))))
      throw IncompatibleGrids("shared axis " + std::to_string(i) + " differs between grids");
  for (int t : e.axis_map_) e.pinned_[static_cast<std::size_t>(t)] = -2;
  for (std::size_t t = 0; t < big.dim(); ++t) {
    if (e.pinned_[t] == -2) {
      e.pinned_[t] = -1;
      continue;
    }
    const int z = big.axis(t).zero_cube();
    if (z < 0) throw IncompatibleGrids("added axis " + std::to_string(t) + " has no cube around 0");
    e.pinned_[t] = 2 * z;
  }
  return e;
}

std::uint64_t Embedding::map_cell(std::uint64_t small_cell) const {
  std::vector<int> c = source_.decode_cell(small_cell);
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    code += static_cast<std::uint64_t>(c[i]) * target_.cell_stride(static_cast<std::size_t>(axis_map_[i]));
  for (std::size_t t = 0; t < pinned_.size(); ++t)
    if (pinned_[t] >= 0) code += static_cast<std::uint64_t>(pinned_[t]) * target_.cell_stride(t);
  return code;
}

std::uint64_t Embedding::map_cube_pinned(std::uint64_t small_cube) const {
  std::vector<int> k = source_.decode_cube(small_cube);
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < k.size(); ++i)
    code += static_cast<std::uint64_t>(k[i]) * target_.cube_stride(static_cast<std::size_t>(axis_map_[i]));
  for (std::size_t t = 0; t < pinned_.size(); ++t)
    if (pinned_[t] >= 0) code += static_cast<std::uint64_t>(pinned_[t] / 2) * target_.cube_stride(t);
  return code;
}

AxisProjection::AxisProjection(const Grid& big, std::size_t axis, const Grid& small)
    : big_(big), small_(small), axis_(axis) {
  if (axis >= big.dim() || small.dim() + 1 != big.dim()) throw IncompatibleGrids("projection dimension mismatch");
  zero_ = big.axis(axis).zero_cube();
  if (zero_ < 0) throw IncompatibleGrids("projected axis has no cube around 0");
  for (std::size_t i = 0, j = 0; i < big.dim(); ++i) {
    if (i == axis) continue;
    if (!(big.axis(i) == small.axis(j++))) throw IncompatibleGrids("projection grids disagree on a shared axis");
  }
}

std::optional<std::uint64_t> AxisProjection::project(std::uint64_t big_cell) const {
  std::vector<int> c = big_.decode_cell(big_cell);
  const int v = c[axis_];
  if (v == 2 * zero_ + 1) return std::nullopt;
  if (v != 2 * zero_ && v != 2 * zero_ + 2) throw ShapeError("cell lies outside the zero slab of the projected axis");
  std::uint64_t code = 0;
  for (std::size_t i = 0, j = 0; i < c.size(); ++i) {
    if (i == axis_) continue;
    code += static_cast<std::uint64_t>(c[i]) * small_.cell_stride(j++);
  }
  return code;
}

std::string describe(const Grid& grid) {
  std::ostringstream os;
  os << "level " << to_string(grid.level()) << ", axes";
  for (const Axis& a : grid.axes()) os << " [" << a.lo << "," << a.hi << "]x" << a.resolution;
  return os.str();
}

}  // namespace conley::cubical
