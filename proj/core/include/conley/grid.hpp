#pragma once

// Uniform cubical grids over a truncation E+_m (+) E-_n, sets of full cubes,
// and integer codes for the elementary cells of the grid.
//
// A cell is addressed by doubled coordinates c_i in [0, 2 r_i]: odd values are
// the interval [k, k+1] with k = (c_i - 1) / 2, even values are the vertex
// c_i / 2. Cube and cell codes are mixed-radix integers with axis 0 fastest.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conley/functional.hpp"

namespace conley::cubical {

using functional::TruncationLevel;

struct Axis {
  double lo = -1.0;
  double hi = 1.0;
  int resolution = 1;

  double width() const { return (hi - lo) / resolution; }
  /// Index of the cube holding 0 in its interior, or -1.
  int zero_cube() const;
  double cube_lo(int k) const { return lo + k * width(); }
  double cube_hi(int k) const { return lo + (k + 1) * width(); }
  friend bool operator==(const Axis&, const Axis&) = default;
};

class Grid {
 public:
  Grid() = default;
  /// Axes are ordered positive coordinates first, then negative ones.
  Grid(TruncationLevel level, std::vector<Axis> axes);

  const TruncationLevel& level() const { return level_; }
  const std::vector<Axis>& axes() const { return axes_; }
  const Axis& axis(std::size_t i) const { return axes_[i]; }
  std::size_t dim() const { return axes_.size(); }

  std::uint64_t cube_count() const { return cube_total_; }
  std::uint64_t cell_count() const { return cell_total_; }

  std::uint64_t cube_code(std::span<const int> index) const;
  void decode_cube(std::uint64_t code, std::span<int> index) const;
  std::vector<int> decode_cube(std::uint64_t code) const;

  std::uint64_t cell_code(std::span<const int> coords) const;
  void decode_cell(std::uint64_t code, std::span<int> coords) const;
  std::vector<int> decode_cell(std::uint64_t code) const;
  int cell_dim(std::uint64_t code) const;
  std::uint64_t cell_stride(std::size_t axis) const { return cell_stride_[axis]; }
  std::uint64_t cube_stride(std::size_t axis) const { return cube_stride_[axis]; }

  /// Cell code of the full cube with the given cube code.
  std::uint64_t cube_cell(std::uint64_t cube) const;

  /// Cube containing x (half-open cells, closed at the upper grid edge).
  std::optional<std::uint64_t> locate(std::span<const double> x) const;

  std::vector<double> cube_center(std::uint64_t cube) const;

  friend bool operator==(const Grid& a, const Grid& b) { return a.level_ == b.level_ && a.axes_ == b.axes_; }

 private:
  TruncationLevel level_;
  std::vector<Axis> axes_;
  std::vector<std::uint64_t> cube_stride_;
  std::vector<std::uint64_t> cell_stride_;
  std::uint64_t cube_total_ = 1;
  std::uint64_t cell_total_ = 1;
};

/// Grid for `level` obtained by inserting axes: positive axes go after the
/// existing positive ones, negative axes after the existing negative ones.
Grid extend_grid(const Grid& grid, const std::vector<Axis>& extra_positive, const std::vector<Axis>& extra_negative);

/// Set of full elementary cubes, stored as sorted unique cube codes.
class CubeSet {
 public:
  CubeSet() = default;
  explicit CubeSet(Grid grid) : grid_(std::move(grid)) {}
  CubeSet(Grid grid, std::vector<std::uint64_t> cubes);

  static CubeSet from_indices(Grid grid, const std::vector<std::vector<int>>& indices);
  static CubeSet full(Grid grid);

  const Grid& grid() const { return grid_; }
  const std::vector<std::uint64_t>& cubes() const { return cubes_; }
  std::size_t size() const { return cubes_.size(); }
  bool empty() const { return cubes_.empty(); }
  bool contains(std::uint64_t cube) const;
  bool contains_index(std::span<const int> index) const;
  bool subset_of(const CubeSet& other) const;

  /// True when some cube of the set has the cell as a face.
  bool closure_contains_cell(std::uint64_t cell) const;

  friend bool operator==(const CubeSet& a, const CubeSet& b) { return a.grid_ == b.grid_ && a.cubes_ == b.cubes_; }

 private:
  Grid grid_;
  std::vector<std::uint64_t> cubes_;
};

CubeSet set_union(const CubeSet& a, const CubeSet& b);
CubeSet set_intersection(const CubeSet& a, const CubeSet& b);
CubeSet set_difference(const CubeSet& a, const CubeSet& b);

/// Cubes of `set` sharing at least a vertex with a grid cube outside `set`
/// (grid edges count as outside).
CubeSet boundary_collar(const CubeSet& set);
/// `set` together with every grid cube sharing at least a vertex with it.
CubeSet neighborhood(const CubeSet& set);

/// Sorted cell codes of the closure (all faces) of a cube set.
std::vector<std::uint64_t> closure_cells(const CubeSet& set);

/// Sorted cell codes of cl(total) \ cl(sub).
std::vector<std::uint64_t> relative_cells(const CubeSet& total, const CubeSet& sub);

/// Maps cells of a lower-level grid into a higher-level grid: existing axes
/// correspond one-to-one, each added axis is pinned at the lower vertex of its
/// zero cube.
class Embedding {
 public:
  static Embedding identity(const Grid& grid);
  static Embedding between(const Grid& small, const Grid& big);

  std::uint64_t map_cell(std::uint64_t small_cell) const;
  std::uint64_t map_cube_pinned(std::uint64_t small_cube) const;  // cube x zero cubes of added axes
  const Grid& source() const { return source_; }
  const Grid& target() const { return target_; }
  /// Target axis of every source axis.
  const std::vector<int>& axis_map() const { return axis_map_; }

 private:
  Grid source_;
  Grid target_;
  std::vector<int> axis_map_;
  std::vector<int> pinned_;  // per target axis: doubled coordinate, or -1 when mapped
};

/// Collapses one axis of a grid through its zero cube: the lower and upper
/// vertices of the zero cube map onto the lower-dimensional grid, the zero
/// interval itself is degenerate.
class AxisProjection {
 public:
  AxisProjection(const Grid& big, std::size_t axis, const Grid& small);

  /// std::nullopt for degenerate cells; throws ShapeError for cells outside
  /// the closed zero slab.
  std::optional<std::uint64_t> project(std::uint64_t big_cell) const;

 private:
  Grid big_;
  Grid small_;
  std::size_t axis_ = 0;
  int zero_ = 0;
};

std::string describe(const Grid& grid);

}  // namespace conley::cubical
