#pragma once

// Numerical flow of a vector field and its cubical outer approximation as a
// multivalued map on grid cubes.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "conley/functional.hpp"
#include "conley/grid.hpp"

namespace conley::index {

using cubical::CubeSet;
using cubical::Grid;
using functional::FunctionalSpec;
using functional::TruncationLevel;
using functional::Vector;

/// Autonomous vector field on a truncation with a global Lipschitz bound.
struct VectorField {
  int dim = 0;
  std::function<Vector(const Vector&)> eval;
  double lipschitz = 0.0;
};

/// x' = -grad f on the truncation.
VectorField gradient_field(const FunctionalSpec& spec, const TruncationLevel& level);

struct FlowParams {
  /// Integrator step h; 0 selects (cube diameter) / (4 * Lipschitz bound).
  double time_step = 0.0;
  /// Time T of the flow map that the outer approximation encloses.
  double map_time = 1.0;
  /// Inflation radius added to every image box; negative selects twice the
  /// observed deviation of the cube centre image from the corner hull.
  double expansion_bound = -1.0;
  /// Horizon for trajectory questions (exit times, shooting).
  double t_max = 50.0;
};

/// Default step for a grid: diameter of one cube over four times the Lipschitz bound.
double default_time_step(const Grid& grid, double lipschitz);

/// Fixed-step classical Runge-Kutta; negative t integrates the reversed field
/// with the same step size. Throws ResolutionError on step-size underflow or
/// a non-finite state.
Vector flow(const VectorField& field, const Vector& x, double t, double h);
Vector flow(const FunctionalSpec& spec, const Vector& x, double t, const TruncationLevel& level,
            const FlowParams& params, const Grid* grid = nullptr);

/// Outer approximation of the time-T map: each cube maps to an integer box of
/// cubes. Boxes are clipped to the grid; `escapes` records clipping.
class MultivaluedMap {
 public:
  MultivaluedMap() = default;
  MultivaluedMap(Grid grid, std::vector<std::int32_t> boxes, std::vector<char> escapes, double margin, double h,
                 double map_time);

  const Grid& grid() const { return grid_; }
  /// lo/hi cube index of the image box along each axis.
  std::pair<int, int> box(std::uint64_t cube, std::size_t axis) const;
  bool escapes(std::uint64_t cube) const { return escapes_[cube] != 0; }
  double margin() const { return margin_; }
  double time_step() const { return h_; }
  double map_time() const { return map_time_; }

  /// Calls fn(code) for every grid cube of the image box.
  void for_each_image(std::uint64_t cube, const std::function<void(std::uint64_t)>& fn) const;
  bool image_contains(std::uint64_t cube, std::uint64_t target) const;
  /// True when the image meets a cube outside `set` or leaves the grid.
  bool image_leaves(std::uint64_t cube, const std::vector<char>& member) const;

 private:
  Grid grid_;
  std::vector<std::int32_t> boxes_;  // per cube: lo_0, hi_0, lo_1, hi_1, ...
  std::vector<char> escapes_;
  double margin_ = 0.0;
  double h_ = 0.0;
  double map_time_ = 0.0;
};

MultivaluedMap outer_map(const VectorField& field, const Grid& grid, const FlowParams& params);
MultivaluedMap outer_map(const FunctionalSpec& spec, const Grid& grid, const TruncationLevel& level,
                         const FlowParams& params);

/// Dense membership table of a cube set over its grid.
std::vector<char> membership(const CubeSet& set);

/// Maximal combinatorially invariant subset of N: cubes lying on a
/// bi-infinite path of the map inside N.
CubeSet invariant_part(const CubeSet& N, const MultivaluedMap& map);

/// Inv(N) avoids the one-cube boundary collar of N.
bool is_isolating(const CubeSet& N, const MultivaluedMap& map);

/// Cubes reachable from `start` along map edges that stay in `within`.
CubeSet forward_hull(const CubeSet& start, const CubeSet& within, const MultivaluedMap& map);

}  // namespace conley::index
