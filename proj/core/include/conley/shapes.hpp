#pragma once

// Declarative closed bounded subsets of E and their cubical slices per
// truncation level.
//
// Slicing rule: a grid cube belongs to the slice X_{m,n} when the box obtained
// by collapsing every zero interval of the cube to {0} meets X. A cube whose
// interval on some axis is the zero cube therefore behaves exactly like a
// cube of the lower level, which makes slices nest exactly:
// X_{m,n} is the part of X_{m+1,n} inside the zero slab of the new axis.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conley/functional.hpp"
#include "conley/grid.hpp"

namespace conley::ecoh {

using cubical::CubeSet;
using cubical::Grid;
using functional::TruncationLevel;

enum class ShapeFamily { empty, point, ball, sphere, box, sublevel, explicit_sets };

ShapeFamily parse_shape_family(const std::string& name);
std::string to_string(ShapeFamily family);

struct ShapeSpec {
  ShapeFamily family = ShapeFamily::ball;
  double radius = 1.0;
  /// Shape confined to E+_{m} (+) E-_{n} of this level when set; coordinates
  /// outside it vanish on the shape.
  std::optional<TruncationLevel> confined_to;
  /// Box family: interval per retained coordinate of the confining level
  /// (positive coordinates first). Unconfined boxes use `default_interval`
  /// on every coordinate.
  std::vector<std::pair<double, double>> intervals;
  std::pair<double, double> default_interval{-1.0, 1.0};
  /// Sublevel family: {x : f(x) <= threshold}.
  std::optional<functional::FunctionalSpec> functional;
  double threshold = 0.0;
  /// Explicit family: one cube set per level.
  std::map<TruncationLevel, CubeSet> explicit_sets;

  void validate() const;
};

/// Uniform grid shared by every level: each axis spans [-half_width,
/// half_width] with an odd number of cubes so 0 sits inside the zero cube.
struct LadderGrid {
  double half_width = 1.25;
  int resolution = 9;

  void validate() const;
  Grid at(const TruncationLevel& level) const;
};

CubeSet slice(const ShapeSpec& shape, const TruncationLevel& level, const Grid& grid);

/// Halves of the slice at a level with n >= 1 along its last negative axis.
struct HalfSlices {
  CubeSet hat;    // cubes at or above the zero cube
  CubeSet check;  // cubes at or below the zero cube
  CubeSet layer;  // hat intersected with check
};

HalfSlices half_slices(const CubeSet& slice, std::size_t axis);
HalfSlices half_slices(const ShapeSpec& shape, const TruncationLevel& level, const Grid& grid);

/// Cubes of `set` lying in the zero slab of `axis`, re-indexed on the grid
/// without that axis.
CubeSet collapse_axis(const CubeSet& set, std::size_t axis, const Grid& lower);

}  // namespace conley::ecoh
