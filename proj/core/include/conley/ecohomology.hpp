#pragma once

// E-cohomology towers over a ladder of truncation levels and their stabilized
// direct limits.

#include <functional>
#include <string>
#include <vector>

#include "conley/cubical.hpp"
#include "conley/shapes.hpp"

namespace conley::ecoh {

using cubical::CubicalPair;
using cubical::GradedZ2Map;
using cubical::GradedZ2Space;

enum class TowerKind { negative, positive, middle };
std::string to_string(TowerKind kind);

/// Produces the relative pair at a level. Consecutive levels must nest: the
/// zero slab of each added axis reproduces the previous level exactly.
using PairSlicer = std::function<CubicalPair(const TruncationLevel&)>;

struct TowerLevel {
  TruncationLevel level;
  GradedZ2Space raw;
  int offset = 0;  // normalized degree = raw degree - offset
  GradedZ2Space normalized;
  std::size_t cubes = 0;
  std::size_t relative_cells = 0;
};

enum class StepKind { mayer_vietoris, inclusion };

struct TowerStep {
  StepKind kind = StepKind::mayer_vietoris;
  /// Forward map between normalized spaces of consecutive levels (shift 0).
  GradedZ2Map map;
  /// Inclusion steps only: the restriction to the previous level was an
  /// isomorphism, so `map` is its inverse. Otherwise `map` is zero and the
  /// step cannot be certified.
  bool invertible = true;
};

struct Tower {
  TowerKind kind = TowerKind::negative;
  std::vector<TowerLevel> levels;
  std::vector<TowerStep> steps;
};

struct ELimit {
  GradedZ2Space ranks;
  bool stabilized = false;
  int window = 0;
  /// Ladder positions [window_begin, window_end] the certificate covers.
  std::size_t window_begin = 0;
  std::size_t window_end = 0;
  std::string reason;
};

/// Splits every ladder jump into unit steps, positive coordinate first.
/// Throws ConfigError for non-monotone ladders.
std::vector<TruncationLevel> expand_ladder(const std::vector<TruncationLevel>& ladder);

/// Largest slice a tower accepts; bigger slices raise ResolutionError
/// instead of exhausting memory in the cell complex.
inline constexpr std::size_t kMaxTowerCubes = 1'000'000;

/// Builds a tower along a ladder of unit steps.
Tower build_tower(TowerKind kind, const std::vector<TruncationLevel>& unit_ladder, const PairSlicer& slicer);

Tower tower_negative(const ShapeSpec& shape, const std::vector<int>& ladder, const LadderGrid& grid);
Tower tower_positive(const ShapeSpec& shape, const std::vector<int>& ladder, const LadderGrid& grid);
Tower tower_middle(const ShapeSpec& shape, const std::vector<TruncationLevel>& ladder, const LadderGrid& grid);

/// A tower is stabilized over the last `window` maps when the composite from
/// each of those levels into the final level has the same rank in every
/// degree. The common rank is the rank of the direct limit: the classes that
/// survive to the end of the ladder.
ELimit stabilized_limit(const Tower& tower, int window = 3);

/// E-morphism candidate Psi(x) = L x + K(x) on a truncation, with
/// K(x) = translation + perturbation * x.
struct EMorphismSpec {
  TruncationLevel level;
  functional::Matrix linear;
  functional::Vector translation;
  functional::Matrix perturbation;
  /// K may only read and write the first `perturbation_support` coordinates
  /// of each sign group (positive then negative); -1 disables the check.
  int perturbation_support = -1;
  double tolerance = 1e-12;
};

struct EMorphismReport {
  bool ok = true;
  bool linear_invertible = true;
  bool preserves_positive = true;
  bool finite_rank = true;
  bool bounded_preimages = true;
  double preimage_bound = 0.0;  // norm of the inverse of the affine part
  int perturbation_rank = 0;
  std::vector<std::string> violations;
};

EMorphismReport e_morphism_validate(const EMorphismSpec& map);

}  // namespace conley::ecoh
