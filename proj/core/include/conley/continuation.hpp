#pragma once

// Continuation of the field around a connecting segment to a field without
// invariant set, through the chain F -> F1 -> F2 -> F3.

#include <optional>
#include <vector>

#include "conley/conley_index.hpp"
#include "conley/flow.hpp"

namespace conley::floer {

/// The segment runs along one level coordinate ("x"); the remaining
/// coordinates form "y".
///   F1(x, y) = (F_x(x,0) + D_y F_x(x,0) y, D_y F_y(x,0) y)
///   F2(x, y) = (F_x(x,0), D_y F_y(x,0) y)
///   F3(x, y) = (F_x(x,0) - M - 1, D_y F_y(x,0) y),  M = max of F_x(x,0) on the segment
/// and at(tau) interpolates linearly between consecutive fields, tau in [0,3].
struct ContinuationPath {
  index::VectorField F, F1, F2, F3;
  double M = 0.0;
  int segment_axis = 0;
  double segment_lo = -1.0;
  double segment_hi = 1.0;

  index::VectorField at(double tau) const;
};

ContinuationPath continuation_path(const index::VectorField& field, int segment_axis = 0, double segment_lo = -1.0,
                                   double segment_hi = 1.0);

struct ContinuationSample {
  double tau = 0.0;
  bool isolating = false;
  std::size_t invariant_cubes = 0;
};

struct ContinuationReport {
  ContinuationPath path;
  std::vector<ContinuationSample> samples;
  bool isolation_maintained = true;
  std::optional<double> breaking_tau;
  bool final_invariant_empty = false;
  std::size_t final_invariant_cubes = 0;
  /// Largest first component of F3 over the cube centres of the grid.
  double F3_first_max = 0.0;
};

/// Samples tau = 3j/steps for j = 0..steps (only tau = 0 when steps = 0) and
/// checks on a fixed grid over `region` that N = region stays isolating.
ContinuationReport continuation_trivialize(const index::VectorField& field, const cubical::Grid& grid, int steps,
                                           const index::FlowParams& params = {}, int segment_axis = 0);

/// Gradient field of `spec` on a uniform grid over `region`.
ContinuationReport continuation_trivialize(const functional::FunctionalSpec& spec,
                                           const functional::TruncationLevel& level, const functional::Box& region,
                                           int resolution, int steps, const index::FlowParams& params = {});

}  // namespace conley::floer
