#pragma once

// Combinatorial index pairs, exit times, the squeeze operations, and the
// product extension of a finite-dimensional pair to higher truncations.

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "conley/cubical.hpp"
#include "conley/flow.hpp"

namespace conley::index {

struct IndexPair {
  CubeSet N1;
  CubeSet N0;
  TruncationLevel level;
  bool regular = false;
  /// Upper bound on the time a trajectory spends in N1 \ N0 away from the
  /// invariant set (longest combinatorial path times the map time).
  double exit_time_bound = 0.0;
  /// Invariant set the pair was built for (empty when unknown).
  CubeSet invariant;

  cubical::CubicalPair as_pair() const { return {N1, N0}; }
};

/// Index pair for Inv(N). Throws NonIsolating when N is not isolating or the
/// exit set reaches the invariant set.
IndexPair build_index_pair(const CubeSet& N, const MultivaluedMap& map);

/// The three defining conditions checked on the combinatorial map; returns
/// an empty string when all hold, otherwise the first failure.
std::string check_index_pair(const IndexPair& pair, const MultivaluedMap& map);

constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

struct ExitTime {
  double lower = 0.0;
  double upper = 0.0;  // kInfiniteTime when the trajectory never exits
};

/// Time for x to leave N1 \ N0, bracketed between the last integration step
/// still inside and the first step outside.
ExitTime exit_time(const IndexPair& pair, const VectorField& field, const Vector& x, const FlowParams& params);

struct ExitTimeField {
  std::vector<std::uint64_t> cubes;
  std::vector<ExitTime> bounds;
};

/// Exit-time bounds per cube of N1 from the corners and the centre.
ExitTimeField exit_time_field(const IndexPair& pair, const VectorField& field, const FlowParams& params);

/// Cubes of N1 that end a combinatorial path of ceil(t / T) steps inside N1.
IndexPair squeeze_forward(const IndexPair& pair, const MultivaluedMap& map, double t);
/// N0 grown by the cubes of N1 all of whose images inside N1 reach N0 within
/// ceil(t / T) steps.
IndexPair squeeze_backward(const IndexPair& pair, const MultivaluedMap& map, double t);

/// Shape of the discs used by the product extension.
struct ProductDiscs {
  double half_width = 0.5;
  /// Cubes along each added negative axis; the two end cubes form the
  /// boundary of the disc. Must be odd and at least 5 so that the face where
  /// the tower splits the axis stays off the boundary.
  int negative_cubes = 5;
};

/// Grid of a finite-dimensional pair extended to `level` by disc axes.
Grid product_grid(const Grid& base, const TruncationLevel& level, const ProductDiscs& discs = {});

/// (N x D+ x D-, N0 x D+ x D- u N x D+ x boundary D-) at `level`.
IndexPair product_index_pair(const IndexPair& base, const TruncationLevel& level, const ProductDiscs& discs = {});

void write_index_pair(std::ostream& os, const IndexPair& pair);
IndexPair read_index_pair(std::istream& is);
void write_exit_times_csv(std::ostream& os, const Grid& grid, const ExitTimeField& field);

}  // namespace conley::index
