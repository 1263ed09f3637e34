#pragma once

// The cohomological Conley index as the E-limit of an index pair, computed on
// the middle tower of its product extensions.

#include <vector>

#include "conley/ecohomology.hpp"
#include "conley/index_pair.hpp"

namespace conley::index {

struct ConleyOptions {
  ProductDiscs discs;
  int window = 3;
};

struct ConleyIndexResult {
  ecoh::Tower tower;
  ecoh::ELimit limit;
};

/// Middle tower of product_index_pair(pair, level) over the expanded ladder.
ecoh::Tower conley_tower(const IndexPair& pair, const std::vector<TruncationLevel>& ladder,
                         const ProductDiscs& discs = {});

/// Throws PreconditionViolation for an irregular pair or a ladder starting
/// below the pair's level. A missing stabilization is reported in the limit,
/// not thrown.
ConleyIndexResult conley_index(const IndexPair& pair, const std::vector<TruncationLevel>& ladder,
                               const ConleyOptions& options = {});

struct IndependenceReport {
  bool equal = false;
  ecoh::ELimit first;
  ecoh::ELimit second;
};

/// Both limits must stabilize and agree in every degree.
IndependenceReport verify_independence(const IndexPair& a, const IndexPair& b,
                                       const std::vector<TruncationLevel>& ladder, const ConleyOptions& options = {});

/// Uniform grid over a box at `level` with `resolution` cubes per axis.
Grid region_grid(const functional::Box& region, const TruncationLevel& level, int resolution);

struct RegionPair {
  MultivaluedMap map;
  IndexPair pair;
};

/// Outer map of the gradient flow on the region grid and the index pair of
/// the whole region taken as isolating neighbourhood.
RegionPair index_pair_for_region(const FunctionalSpec& spec, const TruncationLevel& level,
                                 const functional::Box& region, int resolution, const FlowParams& params = {});

}  // namespace conley::index
