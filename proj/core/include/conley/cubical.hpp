#pragma once

// Relative cubical cohomology over GF(2), maps induced by inclusions and the
// Mayer-Vietoris connecting homomorphism.
//
// Cohomology is computed as the dual of cellular homology: over a field the
// universal coefficient theorem makes H^k(X, A) the dual of H_k(X, A), and a
// map of pairs acts on cohomology by the transpose of its homology matrix in
// dual bases. Every basis is the one chosen by the deterministic reduction in
// ReducedComplex, so equal inputs always give equal bases.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conley/cell_reduction.hpp"
#include "conley/gf2.hpp"
#include "conley/grid.hpp"

namespace conley::cubical {

struct CubicalPair {
  CubeSet total;
  CubeSet sub;

  /// Throws IncompatibleGrids or ShapeError unless sub is contained in total.
  void validate() const;
};

class GradedZ2Space {
 public:
  GradedZ2Space() = default;
  explicit GradedZ2Space(std::map<int, int> ranks);

  int rank(int degree) const;
  int total_rank() const;
  /// Nonzero entries only.
  const std::map<int, int>& ranks() const { return ranks_; }
  /// Degree d of the result is degree d + offset of this space.
  GradedZ2Space shifted(int offset) const;
  bool is_zero() const { return ranks_.empty(); }

  friend bool operator==(const GradedZ2Space&, const GradedZ2Space&) = default;

 private:
  std::map<int, int> ranks_;
};

GradedZ2Space direct_sum(const GradedZ2Space& a, const GradedZ2Space& b);

/// Linear map H^k(source) -> H^{k+shift}(target) for every k. Matrices are
/// keyed by source degree with rows indexing the target basis.
class GradedZ2Map {
 public:
  GradedZ2Map() = default;
  GradedZ2Map(GradedZ2Space source, GradedZ2Space target, int shift);

  const GradedZ2Space& source() const { return source_; }
  const GradedZ2Space& target() const { return target_; }
  int shift() const { return shift_; }

  /// Zero matrix of the right shape when nothing was set.
  gf2::BitMatrix matrix(int source_degree) const;
  void set_matrix(int source_degree, gf2::BitMatrix m);

  int rank(int source_degree) const;
  /// Isomorphism in every degree (including matching zero spaces).
  bool is_isomorphism() const;
  bool is_zero() const;
  /// Source degrees touched by either space.
  std::vector<int> degrees() const;

  /// Re-indexes degrees: source degree d becomes d + source_offset, target
  /// degree e becomes e + target_offset.
  GradedZ2Map renormalized(int source_offset, int target_offset) const;

 private:
  GradedZ2Space source_;
  GradedZ2Space target_;
  int shift_ = 0;
  std::map<int, gf2::BitMatrix> matrices_;
};

/// g after f. Throws PreconditionViolation when not composable.
GradedZ2Map compose(const GradedZ2Map& g, const GradedZ2Map& f);
GradedZ2Map identity_map(const GradedZ2Space& space);
/// Inverse of an isomorphism; throws PreconditionViolation otherwise.
GradedZ2Map inverse(const GradedZ2Map& map);
/// (f, g): V -> A (+) B with A's basis first.
GradedZ2Map stack_maps(const GradedZ2Map& f, const GradedZ2Map& g);
/// f + g: A (+) B -> W.
GradedZ2Map join_maps(const GradedZ2Map& f, const GradedZ2Map& g);

/// Homology engine of one relative cell complex together with its graded
/// cohomology ranks.
class PairCohomology {
 public:
  PairCohomology() = default;
  /// Complex cl(total) \ cl(sub).
  static PairCohomology from_cubes(const CubeSet& total, const CubeSet& sub);
  static PairCohomology from_pair(const CubicalPair& pair) { return from_cubes(pair.total, pair.sub); }
  /// Complex given by its relative cells (a difference of two subcomplexes).
  static PairCohomology from_cells(const Grid& grid, std::vector<std::uint64_t> relative_cells);

  const ReducedComplex& engine() const { return engine_; }
  const GradedZ2Space& space() const { return space_; }
  const Grid& grid() const { return engine_.grid(); }

 private:
  explicit PairCohomology(ReducedComplex engine);
  ReducedComplex engine_;
  GradedZ2Space space_;
};

/// Sorted-set helpers on cell code vectors.
std::vector<std::uint64_t> cells_difference(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b);
std::vector<std::uint64_t> cells_intersection(const std::vector<std::uint64_t>& a,
                                              const std::vector<std::uint64_t>& b);
std::vector<std::uint64_t> cells_union(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b);

/// Boundary of a chain of cells (mod 2), sorted.
Chain chain_boundary(const Grid& grid, const Chain& chain);

/// Restriction H^*(big) -> H^*(small) for a map of relative complexes sending
/// each small cell through `cell_map` (identity when empty). Cells of the
/// image outside the big complex must lie in the big subcomplex.
GradedZ2Map restriction_map(const PairCohomology& small, const PairCohomology& big,
                            const std::function<std::uint64_t(std::uint64_t)>& cell_map = {});

/// Map on cohomology induced by the inclusion small -> big: H^k(big) -> H^k(small).
GradedZ2Map induced_inclusion(const CubicalPair& small, const CubicalPair& big);

/// Connecting map H^k(intersection) -> H^{k+1}(whole) of a relative
/// Mayer-Vietoris triad at the cell level. `part_cells` is the closure of the
/// first part, `sub_cells` the closure of the relative subcomplex. Each
/// intersection-level chain is passed through `to_intersection` before being
/// classified (use it for projections); cells it maps to std::nullopt vanish.
GradedZ2Map connecting_map(const PairCohomology& whole, const std::vector<std::uint64_t>& part_cells,
                           const std::vector<std::uint64_t>& sub_cells, const PairCohomology& intersection,
                           const std::function<std::optional<std::uint64_t>(std::uint64_t)>& to_intersection = {},
                           bool drop_absent = false);

using CellPredicate = std::function<bool(std::uint64_t)>;

/// Same map with the part and the relative subcomplex given as membership
/// tests, which avoids materializing large closures.
GradedZ2Map connecting_map(const PairCohomology& whole, const CellPredicate& in_part, const CellPredicate& in_sub,
                           const PairCohomology& intersection,
                           const std::function<std::optional<std::uint64_t>(std::uint64_t)>& to_intersection = {},
                           bool drop_absent = false);

/// Connecting homomorphism of the triad (whole; partA, partB).
GradedZ2Map mayer_vietoris_delta(const CubeSet& whole, const CubeSet& partA, const CubeSet& partB);

/// The relative triad (whole, sub) split by two cube sets covering `total`.
struct MayerVietorisSequence {
  PairCohomology whole, part_a, part_b, intersection;
  GradedZ2Map restrict_to_parts;     // H(whole) -> H(A) (+) H(B)
  GradedZ2Map difference;            // H(A) (+) H(B) -> H(A cap B)
  GradedZ2Map delta;                 // H(A cap B) -> H(whole), shift +1
  /// Maps in sequence order, wrapped once so every node is checked.
  std::vector<GradedZ2Map> cycle() const { return {restrict_to_parts, difference, delta, restrict_to_parts}; }
};

MayerVietorisSequence mayer_vietoris_sequence(const CubicalPair& whole, const CubeSet& partA, const CubeSet& partB);

/// Long exact sequence of the triple sub2 ⊆ sub1 ⊆ total:
/// H(total,sub1) -> H(total,sub2) -> H(sub1,sub2) -> H(total,sub1) (shift +1).
struct TripleSequence {
  PairCohomology outer, whole, inner;  // (total,sub1), (total,sub2), (sub1,sub2)
  GradedZ2Map j;                       // H(total,sub1) -> H(total,sub2)
  GradedZ2Map i;                       // H(total,sub2) -> H(sub1,sub2)
  GradedZ2Map delta;                   // H(sub1,sub2) -> H(total,sub1), shift +1
  std::vector<GradedZ2Map> cycle() const { return {j, i, delta, j}; }
};

TripleSequence triple_sequence(const CubeSet& total, const CubeSet& sub1, const CubeSet& sub2);

/// Rank of image equals nullity of the next map, and consecutive maps compose
/// to zero, at every interior node and degree.
bool check_exact(const std::vector<GradedZ2Map>& sequence);

GradedZ2Space relative_cohomology(const CubicalPair& pair);

std::string to_string(const GradedZ2Space& space);

}  // namespace conley::cubical
