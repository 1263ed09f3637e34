#pragma once

// Homology over GF(2) of a relative cubical cell complex, computed by a
// collapse-ordered column reduction. Cells are grid cell codes; a face of a
// listed cell that is itself not listed belongs to the subcomplex and counts
// as zero.

#include <cstdint>
#include <vector>

#include "conley/grid.hpp"

namespace conley::cubical {

using Chain = std::vector<std::uint64_t>;  // sorted cell codes, GF(2) coefficients

class ReducedComplex {
 public:
  ReducedComplex() = default;
  ReducedComplex(const Grid& grid, std::vector<std::uint64_t> cells);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return cells_.size(); }
  const std::vector<std::uint64_t>& cells() const { return cells_; }
  bool contains(std::uint64_t cell) const;

  int max_dim() const { return static_cast<int>(generators_.size()) - 1; }
  int betti(int k) const;
  /// Cycle representatives of a basis of H_k.
  const std::vector<Chain>& generators(int k) const;

  /// Coordinates of the class of a relative k-cycle in the generator basis.
  /// Cells that are not listed are dropped when drop_absent is set, otherwise
  /// they raise PreconditionViolation. A chain that is not a relative cycle
  /// raises PreconditionViolation.
  std::vector<int> coordinates(int k, const Chain& cycle, bool drop_absent = false) const;

  /// Counts per dimension of the cells removed as critical (Morse count).
  const std::vector<std::size_t>& critical_counts() const { return critical_counts_; }

 private:
  struct Reduced {
    std::vector<std::int32_t> column;  // filtration positions, sorted
    std::vector<std::int32_t> chain;   // V column, filtration positions, sorted
  };

  std::int32_t index_of(std::uint64_t cell) const;
  void append_boundary_positions(std::int32_t pos, std::vector<std::int32_t>& out) const;

  Grid grid_;
  std::vector<std::uint64_t> cells_;       // sorted
  std::vector<std::uint64_t> bnd_offset_;  // CSR boundary by cell index
  std::vector<std::int32_t> bnd_;
  std::vector<std::int8_t> dim_;
  std::vector<std::int32_t> order_;        // filtration position -> cell index
  std::vector<std::int32_t> position_;     // cell index -> filtration position
  std::vector<std::int32_t> pivot_;        // filtration position p -> column position with low p, or -1
  std::vector<std::int32_t> reduced_slot_; // column position -> slot in reduced_, or -1 for collapse pairs
  std::vector<Reduced> reduced_;
  std::vector<std::int32_t> essential_slot_;  // filtration position -> essential id, or -1
  std::vector<std::vector<std::int32_t>> essential_chain_;  // per essential id, positions
  std::vector<std::int32_t> essential_local_;               // per essential id, index within its degree
  std::vector<std::vector<Chain>> generators_;
  std::vector<std::size_t> critical_counts_;
};

}  // namespace conley::cubical
