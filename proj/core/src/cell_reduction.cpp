#include "conley/cell_reduction.hpp"

#include <absl/container/flat_hash_map.h>

#include <algorithm>
#include <limits>
#include <deque>

#include "conley/errors.hpp"

namespace conley::cubical {

namespace {

// Max-heap column with lazy GF(2) cancellation of repeated entries.
class HeapColumn {
 public:
  void push(std::int32_t x) {
    heap_.push_back(x);
    std::push_heap(heap_.begin(), heap_.end());
  }
  void add(const std::vector<std::int32_t>& xs) {
    for (std::int32_t x : xs) push(x);
    if (heap_.size() > 4 * (live_hint_ + 64)) prune();
  }
  // Largest entry with odd multiplicity, or -1.
  std::int32_t max() {
    while (!heap_.empty()) {
      const std::int32_t top = heap_.front();
      std::pop_heap(heap_.begin(), heap_.end());
      heap_.pop_back();
      if (!heap_.empty() && heap_.front() == top) {
        std::pop_heap(heap_.begin(), heap_.end());
        heap_.pop_back();
        continue;
      }
      push(top);
      return top;
    }
    return -1;
  }
  std::vector<std::int32_t> take_sorted() {
    std::vector<std::int32_t> out = std::move(heap_);
    heap_.clear();
    cancel_pairs(out);
    return out;
  }
  static void cancel_pairs(std::vector<std::int32_t>& v) {
    std::sort(v.begin(), v.end());
    std::size_t w = 0;
    for (std::size_t i = 0; i < v.size();) {
      std::size_t j = i;
      while (j < v.size() && v[j] == v[i]) ++j;
      if ((j - i) & 1U) v[w++] = v[i];
      i = j;
    }
    v.resize(w);
  }

 private:
  void prune() {
    cancel_pairs(heap_);
    std::make_heap(heap_.begin(), heap_.end());
    live_hint_ = heap_.size();
  }
  std::vector<std::int32_t> heap_;
  std::size_t live_hint_ = 0;
};

}  // namespace

ReducedComplex::ReducedComplex(const Grid& grid, std::vector<std::uint64_t> cells)
    : grid_(grid), cells_(std::move(cells)) {
  std::sort(cells_.begin(), cells_.end());
  cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
  if (cells_.size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()))
    throw ResolutionError("cell complex too large");
  const auto n = static_cast<std::int32_t>(cells_.size());
  const std::size_t d = grid_.dim();

  absl::flat_hash_map<std::uint64_t, std::int32_t> index;
  index.reserve(cells_.size());
  for (std::int32_t i = 0; i < n; ++i) index.emplace(cells_[i], i);

  // Boundary in CSR form; faces absent from the list lie in the subcomplex.
  dim_.assign(cells_.size(), 0);
  bnd_offset_.assign(cells_.size() + 1, 0);
  std::vector<int> coords(d);
  int top = -1;
  for (std::int32_t i = 0; i < n; ++i) {
    grid_.decode_cell(cells_[i], coords);
    int k = 0;
    for (std::size_t a = 0; a < d; ++a) {
      if (!(coords[a] & 1)) continue;
      ++k;
      for (std::uint64_t face : {cells_[i] - grid_.cell_stride(a), cells_[i] + grid_.cell_stride(a)}) {
        auto it = index.find(face);
        if (it != index.end()) bnd_.push_back(it->second);
      }
    }
    dim_[i] = static_cast<std::int8_t>(k);
    top = std::max(top, k);
    bnd_offset_[i + 1] = bnd_.size();
  }
  index.clear();

  // Coboundary by transposition.
  std::vector<std::uint64_t> cob_offset(cells_.size() + 1, 0);
  for (std::int32_t f : bnd_) ++cob_offset[f + 1];
  for (std::size_t i = 0; i < cells_.size(); ++i) cob_offset[i + 1] += cob_offset[i];
  std::vector<std::int32_t> cob(bnd_.size());
  {
    std::vector<std::uint64_t> fill(cob_offset.begin(), cob_offset.end() - 1);
    for (std::int32_t i = 0; i < n; ++i)
      for (std::uint64_t e = bnd_offset_[i]; e < bnd_offset_[i + 1]; ++e) cob[fill[bnd_[e]]++] = i;
  }

  // Collapse ordering: remove free pairs while possible, otherwise remove a
  // cell without cofaces as critical. The filtration is the reverse order.
  // Free faces are processed first-in first-out so the collapse front grows
  // breadth-first; depth-first order leaves many spurious critical cells.
  std::vector<std::int32_t> live_cofaces(cells_.size());
  for (std::size_t i = 0; i < cells_.size(); ++i)
    live_cofaces[i] = static_cast<std::int32_t>(cob_offset[i + 1] - cob_offset[i]);
  std::vector<char> removed(cells_.size(), 0);
  std::vector<char> is_critical(cells_.size(), 0);
  std::vector<std::int32_t> removal;
  removal.reserve(cells_.size());
  std::deque<std::int32_t> stack;
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  for (std::int32_t i = 0; i < n; ++i)
    if (live_cofaces[i] == 1) stack.push_back(i);

  // Cells without remaining cofaces, most recent last. Removing one of them as
  // critical keeps the remainder a subcomplex; taking the most recent keeps
  // the collapse front compact.
  std::vector<std::int32_t> maximal;
  auto remove_cell = [&](std::int32_t c) {
    removed[c] = 1;
    removal.push_back(c);
    for (std::uint64_t e = bnd_offset_[c]; e < bnd_offset_[c + 1]; ++e) {
      const std::int32_t f = bnd_[e];
      const std::int32_t left = --live_cofaces[f];
      if (left == 1) stack.push_back(f);
      if (left == 0) maximal.push_back(f);
    }
  };

  for (std::int32_t i = n - 1; i >= 0; --i)
    if (live_cofaces[i] == 0) maximal.push_back(i);
  critical_counts_.assign(static_cast<std::size_t>(top + 1), 0);

  while (removal.size() < cells_.size()) {
    while (!stack.empty()) {
      const std::int32_t a = stack.front();
      stack.pop_front();
      if (removed[a] || live_cofaces[a] != 1) continue;
      std::int32_t b = -1;
      for (std::uint64_t e = cob_offset[a]; e < cob_offset[a + 1]; ++e)
        if (!removed[cob[e]]) {
          b = cob[e];
          break;
        }
      remove_cell(b);
      remove_cell(a);
      pairs.emplace_back(a, b);
    }
    while (!maximal.empty() && removed[maximal.back()]) maximal.pop_back();
    if (maximal.empty()) break;
    const std::int32_t c = maximal.back();
    maximal.pop_back();
    is_critical[c] = 1;
    ++critical_counts_[static_cast<std::size_t>(dim_[c])];
    remove_cell(c);
  }
  cob.clear();
  cob.shrink_to_fit();

  order_.assign(removal.rbegin(), removal.rend());
  position_.assign(cells_.size(), 0);
  for (std::int32_t p = 0; p < n; ++p) position_[order_[p]] = p;

  // Column reduction. Collapse pairs are already reduced: the coface column
  // has the face as its lowest entry.
  pivot_.assign(cells_.size(), -1);
  reduced_slot_.assign(cells_.size(), -1);
  for (const auto& [a, b] : pairs) pivot_[position_[a]] = position_[b];

  std::vector<std::int32_t> scratch;
  for (std::int32_t p = 0; p < n; ++p) {
    const std::int32_t c = order_[p];
    if (!is_critical[c]) continue;
    HeapColumn col;
    std::vector<std::int32_t> chain{p};
    scratch.clear();
    append_boundary_positions(p, scratch);
    col.add(scratch);
    std::int32_t low;
    while ((low = col.max()) >= 0) {
      const std::int32_t j = pivot_[low];
      if (j < 0) break;
      if (reduced_slot_[j] < 0) {
        scratch.clear();
        append_boundary_positions(j, scratch);
        col.add(scratch);
        chain.push_back(j);
      } else {
        const Reduced& r = reduced_[static_cast<std::size_t>(reduced_slot_[j])];
        col.add(r.column);
        chain.insert(chain.end(), r.chain.begin(), r.chain.end());
      }
    }
    HeapColumn::cancel_pairs(chain);
    Reduced r;
    r.column = col.take_sorted();
    r.chain = std::move(chain);
    if (low >= 0) pivot_[low] = p;
    reduced_slot_[p] = static_cast<std::int32_t>(reduced_.size());
    reduced_.push_back(std::move(r));
  }

  // Essential classes: critical cells whose column vanished and which never
  // became a pivot.
  generators_.assign(static_cast<std::size_t>(top + 1), {});
  essential_slot_.assign(cells_.size(), -1);
  for (std::int32_t p = 0; p < n; ++p) {
    const std::int32_t slot = reduced_slot_[p];
    if (slot < 0 || pivot_[p] >= 0) continue;
    const Reduced& r = reduced_[static_cast<std::size_t>(slot)];
    if (!r.column.empty()) continue;
    const auto k = static_cast<std::size_t>(dim_[order_[p]]);
    essential_slot_[p] = static_cast<std::int32_t>(essential_chain_.size());
    essential_local_.push_back(static_cast<std::int32_t>(generators_[k].size()));
    essential_chain_.push_back(r.chain);
    Chain gen;
    gen.reserve(r.chain.size());
    for (std::int32_t q : r.chain) gen.push_back(cells_[order_[q]]);
    std::sort(gen.begin(), gen.end());
    generators_[k].push_back(std::move(gen));
  }
}

void ReducedComplex::append_boundary_positions(std::int32_t pos, std::vector<std::int32_t>& out) const {
  const std::int32_t c = order_[pos];
  for (std::uint64_t e = bnd_offset_[c]; e < bnd_offset_[c + 1]; ++e) out.push_back(position_[bnd_[e]]);
}

std::int32_t ReducedComplex::index_of(std::uint64_t cell) const {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), cell);
  if (it == cells_.end() || *it != cell) return -1;
  return static_cast<std::int32_t>(it - cells_.begin());
}

bool ReducedComplex::contains(std::uint64_t cell) const { return index_of(cell) >= 0; }

int ReducedComplex::betti(int k) const {
  if (k < 0 || k >= static_cast<int>(generators_.size())) return 0;
  return static_cast<int>(generators_[static_cast<std::size_t>(k)].size());
}

const std::vector<Chain>& ReducedComplex::generators(int k) const {
  static const std::vector<Chain> none;
  if (k < 0 || k >= static_cast<int>(generators_.size())) return none;
  return generators_[static_cast<std::size_t>(k)];
}

std::vector<int> ReducedComplex::coordinates(int k, const Chain& cycle, bool drop_absent) const {
  std::vector<int> coeff(static_cast<std::size_t>(betti(k)), 0);
  HeapColumn col;
  std::vector<std::int32_t> start;
  for (std::uint64_t cell : cycle) {
    const std::int32_t i = index_of(cell);
    if (i < 0) {
      if (drop_absent) continue;
      throw PreconditionViolation("chain cell is not part of the complex");
    }
    if (dim_[i] != k) throw PreconditionViolation("chain cell has the wrong dimension");
    start.push_back(position_[i]);
  }
  col.add(start);
  std::vector<std::int32_t> scratch;
  std::int32_t low;
  while ((low = col.max()) >= 0) {
    const std::int32_t j = pivot_[low];
    if (j >= 0) {
      if (reduced_slot_[j] < 0) {
        scratch.clear();
        append_boundary_positions(j, scratch);
        col.add(scratch);
      } else {
        col.add(reduced_[static_cast<std::size_t>(reduced_slot_[j])].column);
      }
      continue;
    }
    const std::int32_t e = essential_slot_[low];
    if (e < 0) throw PreconditionViolation("chain is not a relative cycle");
    coeff[static_cast<std::size_t>(essential_local_[static_cast<std::size_t>(e)])] ^= 1;
    col.add(essential_chain_[static_cast<std::size_t>(e)]);
  }
  return coeff;
}

}  // namespace conley::cubical
