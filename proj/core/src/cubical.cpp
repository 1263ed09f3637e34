#include "conley/cubical.hpp"

#include <algorithm>
#include <sstream>

#include "conley/errors.hpp"

namespace conley::cubical {

void CubicalPair::validate() const {
  if (!(total.grid() == sub.grid())) throw IncompatibleGrids("pair members live on different grids");
  if (!sub.subset_of(total)) throw ShapeError("subset of a cubical pair is not contained in the total set");
}

// ---------------------------------------------------------------- spaces

GradedZ2Space::GradedZ2Space(std::map<int, int> ranks) {
  for (auto [d, r] : ranks) {
    if (r < 0) throw PreconditionViolation("negative rank");
    if (r > 0) ranks_[d] = r;
  }
}

int GradedZ2Space::rank(int degree) const {
  auto it = ranks_.find(degree);
  return it == ranks_.end() ? 0 : it->second;
}

int GradedZ2Space::total_rank() const {
  int t = 0;
  for (auto [d, r] : ranks_) t += r;
  return t;
}

GradedZ2Space GradedZ2Space::shifted(int offset) const {
  std::map<int, int> out;
  for (auto [d, r] : ranks_) out[d - offset] = r;
  return GradedZ2Space(std::move(out));
}

GradedZ2Space direct_sum(const GradedZ2Space& a, const GradedZ2Space& b) {
  std::map<int, int> out = a.ranks();
  for (auto [d, r] : b.ranks()) out[d] += r;
  return GradedZ2Space(std::move(out));
}

std::string to_string(const GradedZ2Space& space) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (auto [d, r] : space.ranks()) {
    os << (first ? "" : ", ") << d << ": " << r;
    first = false;
  }
  os << "}";
  return os.str();
}

// ---------------------------------------------------------------- maps

GradedZ2Map::GradedZ2Map(GradedZ2Space source, GradedZ2Space target, int shift)
    : source_(std::move(source)), target_(std::move(target)), shift_(shift) {}

gf2::BitMatrix GradedZ2Map::matrix(int source_degree) const {
  auto it = matrices_.find(source_degree);
  if (it != matrices_.end()) return it->second;
  return gf2::BitMatrix(static_cast<std::size_t>(target_.rank(source_degree + shift_)),
                        static_cast<std::size_t>(source_.rank(source_degree)));
}

void GradedZ2Map::set_matrix(int source_degree, gf2::BitMatrix m) {
  if (m.rows() != static_cast<std::size_t>(target_.rank(source_degree + shift_)) ||
      m.cols() != static_cast<std::size_t>(source_.rank(source_degree)))
    throw DimensionMismatch("matrix shape does not match the graded ranks");
  if (m.rows() == 0 || m.cols() == 0) {
    matrices_.erase(source_degree);
    return;
  }
  matrices_[source_degree] = std::move(m);
}

int GradedZ2Map::rank(int source_degree) const { return static_cast<int>(matrix(source_degree).rank()); }

std::vector<int> GradedZ2Map::degrees() const {
  std::vector<int> out;
  for (auto [d, r] : source_.ranks()) out.push_back(d);
  for (auto [d, r] : target_.ranks()) out.push_back(d - shift_);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool GradedZ2Map::is_isomorphism() const {
  for (int d : degrees()) {
    const int s = source_.rank(d);
    if (s != target_.rank(d + shift_) || rank(d) != s) return false;
  }
  return true;
}

bool GradedZ2Map::is_zero() const {
  for (const auto& [d, m] : matrices_)
    if (!m.is_zero()) return false;
  return true;
}

GradedZ2Map GradedZ2Map::renormalized(int source_offset, int target_offset) const {
  GradedZ2Map out(source_.shifted(-source_offset), target_.shifted(-target_offset),
                  shift_ + target_offset - source_offset);
  for (const auto& [d, m] : matrices_) out.matrices_[d + source_offset] = m;
  return out;
}

GradedZ2Map compose(const GradedZ2Map& g, const GradedZ2Map& f) {
  if (!(f.target() == g.source())) throw PreconditionViolation("maps are not composable");
  GradedZ2Map out(f.source(), g.target(), f.shift() + g.shift());
  for (auto [d, r] : f.source().ranks()) {
    if (g.target().rank(d + out.shift()) == 0) continue;
    out.set_matrix(d, g.matrix(d + f.shift()) * f.matrix(d));
  }
  return out;
}

GradedZ2Map identity_map(const GradedZ2Space& space) {
  GradedZ2Map out(space, space, 0);
  for (auto [d, r] : space.ranks()) out.set_matrix(d, gf2::BitMatrix::identity(static_cast<std::size_t>(r)));
  return out;
}

GradedZ2Map inverse(const GradedZ2Map& map) {
  if (!map.is_isomorphism()) throw PreconditionViolation("map is not an isomorphism");
  GradedZ2Map out(map.target(), map.source(), -map.shift());
  for (auto [d, r] : map.source().ranks()) out.set_matrix(d + map.shift(), map.matrix(d).inverse());
  return out;
}

GradedZ2Map stack_maps(const GradedZ2Map& f, const GradedZ2Map& g) {
  if (!(f.source() == g.source()) || f.shift() != g.shift()) throw PreconditionViolation("cannot stack maps");
  GradedZ2Map out(f.source(), direct_sum(f.target(), g.target()), f.shift());
  for (auto [d, r] : f.source().ranks()) {
    const gf2::BitMatrix a = f.matrix(d), b = g.matrix(d);
    gf2::BitMatrix m(a.rows() + b.rows(), static_cast<std::size_t>(r));
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m.set(i, j, a.get(i, j));
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m.set(a.rows() + i, j, b.get(i, j));
    out.set_matrix(d, std::move(m));
  }
  return out;
}

GradedZ2Map join_maps(const GradedZ2Map& f, const GradedZ2Map& g) {
  if (!(f.target() == g.target()) || f.shift() != g.shift()) throw PreconditionViolation("cannot join maps");
  GradedZ2Map out(direct_sum(f.source(), g.source()), f.target(), f.shift());
  for (auto [d, r] : out.source().ranks()) {
    const gf2::BitMatrix a = f.matrix(d), b = g.matrix(d);
    gf2::BitMatrix m(static_cast<std::size_t>(out.target().rank(d + out.shift())), a.cols() + b.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) m.set(i, j, a.get(i, j));
      for (std::size_t j = 0; j < b.cols(); ++j) m.set(i, a.cols() + j, b.get(i, j));
    }
    out.set_matrix(d, std::move(m));
  }
  return out;
}

// ---------------------------------------------------------------- engines

PairCohomology::PairCohomology(ReducedComplex engine) : engine_(std::move(engine)) {
  std::map<int, int> ranks;
  for (int k = 0; k <= engine_.max_dim(); ++k) ranks[k] = engine_.betti(k);
  space_ = GradedZ2Space(std::move(ranks));
}

PairCohomology PairCohomology::from_cubes(const CubeSet& total, const CubeSet& sub) {
  CubicalPair{total, sub}.validate();
  return PairCohomology(ReducedComplex(total.grid(), relative_cells(total, sub)));
}

PairCohomology PairCohomology::from_cells(const Grid& grid, std::vector<std::uint64_t> cells) {
  return PairCohomology(ReducedComplex(grid, std::move(cells)));
}

std::vector<std::uint64_t> cells_difference(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::uint64_t> cells_intersection(const std::vector<std::uint64_t>& a,
                                              const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::uint64_t> cells_union(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

namespace {

void cancel_pairs(Chain& v) {
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

bool sorted_contains(const std::vector<std::uint64_t>& v, std::uint64_t x) {
  return std::binary_search(v.begin(), v.end(), x);
}

}  // namespace

Chain chain_boundary(const Grid& grid, const Chain& chain) {
  Chain out;
  std::vector<int> c(grid.dim());
  for (std::uint64_t cell : chain) {
    grid.decode_cell(cell, c);
    for (std::size_t a = 0; a < c.size(); ++a) {
      if (!(c[a] & 1)) continue;
      out.push_back(cell - grid.cell_stride(a));
      out.push_back(cell + grid.cell_stride(a));
    }
  }
  cancel_pairs(out);
  return out;
}

GradedZ2Map restriction_map(const PairCohomology& small, const PairCohomology& big,
                            const std::function<std::uint64_t(std::uint64_t)>& cell_map) {
  GradedZ2Map out(big.space(), small.space(), 0);
  for (auto [k, r] : small.space().ranks()) {
    const int rb = big.space().rank(k);
    if (rb == 0) continue;
    // Homology pushforward: column j holds the image of small generator j.
    gf2::BitMatrix push(static_cast<std::size_t>(rb), static_cast<std::size_t>(r));
    const auto& gens = small.engine().generators(k);
    for (std::size_t j = 0; j < gens.size(); ++j) {
      Chain image = gens[j];
      if (cell_map) {
        for (auto& c : image) c = cell_map(c);
        cancel_pairs(image);
      }
      const std::vector<int> coeff = big.engine().coordinates(k, image, true);
      for (std::size_t i = 0; i < coeff.size(); ++i) push.set(i, j, coeff[i] != 0);
    }
    out.set_matrix(k, push.transpose());
  }
  return out;
}

GradedZ2Map induced_inclusion(const CubicalPair& small, const CubicalPair& big) {
  small.validate();
  big.validate();
  if (!(small.total.grid() == big.total.grid())) throw IncompatibleGrids("inclusion between different grids");
  if (!small.total.subset_of(big.total) || !small.sub.subset_of(big.sub))
    throw PreconditionViolation("small pair is not contained in the big pair");
  return restriction_map(PairCohomology::from_pair(small), PairCohomology::from_pair(big));
}

GradedZ2Map connecting_map(const PairCohomology& whole, const std::vector<std::uint64_t>& part_cells,
                           const std::vector<std::uint64_t>& sub_cells, const PairCohomology& intersection,
                           const std::function<std::optional<std::uint64_t>(std::uint64_t)>& to_intersection,
                           bool drop_absent) {
  return connecting_map(
      whole, [&](std::uint64_t c) { return sorted_contains(part_cells, c); },
      [&](std::uint64_t c) { return sorted_contains(sub_cells, c); }, intersection, to_intersection, drop_absent);
}

GradedZ2Map connecting_map(const PairCohomology& whole, const CellPredicate& in_part, const CellPredicate& in_sub,
                           const PairCohomology& intersection,
                           const std::function<std::optional<std::uint64_t>(std::uint64_t)>& to_intersection,
                           bool drop_absent) {
  GradedZ2Map out(intersection.space(), whole.space(), 1);
  for (auto [k1, r] : whole.space().ranks()) {
    const int k = k1 - 1;
    const int ri = intersection.space().rank(k);
    if (ri == 0) continue;
    gf2::BitMatrix hom(static_cast<std::size_t>(ri), static_cast<std::size_t>(r));
    const auto& gens = whole.engine().generators(k1);
    for (std::size_t j = 0; j < gens.size(); ++j) {
      Chain part;
      for (std::uint64_t c : gens[j])
        if (in_part(c)) part.push_back(c);
      Chain bd;
      for (std::uint64_t c : chain_boundary(whole.grid(), part)) {
        if (in_sub(c)) continue;
        if (to_intersection) {
          if (auto p = to_intersection(c)) bd.push_back(*p);
        } else {
          bd.push_back(c);
        }
      }
      cancel_pairs(bd);
      const std::vector<int> coeff = intersection.engine().coordinates(k, bd, drop_absent);
      for (std::size_t i = 0; i < coeff.size(); ++i) hom.set(i, j, coeff[i] != 0);
    }
    out.set_matrix(k, hom.transpose());
  }
  return out;
}

MayerVietorisSequence mayer_vietoris_sequence(const CubicalPair& whole, const CubeSet& partA, const CubeSet& partB) {
  whole.validate();
  if (!(partA.grid() == whole.total.grid()) || !(partB.grid() == whole.total.grid()))
    throw IncompatibleGrids("cover lives on a different grid");
  if (!(set_union(partA, partB) == whole.total)) throw CoverViolation("parts do not cover the whole set");

  const Grid& grid = whole.total.grid();
  const std::vector<std::uint64_t> sub = closure_cells(whole.sub);
  const std::vector<std::uint64_t> ka = closure_cells(partA);
  const std::vector<std::uint64_t> kb = closure_cells(partB);
  const std::vector<std::uint64_t> kab = cells_intersection(ka, kb);

  MayerVietorisSequence mv;
  mv.whole = PairCohomology::from_cubes(whole.total, whole.sub);
  mv.part_a = PairCohomology::from_cells(grid, cells_difference(ka, sub));
  mv.part_b = PairCohomology::from_cells(grid, cells_difference(kb, sub));
  mv.intersection = PairCohomology::from_cells(grid, cells_difference(kab, sub));
  mv.restrict_to_parts = stack_maps(restriction_map(mv.part_a, mv.whole), restriction_map(mv.part_b, mv.whole));
  mv.difference = join_maps(restriction_map(mv.intersection, mv.part_a), restriction_map(mv.intersection, mv.part_b));
  mv.delta = connecting_map(mv.whole, ka, sub, mv.intersection);
  return mv;
}

GradedZ2Map mayer_vietoris_delta(const CubeSet& whole, const CubeSet& partA, const CubeSet& partB) {
  return mayer_vietoris_sequence(CubicalPair{whole, CubeSet(whole.grid())}, partA, partB).delta;
}

TripleSequence triple_sequence(const CubeSet& total, const CubeSet& sub1, const CubeSet& sub2) {
  CubicalPair{total, sub1}.validate();
  CubicalPair{sub1, sub2}.validate();
  TripleSequence t;
  t.outer = PairCohomology::from_cubes(total, sub1);
  t.whole = PairCohomology::from_cubes(total, sub2);
  t.inner = PairCohomology::from_cubes(sub1, sub2);
  t.j = restriction_map(t.whole, t.outer);
  t.i = restriction_map(t.inner, t.whole);
  t.delta = connecting_map(
      t.outer, [](std::uint64_t) { return true; }, [&](std::uint64_t c) { return sub2.closure_contains_cell(c); },
      t.inner);
  return t;
}

bool check_exact(const std::vector<GradedZ2Map>& sequence) {
  for (std::size_t s = 0; s + 1 < sequence.size(); ++s) {
    const GradedZ2Map& f = sequence[s];
    const GradedZ2Map& g = sequence[s + 1];
    if (!(f.target() == g.source())) throw PreconditionViolation("consecutive maps are not composable");
    std::vector<int> node_degrees;
    for (auto [d, r] : f.target().ranks()) node_degrees.push_back(d);
    for (int d : node_degrees) {
      const gf2::BitMatrix into = f.matrix(d - f.shift());
      const gf2::BitMatrix out_of = g.matrix(d);
      const auto image = static_cast<int>(into.rank());
      const int nullity = f.target().rank(d) - static_cast<int>(out_of.rank());
      if (image != nullity) return false;
      if (out_of.rows() > 0 && into.cols() > 0 && !(out_of * into).is_zero()) return false;
    }
  }
  return true;
}

GradedZ2Space relative_cohomology(const CubicalPair& pair) { return PairCohomology::from_pair(pair).space(); }

}  // namespace conley::cubical
