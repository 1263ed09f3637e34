#include "conley/floer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "conley/errors.hpp"

namespace conley::floer {

namespace {

std::string describe(const CriticalPoint& p) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < p.coords.size(); ++i) {
    if (i) s += ", ";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", p.coords[i]);
    s += buf;
  }
  return s + ")";
}

// Level positions of the support coordinates, in global order.
std::vector<int> support_positions(const FunctionalSpec& spec, const TruncationLevel& level) {
  const int d = spec.nonlinearity.support_dim();
  std::vector<int> pos(static_cast<std::size_t>(d), -1);
  const auto coords = spec.op.coordinates(level);
  for (std::size_t p = 0; p < coords.size(); ++p)
    if (coords[p].global < d) pos[static_cast<std::size_t>(coords[p].global)] = static_cast<int>(p);
  for (int p : pos)
    if (p < 0) throw PreconditionViolation("level " + to_string(level) + " does not retain the support coordinates");
  return pos;
}

std::vector<Vector> seed_directions(const Eigen::MatrixXd& unstable, const ShootingParams& params) {
  const auto k = unstable.cols();
  std::vector<Vector> dirs;
  if (k == 1) {
    dirs.push_back(unstable.col(0));
    dirs.push_back(-unstable.col(0));
    return dirs;
  }
  std::mt19937_64 rng(params.rng_seed);
  std::normal_distribution<double> normal;
  const int count = params.seeds * static_cast<int>(k - 1);
  for (int s = 0; s < count; ++s) {
    Vector c(k);
    for (Eigen::Index i = 0; i < k; ++i) c[i] = normal(rng);
    if (c.norm() == 0.0) continue;
    dirs.push_back(unstable * (c / c.norm()));
  }
  return dirs;
}

}  // namespace

ConnectionReport count_connecting_orbits(const FunctionalSpec& spec, const CriticalPoint& x, const CriticalPoint& y,
                                         const TruncationLevel& level, const ShootingParams& params,
                                         const std::optional<Box>& region, const std::vector<CriticalPoint>& known) {
  if (x.coords.size() != level.dim() || y.coords.size() != level.dim())
    throw DimensionMismatch("critical points do not live on level " + to_string(level));
  if ((x.coords - y.coords).norm() < params.basin) throw PreconditionViolation("source and target coincide");
  if (y.e_index - x.e_index != 1)
    throw PreconditionViolation("index difference is " + std::to_string(y.e_index - x.e_index) + ", expected 1");
  if (!(params.epsilon > 0) || !(params.time_step > 0) || !(params.t_max > 0) || params.seeds < 1)
    throw ConfigError("shooting parameters must be positive");

  const std::vector<int> pos = support_positions(spec, level);
  const auto d = static_cast<Eigen::Index>(pos.size());
  const functional::Evaluation ev = functional::eval(spec, y.coords, level);
  Eigen::MatrixXd hs(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) hs(i, j) = ev.hessian(pos[i], pos[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hs);
  std::vector<Eigen::Index> unstable_cols;
  for (Eigen::Index i = 0; i < d; ++i)
    if (eig.eigenvalues()[i] < 0) unstable_cols.push_back(i);

  ConnectionReport rep;
  rep.source = y;
  rep.target = x;
  if (unstable_cols.empty()) return rep;
  Eigen::MatrixXd unstable(static_cast<Eigen::Index>(level.dim()), static_cast<Eigen::Index>(unstable_cols.size()));
  unstable.setZero();
  for (std::size_t c = 0; c < unstable_cols.size(); ++c)
    for (Eigen::Index i = 0; i < d; ++i)
      unstable(pos[i], static_cast<Eigen::Index>(c)) = eig.eigenvectors()(i, unstable_cols[c]);
  const Vector lead = unstable.col(0);

  std::vector<CriticalPoint> targets = known;
  targets.push_back(x);
  const index::VectorField field = index::gradient_field(spec, level);
  const double mid = 0.5 * (x.value + y.value);
  const double h = params.time_step;
  const double core = 0.1 * params.basin;

  for (const Vector& dir : seed_directions(unstable, params)) {
    ++rep.seeds_tried;
    LocatedOrbit orbit;
    orbit.seed = y.coords + params.epsilon * dir;
    Vector z = orbit.seed;
    bool crossed = false, done = false;
    for (double t = 0.0; t < params.t_max && !done; t += h) {
      z = index::flow(field, z, h, h);
      if (!crossed && functional::value(spec, z, level) <= mid) {
        crossed = true;
        orbit.margin = functional::vector_field(spec, z, level).squaredNorm();
        const double side = (z - y.coords).dot(lead);
        orbit.crossing_sign = side > 0 ? 1 : (side < 0 ? -1 : (dir.dot(lead) >= 0 ? 1 : -1));
      }
      if (region && !region->contains(z)) {
        orbit.arrival = Arrival::escaped;
        done = true;
        break;
      }
      for (std::size_t q = 0; q < targets.size(); ++q) {
        if ((targets[q].coords - y.coords).norm() < params.basin) continue;
        if ((z - targets[q].coords).norm() < core) {
          const bool is_target = (targets[q].coords - x.coords).norm() < params.basin;
          orbit.arrival = is_target ? Arrival::target : Arrival::other;
          orbit.arrival_point = is_target ? -1 : static_cast<int>(q);
          done = true;
          break;
        }
      }
    }
    if (!done)
      throw Inconclusive("trajectory from " + describe(y) + " did not settle within t_max = " +
                         std::to_string(params.t_max));
    if (orbit.arrival == Arrival::escaped) {
      ++rep.escaped;
      continue;
    }
    if (orbit.arrival == Arrival::other) {
      ++rep.elsewhere;
      continue;
    }
    if (orbit.margin < params.transv_tol)
      throw NonTransverse("orbit " + describe(y) + " -> " + describe(x) + " has crossing derivative " +
                          std::to_string(orbit.margin) + " below " + std::to_string(params.transv_tol));
    const bool seen = std::any_of(rep.orbits.begin(), rep.orbits.end(),
                                  [&](const LocatedOrbit& o) { return o.crossing_sign == orbit.crossing_sign; });
    if (!seen) rep.orbits.push_back(std::move(orbit));
  }
  rep.count = static_cast<int>(rep.orbits.size() % 2);
  return rep;
}

int FloerComplex::rank(int k) const {
  auto it = by_index.find(k);
  return it == by_index.end() ? 0 : static_cast<int>(it->second.size());
}

const gf2::BitMatrix* FloerComplex::boundary_at(int k) const {
  auto it = boundary.find(k);
  return it == boundary.end() ? nullptr : &it->second;
}

FloerComplex build_floer_complex(const FunctionalSpec& spec, const Box& region, const TruncationLevel& level,
                                 const FloerParams& params) {
  FloerComplex c;
  c.level = level;
  c.generators = functional::find_critical_points(spec, level, region, params.seeds, params.tol);
  std::stable_sort(c.generators.begin(), c.generators.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    return a.e_index != b.e_index ? a.e_index < b.e_index : a.value < b.value;
  });
  for (std::size_t i = 0; i < c.generators.size(); ++i)
    c.by_index[c.generators[i].e_index].push_back(static_cast<int>(i));
  for (const auto& [k, lower] : c.by_index) {
    auto up = c.by_index.find(k + 1);
    if (up == c.by_index.end()) continue;
    gf2::BitMatrix m(lower.size(), up->second.size());
    for (std::size_t col = 0; col < up->second.size(); ++col)
      for (std::size_t row = 0; row < lower.size(); ++row) {
        // Errors propagate unchanged; their messages name the offending pair.
        ConnectionReport rep = count_connecting_orbits(spec, c.generators[static_cast<std::size_t>(lower[row])],
                                                       c.generators[static_cast<std::size_t>(up->second[col])],
                                                       level, params.shooting, region, c.generators);
        m.set(row, col, rep.count != 0);
        c.connections.push_back(std::move(rep));
      }
    c.boundary[k] = std::move(m);
  }
  return c;
}

bool boundary_squares_to_zero(const FloerComplex& complex) {
  for (const auto& [k, m] : complex.boundary) {
    const gf2::BitMatrix* next = complex.boundary_at(k + 1);
    if (next && m.cols() > 0 && next->cols() > 0 && !(m * *next).is_zero()) return false;
  }
  return true;
}

GradedZ2Space floer_cohomology(const FloerComplex& complex) {
  std::map<int, int> ranks;
  auto rank_of = [&](int k) {
    const gf2::BitMatrix* m = complex.boundary_at(k);
    return m ? static_cast<int>(m->rank()) : 0;
  };
  for (const auto& [k, gens] : complex.by_index)
    ranks[k] = static_cast<int>(gens.size()) - rank_of(k) - rank_of(k - 1);
  return GradedZ2Space(std::move(ranks));
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::equal: return "equal";
    case Verdict::unequal: return "unequal";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

MainTheoremReport verify_main_theorem(const FunctionalSpec& spec, const Box& region, const TruncationLevel& level,
                                      const std::vector<TruncationLevel>& ladder, const VerifyOptions& options) {
  MainTheoremReport rep;
  rep.complex = build_floer_complex(spec, region, level, options.floer);
  if (options.corrupt_boundary)
    for (auto& [k, m] : rep.complex.boundary) m = gf2::BitMatrix(m.rows(), m.cols());
  rep.floer = floer_cohomology(rep.complex);

  const index::RegionPair rp = index::index_pair_for_region(spec, level, region, options.resolution, options.flow);
  rep.pair = rp.pair;
  rep.conley = index::conley_index(rp.pair, ladder, options.conley);

  std::map<int, int> degrees = rep.floer.ranks();
  for (auto [d, r] : rep.conley.limit.ranks.ranks()) degrees.emplace(d, r);
  bool all = true;
  for (auto [d, unused] : degrees) {
    const bool eq = rep.floer.rank(d) == rep.conley.limit.ranks.rank(d);
    rep.degree_equal[d] = eq;
    all = all && eq;
  }
  if (!rep.conley.limit.stabilized)
    rep.verdict = Verdict::inconclusive;
  else
    rep.verdict = all ? Verdict::equal : Verdict::unequal;
  return rep;
}

namespace {

index::IndexPair pair_of(const cubical::CubeSet& total, const cubical::CubeSet& sub, const TruncationLevel& level) {
  index::IndexPair p;
  p.N1 = total;
  p.N0 = sub;
  p.level = level;
  p.regular = true;
  p.invariant = cubical::CubeSet(total.grid());
  return p;
}

}  // namespace

SublevelTriple sublevel_triple(const FunctionalSpec& spec, const index::IndexPair& pair,
                               const index::MultivaluedMap& map, const CriticalPoint& x, const CriticalPoint& y,
                               double b, const std::vector<TruncationLevel>& ladder,
                               const index::ProductDiscs& discs) {
  if (!(x.value < b && b < y.value))
    throw PreconditionViolation("b = " + std::to_string(b) + " does not separate the critical values " +
                                std::to_string(x.value) + " and " + std::to_string(y.value));
  const cubical::Grid& grid = pair.N1.grid();
  const TruncationLevel level = pair.level;
  std::vector<std::uint64_t> seed = pair.N0.cubes();
  for (std::uint64_t q : pair.N1.cubes()) {
    const std::vector<double> c = grid.cube_center(q);
    const Vector v = Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size()));
    if (functional::value(spec, v, level) <= b) seed.push_back(q);
  }
  std::sort(seed.begin(), seed.end());
  seed.erase(std::unique(seed.begin(), seed.end()), seed.end());
  const cubical::CubeSet n1 = index::forward_hull(cubical::CubeSet(grid, std::move(seed)), pair.N1, map);

  auto cube_of = [&](const CriticalPoint& p) {
    const auto q = grid.locate(std::span<const double>(p.coords.data(), static_cast<std::size_t>(p.coords.size())));
    if (!q) throw PreconditionViolation("critical point " + describe(p) + " lies outside the grid");
    return *q;
  };
  if (n1.contains(cube_of(y))) throw PreconditionViolation("sublevel part reaches the upper critical point");
  if (!n1.contains(cube_of(x)) || pair.N0.contains(cube_of(x)))
    throw PreconditionViolation("sublevel part misses the lower critical point");

  SublevelTriple out;
  out.b = b;
  out.outer = pair_of(pair.N1, n1, level);
  out.inner = pair_of(n1, pair.N0, level);
  const index::IndexPair whole = pair_of(pair.N1, pair.N0, level);
  out.exact_everywhere = true;
  for (const TruncationLevel& l : ladder) {
    const index::IndexPair po = index::product_index_pair(out.outer, l, discs);
    const index::IndexPair pw = index::product_index_pair(whole, l, discs);
    const cubical::TripleSequence t = cubical::triple_sequence(po.N1, po.N0, pw.N0);
    TripleLevel tl;
    tl.level = l;
    tl.exact = cubical::check_exact(t.cycle());
    tl.outer = t.outer.space().shifted(l.n);
    tl.whole = t.whole.space().shifted(l.n);
    tl.inner = t.inner.space().shifted(l.n);
    for (int k : t.delta.degrees()) tl.delta_rank[k - l.n] = t.delta.rank(k);
    out.exact_everywhere = out.exact_everywhere && tl.exact;
    out.levels.push_back(std::move(tl));
  }
  return out;
}

}  // namespace conley::floer
