#include "conley/index_pair.hpp"

#include <cmath>
#include <deque>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "conley/cubeset_io.hpp"
#include "conley/errors.hpp"

namespace conley::index {

namespace {

int steps_for(double t, const MultivaluedMap& map) {
  if (t < 0.0) throw PreconditionViolation("squeeze time must be non-negative");
  return static_cast<int>(std::ceil(t / map.map_time() - 1e-12));
}

// Longest edge path in the map restricted to `region`; -1 when it has a cycle.
long longest_path(const CubeSet& region, const MultivaluedMap& map) {
  const auto& cubes = region.cubes();
  const std::size_t n = cubes.size();
  std::vector<std::int32_t> local(static_cast<std::size_t>(region.grid().cube_count()), -1);
  for (std::size_t i = 0; i < n; ++i) local[cubes[i]] = static_cast<std::int32_t>(i);
  std::vector<std::vector<std::int32_t>> succ(n);
  std::vector<std::int32_t> indeg(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    map.for_each_image(cubes[i], [&](std::uint64_t q) {
      if (local[q] >= 0) {
        succ[i].push_back(local[q]);
        ++indeg[static_cast<std::size_t>(local[q])];
      }
    });
  std::deque<std::int32_t> queue;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) queue.push_back(static_cast<std::int32_t>(i));
  std::vector<long> depth(n, 0);
  std::size_t done = 0;
  long best = 0;
  while (!queue.empty()) {
    const auto v = static_cast<std::size_t>(queue.front());
    queue.pop_front();
    ++done;
    best = std::max(best, depth[v]);
    for (std::int32_t w : succ[v]) {
      depth[static_cast<std::size_t>(w)] = std::max(depth[static_cast<std::size_t>(w)], depth[v] + 1);
      if (--indeg[static_cast<std::size_t>(w)] == 0) queue.push_back(w);
    }
  }
  return done == n ? best : -1;
}

void finish_regularity(IndexPair& pair, const MultivaluedMap& map) {
  const CubeSet transit = set_difference(set_difference(pair.N1, pair.N0), pair.invariant);
  const long depth = longest_path(transit, map);
  pair.regular = depth >= 0;
  pair.exit_time_bound = depth >= 0 ? static_cast<double>(depth + 1) * map.map_time() : kInfiniteTime;
}

}  // namespace

IndexPair build_index_pair(const CubeSet& N, const MultivaluedMap& map) {
  if (!(N.grid() == map.grid())) throw IncompatibleGrids("neighbourhood and map use different grids");
  IndexPair pair;
  pair.level = N.grid().level();
  const CubeSet S = invariant_part(N, map);
  if (!set_intersection(S, boundary_collar(N)).empty())
    throw NonIsolating("invariant part of N meets its boundary collar");
  pair.invariant = S;
  if (S.empty()) {
    // Empty invariant set: any pair with N1 = N0 represents it.
    const CubeSet collar = boundary_collar(N);
    pair.N1 = collar;
    pair.N0 = collar;
    pair.regular = true;
    pair.exit_time_bound = 0.0;
    return pair;
  }
  const CubeSet around = set_intersection(neighborhood(S), N);
  pair.N1 = forward_hull(around, N, map);
  const std::vector<char> inN = membership(N);
  std::vector<std::uint64_t> leaving;
  for (std::uint64_t q : pair.N1.cubes())
    if (map.image_leaves(q, inN)) leaving.push_back(q);
  pair.N0 = forward_hull(CubeSet(N.grid(), std::move(leaving)), pair.N1, map);
  if (!set_intersection(around, pair.N0).empty())
    throw NonIsolating("exit set reaches the neighbourhood of the invariant set; enlarge N or refine the grid");
  finish_regularity(pair, map);
  return pair;
}

std::string check_index_pair(const IndexPair& pair, const MultivaluedMap& map) {
  if (!pair.N0.subset_of(pair.N1)) return "N0 is not contained in N1";
  if (!pair.invariant.subset_of(pair.N1)) return "invariant set is not contained in N1";
  if (!set_intersection(pair.invariant, pair.N0).empty()) return "invariant set meets N0";
  const std::vector<char> in1 = membership(pair.N1), in0 = membership(pair.N0);
  for (std::uint64_t q : pair.N0.cubes()) {
    bool bad = false;
    map.for_each_image(q, [&](std::uint64_t r) {
      if (in1[r] && !in0[r]) bad = true;
    });
    if (bad) return "N0 is not positively invariant relative to N1";
  }
  for (std::uint64_t q : pair.N1.cubes())
    if (!in0[q] && map.image_leaves(q, in1)) return "a trajectory leaves N1 without passing through N0";
  return "";
}

ExitTime exit_time(const IndexPair& pair, const VectorField& field, const Vector& x, const FlowParams& params) {
  const Grid& grid = pair.N1.grid();
  auto inside = [&](const Vector& y) {
    const auto q = grid.locate(std::span<const double>(y.data(), static_cast<std::size_t>(y.size())));
    return q && pair.N1.contains(*q) && !pair.N0.contains(*q);
  };
  if (!inside(x)) return {0.0, 0.0};
  const double h = params.time_step > 0.0 ? params.time_step : default_time_step(grid, field.lipschitz);
  Vector y = x;
  double t = 0.0;
  while (t < params.t_max) {
    const double dt = std::min(h, params.t_max - t);
    y = flow(field, y, dt, dt);
    if (!inside(y)) return {t, t + dt};
    t += dt;
  }
  return {params.t_max, kInfiniteTime};
}

ExitTimeField exit_time_field(const IndexPair& pair, const VectorField& field, const FlowParams& params) {
  ExitTimeField out;
  const Grid& grid = pair.N1.grid();
  const std::size_t d = grid.dim();
  std::vector<int> k(d);
  for (std::uint64_t q : pair.N1.cubes()) {
    grid.decode_cube(q, k);
    ExitTime b{kInfiniteTime, 0.0};
    auto sample = [&](const Vector& x) {
      const ExitTime e = exit_time(pair, field, x, params);
      b.lower = std::min(b.lower, e.lower);
      b.upper = std::max(b.upper, e.upper);
    };
    const std::vector<double> c = grid.cube_center(q);
    sample(Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(d)));
    for (std::uint64_t corner = 0; corner < (std::uint64_t{1} << d); ++corner) {
      Vector x(static_cast<Eigen::Index>(d));
      for (std::size_t i = 0; i < d; ++i) {
        const auto& a = grid.axis(i);
        // Corners nudged inward so each sample belongs to this cube.
        const double eps = 1e-9 * a.width();
        x[static_cast<Eigen::Index>(i)] = ((corner >> i) & 1U) ? a.cube_hi(k[i]) - eps : a.cube_lo(k[i]) + eps;
      }
      sample(x);
    }
    out.cubes.push_back(q);
    out.bounds.push_back(b);
  }
  return out;
}

IndexPair squeeze_forward(const IndexPair& pair, const MultivaluedMap& map, double t) {
  const int k = steps_for(t, map);
  if (k == 0) return pair;
  const std::vector<char> in1 = membership(pair.N1);
  std::vector<char> cur = in1;
  for (int s = 0; s < k; ++s) {
    std::vector<char> next(cur.size(), 0);
    for (std::uint64_t q : pair.N1.cubes())
      if (cur[q])
        map.for_each_image(q, [&](std::uint64_t r) {
          if (in1[r]) next[r] = 1;
        });
    cur = std::move(next);
  }
  std::vector<std::uint64_t> kept;
  for (std::uint64_t q : pair.N1.cubes())
    if (cur[q]) kept.push_back(q);
  IndexPair out = pair;
  out.N1 = CubeSet(pair.N1.grid(), std::move(kept));
  out.N0 = set_intersection(pair.N0, out.N1);
  out.invariant = set_intersection(pair.invariant, out.N1);
  finish_regularity(out, map);
  return out;
}

IndexPair squeeze_backward(const IndexPair& pair, const MultivaluedMap& map, double t) {
  const int k = steps_for(t, map);
  if (k == 0) return pair;
  const std::vector<char> in1 = membership(pair.N1);
  std::vector<char> grown = membership(pair.N0);
  for (int s = 0; s < k; ++s) {
    std::vector<char> next = grown;
    for (std::uint64_t q : pair.N1.cubes()) {
      if (grown[q]) continue;
      bool all = true;
      map.for_each_image(q, [&](std::uint64_t r) {
        if (in1[r] && !grown[r]) all = false;
      });
      if (all) next[q] = 1;
    }
    grown = std::move(next);
  }
  std::vector<std::uint64_t> n0;
  for (std::uint64_t q : pair.N1.cubes())
    if (grown[q]) n0.push_back(q);
  IndexPair out = pair;
  out.N0 = CubeSet(pair.N1.grid(), std::move(n0));
  finish_regularity(out, map);
  return out;
}

Grid product_grid(const Grid& base, const TruncationLevel& level, const ProductDiscs& discs) {
  const TruncationLevel b = base.level();
  if (!level.covers(b)) throw PreconditionViolation("product level " + to_string(level) + " is below " + to_string(b));
  if (discs.negative_cubes < 5 || discs.negative_cubes % 2 == 0)
    throw ConfigError("negative disc needs an odd number of cubes, at least 5");
  if (!(discs.half_width > 0.0)) throw ConfigError("disc half width must be positive");
  const cubical::Axis pos{-discs.half_width, discs.half_width, 1};
  const cubical::Axis neg{-discs.half_width, discs.half_width, discs.negative_cubes};
  return cubical::extend_grid(base, std::vector<cubical::Axis>(static_cast<std::size_t>(level.m - b.m), pos),
                              std::vector<cubical::Axis>(static_cast<std::size_t>(level.n - b.n), neg));
}

IndexPair product_index_pair(const IndexPair& base, const TruncationLevel& level, const ProductDiscs& discs) {
  const Grid& g0 = base.N1.grid();
  const TruncationLevel b = g0.level();
  if (level == b) return base;
  const Grid g = product_grid(g0, level, discs);
  const int dm = level.m - b.m, dn = level.n - b.n;
  const int nc = discs.negative_cubes;

  // Full index = base positive, dm zeros, base negative, dn disc indices.
  std::vector<int> k0(g0.dim()), full(g.dim(), 0), extra(static_cast<std::size_t>(dn), 0);
  auto assemble = [&](const std::vector<int>& k) {
    for (int i = 0; i < b.m; ++i) full[static_cast<std::size_t>(i)] = k[static_cast<std::size_t>(i)];
    for (int i = 0; i < dm; ++i) full[static_cast<std::size_t>(b.m + i)] = 0;
    for (int j = 0; j < b.n; ++j) full[static_cast<std::size_t>(level.m + j)] = k[static_cast<std::size_t>(b.m + j)];
    for (int j = 0; j < dn; ++j) full[static_cast<std::size_t>(level.m + b.n + j)] = extra[static_cast<std::size_t>(j)];
    return g.cube_code(full);
  };
  std::vector<std::uint64_t> n1, n0, inv;
  const std::vector<char> in0 = membership(base.N0);
  for (std::uint64_t q : base.N1.cubes()) {
    g0.decode_cube(q, k0);
    std::fill(extra.begin(), extra.end(), 0);
    while (true) {
      bool on_boundary = false;
      for (int e : extra) on_boundary = on_boundary || e == 0 || e == nc - 1;
      const std::uint64_t code = assemble(k0);
      n1.push_back(code);
      if (in0[q] || on_boundary) n0.push_back(code);
      std::size_t i = 0;
      for (; i < extra.size(); ++i) {
        if (extra[i] < nc - 1) {
          ++extra[i];
          break;
        }
        extra[i] = 0;
      }
      if (i == extra.size()) break;
    }
  }
  std::fill(extra.begin(), extra.end(), nc / 2);
  for (std::uint64_t q : base.invariant.cubes()) {
    g0.decode_cube(q, k0);
    inv.push_back(assemble(k0));
  }
  IndexPair out;
  out.level = level;
  out.N1 = CubeSet(g, std::move(n1));
  out.N0 = CubeSet(g, std::move(n0));
  out.invariant = CubeSet(g, std::move(inv));
  out.regular = base.regular;
  out.exit_time_bound = base.exit_time_bound;
  return out;
}

void write_index_pair(std::ostream& os, const IndexPair& pair) {
  os << "indexpair v1\n";
  cubical::write_grid(os, pair.N1.grid());
  os << "regular " << (pair.regular ? 1 : 0) << '\n';
  os << "exit_time_bound ";
  if (std::isinf(pair.exit_time_bound))
    os << "inf\n";
  else
    os << std::setprecision(17) << pair.exit_time_bound << '\n';
  cubical::write_cube_section(os, "N1", pair.N1);
  cubical::write_cube_section(os, "N0", pair.N0);
  cubical::write_cube_section(os, "invariant", pair.invariant);
}

IndexPair read_index_pair(std::istream& is) {
  if (cubical::next_line(is) != "indexpair v1") throw ConfigError("missing 'indexpair v1' header");
  IndexPair pair;
  const Grid grid = cubical::read_grid(is);
  pair.level = grid.level();
  auto keyed = [&](const std::string& key) {
    std::istringstream ls(cubical::next_line(is));
    std::string word, value;
    ls >> word >> value;
    if (word != key || value.empty()) throw ConfigError("expected '" + key + "' line");
    return value;
  };
  const std::string regular = keyed("regular");
  if (regular != "0" && regular != "1") throw ConfigError("regular flag must be 0 or 1");
  pair.regular = regular == "1";
  const std::string bound = keyed("exit_time_bound");
  try {
    pair.exit_time_bound = bound == "inf" ? kInfiniteTime : std::stod(bound);
  } catch (const std::exception&) {
    throw ConfigError("malformed exit_time_bound");
  }
  pair.N1 = cubical::read_cube_section(is, "N1", grid);
  pair.N0 = cubical::read_cube_section(is, "N0", grid);
  pair.invariant = cubical::read_cube_section(is, "invariant", grid);
  if (!pair.N0.subset_of(pair.N1)) throw ConfigError("N0 is not contained in N1");
  return pair;
}

void write_exit_times_csv(std::ostream& os, const Grid& grid, const ExitTimeField& field) {
  for (std::size_t i = 0; i < grid.dim(); ++i) os << 'i' << (i + 1) << ',';
  os << "lower,upper\n";
  os << std::setprecision(10);
  std::vector<int> k(grid.dim());
  for (std::size_t c = 0; c < field.cubes.size(); ++c) {
    grid.decode_cube(field.cubes[c], k);
    for (int v : k) os << v << ',';
    os << field.bounds[c].lower << ',';
    if (std::isinf(field.bounds[c].upper))
      os << "inf\n";
    else
      os << field.bounds[c].upper << '\n';
  }
}

}  // namespace conley::index
