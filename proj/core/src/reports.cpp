#include "conley/reports.hpp"

#include <cmath>

namespace conley::reports {

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json vector_json(const functional::Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json matrix_json(const gf2::BitMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.get(r, c) ? 1 : 0);
    rows.push_back(std::move(row));
  }
  return rows;
}

Json rank_map(const std::map<int, int>& ranks) {
  Json out = Json::array();
  for (auto [d, r] : ranks)
    if (r != 0) out.push_back({{"degree", d}, {"rank", r}});
  return out;
}

}  // namespace

Json to_json(const functional::TruncationLevel& level) { return {{"m", level.m}, {"n", level.n}}; }

Json to_json(const cubical::GradedZ2Space& space) { return rank_map(space.ranks()); }

Json to_json(const cubical::Grid& grid) {
  Json axes = Json::array();
  for (const auto& a : grid.axes()) axes.push_back({{"lo", a.lo}, {"hi", a.hi}, {"resolution", a.resolution}});
  return {{"level", to_json(grid.level())}, {"axes", std::move(axes)}};
}

Json to_json(const ecoh::Tower& tower) {
  Json levels = Json::array();
  for (const auto& l : tower.levels)
    levels.push_back({{"level", to_json(l.level)},
                      {"raw", to_json(l.raw)},
                      {"offset", l.offset},
                      {"normalized", to_json(l.normalized)},
                      {"cubes", l.cubes},
                      {"relative_cells", l.relative_cells}});
  Json steps = Json::array();
  for (std::size_t i = 0; i < tower.steps.size(); ++i) {
    const auto& s = tower.steps[i];
    std::map<int, int> ranks;
    for (int d : s.map.degrees()) ranks[d] = s.map.rank(d);
    steps.push_back({{"from", to_json(tower.levels[i].level)},
                     {"to", to_json(tower.levels[i + 1].level)},
                     {"kind", s.kind == ecoh::StepKind::mayer_vietoris ? "mayer-vietoris" : "inclusion"},
                     {"invertible", s.invertible},
                     {"isomorphism", s.invertible && s.map.is_isomorphism()},
                     {"ranks", rank_map(ranks)}});
  }
  return {{"kind", ecoh::to_string(tower.kind)}, {"levels", std::move(levels)}, {"steps", std::move(steps)}};
}

Json to_json(const ecoh::ELimit& limit) {
  return {{"ranks", to_json(limit.ranks)},     {"stabilized", limit.stabilized},
          {"window", limit.window},            {"window_begin", limit.window_begin},
          {"window_end", limit.window_end},    {"reason", limit.reason}};
}

Json to_json(const index::IndexPair& pair) {
  return {{"level", to_json(pair.level)},
          {"grid", to_json(pair.N1.grid())},
          {"N1_cubes", pair.N1.size()},
          {"N0_cubes", pair.N0.size()},
          {"invariant_cubes", pair.invariant.size()},
          {"regular", pair.regular},
          {"exit_time_bound", number_or_null(pair.exit_time_bound)}};
}

Json to_json(const functional::CriticalPoint& p) {
  return {{"coords", vector_json(p.coords)},
          {"value", p.value},
          {"e_index", p.e_index},
          {"signature",
           {{"positive", p.signature.positive}, {"negative", p.signature.negative}, {"zero", p.signature.zero}}}};
}

Json to_json(const floer::ConnectionReport& r) {
  Json orbits = Json::array();
  for (const auto& o : r.orbits)
    orbits.push_back({{"seed", vector_json(o.seed)}, {"margin", o.margin}, {"crossing_sign", o.crossing_sign}});
  return {{"source", to_json(r.source)}, {"target", to_json(r.target)},   {"count", r.count},
          {"orbits", std::move(orbits)}, {"seeds_tried", r.seeds_tried}, {"escaped", r.escaped},
          {"elsewhere", r.elsewhere}};
}

Json to_json(const floer::FloerComplex& c) {
  Json gens = Json::array();
  for (const auto& g : c.generators) gens.push_back(to_json(g));
  Json boundary = Json::array();
  for (const auto& [k, m] : c.boundary)
    boundary.push_back({{"degree", k}, {"rows", m.rows()}, {"cols", m.cols()}, {"matrix", matrix_json(m)}});
  Json connections = Json::array();
  for (const auto& r : c.connections) connections.push_back(to_json(r));
  return {{"level", to_json(c.level)},
          {"generators", std::move(gens)},
          {"boundary", std::move(boundary)},
          {"connections", std::move(connections)},
          {"boundary_squared_zero", floer::boundary_squares_to_zero(c)},
          {"cohomology", to_json(floer::floer_cohomology(c))}};
}

Json to_json(const floer::MainTheoremReport& r) {
  Json degrees = Json::array();
  for (auto [d, eq] : r.degree_equal)
    degrees.push_back(
        {{"degree", d}, {"floer", r.floer.rank(d)}, {"conley", r.conley.limit.ranks.rank(d)}, {"equal", eq}});
  return {{"floer", {{"complex", to_json(r.complex)}, {"ranks", to_json(r.floer)}}},
          {"conley", {{"pair", to_json(r.pair)}, {"tower", to_json(r.conley.tower)}, {"limit", to_json(r.conley.limit)}}},
          {"degrees", std::move(degrees)},
          {"verdict", floer::to_string(r.verdict)}};
}

Json to_json(const floer::ContinuationReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples)
    samples.push_back({{"tau", s.tau}, {"isolating", s.isolating}, {"invariant_cubes", s.invariant_cubes}});
  return {{"M", r.path.M},
          {"segment_axis", r.path.segment_axis},
          {"segment", {r.path.segment_lo, r.path.segment_hi}},
          {"samples", std::move(samples)},
          {"isolation_maintained", r.isolation_maintained},
          {"breaking_tau", r.breaking_tau ? Json(*r.breaking_tau) : Json(nullptr)},
          {"final_invariant_empty", r.final_invariant_empty},
          {"final_invariant_cubes", r.final_invariant_cubes},
          {"F3_first_max", r.F3_first_max}};
}

Json to_json(const floer::SublevelTriple& t) {
  Json levels = Json::array();
  for (const auto& l : t.levels)
    levels.push_back({{"level", to_json(l.level)},
                      {"exact", l.exact},
                      {"outer", to_json(l.outer)},
                      {"whole", to_json(l.whole)},
                      {"inner", to_json(l.inner)},
                      {"delta", rank_map(l.delta_rank)}});
  return {{"b", t.b},
          {"outer_pair", to_json(t.outer)},
          {"inner_pair", to_json(t.inner)},
          {"levels", std::move(levels)},
          {"exact_everywhere", t.exact_everywhere}};
}

}  // namespace conley::reports
