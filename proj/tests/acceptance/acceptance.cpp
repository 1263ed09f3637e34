// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "cli/commands.hpp"
#include "conley/continuation.hpp"
#include "conley/ecohomology.hpp"
#include "conley/floer.hpp"
#include "conley/scenarios.hpp"
#include "../unit/test_support.hpp"

using namespace conley;
using cubical::GradedZ2Space;
using functional::TruncationLevel;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string ranks(const GradedZ2Space& s) { return cubical::to_string(s); }

GradedZ2Space single(int degree) { return GradedZ2Space(std::map<int, int>{{degree, 1}}); }

Outcome sphere_negative() {
  const auto t0 = Clock::now();
  ecoh::ShapeSpec shape;
  shape.family = ecoh::ShapeFamily::sphere;
  shape.radius = 1.0;
  const auto tower = ecoh::tower_negative(shape, {2, 3, 4, 5, 6}, ecoh::LadderGrid{1.5, 9});
  const auto lim = ecoh::stabilized_limit(tower, 3);
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "negative tower of the unit sphere, n=2..6, 9 cubes/axis: limit " << ranks(lim.ranks)
    << (lim.stabilized ? " stabilized" : " not stabilized") << ", " << secs << " s";
  return {lim.stabilized && lim.ranks == single(-1) && secs < 60.0, d.str()};
}

Outcome ball_trivial() {
  ecoh::ShapeSpec shape;
  shape.family = ecoh::ShapeFamily::ball;
  shape.radius = 1.0;
  shape.confined_to = TruncationLevel{0, 2};
  const auto lim = ecoh::stabilized_limit(ecoh::tower_negative(shape, {2, 3, 4, 5, 6}, ecoh::LadderGrid{1.5, 9}), 3);
  std::ostringstream d;
  d << "negative tower of the unit ball of E-_2, n=2..6: limit " << ranks(lim.ranks)
    << (lim.stabilized ? " stabilized" : " not stabilized");
  return {lim.stabilized && lim.ranks.is_zero(), d.str()};
}

Outcome sphere_positive() {
  ecoh::ShapeSpec shape;
  shape.family = ecoh::ShapeFamily::sphere;
  shape.radius = 1.0;
  shape.confined_to = TruncationLevel{3, 0};
  const auto lim = ecoh::stabilized_limit(ecoh::tower_positive(shape, {3, 4, 5, 6}, ecoh::LadderGrid{1.5, 9}), 3);
  std::ostringstream d;
  d << "positive tower of the unit sphere of E+_3, m=3..6: limit " << ranks(lim.ranks)
    << (lim.stabilized ? " stabilized" : " not stabilized");
  return {lim.stabilized && lim.ranks == GradedZ2Space(std::map<int, int>{{0, 1}, {2, 1}}), d.str()};
}

Outcome scenario_index(const std::string& name, const GradedZ2Space& expected, std::ostream& d) {
  const auto s = scenarios::builtin_scenario(name);
  const auto rp = index::index_pair_for_region(s.spec, s.level, s.region, s.resolution, s.flow);
  const auto r = index::conley_index(rp.pair, s.ladder);
  d << name << " " << ranks(r.limit.ranks) << (r.limit.stabilized ? "" : " (not stabilized)");
  return {r.limit.stabilized && r.limit.ranks == expected, ""};
}

Outcome critical_point_index() {
  const auto t0 = Clock::now();
  std::ostringstream d;
  const bool a = scenario_index("quadratic-point", single(0), d).pass;
  d << "; ";
  const bool b = scenario_index("double-well-saddle", single(1), d).pass;
  d << "; " << seconds_since(t0) << " s";
  return {a && b, d.str()};
}

Outcome independence() {
  const auto s = scenarios::builtin_scenario("quadratic-point-plane");
  // Side 1.0 and side 1.6 with the same cube width.
  const auto small = index::index_pair_for_region(s.spec, s.level, {{-0.5, -0.5}, {0.5, 0.5}}, 15, s.flow);
  const auto large = index::index_pair_for_region(s.spec, s.level, {{-0.8, -0.8}, {0.8, 0.8}}, 25, s.flow);
  const auto rep = index::verify_independence(small.pair, large.pair, s.ladder);
  std::ostringstream d;
  d << "box side 1.0 " << ranks(rep.first.ranks) << ", side 1.6 " << ranks(rep.second.ranks);
  bool ok = rep.equal;
  for (double t : {0.5, 1.0, 2.0}) {
    for (bool forward : {true, false}) {
      for (const auto* rp : {&small, &large}) {
        const auto q = forward ? index::squeeze_forward(rp->pair, rp->map, t)
                               : index::squeeze_backward(rp->pair, rp->map, t);
        const auto r = index::conley_index(q, s.ladder);
        const bool same = r.limit.stabilized && r.limit.ranks == rep.first.ranks &&
                          index::check_index_pair(q, rp->map).empty();
        if (!same) d << "; squeeze " << (forward ? "forward" : "backward") << " t=" << t << " gave " << ranks(r.limit.ranks);
        ok = ok && same;
      }
    }
  }
  d << "; 12 squeezes (t in {0.5,1,2}, both directions, both boxes) " << (ok ? "preserve" : "change") << " the ranks";
  return {ok, d.str()};
}

Outcome connected_pair() {
  const auto s = scenarios::builtin_scenario("cancel-pair");
  std::ostringstream d;
  const bool index_zero = scenario_index("cancel-pair", GradedZ2Space(), d).pass;
  const auto rep = floer::continuation_trivialize(s.spec, s.level, s.region, s.resolution, 8, s.flow);
  d << "; continuation over 8 steps: isolation " << (rep.isolation_maintained ? "maintained" : "broken")
    << ", final invariant cubes " << rep.final_invariant_cubes << ", max F3_x " << rep.F3_first_max;
  return {index_zero && rep.isolation_maintained && rep.final_invariant_empty && rep.samples.size() == 9, d.str()};
}

Outcome attractor_repeller() {
  const auto s = scenarios::builtin_scenario("cancel-pair");
  const auto c = floer::build_floer_complex(s.spec, s.region, s.level);
  if (c.generators.size() != 2) return {false, "expected two critical points"};
  const auto rp = index::index_pair_for_region(s.spec, s.level, s.region, s.resolution, s.flow);
  const auto& well = c.generators[0];
  const auto& saddle = c.generators[1];
  const auto t = floer::sublevel_triple(s.spec, rp.pair, rp.map, well, saddle, 0.5 * (well.value + saddle.value),
                                        s.ladder);
  std::ostringstream d;
  bool ok = t.exact_everywhere && !t.levels.empty();
  d << "ind_E(well)=" << well.e_index << ";";
  for (const auto& l : t.levels) {
    d << " " << functional::to_string(l.level) << (l.exact ? " exact" : " NOT exact") << " delta";
    for (auto [k, r] : l.delta_rank) {
      d << " " << k << ":" << r;
      if (r != (k == well.e_index ? 1 : 0)) ok = false;
    }
    if (!l.delta_rank.count(well.e_index)) ok = false;
  }
  return {ok, d.str()};
}

Outcome floer_equals_conley() {
  const auto t0 = Clock::now();
  std::ostringstream d;
  bool ok = true;
  for (const std::string name : {"quadratic-point-plane", "cancel-pair", "double-well"}) {
    const auto s = scenarios::builtin_scenario(name);
    floer::VerifyOptions o;
    o.flow = s.flow;
    o.resolution = s.resolution;
    const auto r = floer::verify_main_theorem(s.spec, s.region, s.level, s.ladder, o);
    d << name << " HF " << ranks(r.floer) << " ch " << ranks(r.conley.limit.ranks) << " " << floer::to_string(r.verdict)
      << "; ";
    ok = ok && r.verdict == floer::Verdict::equal && r.floer == r.conley.limit.ranks;
    if (name == "double-well") ok = ok && r.floer == single(0) && r.complex.generators.size() == 3;
  }
  const double secs = seconds_since(t0);
  d << secs << " s";
  return {ok && secs < 300.0, d.str()};
}

Outcome structural() {
  std::ostringstream d;
  bool ok = true;

  // Boundary squares to zero on every builtin Floer complex.
  int complexes = 0;
  for (const std::string name : {"quadratic-point-plane", "cancel-pair", "double-well"}) {
    const auto s = scenarios::builtin_scenario(name);
    ok = ok && floer::boundary_squares_to_zero(floer::build_floer_complex(s.spec, s.region, s.level));
    ++complexes;
  }
  d << complexes << " complexes with d^2=0";

  // Finite-difference agreement of gradient and Hessian.
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.4, 1.4);
  double grad_err = 0.0, hess_err = 0.0;
  for (const std::string name : {"double-well", "cancel-pair", "double-well-saddle"}) {
    const auto s = scenarios::builtin_scenario(name);
    const int dim = s.level.dim();
    for (int t = 0; t < 20; ++t) {
      functional::Vector x(dim);
      for (int i = 0; i < dim; ++i) x[i] = u(rng);
      const auto e = functional::eval(s.spec, x, s.level);
      for (int j = 0; j < dim; ++j) {
        functional::Vector xp = x, xm = x;
        xp[j] += 1e-6;
        xm[j] -= 1e-6;
        const double fd = (functional::value(s.spec, xp, s.level) - functional::value(s.spec, xm, s.level)) / 2e-6;
        grad_err = std::max(grad_err, std::abs(fd - e.gradient[j]) / std::max(1.0, std::abs(e.gradient[j])));
        xp[j] += 1e-5 - 1e-6;
        xm[j] -= 1e-5 - 1e-6;
        const functional::Vector hd =
            (functional::eval(s.spec, xp, s.level).gradient - functional::eval(s.spec, xm, s.level).gradient) / 2e-5;
        for (int i = 0; i < dim; ++i)
          hess_err = std::max(hess_err, std::abs(hd[i] - e.hessian(i, j)) / std::max(1.0, std::abs(e.hessian(i, j))));
      }
    }
  }
  ok = ok && grad_err < 1e-5 && hess_err < 1e-4;
  d << "; gradient rel err " << grad_err << ", Hessian rel err " << hess_err;

  // Mayer-Vietoris and triple exactness on random instances.
  int mv_ok = 0, triple_ok = 0;
  const int instances = 50;
  for (int t = 0; t < instances; ++t) {
    const auto g = conley::testing::square_grid(t % 3 == 0 ? 3 : 2, t % 3 == 0 ? 6 : 14);
    const auto total = conley::testing::random_blob(g, 20 + (t * 13) % 180, rng);
    const auto sub = conley::testing::random_subset(total, 0.2, rng);
    const auto a = conley::testing::random_subset(total, 0.6, rng);
    const auto b = cubical::set_union(cubical::set_difference(total, a), conley::testing::random_subset(a, 0.3, rng));
    if (cubical::check_exact(cubical::mayer_vietoris_sequence({total, sub}, a, b).cycle())) ++mv_ok;
    const auto sub1 = conley::testing::random_subset(total, 0.5, rng);
    const auto sub2 = conley::testing::random_subset(sub1, 0.5, rng);
    if (cubical::check_exact(cubical::triple_sequence(total, sub1, sub2).cycle())) ++triple_ok;
  }
  ok = ok && mv_ok == instances && triple_ok == instances;
  d << "; MV exact " << mv_ok << "/" << instances << ", triple exact " << triple_ok << "/" << instances;

  // Outer-map soundness.
  int misses = 0, grids = 0;
  for (const std::string name : {"quadratic-point-plane", "cancel-pair", "double-well"}) {
    const auto s = scenarios::builtin_scenario(name);
    const auto grid = index::region_grid(s.region, s.level, s.resolution);
    const auto field = index::gradient_field(s.spec, s.level);
    const auto map = index::outer_map(field, grid, s.flow);
    std::uniform_int_distribution<std::uint64_t> cube(0, grid.cube_count() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int t = 0; t < 1000; ++t) {
      const auto c = cube(rng);
      const auto idx = grid.decode_cube(c);
      functional::Vector x(static_cast<Eigen::Index>(grid.dim()));
      for (std::size_t i = 0; i < grid.dim(); ++i)
        x[static_cast<Eigen::Index>(i)] = grid.axis(i).cube_lo(idx[i]) + unit(rng) * grid.axis(i).width();
      const auto y = index::flow(field, x, map.map_time(), map.time_step());
      std::vector<double> yv(y.data(), y.data() + y.size());
      const auto target = grid.locate(yv);
      if (target ? !map.image_contains(c, *target) : !map.escapes(c)) ++misses;
    }
    ++grids;
  }
  ok = ok && misses == 0;
  d << "; outer map misses " << misses << " of " << 1000 * grids << " samples on " << grids << " grids";

  // Determinism of reports.
  cli::RunConfig cfg = cli::parse_config(cli::Json::parse(
      R"({"scenario": "double-well", "critical_seeds": {"random": 6}, "shooting": {"seeds": 16}, "seed": 7})"));
  const std::string r1 = cli::cmd_verify(cfg).report.dump(2);
  const std::string r2 = cli::cmd_verify(cfg).report.dump(2);
  ok = ok && r1 == r2;
  d << "; CLI reports " << (r1 == r2 ? "identical" : "differ") << " under a fixed seed";
  return {ok, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"sphere, negative splitting", sphere_negative},
      {"compact triviality", ball_trivial},
      {"positive sphere", sphere_positive},
      {"critical-point index", critical_point_index},
      {"index-pair independence", independence},
      {"trivial index of a connected pair", connected_pair},
      {"attractor-repeller sequence", attractor_repeller},
      {"Floer cohomology equals Conley index", floer_equals_conley},
      {"structural property suites", structural},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first << "): " << o.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
