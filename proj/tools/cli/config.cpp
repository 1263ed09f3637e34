#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "conley/cubeset_io.hpp"
#include "conley/errors.hpp"
#include "conley/scenarios.hpp"

namespace conley::cli {

namespace {

void require_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

std::string path_of(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

template <typename T>
T get(const Json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(what + " has the wrong type");
  }
}

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(what + " must be a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ConfigError(what + " must be an integer");
  return j.get<int>();
}

std::vector<double> numbers(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

TruncationLevel level_of(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(what + " must be [m, n]");
  TruncationLevel l{integer(j[0], what), integer(j[1], what)};
  if (l.m < 0 || l.n < 0) throw ConfigError(what + " must be non-negative");
  return l;
}

std::vector<TruncationLevel> levels_of(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array of [m, n] pairs");
  std::vector<TruncationLevel> out;
  for (const auto& v : j) out.push_back(level_of(v, what));
  return out;
}

void parse_problem(const Json& j, RunConfig& c) {
  require_keys(j, {"eigenvalues", "tail_positive", "tail_negative", "nonlinearity"}, "problem");
  std::vector<double> eig = c.spec.op.listed();
  std::optional<double> tp = c.spec.op.tail_positive(), tn = c.spec.op.tail_negative();
  if (j.contains("eigenvalues")) eig = numbers(j["eigenvalues"], "problem.eigenvalues");
  if (j.contains("tail_positive"))
    tp = j["tail_positive"].is_null() ? std::nullopt : std::optional<double>(number(j["tail_positive"], "tail_positive"));
  if (j.contains("tail_negative"))
    tn = j["tail_negative"].is_null() ? std::nullopt : std::optional<double>(number(j["tail_negative"], "tail_negative"));
  c.spec.op = functional::SpectralOperator(std::move(eig), tp, tn);
  if (j.contains("nonlinearity")) {
    const Json& b = j["nonlinearity"];
    require_keys(b, {"family", "params", "clamp_radius"}, "problem.nonlinearity");
    const auto family = b.contains("family") ? functional::parse_family(get<std::string>(b["family"], "family"))
                                             : c.spec.nonlinearity.family();
    const auto params = b.contains("params") ? numbers(b["params"], "nonlinearity.params") : std::vector<double>{};
    const double radius = b.contains("clamp_radius") ? number(b["clamp_radius"], "clamp_radius") : 2.0;
    c.spec.nonlinearity = functional::Nonlinearity(family, params, radius);
  }
}

void parse_flow(const Json& j, index::FlowParams& f) {
  require_keys(j, {"time_step", "map_time", "expansion_bound", "t_max"}, "flow");
  if (j.contains("time_step")) f.time_step = number(j["time_step"], "flow.time_step");
  if (j.contains("map_time")) f.map_time = number(j["map_time"], "flow.map_time");
  if (j.contains("expansion_bound")) f.expansion_bound = number(j["expansion_bound"], "flow.expansion_bound");
  if (j.contains("t_max")) f.t_max = number(j["t_max"], "flow.t_max");
}

void parse_shooting(const Json& j, floer::ShootingParams& s) {
  require_keys(j, {"epsilon", "seeds", "t_max", "basin", "transv_tol", "time_step"}, "shooting");
  if (j.contains("epsilon")) s.epsilon = number(j["epsilon"], "shooting.epsilon");
  if (j.contains("seeds")) s.seeds = integer(j["seeds"], "shooting.seeds");
  if (j.contains("t_max")) s.t_max = number(j["t_max"], "shooting.t_max");
  if (j.contains("basin")) s.basin = number(j["basin"], "shooting.basin");
  if (j.contains("transv_tol")) s.transv_tol = number(j["transv_tol"], "shooting.transv_tol");
  if (j.contains("time_step")) s.time_step = number(j["time_step"], "shooting.time_step");
}

void parse_shape(const Json& j, RunConfig& c) {
  require_keys(j, {"family", "radius", "confined_to", "intervals", "default_interval", "threshold", "sets"},
               "ecoh.shape");
  ecoh::ShapeSpec& s = c.ecoh.shape;
  if (j.contains("family")) s.family = ecoh::parse_shape_family(get<std::string>(j["family"], "shape.family"));
  if (j.contains("radius")) s.radius = number(j["radius"], "shape.radius");
  if (j.contains("confined_to")) s.confined_to = level_of(j["confined_to"], "shape.confined_to");
  if (j.contains("intervals")) {
    if (!j["intervals"].is_array()) throw ConfigError("shape.intervals must be an array");
    for (const auto& iv : j["intervals"]) {
      const auto v = numbers(iv, "shape.intervals");
      if (v.size() != 2) throw ConfigError("shape.intervals entries must be [lo, hi]");
      s.intervals.emplace_back(v[0], v[1]);
    }
  }
  if (j.contains("default_interval")) {
    const auto v = numbers(j["default_interval"], "shape.default_interval");
    if (v.size() != 2) throw ConfigError("shape.default_interval must be [lo, hi]");
    s.default_interval = {v[0], v[1]};
  }
  if (j.contains("threshold")) s.threshold = number(j["threshold"], "shape.threshold");
  if (j.contains("sets")) {
    if (!j["sets"].is_array()) throw ConfigError("shape.sets must be an array");
    for (const auto& e : j["sets"]) {
      require_keys(e, {"level", "file"}, "shape.sets entry");
      if (!e.contains("level") || !e.contains("file")) throw ConfigError("shape.sets entries need level and file");
      s.explicit_sets[level_of(e["level"], "shape.sets.level")] =
          cubical::load_cubeset(get<std::string>(e["file"], "shape.sets.file"));
    }
  }
}

void parse_ecoh(const Json& j, RunConfig& c) {
  require_keys(j, {"tower", "ladder", "grid", "shape"}, "ecoh");
  if (j.contains("tower")) {
    const std::string k = get<std::string>(j["tower"], "ecoh.tower");
    if (k == "negative")
      c.ecoh.kind = ecoh::TowerKind::negative;
    else if (k == "positive")
      c.ecoh.kind = ecoh::TowerKind::positive;
    else if (k == "middle")
      c.ecoh.kind = ecoh::TowerKind::middle;
    else
      throw ConfigError("ecoh.tower must be negative, positive or middle");
  }
  if (j.contains("grid")) {
    require_keys(j["grid"], {"half_width", "resolution"}, "ecoh.grid");
    if (j["grid"].contains("half_width")) c.ecoh.grid.half_width = number(j["grid"]["half_width"], "half_width");
    if (j["grid"].contains("resolution")) c.ecoh.grid.resolution = integer(j["grid"]["resolution"], "resolution");
  }
  if (j.contains("shape")) parse_shape(j["shape"], c);
  if (j.contains("ladder")) {
    const Json& l = j["ladder"];
    if (!l.is_array()) throw ConfigError("ecoh.ladder must be an array");
    c.ecoh.ladder.clear();
    for (const auto& v : l) {
      if (v.is_number_integer()) {
        const int k = v.get<int>();
        if (c.ecoh.kind == ecoh::TowerKind::middle) throw ConfigError("middle towers need [m, n] ladder entries");
        c.ecoh.ladder.push_back(c.ecoh.kind == ecoh::TowerKind::negative ? TruncationLevel{0, k}
                                                                         : TruncationLevel{k, 0});
      } else {
        c.ecoh.ladder.push_back(level_of(v, "ecoh.ladder"));
      }
    }
  }
}

void apply_scenario(const std::string& name, RunConfig& c) {
  const scenarios::Scenario s = scenarios::builtin_scenario(name);
  c.scenario = name;
  c.spec = s.spec;
  c.level = s.level;
  c.region = s.region;
  c.ladder = s.ladder;
  c.resolution = s.resolution;
  c.flow = s.flow;
}

}  // namespace

std::vector<TruncationLevel> parse_ladder(const std::string& text) {
  std::vector<TruncationLevel> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    const auto comma = item.find(',');
    if (comma == std::string::npos) throw ConfigError("ladder entry '" + item + "' is not m,n");
    try {
      std::size_t used = 0;
      const std::string ms = item.substr(0, comma), ns = item.substr(comma + 1);
      TruncationLevel l{std::stoi(ms, &used), 0};
      if (used != ms.size()) throw ConfigError("bad ladder entry '" + item + "'");
      l.n = std::stoi(ns, &used);
      if (used != ns.size()) throw ConfigError("bad ladder entry '" + item + "'");
      if (l.m < 0 || l.n < 0) throw ConfigError("ladder entries must be non-negative");
      out.push_back(l);
    } catch (const std::logic_error&) {
      throw ConfigError("bad ladder entry '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("ladder is empty");
  return out;
}

void validate(const RunConfig& c) {
  c.spec.validate();
  if (c.region.lo.size() != static_cast<std::size_t>(c.level.dim()) || c.region.hi.size() != c.region.lo.size())
    throw ConfigError("region must have " + std::to_string(c.level.dim()) + " axes for level " + to_string(c.level));
  for (std::size_t i = 0; i < c.region.lo.size(); ++i)
    if (!(c.region.lo[i] < c.region.hi[i])) throw ConfigError("region axis " + std::to_string(i) + " is empty");
  if (!c.spec.op.supports(c.level)) throw ConfigError("the spectrum has no coordinates for level " + to_string(c.level));
  if (c.resolution < 1) throw ConfigError("resolution must be positive");
  if (!c.ladder.empty()) {
    ecoh::expand_ladder(c.ladder);
    if (!c.ladder.front().covers(c.level)) throw ConfigError("ladder must start at or above the problem level");
  }
  if (!(c.flow.map_time > 0)) throw ConfigError("flow.map_time must be positive");
  if (c.flow.time_step < 0) throw ConfigError("flow.time_step must be non-negative");
  if (!(c.flow.t_max > 0)) throw ConfigError("flow.t_max must be positive");
  if (c.conley.window < 2) throw ConfigError("stabilization.window must be at least 2");
  if (c.conley.discs.negative_cubes < 5 || c.conley.discs.negative_cubes % 2 == 0)
    throw ConfigError("discs.negative_cubes must be odd and at least 5");
  if (!(c.conley.discs.half_width > 0)) throw ConfigError("discs.half_width must be positive");
  const auto& s = c.floer.shooting;
  if (!(s.epsilon > 0) || s.seeds < 1 || !(s.t_max > 0) || !(s.basin > 0) || !(s.transv_tol >= 0) ||
      !(s.time_step > 0))
    throw ConfigError("shooting parameters out of range");
  if (c.floer.seeds.per_axis < 1 || c.floer.seeds.random < 0) throw ConfigError("critical_seeds out of range");
  c.ecoh.grid.validate();
  c.ecoh.shape.validate();
  if (!c.ecoh.ladder.empty()) ecoh::expand_ladder(c.ecoh.ladder);
  if (c.conley_run.squeeze_direction && *c.conley_run.squeeze_direction != "forward" &&
      *c.conley_run.squeeze_direction != "backward")
    throw ConfigError("conley.squeeze.direction must be forward or backward");
  if (c.conley_run.squeeze_t < 0) throw ConfigError("conley.squeeze.t must be non-negative");
  if (c.floer_run.continuation_steps && *c.floer_run.continuation_steps < 0)
    throw ConfigError("floer.continuation_steps must be non-negative");
}

RunConfig parse_config(const Json& tree) {
  require_keys(tree,
               {"scenario", "problem", "level", "region", "resolution", "ladder", "flow", "tolerances",
                "critical_seeds", "shooting", "stabilization", "discs", "seed", "ecoh", "conley", "floer", "verify"},
               "config");
  RunConfig c;
  // Defaults for a bare config: the plane quadratic point.
  apply_scenario("quadratic-point-plane", c);
  c.scenario.reset();
  try {
    if (tree.contains("scenario")) apply_scenario(get<std::string>(tree["scenario"], "scenario"), c);
    if (tree.contains("problem")) {
      parse_problem(tree["problem"], c);
      c.scenario.reset();
    }
    if (tree.contains("level")) c.level = level_of(tree["level"], "level");
    if (tree.contains("region")) {
      require_keys(tree["region"], {"lo", "hi"}, "region");
      if (!tree["region"].contains("lo") || !tree["region"].contains("hi"))
        throw ConfigError("region needs lo and hi");
      c.region.lo = numbers(tree["region"]["lo"], "region.lo");
      c.region.hi = numbers(tree["region"]["hi"], "region.hi");
    }
    if (tree.contains("resolution")) c.resolution = integer(tree["resolution"], "resolution");
    if (tree.contains("ladder")) {
      c.ladder = levels_of(tree["ladder"], "ladder");
    } else if (tree.contains("level")) {
      c.ladder = {c.level, {c.level.m + 1, c.level.n + 1}, {c.level.m + 2, c.level.n + 2}};
    }
    if (tree.contains("flow")) parse_flow(tree["flow"], c.flow);
    if (tree.contains("tolerances")) {
      const Json& t = tree["tolerances"];
      require_keys(t, {"newton", "degeneracy", "dedup"}, "tolerances");
      if (t.contains("newton")) c.floer.tol.newton = number(t["newton"], "tolerances.newton");
      if (t.contains("degeneracy")) c.floer.tol.degeneracy = number(t["degeneracy"], "tolerances.degeneracy");
      if (t.contains("dedup")) c.floer.tol.dedup = number(t["dedup"], "tolerances.dedup");
    }
    if (tree.contains("critical_seeds")) {
      const Json& s = tree["critical_seeds"];
      require_keys(s, {"per_axis", "random"}, "critical_seeds");
      if (s.contains("per_axis")) c.floer.seeds.per_axis = integer(s["per_axis"], "critical_seeds.per_axis");
      if (s.contains("random")) c.floer.seeds.random = integer(s["random"], "critical_seeds.random");
    }
    if (tree.contains("shooting")) parse_shooting(tree["shooting"], c.floer.shooting);
    if (tree.contains("stabilization")) {
      require_keys(tree["stabilization"], {"window"}, "stabilization");
      if (tree["stabilization"].contains("window"))
        c.conley.window = integer(tree["stabilization"]["window"], "stabilization.window");
    }
    if (tree.contains("discs")) {
      const Json& d = tree["discs"];
      require_keys(d, {"half_width", "negative_cubes"}, "discs");
      if (d.contains("half_width")) c.conley.discs.half_width = number(d["half_width"], "discs.half_width");
      if (d.contains("negative_cubes"))
        c.conley.discs.negative_cubes = integer(d["negative_cubes"], "discs.negative_cubes");
    }
    if (tree.contains("seed")) {
      if (!tree["seed"].is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
      c.seed = tree["seed"].get<std::uint64_t>();
    }
    if (tree.contains("ecoh")) parse_ecoh(tree["ecoh"], c);
    if (tree.contains("conley")) {
      const Json& j = tree["conley"];
      require_keys(j, {"squeeze", "pair_out", "exit_times_csv"}, "conley");
      if (j.contains("squeeze")) {
        require_keys(j["squeeze"], {"direction", "t"}, "conley.squeeze");
        c.conley_run.squeeze_direction =
            j["squeeze"].contains("direction") ? get<std::string>(j["squeeze"]["direction"], "direction") : "forward";
        if (j["squeeze"].contains("t")) c.conley_run.squeeze_t = number(j["squeeze"]["t"], "conley.squeeze.t");
      }
      if (j.contains("pair_out")) c.conley_run.pair_out = get<std::string>(j["pair_out"], "conley.pair_out");
      if (j.contains("exit_times_csv"))
        c.conley_run.exit_times_csv = get<std::string>(j["exit_times_csv"], "conley.exit_times_csv");
    }
    if (tree.contains("floer")) {
      const Json& j = tree["floer"];
      require_keys(j, {"continuation_steps", "triple_b"}, "floer");
      if (j.contains("continuation_steps"))
        c.floer_run.continuation_steps = integer(j["continuation_steps"], "floer.continuation_steps");
      if (j.contains("triple_b")) c.floer_run.triple_b = number(j["triple_b"], "floer.triple_b");
    }
    if (tree.contains("verify")) {
      require_keys(tree["verify"], {"corrupt_boundary"}, "verify");
      if (tree["verify"].contains("corrupt_boundary")) {
        if (!tree["verify"]["corrupt_boundary"].is_boolean())
          throw ConfigError("verify.corrupt_boundary must be a boolean");
        c.corrupt_boundary = tree["verify"]["corrupt_boundary"].get<bool>();
      }
    }
  } catch (const ShapeError& e) {
    throw ConfigError(e.what());
  }
  // Sublevel shapes are sublevel sets of the run's own functional.
  if (c.ecoh.shape.family == ecoh::ShapeFamily::sublevel) c.ecoh.shape.functional = c.spec;
  c.floer.seeds.rng_seed = c.seed;
  c.floer.shooting.rng_seed = c.seed;
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  Json tree;
  try {
    tree = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(tree);
}

void apply_overrides(RunConfig& c, const std::string& command, const Overrides& o) {
  if (o.ladder) {
    auto ladder = parse_ladder(*o.ladder);
    if (command == "ecoh")
      c.ecoh.ladder = std::move(ladder);
    else
      c.ladder = std::move(ladder);
  }
  if (o.resolution) {
    if (command == "ecoh")
      c.ecoh.grid.resolution = *o.resolution;
    else
      c.resolution = *o.resolution;
  }
  if (o.seed) {
    c.seed = *o.seed;
    c.floer.seeds.rng_seed = c.seed;
    c.floer.shooting.rng_seed = c.seed;
  }
  validate(c);
}

Json echo(const RunConfig& c) {
  Json problem;
  problem["eigenvalues"] = c.spec.op.listed();
  problem["tail_positive"] = c.spec.op.tail_positive() ? Json(*c.spec.op.tail_positive()) : Json(nullptr);
  problem["tail_negative"] = c.spec.op.tail_negative() ? Json(*c.spec.op.tail_negative()) : Json(nullptr);
  problem["nonlinearity"] = {{"family", functional::to_string(c.spec.nonlinearity.family())},
                             {"params", c.spec.nonlinearity.params()},
                             {"clamp_radius", c.spec.nonlinearity.clamp_radius()}};
  Json ladder = Json::array();
  for (const auto& l : c.ladder) ladder.push_back({l.m, l.n});
  Json ecoh_ladder = Json::array();
  for (const auto& l : c.ecoh.ladder) ecoh_ladder.push_back({l.m, l.n});
  const auto& s = c.ecoh.shape;
  Json shape = {{"family", ecoh::to_string(s.family)},
                {"radius", s.radius},
                {"default_interval", {s.default_interval.first, s.default_interval.second}},
                {"threshold", s.threshold}};
  shape["confined_to"] = s.confined_to ? Json({s.confined_to->m, s.confined_to->n}) : Json(nullptr);
  Json intervals = Json::array();
  for (const auto& [lo, hi] : s.intervals) intervals.push_back({lo, hi});
  shape["intervals"] = std::move(intervals);
  const auto& sh = c.floer.shooting;
  return {
      {"scenario", c.scenario ? Json(*c.scenario) : Json(nullptr)},
      {"problem", std::move(problem)},
      {"level", {c.level.m, c.level.n}},
      {"region", {{"lo", c.region.lo}, {"hi", c.region.hi}}},
      {"resolution", c.resolution},
      {"ladder", std::move(ladder)},
      {"flow",
       {{"time_step", c.flow.time_step},
        {"map_time", c.flow.map_time},
        {"expansion_bound", c.flow.expansion_bound},
        {"t_max", c.flow.t_max}}},
      {"tolerances",
       {{"newton", c.floer.tol.newton}, {"degeneracy", c.floer.tol.degeneracy}, {"dedup", c.floer.tol.dedup}}},
      {"critical_seeds", {{"per_axis", c.floer.seeds.per_axis}, {"random", c.floer.seeds.random}}},
      {"shooting",
       {{"epsilon", sh.epsilon},
        {"seeds", sh.seeds},
        {"t_max", sh.t_max},
        {"basin", sh.basin},
        {"transv_tol", sh.transv_tol},
        {"time_step", sh.time_step}}},
      {"stabilization", {{"window", c.conley.window}}},
      {"discs", {{"half_width", c.conley.discs.half_width}, {"negative_cubes", c.conley.discs.negative_cubes}}},
      {"seed", c.seed},
      {"ecoh",
       {{"tower", ecoh::to_string(c.ecoh.kind)},
        {"ladder", std::move(ecoh_ladder)},
        {"grid", {{"half_width", c.ecoh.grid.half_width}, {"resolution", c.ecoh.grid.resolution}}},
        {"shape", std::move(shape)}}},
      {"conley",
       {{"squeeze", c.conley_run.squeeze_direction
                        ? Json({{"direction", *c.conley_run.squeeze_direction}, {"t", c.conley_run.squeeze_t}})
                        : Json(nullptr)},
        {"pair_out", c.conley_run.pair_out},
        {"exit_times_csv", c.conley_run.exit_times_csv}}},
      {"floer",
       {{"continuation_steps",
         c.floer_run.continuation_steps ? Json(*c.floer_run.continuation_steps) : Json(nullptr)},
        {"triple_b", c.floer_run.triple_b ? Json(*c.floer_run.triple_b) : Json(nullptr)}}},
      {"verify", {{"corrupt_boundary", c.corrupt_boundary}}},
  };
}

}  // namespace conley::cli
