#include "commands.hpp"

#include <fstream>
#include <functional>

#include "conley/continuation.hpp"
#include "conley/errors.hpp"

namespace conley::cli {

namespace {

Json ok_report(const std::string& command, const RunConfig& config, Json result, int exit_code,
               const std::string& status) {
  return {{"command", command},
          {"config", echo(config)},
          {"status", status},
          {"exit_code", exit_code},
          {"result", std::move(result)}};
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "config_error";
  if (dynamic_cast<const DimensionMismatch*>(&e)) return "dimension_mismatch";
  if (dynamic_cast<const DegenerateCriticalPoint*>(&e)) return "degenerate_critical_point";
  if (dynamic_cast<const IncompatibleGrids*>(&e)) return "incompatible_grids";
  if (dynamic_cast<const ShapeError*>(&e)) return "shape_error";
  if (dynamic_cast<const ResolutionError*>(&e)) return "resolution_error";
  if (dynamic_cast<const NotStabilized*>(&e)) return "not_stabilized";
  if (dynamic_cast<const Inconclusive*>(&e)) return "inconclusive";
  if (dynamic_cast<const NonIsolating*>(&e)) return "non_isolating";
  if (dynamic_cast<const NonTransverse*>(&e)) return "non_transverse";
  if (dynamic_cast<const CoverViolation*>(&e)) return "cover_violation";
  if (dynamic_cast<const PreconditionViolation*>(&e)) return "precondition_violation";
  return "internal_error";
}

template <typename Body>
CommandResult guarded(const std::string& command, const RunConfig& config, Body body) {
  try {
    return body();
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    return {code,
            {{"command", command},
             {"config", echo(config)},
             {"status", error_kind(e)},
             {"exit_code", code},
             {"error", e.what()}}};
  }
}

std::vector<int> ladder_coordinates(const RunConfig& c) {
  std::vector<int> out;
  for (const auto& l : c.ecoh.ladder) out.push_back(c.ecoh.kind == ecoh::TowerKind::negative ? l.n : l.m);
  return out;
}

void write_file(const std::string& path, const std::string& what, const std::function<void(std::ostream&)>& fill) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + what + " to '" + path + "'");
  fill(out);
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DimensionMismatch*>(&e) ||
      dynamic_cast<const DegenerateCriticalPoint*>(&e) || dynamic_cast<const IncompatibleGrids*>(&e) ||
      dynamic_cast<const ShapeError*>(&e) || dynamic_cast<const ResolutionError*>(&e))
    return kConfigError;
  if (dynamic_cast<const NotStabilized*>(&e) || dynamic_cast<const Inconclusive*>(&e)) return kNotStabilized;
  if (dynamic_cast<const NonIsolating*>(&e)) return kNonIsolating;
  if (dynamic_cast<const NonTransverse*>(&e)) return kNonTransverse;
  return kFailure;
}

CommandResult cmd_ecoh(const RunConfig& c) {
  return guarded("ecoh", c, [&]() -> CommandResult {
    if (c.ecoh.ladder.empty()) throw ConfigError("ecoh.ladder is required");
    ecoh::Tower tower;
    switch (c.ecoh.kind) {
      case ecoh::TowerKind::negative:
        tower = ecoh::tower_negative(c.ecoh.shape, ladder_coordinates(c), c.ecoh.grid);
        break;
      case ecoh::TowerKind::positive:
        tower = ecoh::tower_positive(c.ecoh.shape, ladder_coordinates(c), c.ecoh.grid);
        break;
      case ecoh::TowerKind::middle:
        tower = ecoh::tower_middle(c.ecoh.shape, c.ecoh.ladder, c.ecoh.grid);
        break;
    }
    const ecoh::ELimit limit = ecoh::stabilized_limit(tower, c.conley.window);
    const int code = limit.stabilized ? kSuccess : kNotStabilized;
    Json result = {{"tower", reports::to_json(tower)}, {"limit", reports::to_json(limit)}};
    return {code, ok_report("ecoh", c, std::move(result), code, limit.stabilized ? "ok" : "not_stabilized")};
  });
}

CommandResult cmd_conley(const RunConfig& c) {
  return guarded("conley", c, [&]() -> CommandResult {
    index::RegionPair rp = index::index_pair_for_region(c.spec, c.level, c.region, c.resolution, c.flow);
    Json result;
    result["region_pair"] = reports::to_json(rp.pair);
    if (c.conley_run.squeeze_direction) {
      rp.pair = *c.conley_run.squeeze_direction == "forward"
                    ? index::squeeze_forward(rp.pair, rp.map, c.conley_run.squeeze_t)
                    : index::squeeze_backward(rp.pair, rp.map, c.conley_run.squeeze_t);
      result["squeezed_pair"] = reports::to_json(rp.pair);
    }
    const std::string failure = index::check_index_pair(rp.pair, rp.map);
    result["pair_check"] = failure.empty() ? Json("ok") : Json(failure);
    if (!c.conley_run.pair_out.empty())
      write_file(c.conley_run.pair_out, "index pair", [&](std::ostream& os) { index::write_index_pair(os, rp.pair); });
    if (!c.conley_run.exit_times_csv.empty()) {
      const auto field = index::gradient_field(c.spec, c.level);
      const auto times = index::exit_time_field(rp.pair, field, c.flow);
      write_file(c.conley_run.exit_times_csv, "exit times",
                 [&](std::ostream& os) { index::write_exit_times_csv(os, rp.pair.N1.grid(), times); });
    }
    const index::ConleyIndexResult index = index::conley_index(rp.pair, c.ladder, c.conley);
    result["tower"] = reports::to_json(index.tower);
    result["limit"] = reports::to_json(index.limit);
    const int code = index.limit.stabilized ? kSuccess : kNotStabilized;
    return {code, ok_report("conley", c, std::move(result), code, index.limit.stabilized ? "ok" : "not_stabilized")};
  });
}

CommandResult cmd_floer(const RunConfig& c) {
  return guarded("floer", c, [&]() -> CommandResult {
    const floer::FloerComplex complex = floer::build_floer_complex(c.spec, c.region, c.level, c.floer);
    Json result;
    result["complex"] = reports::to_json(complex);
    int code = kSuccess;
    if (c.floer_run.continuation_steps) {
      const auto report = floer::continuation_trivialize(c.spec, c.level, c.region, c.resolution,
                                                         *c.floer_run.continuation_steps, c.flow);
      result["continuation"] = reports::to_json(report);
    }
    if (c.floer_run.triple_b) {
      const double b = *c.floer_run.triple_b;
      const functional::CriticalPoint* lower = nullptr;
      const functional::CriticalPoint* upper = nullptr;
      for (const auto& g : complex.generators) {
        if (g.value < b && (!lower || g.value > lower->value)) lower = &g;
        if (g.value > b && (!upper || g.value < upper->value)) upper = &g;
      }
      if (!lower || !upper) throw ConfigError("floer.triple_b must separate two critical values");
      const index::RegionPair rp = index::index_pair_for_region(c.spec, c.level, c.region, c.resolution, c.flow);
      const auto triple = floer::sublevel_triple(c.spec, rp.pair, rp.map, *lower, *upper, b, c.ladder, c.conley.discs);
      result["triple"] = reports::to_json(triple);
      if (!triple.exact_everywhere) code = kFailure;
    }
    return {code, ok_report("floer", c, std::move(result), code, code == kSuccess ? "ok" : "not_exact")};
  });
}

CommandResult cmd_verify(const RunConfig& c) {
  return guarded("verify", c, [&]() -> CommandResult {
    floer::VerifyOptions options;
    options.flow = c.flow;
    options.conley = c.conley;
    options.floer = c.floer;
    options.resolution = c.resolution;
    options.corrupt_boundary = c.corrupt_boundary;
    const auto report = floer::verify_main_theorem(c.spec, c.region, c.level, c.ladder, options);
    int code = kSuccess;
    if (report.verdict == floer::Verdict::unequal) code = kFailure;
    if (report.verdict == floer::Verdict::inconclusive) code = kNotStabilized;
    return {code, ok_report("verify", c, reports::to_json(report), code, floer::to_string(report.verdict))};
  });
}

CommandResult run_command(const std::string& command, const std::string& config_path, const Overrides& overrides) {
  RunConfig config;
  try {
    config = config_path.empty() ? parse_config(Json::object()) : load_config(config_path);
    apply_overrides(config, command, overrides);
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    return {code,
            {{"command", command},
             {"config", nullptr},
             {"status", error_kind(e)},
             {"exit_code", code},
             {"error", e.what()}}};
  }
  if (command == "ecoh") return cmd_ecoh(config);
  if (command == "conley") return cmd_conley(config);
  if (command == "floer") return cmd_floer(config);
  if (command == "verify") return cmd_verify(config);
  return {kConfigError,
          {{"command", command},
           {"config", nullptr},
           {"status", "config_error"},
           {"exit_code", int(kConfigError)},
           {"error", "unknown command '" + command + "'"}}};
}

}  // namespace conley::cli
