#pragma once

// Run configuration: a JSON key-value tree, validated before any computation.
// Every key is optional; unknown keys are rejected.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conley/conley_index.hpp"
#include "conley/ecohomology.hpp"
#include "conley/floer.hpp"
#include "conley/reports.hpp"

namespace conley::cli {

using functional::TruncationLevel;
using reports::Json;

struct EcohOptions {
  ecoh::TowerKind kind = ecoh::TowerKind::negative;
  ecoh::ShapeSpec shape;
  ecoh::LadderGrid grid;
  std::vector<TruncationLevel> ladder;
};

struct ConleyRunOptions {
  std::optional<std::string> squeeze_direction;  // "forward" or "backward"
  double squeeze_t = 0.0;
  std::string pair_out;
  std::string exit_times_csv;
};

struct FloerRunOptions {
  std::optional<int> continuation_steps;
  std::optional<double> triple_b;
};

struct RunConfig {
  std::optional<std::string> scenario;
  functional::FunctionalSpec spec;
  TruncationLevel level;
  functional::Box region;
  int resolution = 15;
  std::vector<TruncationLevel> ladder;
  index::FlowParams flow;
  floer::FloerParams floer;
  index::ConleyOptions conley;
  std::uint64_t seed = 0;
  EcohOptions ecoh;
  ConleyRunOptions conley_run;
  FloerRunOptions floer_run;
  bool corrupt_boundary = false;
};

/// Throws ConfigError on unknown keys, wrong types or invalid values.
RunConfig parse_config(const Json& tree);
RunConfig load_config(const std::string& path);

/// "m,n;m,n;..." -> levels.
std::vector<TruncationLevel> parse_ladder(const std::string& text);

struct Overrides {
  std::optional<std::string> ladder;
  std::optional<int> resolution;
  std::optional<std::uint64_t> seed;
};

/// Applies command-line overrides for `command` and re-validates.
void apply_overrides(RunConfig& config, const std::string& command, const Overrides& overrides);

/// Fully resolved configuration, defaults included.
Json echo(const RunConfig& config);

void validate(const RunConfig& config);

}  // namespace conley::cli
