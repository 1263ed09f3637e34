#pragma once

// Builtin problems: functional, base level, region, ladder and grid
// resolution that together reproduce the reference computations.

#include <string>
#include <vector>

#include "conley/flow.hpp"
#include "conley/functional.hpp"

namespace conley::scenarios {

struct Scenario {
  std::string name;
  functional::FunctionalSpec spec;
  functional::TruncationLevel level;
  functional::Box region;
  std::vector<functional::TruncationLevel> ladder;
  int resolution = 15;
  index::FlowParams flow;
};

std::vector<std::string> scenario_names();

/// Throws ConfigError for an unknown name.
Scenario builtin_scenario(const std::string& name);

}  // namespace conley::scenarios
