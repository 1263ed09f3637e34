#include "conley/scenarios.hpp"

#include "conley/errors.hpp"

namespace conley::scenarios {

using functional::Box;
using functional::FunctionalSpec;
using functional::Nonlinearity;
using functional::NonlinearityFamily;
using functional::SpectralOperator;

namespace {

FunctionalSpec make(std::vector<double> eigenvalues, Nonlinearity b = {}) {
  FunctionalSpec spec;
  spec.op = SpectralOperator(std::move(eigenvalues), 1.0, -1.0);
  spec.nonlinearity = std::move(b);
  return spec;
}

Box cube_box(int dim, double half, double shift0 = 0.0) {
  Box b{std::vector<double>(static_cast<std::size_t>(dim), -half), std::vector<double>(static_cast<std::size_t>(dim), half)};
  b.lo[0] += shift0;
  b.hi[0] += shift0;
  return b;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"quadratic-point", "quadratic-point-plane", "double-well-saddle", "cancel-pair", "double-well"};
}

Scenario builtin_scenario(const std::string& name) {
  Scenario s;
  s.name = name;
  if (name == "quadratic-point") {
    s.spec = make({1, 1, -1, -1});
    s.level = {2, 2};
    s.region = cube_box(4, 0.5);
    s.ladder = {{2, 2}, {3, 3}, {4, 4}};
  } else if (name == "quadratic-point-plane") {
    s.spec = make({1, -1});
    s.level = {1, 1};
    s.region = cube_box(2, 0.5);
    s.ladder = {{1, 1}, {2, 2}, {3, 3}};
  } else if (name == "double-well-saddle") {
    // Saddle of the double well moved off the origin.
    const double c = 0.3;
    s.spec = make({1, 1, -1, -1}, Nonlinearity(NonlinearityFamily::double_well, {c}, 1.6));
    s.level = {2, 2};
    s.region = cube_box(4, 0.5, c);
    s.ladder = {{2, 2}, {3, 3}, {4, 4}};
  } else if (name == "cancel-pair") {
    // Source at s = -1 joined to the sink at s = +1 along the first axis.
    s.spec = make({1, -1}, Nonlinearity(NonlinearityFamily::cancel_pair, {}, 2.0));
    s.level = {1, 1};
    // The repeller side gets more room so that one-step leavers stay clear
    // of the invariant segment.
    s.region = {{-1.8, -0.5}, {1.5, 0.5}};
    s.ladder = {{1, 1}, {2, 2}, {3, 3}};
    s.resolution = 25;
    s.flow.map_time = 0.25;
  } else if (name == "double-well") {
    s.spec = make({1, -1}, Nonlinearity(NonlinearityFamily::double_well, {}, 2.0));
    s.level = {1, 1};
    s.region = {{-1.6, -0.5}, {1.6, 0.5}};
    s.ladder = {{1, 1}, {2, 2}, {3, 3}};
    s.resolution = 21;
  } else {
    throw ConfigError("unknown scenario '" + name + "'");
  }
  return s;
}

}  // namespace conley::scenarios
