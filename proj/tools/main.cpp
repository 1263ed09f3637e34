#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Conley index and Floer cohomology of strongly indefinite gradient flows"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  conley::cli::Overrides overrides;
  std::string ladder;
  int resolution = 0;
  std::uint64_t seed = 0;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"ecoh", "E-cohomology tower of a shape and its stabilized limit"},
      {"conley", "Index pair of a region and its Conley index"},
      {"floer", "Floer complex from critical points and connecting orbits"},
      {"verify", "Floer cohomology against the Conley index"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "Write the JSON report here instead of stdout");
    sub->add_option("--ladder", ladder, "Ladder override, m,n;m,n;...");
    sub->add_option("--resolution", resolution, "Cubes per axis")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Seed for the random shooting directions");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : conley::cli::kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--ladder")) overrides.ladder = ladder;
  if (sub->count("--resolution")) overrides.resolution = resolution;
  if (sub->count("--seed")) overrides.seed = seed;

  const conley::cli::CommandResult result = conley::cli::run_command(command, config_path, overrides);
  const std::string text = result.report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write report to '" << out_path << "'\n";
      return conley::cli::kConfigError;
    }
    out << text;
  }
  if (result.exit_code != 0 && result.report.contains("error"))
    std::cerr << "conley " << command << ": " << result.report["error"].get<std::string>() << "\n";
  return result.exit_code;
}
