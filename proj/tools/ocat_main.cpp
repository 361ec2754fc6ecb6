// ocat: run configured studies, canned scenarios, or list the scenarios.
//
//   ocat run <config-file> [--out DIR]
//   ocat scenario <name> [--out DIR]
//   ocat list-scenarios

#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "ocat/runner.hpp"
#include "ocat/scenarios.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Orthogonality-catastrophe and detector-kinetics workbench"};
  app.set_version_flag("--version", ocat::library_version());
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "run a study described by a config file");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory (overrides OCAT_OUTPUT_DIR and config)");

  std::string scenario_name;
  auto* scenario = app.add_subcommand("scenario", "run a canned scenario");
  scenario->add_option("name", scenario_name, "scenario name")->required();
  scenario->add_option("--out", out_dir, "output directory");

  app.add_subcommand("list-scenarios", "list canned scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ocat::kExitOk : ocat::kExitUsage;
  }

  const auto override_dir =
      out_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(out_dir);

  if (app.got_subcommand("list-scenarios")) {
    for (const auto& s : ocat::list_scenarios()) std::cout << s.name << "\t" << s.description << "\n";
    return ocat::kExitOk;
  }
  if (app.got_subcommand("run")) return ocat::run_config_file(config_path, override_dir, std::cerr);

  const auto s = ocat::find_scenario(scenario_name);
  if (!s) {
    std::cerr << "configuration error: scenario: unknown scenario '" << scenario_name << "'\n";
    return ocat::kExitConfig;
  }
  std::optional<std::filesystem::path> dir = override_dir;
  const char* env = std::getenv("OCAT_OUTPUT_DIR");
  if (!dir && !(env && *env)) dir = std::filesystem::path("ocat-out") / s->name;
  return ocat::run_config_text(s->config, dir, std::cerr);
}
