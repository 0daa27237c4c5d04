#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geomc/config.hpp"
#include "geomc/errors.hpp"
#include "geomc/experiment.hpp"

namespace {

int config_error(const std::string& message) {
  std::cerr << nlohmann::json{{"error", "config"}, {"message", message}}.dump() << '\n';
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geodesic Monte Carlo experiments"};
  app.require_subcommand(1);

  std::string run_path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", run_path, "Config JSON")->required();

  std::string preset_name;
  std::vector<std::string> overrides;
  bool print_only = false;
  auto* preset = app.add_subcommand("preset", "Run a built-in preset");
  preset->add_option("name", preset_name, "Preset name")->required();
  preset->add_option("--override,-o", overrides, "Dotted-path assignment, e.g. model.c=[40,0,0,0,0]");
  preset->add_flag("--print", print_only, "Print the resolved config instead of running it");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config file and print it resolved");
  validate->add_option("config", validate_path, "Config JSON")->required();

  app.add_subcommand("presets", "List the built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return geomc::run_experiment(geomc::load_config(run_path), std::cerr);
    if (*validate) {
      std::cout << geomc::serialize_config(geomc::load_config(validate_path)).dump(2) << '\n';
      return 0;
    }
    if (*preset) {
      auto doc = geomc::preset_document(preset_name);
      for (const auto& o : overrides) geomc::apply_override(doc, o);
      const auto cfg = geomc::parse_config(doc);
      if (print_only) {
        std::cout << geomc::serialize_config(cfg).dump(2) << '\n';
        return 0;
      }
      return geomc::run_experiment(cfg, std::cerr);
    }
    for (const auto& name : geomc::preset_names()) std::cout << name << '\n';
    return 0;
  } catch (const geomc::ParseError& e) {
    return config_error(e.what());
  }
}
