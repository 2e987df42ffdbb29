// hawking-lab <subcommand> --config <path> [key=value ...] [--plot-data]

#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hawking/lab.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for the modified Hawking mass on half de Sitter-Schwarzschild"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  bool plot_data = false;
  const std::map<std::string, std::string> about{
      {"profile", "integrate the warping profile and audit its first integral"},
      {"slice-report", "mass, umbilicity and Gauss equation on slices"},
      {"spectrum", "stability spectrum and identities at the minimal slice"},
      {"variation-check", "first and second variation of the mass against finite differences"},
      {"cmc-foliate", "CMC foliation, lapse, monotonicity and rigidity"},
      {"graph-sweep", "mass deficit of random graphs over slices"},
      {"double-check", "Hawking mass of the doubled surface"},
  };
  for (const auto& name : hawking::subcommands()) {
    auto* sub = app.add_subcommand(name, about.count(name) ? about.at(name) : "");
    sub->add_option("--config", config_path, "flat key=value config file");
    sub->add_option("overrides", overrides, "key=value overrides (later wins)");
    sub->add_flag("--plot-data", plot_data, "also write whitespace-separated .dat tables");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    overrides.insert(overrides.begin(), "command=" + command);
    std::istringstream empty;
    auto config = config_path.empty() ? hawking::parse_config(empty, overrides)
                                      : hawking::load_config(config_path, overrides);
    config.plot_data = config.plot_data || plot_data;
    const auto result = hawking::run(config);
    for (const auto& check : result.summary["checks"]) {
      std::cout << (check["pass"].get<bool>() ? "PASS " : "FAIL ") << check["name"].get<std::string>() << "  "
                << check["value"].dump() << ' ' << check["relation"].get<std::string>() << ' '
                << check["limit"].dump() << '\n';
    }
    std::cout << "summary: " << (result.output_dir / "summary.json").string() << '\n';
    return result.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "hawking-lab " << command << ": " << e.what() << '\n';
    return 2;
  }
}
