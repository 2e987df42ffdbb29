#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hawking/ambient.hpp"

namespace hawking {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat key=value experiment description. Typed fields cover the common
/// knobs; suite-specific knobs stay in `values` and are read with defaults.
struct ExperimentConfig {
  std::string command;
  std::string ambient = "model";      // model | bump | table
  std::vector<double> a_values;       // model parameter(s); derived from m when m is given
  std::string table_path;
  BumpSpec bump{1e-2, 0.5, 0.1, 0.894427190999916};
  int n_theta = 129;
  int n_phi = 1;
  double lambda = 2.0;
  std::vector<double> fd_steps{1e-2, 5e-3, 2.5e-3};
  std::optional<double> t_min, t_max;
  double dt = 1e-2;
  std::optional<std::uint64_t> seed;
  std::filesystem::path output_dir = "hawking-lab-out";
  bool plot_data = false;
  std::map<std::string, std::string> values;  // every key as given, after overrides

  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  /// Tolerance tol_<name>, with the suite default when absent.
  double tolerance(const std::string& name) const;
};

/// Known tolerance names and their defaults.
const std::map<std::string, double>& default_tolerances();

/// Parses key=value lines ('#' comments) and then applies overrides in order.
/// An empty value removes the key. Throws ConfigError.
ExperimentConfig parse_config(std::istream& in, const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Throws ConfigError when the config cannot drive `command`.
void validate(const ExperimentConfig& config);

struct RunResult {
  nlohmann::json summary;
  bool pass = false;
  std::filesystem::path output_dir;
  std::vector<std::filesystem::path> files;
};

/// Runs one subcommand and writes summary.json plus data tables. The output
/// directory is HAWKING_LAB_OUT when set, else config.output_dir.
RunResult run(const ExperimentConfig& config);

/// Subcommand names accepted by run().
const std::vector<std::string>& subcommands();

}  // namespace hawking
