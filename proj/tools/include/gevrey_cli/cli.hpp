#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gevrey/analyticity.hpp"
#include "gevrey/datum.hpp"
#include "gevrey/error.hpp"
#include "gevrey/estimates.hpp"
#include "gevrey/solver.hpp"

namespace gevrey::cli {

enum ExitCode : int { kOk = 0, kInfrastructure = 1, kValidation = 2, kNumerical = 3 };

struct ExperimentConfig {
  std::string command;  // solve | picard | norms | verify | radius
  Grid grid;
  DatumSpec datum;
  SolverConfig solver;
  std::vector<NormSpec> norms;
  EnsembleSpec ensemble;
  std::vector<std::string> ids;  // verify: empty -> every id
  std::vector<double> t_list;    // radius
  RadiusWindow window;
  std::filesystem::path output_dir = "gevrey_out";
  std::uint64_t seed = 0;

  void validate() const;
  // The resolved configuration, as recorded in manifest.json.
  nlohmann::ordered_json to_json() const;
};

// TOML document -> JSON tree (tables become objects, arrays stay arrays).
nlohmann::json toml_to_json(const std::string& text, const std::string& source = "config");

// Builds a config from the JSON form of the TOML file. `seed_override` replaces
// the top-level seed and every section seed. A non-empty `default_command`
// fills a missing `command` key and must agree with a present one.
ExperimentConfig parse_config(const nlohmann::json& j, std::optional<std::uint64_t> seed_override = {},
                              const std::string& default_command = "");
ExperimentConfig load_config(const std::filesystem::path& file,
                             std::optional<std::uint64_t> seed_override = {},
                             const std::string& default_command = "");

// Runs the subcommand and writes artifacts plus manifest.json. Returns the
// files written (manifest last).
std::vector<std::filesystem::path> run(const ExperimentConfig& cfg, std::ostream& log);

// Maps an error to the process exit status.
int exit_code_for(ErrorKind kind);

// Entry point shared by the executable and the tests.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace gevrey::cli
