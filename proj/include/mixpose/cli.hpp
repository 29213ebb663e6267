#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixpose/simharness.hpp"

namespace mixpose {

/// Parsed command-line invocation.
struct RunConfig {
  enum class Command { Map, Estimate, Calibrate, Study };

  Command command = Command::Study;
  int system = 2;
  ScenarioId scenario = ScenarioId::I;
  int M = 300;
  int R = 1000;
  std::uint64_t seed = 1;
  std::optional<double> sigma_eps;     // override of the scenario default
  std::optional<double> object_sigma;  // override of the command default
  std::optional<double> snr;           // override of the scenario default
  int map_res = 201;
  std::vector<double> anneal;  // sigma_eps levels, empty = no annealing
  int jobs = 1;
  std::string out_dir = "out";
  std::string config_path;  // optional scene config (object + geometries)
};

/// Exit statuses used by the CLI.
enum ExitStatus : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitNumeric = 3,
  kExitIo = 4,
};

/// Parses arguments (without the program name). Throws UsageError on bad
/// input. `help_text`, when non-null, receives the help string if the user
/// asked for it (the caller should then print it and exit 0).
RunConfig parse_args(const std::vector<std::string>& args, std::string* help_text = nullptr);

/// Executes a parsed command: writes the output files and prints the
/// one-line summary. Returns an exit status.
int run(const RunConfig& config);

/// Full entry point: parse, dispatch, map errors to exit statuses.
int cli_main(int argc, const char* const* argv);

}  // namespace mixpose
