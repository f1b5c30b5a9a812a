#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace gfflab {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitBadArgs = 2,
  kExitSizeCap = 3,
  kExitMissingData = 4,
};

struct ExperimentConfig {
  int n_min = 1;
  int n_max = 6;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  int workers = 1;
  int dense_cutoff = 16;
  std::filesystem::path out = ".";
  double inequality_se = 2.0;
  double point_se = 3.0;
  double detector_threshold = 2.0;

  /// Throws PreconditionError when an invariant is violated.
  void validate() const;
};

/// Reads a JSON document with the ExperimentConfig field names; missing keys
/// keep their defaults.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Runs the tool on argv-style arguments (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gfflab
