#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coalscope/measures.hpp"

namespace coalscope {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitUsage = 2,
  kExitRuntime = 3,
};

/// Merged configuration of one invocation: JSON config file first, then
/// command-line flags on top.
struct RunConfig {
  std::string command;  // simulate | verify | tables
  std::string target;   // verify scenario or table name
  std::string family = "beta";
  double alpha = 1.5;
  std::optional<double> c0;
  std::optional<double> zeta;
  double theta = 1.0;
  std::vector<std::int64_t> n;
  std::vector<std::int64_t> gap_n;
  std::int64_t reps = 4000;
  std::vector<double> t;
  std::uint64_t seed = 20240531;
  std::string out;
  std::string samples_out;
  std::string format = "csv";
  unsigned threads = 1;
  std::string mode = "L";
  std::int64_t points = 100;

  nlohmann::json to_json() const;
};

/// Builds the measure named by `family` (kingman, bs, beta, powerlaw, mohle).
CoalescentMeasure measure_from_config(const RunConfig& config);

/// Column order of simulate output.
const std::vector<std::string>& record_columns();

/// Entry point of the `coalscope` tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace coalscope
