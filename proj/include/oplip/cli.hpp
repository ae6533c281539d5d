#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "oplip/core.hpp"
#include "oplip/experiments.hpp"
#include "oplip/kernels.hpp"
#include "oplip/spectra.hpp"

namespace oplip {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitUnknownCommand = 2,
  kExitUnwritableOutput = 3,
  kExitInvalidAlpha = 4,
  kExitRuntimeError = 5,
  kExitUsage = 6,
};

struct RunConfig {
  std::string command;
  std::vector<std::string> alpha_text{"2"};  // parsed in run(); invalid entries exit with kExitInvalidAlpha
  std::vector<Index> dims{8};
  int trials = 64;
  int steps = 200;
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;
  FourierGrid grid{};
  double sharpness = 2.0;
  std::string function = "abs";
  std::string kind = "lipschitz";  // estimate: lipschitz | multiplier
  std::string profile = "random";  // random | strict | identity
  double radius = 2.0;             // duhamel r
  std::vector<std::string> inputs;  // report: record files or directories
  std::filesystem::path out_dir;
  bool timestamp = true;
  unsigned threads = 0;

  // key=value lines readable back through --config
  std::string to_ini() const;
};

struct ReportOutput {
  std::string csv;
  std::string summary;
};

// Aggregate CSV (kind, alpha, dim, best_ratio, seed, runtime_ms) ordered by
// alpha then dim, and a summary with per-alpha growth between the smallest
// and largest dimension. Rejects an empty list and mixed kinds.
ReportOutput report(std::vector<ExperimentRecord> records);

// (dim, alpha, estimate, seed) table, same ordering as report().
std::string norm_table_csv(std::vector<ExperimentRecord> records);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses flags (and an optional --config file; flags win) and runs.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace oplip
