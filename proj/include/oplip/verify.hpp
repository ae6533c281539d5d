#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "oplip/core.hpp"
#include "oplip/kernels.hpp"

namespace oplip {

struct SuiteResult {
  std::string name;
  int assertions = 0;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
  // Records one assertion; the message is kept only when it fails.
  void check(bool ok, const std::string& message);
};

struct VerifyReport {
  std::vector<SuiteResult> suites;

  int assertions() const;
  int failures() const;
  bool passed() const { return failures() == 0; }
  nlohmann::json to_json() const;
};

struct VerifyOptions {
  std::vector<Index> dims{2, 4, 8};
  std::uint64_t seed = 0;
  FourierGrid grid{};
  double bridge_sharpness = 2.0;
  // keys: identity, identity_relaxed, s2, reconstruction, duhamel, commutator, unitary
  std::map<std::string, double> tolerances;
};

// Default tolerance for each key above; unknown keys throw ConfigError.
double verify_tolerance(const VerifyOptions& options, const std::string& key);

const std::vector<std::string>& verify_tolerance_keys();

VerifyReport run_verification(const VerifyOptions& options);

}  // namespace oplip
