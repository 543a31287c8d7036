#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qdiv/tolerances.hpp"

namespace qdiv {

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::vector<int> dims = {2, 3, 4};
  std::vector<std::string> generators = {"xlogx", "power:q=1.5", "quadratic"};
  int samples = 50;
  Tolerances tol;
  bool timing = false;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// Machine-readable suite outcome. Byte-identical for identical inputs unless
/// `wall_seconds` is requested.
struct RunReport {
  std::string command;
  std::uint64_t seed = 0;
  Tolerances tol;
  std::vector<CheckResult> checks;
  std::optional<double> wall_seconds;

  bool passed() const;
  nlohmann::json to_json() const;
};

/// hermitian, generators, closed-forms, inversion, convexity, purity,
/// preserver-roundtrip, or all.
std::vector<std::string> suite_names();

/// Throws ParameterError for an unknown suite name.
RunReport run_suite(std::string_view name, const SuiteOptions& opts);

}  // namespace qdiv
