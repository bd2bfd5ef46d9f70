#pragma once

// Property suites shared by the acceptance test and `optred2bp verify`.
// Each suite draws its samples from a generator seeded by (seed, suite), so a
// given seed reproduces every number in the report.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace optred::verify {

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  int criterion = 0;
  std::string title;
  bool pass = false;
  std::vector<Check> checks;
  double seconds = 0.0;     // wall time, not part of the JSON report
  double time_limit = 0.0;  // seconds
};

struct Options {
  std::uint64_t seed = 20240611;
  /// Replaces every numeric threshold (count checks keep their threshold of 0).
  std::optional<double> tolerance;
};

/// equivariance, classifier, coverage, section, forms, conjugation, fiber, dynamics, closed_form
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown name.
SuiteResult run_suite(const std::string& name, const Options& opts = {});

/// JSON text of a set of results (timings omitted, so output is deterministic).
std::string to_json(const std::vector<SuiteResult>& results, const Options& opts);

}  // namespace optred::verify
