#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "percolab/bounds.hpp"

namespace percolab {

struct SuiteConfig {
  std::string suite;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::uint64_t n_samples = 0;  // 0: suite default
  double lambda = 0.0;          // 0: suite default
  double rel_tol = 0.0;         // 0: suite default
};

struct SuiteReport {
  std::string suite;
  std::vector<BoundCheck> checks;
  std::vector<std::string> notes;  // p_c estimates and other context

  SuiteSummary summary() const { return summarize(checks); }
  int exit_code() const { return summary().fail > 0 ? 1 : 0; }
};

// Names accepted by run_suite, with one-line descriptions.
std::vector<std::pair<std::string, std::string>> available_suites();

// Throws ConfigError for an empty or unknown suite name (the message lists
// the available suites).
SuiteReport run_suite(const SuiteConfig& config);

std::string suite_to_json(const SuiteReport& r);

}  // namespace percolab
