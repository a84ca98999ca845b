#pragma once

#include <stdexcept>

#include "lgas/config.hpp"
#include "lgas/report.hpp"

namespace lgas {

/// The configured model breaks the rate constraints or is not irreducible.
class InvalidModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Outcome {
  Report report;
  /// False when a verify-law run misses the exact value.
  bool passed = true;
};

/// Runs the configured mode and builds its report. Deterministic given the
/// configuration, whatever the thread count.
Outcome run_workflow(const RunConfig& config);

/// Columns of the report `run_workflow(config)` produces.
std::vector<std::string> report_columns(const RunConfig& config);

}  // namespace lgas
