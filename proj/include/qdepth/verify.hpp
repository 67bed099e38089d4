#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qdepth {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   ///< worst error seen
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyOptions {
  double dt = 1e-3;  ///< RK4 step used by the integrator checks
  std::uint64_t seed = 7;
};

/// Self-checks of the numerical core against independent references.
std::vector<CheckResult> run_invariant_suite(const VerifyOptions& opts);
std::string format_report(const std::vector<CheckResult>& results);

}  // namespace qdepth
