#pragma once

// Named verification suites run by `tpa verify`.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tpa {

/// One verified property. value is the worst observed quantity and limit
/// the pinned threshold it is compared with; passed records the outcome.
struct CheckResult {
  std::string name;
  std::string reference;
  double value = 0.0;
  double limit = 0.0;
  bool passed = false;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckResult> checks;

  bool passed() const noexcept;
};

/// Exact distances over a size sweep plus least-squares log-log slopes.
struct RateSeries {
  std::string model;
  std::vector<long> sizes;
  std::vector<double> d_tv;
  std::vector<double> d_loc;
  double tv_slope = 0.0;
  double loc_slope = 0.0;
};

const std::vector<std::string>& suite_names();

/// "binomial" (p = 1/2, n = 16..256), "hypergeometric" (N = 2m = 2n,
/// n = 8..64) or "parity" (n = 16..128).
RateSeries rate_series(std::string_view model);

/// Runs one suite, or every suite for "all". Throws invalid_parameter for
/// an unknown name.
std::vector<SuiteResult> run_suites(std::string_view name, std::uint64_t seed);

}  // namespace tpa
