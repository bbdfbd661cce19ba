#pragma once

// Solutions of the Poisson Stein equation
//
//   rate * g(j+1) - j * g(j) = 1{j in A} - Po(rate){A},   j >= 0,
//   g(j) = 0,                                             j <= 0,
//
// tabulated on {0, ..., window_max + 1}, together with the norm
// quantities that the approximation bounds rely on.

#include <span>
#include <vector>

#include "tpa/dist.hpp"

namespace tpa {

/// Per-rate Poisson table shared by every solve at that rate.
class PoissonTable {
 public:
  PoissonTable(double rate, long window_max);

  double rate() const noexcept { return rate_; }
  long window_max() const noexcept { return window_max_; }

  double log_pmf(long j) const { return log_pmf_[static_cast<std::size_t>(j)]; }
  double pmf(long j) const { return pmf_[static_cast<std::size_t>(j)]; }
  /// P[Y <= j]
  double cdf(long j) const { return cdf_[static_cast<std::size_t>(j)]; }
  /// P[Y > j]
  double sf(long j) const { return sf_[static_cast<std::size_t>(j)]; }

 private:
  double rate_;
  long window_max_;
  std::vector<double> log_pmf_;
  std::vector<double> pmf_;
  std::vector<double> cdf_;
  std::vector<double> sf_;
};

struct SteinSolution {
  double rate = 1.0;
  std::vector<long> target;    // sorted, unique, non-negative
  long window_max = 1;
  std::vector<double> values;  // g(0), ..., g(window_max + 1)

  /// g(j); zero for j <= 0. j must not exceed window_max + 1.
  double g(long j) const;
  /// g(j+1) - g(j) for 0 <= j <= window_max.
  double delta(long j) const;
  double target_mass() const;
};

/// ceil(rate + 12 sqrt(rate) + 30)
long default_stein_window(double rate);

SteinSolution solve_stein(double rate, std::vector<long> target, long window_max);
SteinSolution solve_stein(const PoissonTable& table, std::vector<long> target);

/// Largest |rate g(j+1) - j g(j) - h_A(j)| over 0 <= j <= window_max,
/// evaluated with the forward recurrence as an independent check.
double stein_residual(const SteinSolution& sol);

struct SupNorms {
  double g_sup = 0.0;
  double dg_sup = 0.0;
};

SupNorms sup_norms(const SteinSolution& sol);

struct DeltaSums {
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  /// g negative and decreasing on [1, i], positive and decreasing beyond i.
  bool shape_ok = false;
};

/// Sums of |Delta g| and (Delta g)^2 for a singleton target {i}.
/// Beyond the window g is positive and decreasing to zero, so the
/// absolute sum gets its tail g(window_max + 1) exactly; the squared
/// sum adds the square of that tail, which bounds its own tail.
DeltaSums delta_sums(const SteinSolution& sol);

/// max_k TP(mu, sigma2){k} * |k - mu| over the eps-window widened by
/// 3 sigma on both sides. Bounded by 1 for every parameter pair.
double tp_deviation_mass_max(const TpParams& params, double window_eps = kDefaultWindowEps);

}  // namespace tpa
