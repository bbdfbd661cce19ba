#pragma once

// Exact integer laws, the translated Poisson family and the two metrics
// used throughout: total variation and the local (point-wise) distance.

#include <span>
#include <vector>

#include "tpa/config.hpp"

namespace tpa {

/// Finite-window probability mass function on the integers.
///
/// probs()[i] is the mass at offset() + i. tail_mass() is the total mass
/// known to lie outside the window; it is zero for exactly finite laws.
class IntegerPmf {
 public:
  IntegerPmf() = default;

  /// Validates entries in [0,1] and total mass 1 within 1e-12.
  IntegerPmf(long offset, std::vector<double> probs, double tail_mass = 0.0);

  static IntegerPmf point_mass(long k);

  long offset() const noexcept { return offset_; }
  /// Largest stored support point; offset() - 1 for an empty window.
  long last() const noexcept { return offset_ + static_cast<long>(probs_.size()) - 1; }
  std::size_t size() const noexcept { return probs_.size(); }
  bool empty() const noexcept { return probs_.empty(); }

  std::span<const double> probs() const noexcept { return probs_; }
  double tail_mass() const noexcept { return tail_mass_; }
  bool is_exact() const noexcept { return tail_mass_ == 0.0; }

  /// Mass at k; zero outside the window.
  double operator()(long k) const noexcept;

  double window_mass() const noexcept;

 private:
  long offset_ = 0;
  std::vector<double> probs_{1.0};
  double tail_mass_ = 0.0;
};

/// TP(mu, sigma2): Po(sigma2 + gamma) shifted by s = floor(mu - sigma2).
struct TpParams {
  double mu = 0.0;
  double sigma2 = 1.0;
  long shift = 0;
  double gamma = 0.0;

  double poisson_rate() const noexcept { return sigma2 + gamma; }
};

TpParams make_tp(double mu, double sigma2);

// Poisson(rate) building blocks. All masses are evaluated in log space.
double poisson_log_pmf(double rate, long k);
double poisson_pmf(double rate, long k);
/// P[Y < k] for Y ~ Po(rate).
double poisson_lower_tail(double rate, long k);
/// P[Y > k] for Y ~ Po(rate).
double poisson_upper_tail(double rate, long k);

double tp_pmf(const TpParams& params, long k);

/// Window around the mode whose exact two-sided tail mass is at most eps
/// (at most eps/2 on each side). The tail is recorded in the result.
IntegerPmf tp_window(const TpParams& params, double eps = kDefaultWindowEps);

long tp_sample(const TpParams& params, Rng& rng);

/// Distance value plus the width of the interval it is known to lie in.
/// `value` is always the upper end of that interval; bracket is zero when
/// both laws are exact.
struct Distance {
  double value = 0.0;
  double bracket = 0.0;

  double lower() const noexcept { return value - bracket; }
};

Distance d_tv(const IntegerPmf& p, const IntegerPmf& q);
Distance d_loc(const IntegerPmf& p, const IntegerPmf& q);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double abs_central_3 = 0.0;
  double q_max = 0.0;
};

/// Exact moments; throws unsupported_input when the law has tail mass.
Moments moments(const IntegerPmf& p);

// Exact laws used by the bundled models.
IntegerPmf poisson_binomial_pmf(std::span<const double> p);
IntegerPmf binomial_pmf(long n, double p);

}  // namespace tpa
