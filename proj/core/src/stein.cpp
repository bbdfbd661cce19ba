#include "tpa/stein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tpa/error.hpp"

namespace tpa {

namespace {

// exp() of anything below this is at risk of leaving the normal range.
constexpr double kLogFloor = -700.0;

}  // namespace

PoissonTable::PoissonTable(double rate, long window_max) : rate_(rate), window_max_(window_max) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorKind::invalid_parameter, "Stein rate must be positive and finite");
  }
  if (window_max < 1) {
    throw Error(ErrorKind::invalid_parameter, "Stein window_max must be at least 1");
  }
  // The closed form divides by p_j for j <= window_max, and the residual
  // check needs p_{window_max + 1}.
  const long top = window_max + 1;
  log_pmf_.resize(static_cast<std::size_t>(top + 1));
  for (long j = 0; j <= top; ++j) log_pmf_[static_cast<std::size_t>(j)] = poisson_log_pmf(rate, j);

  if (log_pmf_.front() < kLogFloor) {
    throw WindowOverflowError(
        "Poisson mass at 0 is below the representable range for rate " + std::to_string(rate), -1);
  }
  for (long j = 0; j <= top; ++j) {
    if (log_pmf_[static_cast<std::size_t>(j)] < kLogFloor) {
      long safe = j - 2;
      throw WindowOverflowError("window_max " + std::to_string(window_max) +
                                    " exceeds the representable range; largest safe window_max is " +
                                    std::to_string(safe),
                                safe);
    }
  }

  pmf_.resize(log_pmf_.size());
  cdf_.resize(log_pmf_.size());
  sf_.resize(log_pmf_.size());
  for (std::size_t j = 0; j < log_pmf_.size(); ++j) {
    pmf_[j] = std::exp(log_pmf_[j]);
    const long k = static_cast<long>(j);
    cdf_[j] = poisson_lower_tail(rate, k + 1);
    sf_[j] = poisson_upper_tail(rate, k);
  }
}

double SteinSolution::g(long j) const {
  if (j <= 0) return 0.0;
  return values.at(static_cast<std::size_t>(j));
}

double SteinSolution::delta(long j) const { return g(j + 1) - g(j); }

double SteinSolution::target_mass() const {
  double mass = 0.0;
  for (long a : target) mass += poisson_pmf(rate, a);
  return mass;
}

long default_stein_window(double rate) {
  return static_cast<long>(std::ceil(rate + 12.0 * std::sqrt(rate) + 30.0));
}

SteinSolution solve_stein(double rate, std::vector<long> target, long window_max) {
  return solve_stein(PoissonTable(rate, window_max), std::move(target));
}

SteinSolution solve_stein(const PoissonTable& table, std::vector<long> target) {
  std::sort(target.begin(), target.end());
  target.erase(std::unique(target.begin(), target.end()), target.end());
  if (!target.empty() && target.front() < 0) {
    throw Error(ErrorKind::invalid_parameter, "Stein target set must hold non-negative integers");
  }

  const double rate = table.rate();
  const long jmax = table.window_max();

  // Masses of target points; those past the table only feed the upper sums.
  std::vector<double> target_pmf(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    target_pmf[i] = target[i] <= jmax + 1 ? table.pmf(target[i]) : poisson_pmf(rate, target[i]);
  }

  // above[j] = Po(A ∩ {j+1, j+2, ...}), accumulated from the top so every
  // partial sum is a sum of positive terms.
  std::vector<double> above(static_cast<std::size_t>(jmax + 1), 0.0);
  {
    double acc = 0.0;
    std::size_t idx = target.size();
    for (long j = jmax; j >= 0; --j) {
      while (idx > 0 && target[idx - 1] > j) {
        --idx;
        acc += target_pmf[idx];
      }
      above[static_cast<std::size_t>(j)] = acc;
    }
  }

  // g(j+1) = [Po(A ∩ U_j) P(Y > j) - Po(A \ U_j) P(Y <= j)] / (rate p_j),
  // U_j = {0..j}; each ratio to p_j is formed in log space.
  SteinSolution sol;
  sol.rate = rate;
  sol.window_max = jmax;
  sol.values.assign(static_cast<std::size_t>(jmax + 2), 0.0);
  double below = 0.0;  // Po(A ∩ U_j)
  std::size_t idx = 0;
  for (long j = 0; j <= jmax; ++j) {
    while (idx < target.size() && target[idx] <= j) {
      below += target_pmf[idx];
      ++idx;
    }
    const double log_p = table.log_pmf(j);
    const double sf = table.sf(j);
    const double up = above[static_cast<std::size_t>(j)];
    const double first = below > 0.0 && sf > 0.0 ? below * std::exp(std::log(sf) - log_p) : 0.0;
    const double second = up > 0.0 ? table.cdf(j) * std::exp(std::log(up) - log_p) : 0.0;
    sol.values[static_cast<std::size_t>(j + 1)] = (first - second) / rate;
  }
  sol.target = std::move(target);
  return sol;
}

double stein_residual(const SteinSolution& sol) {
  const double po_a = sol.target_mass();
  double worst = 0.0;
  std::size_t idx = 0;
  for (long j = 0; j <= sol.window_max; ++j) {
    while (idx < sol.target.size() && sol.target[idx] < j) ++idx;
    const bool in_a = idx < sol.target.size() && sol.target[idx] == j;
    const double h = (in_a ? 1.0 : 0.0) - po_a;
    const double r = sol.rate * sol.g(j + 1) - static_cast<double>(j) * sol.g(j) - h;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

SupNorms sup_norms(const SteinSolution& sol) {
  SupNorms norms;
  for (long j = 0; j <= sol.window_max + 1; ++j) norms.g_sup = std::max(norms.g_sup, std::abs(sol.g(j)));
  for (long j = 0; j <= sol.window_max; ++j) norms.dg_sup = std::max(norms.dg_sup, std::abs(sol.delta(j)));
  return norms;
}

DeltaSums delta_sums(const SteinSolution& sol) {
  if (sol.target.size() != 1) {
    throw Error(ErrorKind::precondition, "delta_sums needs a singleton target set");
  }
  const long i = sol.target.front();
  DeltaSums sums;
  for (long k = 0; k <= sol.window_max; ++k) {
    const double d = sol.delta(k);
    sums.abs_sum += std::abs(d);
    sums.sq_sum += d * d;
  }
  const double tail = sol.g(sol.window_max + 1);
  if (i <= sol.window_max) {
    sums.abs_sum += std::abs(tail);
    sums.sq_sum += tail * tail;
  }

  // Shape: strictly negative on [1, i], positive past i, decreasing on
  // [0, i] and on [i+1, window_max+1]. Comparisons allow rounding noise
  // relative to the local magnitude.
  const auto leq = [](double a, double b) {
    return a <= b + 1e-13 * std::max(std::abs(a), std::abs(b));
  };
  bool ok = true;
  const long top = sol.window_max + 1;
  for (long k = 1; k <= std::min(i, top); ++k) {
    ok = ok && sol.g(k) < 0.0 && leq(sol.g(k), sol.g(k - 1));
  }
  for (long k = i + 1; k <= top; ++k) {
    ok = ok && sol.g(k) > 0.0;
    if (k > i + 1) ok = ok && leq(sol.g(k), sol.g(k - 1));
  }
  sums.shape_ok = ok;
  return sums;
}

double tp_deviation_mass_max(const TpParams& params, double window_eps) {
  const IntegerPmf window = tp_window(params, window_eps);
  const long margin = static_cast<long>(std::ceil(3.0 * std::sqrt(params.sigma2)));
  const long lo = std::max(params.shift, window.offset() - margin);
  const long hi = window.last() + margin;
  double worst = 0.0;
  for (long k = lo; k <= hi; ++k) {
    worst = std::max(worst, tp_pmf(params, k) * std::abs(static_cast<double>(k) - params.mu));
  }
  return worst;
}

}  // namespace tpa
