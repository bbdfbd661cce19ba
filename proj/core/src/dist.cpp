#include "tpa/dist.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "tpa/error.hpp"

namespace tpa {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::unsupported_input: return "unsupported-input";
    case ErrorKind::window_overflow: return "window-overflow";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::size_limit: return "size-limit";
    case ErrorKind::excluded_graph: return "excluded-graph";
    case ErrorKind::regularity: return "regularity";
    case ErrorKind::parse: return "parse";
    case ErrorKind::missing_ingredient: return "missing-ingredient";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// IntegerPmf

IntegerPmf::IntegerPmf(long offset, std::vector<double> probs, double tail_mass)
    : offset_(offset), probs_(std::move(probs)), tail_mass_(tail_mass) {
  if (!(tail_mass_ >= 0.0) || tail_mass_ > 1.0) {
    throw Error(ErrorKind::invalid_parameter, "tail mass must lie in [0,1]");
  }
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorKind::invalid_parameter,
                  "probability outside [0,1]: " + std::to_string(p));
    }
  }
  const double total = window_mass() + tail_mass_;
  if (std::abs(total - 1.0) > kDefaultTolerances.normalization) {
    throw Error(ErrorKind::invalid_parameter,
                "probabilities do not sum to one (total " + std::to_string(total) + ")");
  }
}

IntegerPmf IntegerPmf::point_mass(long k) { return IntegerPmf(k, {1.0}); }

double IntegerPmf::operator()(long k) const noexcept {
  if (k < offset_ || k > last()) return 0.0;
  return probs_[static_cast<std::size_t>(k - offset_)];
}

double IntegerPmf::window_mass() const noexcept {
  // Neumaier-compensated; windows can hold 10^4+ terms.
  double sum = 0.0;
  double comp = 0.0;
  for (double p : probs_) {
    const double t = sum + p;
    comp += std::abs(sum) >= std::abs(p) ? (sum - t) + p : (p - t) + sum;
    sum = t;
  }
  return sum + comp;
}

// ---------------------------------------------------------------------------
// Poisson in log space (saddle-point form: Stirling error + deviance).

namespace {

// stirlerr(n) = log(n!) - (n + 1/2) log n + n - log sqrt(2 pi), n = 1..15.
constexpr std::array<double, 16> kStirlingError = {
    0.0,
    0.08106146679532725821967026,
    0.04134069595540929409382208,
    0.02767792568499833914878929,
    0.02079067210376509311152277,
    0.01664469118982119216319487,
    0.01387612882307074799874573,
    0.01189670994589177009505572,
    0.01041126526197209649747857,
    0.009255462182712732917728637,
    0.008330563433362871256469319,
    0.007573675487951840794972024,
    0.006942840107209529865664153,
    0.006408994188004207068439631,
    0.005951370112758847735624416,
    0.00555473355196280137103869,
};

double stirling_error(long n) {
  if (n < static_cast<long>(kStirlingError.size())) return kStirlingError[static_cast<std::size_t>(n)];
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  const double x = static_cast<double>(n);
  const double xx = x * x;
  if (n > 500) return (s0 - s1 / xx) / x;
  if (n > 80) return (s0 - (s1 - s2 / xx) / xx) / x;
  if (n > 35) return (s0 - (s1 - (s2 - s3 / xx) / xx) / xx) / x;
  return (s0 - (s1 - (s2 - (s3 - s4 / xx) / xx) / xx) / xx) / x;
}

// Deviance term x log(x / m) + m - x, accurate when x is close to m.
double deviance(double x, double m) {
  if (std::abs(x - m) < 0.1 * (x + m)) {
    double v = (x - m) / (x + m);
    double s = (x - m) * v;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double next = s + ej / (2 * j + 1);
      if (next == s) return next;
      s = next;
    }
    return s;
  }
  return x * std::log(x / m) + m - x;
}

void check_rate(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorKind::invalid_parameter, "Poisson rate must be positive and finite");
  }
}

}  // namespace

double poisson_log_pmf(double rate, long k) {
  check_rate(rate);
  if (k < 0) return -std::numeric_limits<double>::infinity();
  if (k == 0) return -rate;
  const double x = static_cast<double>(k);
  return -stirling_error(k) - deviance(x, rate) - 0.5 * std::log(2.0 * std::numbers::pi * x);
}

double poisson_pmf(double rate, long k) { return std::exp(poisson_log_pmf(rate, k)); }

double poisson_lower_tail(double rate, long k) {
  check_rate(rate);
  if (k <= 0) return 0.0;
  return boost::math::gamma_q(static_cast<double>(k), rate);
}

double poisson_upper_tail(double rate, long k) {
  check_rate(rate);
  if (k < 0) return 1.0;
  return boost::math::gamma_p(static_cast<double>(k) + 1.0, rate);
}

// ---------------------------------------------------------------------------
// Translated Poisson

TpParams make_tp(double mu, double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2) || !std::isfinite(mu)) {
    throw Error(ErrorKind::invalid_parameter, "TP requires finite mu and sigma2 > 0");
  }
  const double diff = mu - sigma2;
  const double floor_diff = std::floor(diff);
  TpParams params;
  params.mu = mu;
  params.sigma2 = sigma2;
  params.shift = static_cast<long>(floor_diff);
  params.gamma = diff - floor_diff;
  if (params.gamma >= 1.0) {  // rounding of diff - floor(diff) when diff is a hair below an integer
    params.gamma = 0.0;
    params.shift += 1;
  }
  return params;
}

double tp_pmf(const TpParams& params, long k) {
  if (k < params.shift) return 0.0;
  return poisson_pmf(params.poisson_rate(), k - params.shift);
}

IntegerPmf tp_window(const TpParams& params, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw Error(ErrorKind::invalid_parameter, "window eps must lie in (0,1]");
  }
  const double rate = params.poisson_rate();
  const double half = 0.5 * eps;
  const long mode = static_cast<long>(std::floor(rate));

  // Largest lo <= mode with P[Y < lo] <= eps/2 (monotone in lo).
  long lo_ok = 0;
  long lo_bad = mode + 1;
  while (lo_bad - lo_ok > 1) {
    const long mid = lo_ok + (lo_bad - lo_ok) / 2;
    if (poisson_lower_tail(rate, mid) <= half) lo_ok = mid; else lo_bad = mid;
  }
  // Smallest hi >= mode with P[Y > hi] <= eps/2.
  long step = std::max<long>(1, static_cast<long>(std::sqrt(rate)));
  long hi_bad = mode - 1;
  long hi_ok = mode;
  while (poisson_upper_tail(rate, hi_ok) > half) {
    hi_bad = hi_ok;
    hi_ok += step;
    step *= 2;
  }
  while (hi_ok - hi_bad > 1) {
    const long mid = hi_bad + (hi_ok - hi_bad) / 2;
    if (poisson_upper_tail(rate, mid) <= half) hi_ok = mid; else hi_bad = mid;
  }

  const long lo = lo_ok;
  const long hi = hi_ok;
  std::vector<double> probs(static_cast<std::size_t>(hi - lo + 1));
  for (long k = lo; k <= hi; ++k) probs[static_cast<std::size_t>(k - lo)] = poisson_pmf(rate, k);
  const double tail = poisson_lower_tail(rate, lo) + poisson_upper_tail(rate, hi);
  return IntegerPmf(lo + params.shift, std::move(probs), tail);
}

long tp_sample(const TpParams& params, Rng& rng) {
  std::poisson_distribution<long> draw(params.poisson_rate());
  return draw(rng) + params.shift;
}

// ---------------------------------------------------------------------------
// Metrics

namespace {

template <typename F>
void for_union(const IntegerPmf& p, const IntegerPmf& q, F&& f) {
  if (p.empty() && q.empty()) return;
  long lo = std::min(p.empty() ? q.offset() : p.offset(), q.empty() ? p.offset() : q.offset());
  long hi = std::max(p.empty() ? q.last() : p.last(), q.empty() ? p.last() : q.last());
  for (long k = lo; k <= hi; ++k) f(p(k), q(k));
}

}  // namespace

Distance d_tv(const IntegerPmf& p, const IntegerPmf& q) {
  double l1 = 0.0;
  for_union(p, q, [&](double a, double b) { l1 += std::abs(a - b); });
  // Off-window mass contributes between |tp - tq| and tp + tq to the L1 sum.
  const double tp = p.tail_mass();
  const double tq = q.tail_mass();
  Distance d;
  d.value = std::min(1.0, 0.5 * (l1 + tp + tq));
  d.bracket = std::max(0.0, d.value - 0.5 * (l1 + std::abs(tp - tq)));
  return d;
}

Distance d_loc(const IntegerPmf& p, const IntegerPmf& q) {
  double sup = 0.0;
  for_union(p, q, [&](double a, double b) { sup = std::max(sup, std::abs(a - b)); });
  // Any single off-window point carries at most the larger tail mass.
  const double off = std::max(p.tail_mass(), q.tail_mass());
  Distance d;
  d.value = std::max(sup, off);
  d.bracket = d.value - sup;
  return d;
}

Moments moments(const IntegerPmf& p) {
  if (!p.is_exact()) {
    throw Error(ErrorKind::unsupported_input, "moments need an exactly finite law (tail mass > 0)");
  }
  Moments m;
  const auto probs = p.probs();
  const double total = p.window_mass();
  double mean = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    mean += static_cast<double>(i) * probs[i];
    m.q_max = std::max(m.q_max, probs[i]);
  }
  mean /= total;
  double var = 0.0;
  double abs3 = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double d = static_cast<double>(i) - mean;
    var += d * d * probs[i];
    abs3 += std::abs(d) * d * d * probs[i];
  }
  m.mean = mean + static_cast<double>(p.offset());
  m.variance = var / total;
  m.abs_central_3 = abs3 / total;
  return m;
}

// ---------------------------------------------------------------------------
// Exact laws

IntegerPmf poisson_binomial_pmf(std::span<const double> p) {
  std::vector<double> pmf{1.0};
  pmf.reserve(p.size() + 1);
  for (double pi : p) {
    if (!(pi >= 0.0 && pi <= 1.0)) {
      throw Error(ErrorKind::invalid_parameter, "success probability outside [0,1]");
    }
    pmf.push_back(0.0);
    for (std::size_t w = pmf.size() - 1; w > 0; --w) {
      pmf[w] = pmf[w] * (1.0 - pi) + pmf[w - 1] * pi;
    }
    pmf[0] *= 1.0 - pi;
  }
  return IntegerPmf(0, std::move(pmf));
}

IntegerPmf binomial_pmf(long n, double p) {
  if (n < 0) throw Error(ErrorKind::invalid_parameter, "binomial n must be non-negative");
  const std::vector<double> ps(static_cast<std::size_t>(n), p);
  return poisson_binomial_pmf(ps);
}

}  // namespace tpa
