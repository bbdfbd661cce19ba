#include "tpa/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tpa/error.hpp"

namespace tpa {

namespace {

std::size_t index_of(const IntegerPmf& pmf, long w) { return static_cast<std::size_t>(w - pmf.offset()); }

// Conditional quantities are only formed where the mass is a normal double;
// subnormal masses lose the relative precision the ratios need.
bool usable_mass(double p) { return p >= std::numeric_limits<double>::min(); }

}  // namespace

// ---------------------------------------------------------------------------
// JointLaw

JointLaw::JointLaw(long offset, std::size_t size) : offset_(offset), size_(size), mass_(size * size, 0.0) {}

double JointLaw::operator()(long w, long w2) const noexcept {
  if (w < offset_ || w2 < offset_ || w > last() || w2 > last()) return 0.0;
  return mass_[static_cast<std::size_t>(w - offset_) * size_ + static_cast<std::size_t>(w2 - offset_)];
}

void JointLaw::set(long w, long w2, double mass) {
  if (w < offset_ || w2 < offset_ || w > last() || w2 > last()) {
    throw Error(ErrorKind::precondition, "joint entry outside the support window");
  }
  mass_[static_cast<std::size_t>(w - offset_) * size_ + static_cast<std::size_t>(w2 - offset_)] = mass;
}

// ---------------------------------------------------------------------------
// PairModel

double PairModel::s_at(long w) const noexcept {
  if (w < w_pmf.offset() || w > w_pmf.last()) return 0.0;
  return s_values[index_of(w_pmf, w)];
}

double PairModel::r_at(long w) const noexcept {
  if (w < w_pmf.offset() || w > w_pmf.last()) return 0.0;
  return r_values[index_of(w_pmf, w)];
}

double PairModel::down_at(long w) const noexcept {
  const double p = w_pmf(w);
  return usable_mass(p) ? joint(w, w - 1) / p : 0.0;
}

PairModel assemble_pair_model(std::string name, ModelSpec spec, IntegerPmf w_pmf, double lambda,
                              std::vector<double> up, std::vector<double> down,
                              std::vector<double> r_values, std::optional<double> lipschitz_s) {
  const std::size_t m = w_pmf.size();
  if (up.size() != m || down.size() != m || r_values.size() != m) {
    throw Error(ErrorKind::invalid_parameter, "conditional tables must match the support window");
  }
  PairModel model;
  model.name = std::move(name);
  model.spec = std::move(spec);
  model.lambda = lambda;
  model.joint = JointLaw(w_pmf.offset(), m);
  for (std::size_t i = 0; i < m; ++i) {
    const long w = w_pmf.offset() + static_cast<long>(i);
    const double p = w_pmf.probs()[i];
    if (up[i] < -1e-15 || down[i] < -1e-15 || up[i] + down[i] > 1.0 + 1e-12) {
      throw Error(ErrorKind::invalid_parameter,
                  "transition probabilities out of range at w = " + std::to_string(w));
    }
    up[i] = std::clamp(up[i], 0.0, 1.0);
    down[i] = std::clamp(down[i], 0.0, 1.0);
    const double stay = std::max(0.0, 1.0 - up[i] - down[i]);
    if (p == 0.0) continue;
    model.joint.set(w, w, p * stay);
    if (up[i] > 0.0) model.joint.set(w, w + 1, p * up[i]);
    if (down[i] > 0.0) model.joint.set(w, w - 1, p * down[i]);
  }
  model.w_pmf = std::move(w_pmf);
  model.s_values = std::move(up);
  model.r_values = std::move(r_values);
  model.lipschitz_s = lipschitz_s;
  return model;
}

// ---------------------------------------------------------------------------
// Poisson-binomial: W = sum J_i, W' = W - J_K + J_K*.

PairModel build_poisson_binomial(const PoissonBinomialSpec& spec, const ExactLimits& limits) {
  const auto n = static_cast<long>(spec.p.size());
  if (n == 0) throw Error(ErrorKind::invalid_parameter, "Poisson-binomial needs at least one indicator");
  if (n > limits.pmf) {
    throw SizeLimitError("Poisson-binomial law limited to n <= " + std::to_string(limits.pmf), limits.pmf);
  }
  if (n > limits.joint) {
    throw SizeLimitError("Poisson-binomial exact joint limited to n <= " + std::to_string(limits.joint),
                         limits.joint);
  }
  for (double p : spec.p) {
    if (!(p > 0.0 && p < 1.0)) {
      throw Error(ErrorKind::invalid_parameter, "Poisson-binomial needs 0 < p_i < 1");
    }
  }

  // Prefix DP over indicators. mass[w] = P[W_k = w];
  // up_acc[w] = E[sum_{i<=k} (1 - J_i) p_i ; W_k = w];
  // down_acc[w] = E[sum_{i<=k} J_i (1 - p_i) ; W_k = w].
  const auto size = static_cast<std::size_t>(n + 1);
  std::vector<double> mass(size, 0.0), up_acc(size, 0.0), down_acc(size, 0.0);
  mass[0] = 1.0;
  for (long k = 0; k < n; ++k) {
    const double p = spec.p[static_cast<std::size_t>(k)];
    const double q = 1.0 - p;
    // Descending so that cell w - 1 still holds the prefix-k values.
    // J_k = 0 keeps w and adds p to the up sum; J_k = 1 moves w - 1 -> w
    // and adds 1 - p to the down sum.
    for (long wi = k + 1; wi >= 0; --wi) {
      const auto w = static_cast<std::size_t>(wi);
      const double prev_mass = w > 0 ? mass[w - 1] : 0.0;
      const double prev_up = w > 0 ? up_acc[w - 1] : 0.0;
      const double prev_down = w > 0 ? down_acc[w - 1] : 0.0;
      up_acc[w] = (up_acc[w] + p * mass[w]) * q + prev_up * p;
      down_acc[w] = down_acc[w] * q + (prev_down + q * prev_mass) * p;
      mass[w] = mass[w] * q + prev_mass * p;
    }
  }

  const double lambda = 1.0 / static_cast<double>(n);
  std::vector<double> up(size, 0.0), down(size, 0.0), r(size, 0.0);
  for (std::size_t w = 0; w < size; ++w) {
    if (!usable_mass(mass[w])) continue;
    up[w] = lambda * up_acc[w] / mass[w];
    down[w] = lambda * down_acc[w] / mass[w];
  }

  std::optional<double> lipschitz;
  const double p0 = spec.p.front();
  if (std::all_of(spec.p.begin(), spec.p.end(), [&](double p) { return p == p0; })) {
    lipschitz = lambda * p0;  // S(w) = lambda p (n - w)
  }

  PairModel model = assemble_pair_model("poisson-binomial", spec, IntegerPmf(0, std::move(mass)), lambda,
                                        std::move(up), std::move(down), std::move(r), lipschitz);
  if (lipschitz) {
    model.name = "binomial";
    model.parameters = {{"n", static_cast<double>(n)}, {"p", p0}};
  } else {
    model.parameters = {{"n", static_cast<double>(n)}};
  }
  return model;
}

// ---------------------------------------------------------------------------
// Hypergeometric

namespace {

void validate(const HypergeometricSpec& s) {
  if (s.urns < 1 || s.balls < 1 || s.marked < 1) {
    throw Error(ErrorKind::invalid_parameter, "hypergeometric parameters must be positive");
  }
  if (s.balls > s.urns || s.marked > s.urns) {
    throw Error(ErrorKind::invalid_parameter, "hypergeometric needs balls <= urns and marked <= urns");
  }
}

}  // namespace

IntegerPmf hypergeometric_pmf(const HypergeometricSpec& spec) {
  validate(spec);
  const long N = spec.urns;
  const long m = spec.balls;
  const long n = spec.marked;
  const long lo = std::max(0L, m + n - N);
  const long hi = std::min(m, n);
  // Log weights via the ratio P(w+1)/P(w) = (n-w)(m-w) / ((w+1)(N-n-m+w+1)).
  std::vector<double> logw(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (long w = lo; w < hi; ++w) {
    const double ratio = static_cast<double>(n - w) * static_cast<double>(m - w) /
                         (static_cast<double>(w + 1) * static_cast<double>(N - n - m + w + 1));
    logw[static_cast<std::size_t>(w - lo + 1)] = logw[static_cast<std::size_t>(w - lo)] + std::log(ratio);
  }
  const double peak = *std::max_element(logw.begin(), logw.end());
  std::vector<double> probs(logw.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logw.size(); ++i) {
    probs[i] = std::exp(logw[i] - peak);
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return IntegerPmf(lo, std::move(probs));
}

PairModel build_hypergeometric(const HypergeometricSpec& spec) {
  validate(spec);
  if (spec.balls == spec.urns) {
    throw Error(ErrorKind::precondition, "hypergeometric coupling needs an empty urn (balls < urns)");
  }
  const double N = static_cast<double>(spec.urns);
  const double m = static_cast<double>(spec.balls);
  const double n = static_cast<double>(spec.marked);
  const double denom = m * (N - m + 1.0);

  IntegerPmf pmf = hypergeometric_pmf(spec);
  const std::size_t size = pmf.size();
  std::vector<double> up(size), down(size), r(size, 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    const double w = static_cast<double>(pmf.offset()) + static_cast<double>(i);
    up[i] = (m - w) * (n - w) / denom;
    down[i] = w * (N - n - m + w) / denom;
  }
  PairModel model = assemble_pair_model("hypergeometric", spec, std::move(pmf), N / denom, std::move(up),
                                        std::move(down), std::move(r), (m + n) / denom);
  model.parameters = {{"N", N}, {"m", m}, {"n", n}};
  return model;
}

// ---------------------------------------------------------------------------
// Parity: flip two of the n+1 bits (J_{n+1} the parity bit) at random.

IntegerPmf parity_pmf(long n) {
  if (n < 2) throw Error(ErrorKind::precondition, "parity model needs n >= 2");
  const IntegerPmf b = binomial_pmf(n, 0.5);
  const long top = (n + 1) / 2;
  std::vector<double> probs(static_cast<std::size_t>(top + 1), 0.0);
  for (long k = 0; k <= n; ++k) {
    const long v = k + (k % 2);
    probs[static_cast<std::size_t>(v / 2)] += b(k);
  }
  return IntegerPmf(0, std::move(probs));
}

PairModel build_parity(const ParitySpec& spec) {
  const long n = spec.n;
  IntegerPmf pmf = parity_pmf(n);
  const double nn = static_cast<double>(n);
  const double pairs = nn * (nn + 1.0);
  const std::size_t size = pmf.size();
  std::vector<double> up(size), down(size), r(size, 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    const double v = 2.0 * static_cast<double>(i);
    up[i] = (nn + 1.0 - v) * (nn - v) / pairs;  // both flipped bits were 0
    down[i] = v * (v - 1.0) / pairs;            // both flipped bits were 1
  }
  PairModel model = assemble_pair_model("parity", spec, std::move(pmf), 4.0 / (nn + 1.0), std::move(up),
                                        std::move(down), std::move(r), (4.0 * nn + 2.0) / pairs);
  model.parameters = {{"n", nn}};
  return model;
}

// ---------------------------------------------------------------------------
// Structural checks

double verify_exchangeability(const PairModel& model) {
  const JointLaw& j = model.joint;
  double worst = 0.0;
  for (long w = j.offset(); w <= j.last(); ++w) {
    for (long w2 = w + 1; w2 <= j.last(); ++w2) worst = std::max(worst, std::abs(j(w, w2) - j(w2, w)));
  }
  return worst;
}

double support_violation(const PairModel& model) {
  const JointLaw& j = model.joint;
  double mass = 0.0;
  for (long w = j.offset(); w <= j.last(); ++w) {
    for (long w2 = j.offset(); w2 <= j.last(); ++w2) {
      if (std::abs(w2 - w) > 1) mass += j(w, w2);
    }
  }
  return mass;
}

double marginal_discrepancy(const PairModel& model) {
  const JointLaw& j = model.joint;
  double worst = 0.0;
  for (long w = j.offset(); w <= j.last(); ++w) {
    double row = 0.0;
    double col = 0.0;
    for (long w2 = j.offset(); w2 <= j.last(); ++w2) {
      row += j(w, w2);
      col += j(w2, w);
    }
    const double p = model.w_pmf(w);
    worst = std::max({worst, std::abs(row - p), std::abs(col - p)});
  }
  return worst;
}

double verify_regression(const PairModel& model) {
  const double mu = moments(model.w_pmf).mean;
  const JointLaw& j = model.joint;
  double worst = 0.0;
  for (long w = model.w_pmf.offset(); w <= model.w_pmf.last(); ++w) {
    const double p = model.w_pmf(w);
    if (!usable_mass(p)) continue;
    double drift = 0.0;  // E[W' - W | W = w]
    for (long w2 = j.offset(); w2 <= j.last(); ++w2) drift += static_cast<double>(w2 - w) * j(w, w2);
    drift /= p;
    const double dev = static_cast<double>(w) - mu;
    worst = std::max(worst, std::abs(drift + model.lambda * dev - model.r_at(w)));
  }
  return worst;
}

std::pair<double, double> r_moments(const PairModel& model) {
  const double mu = moments(model.w_pmf).mean;
  double a = 0.0;
  double e = 0.0;
  for (long w = model.w_pmf.offset(); w <= model.w_pmf.last(); ++w) {
    const double p = model.w_pmf(w);
    const double dev = static_cast<double>(w) - mu;
    a += p * dev * model.r_at(w);
    e += p * std::abs(model.r_at(w)) * dev * dev;
  }
  return {a, e};
}

D1Identity verify_d1_identity(const PairModel& model) {
  const Moments mom = moments(model.w_pmf);
  D1Identity out;
  for (long w = model.w_pmf.offset(); w <= model.w_pmf.last(); ++w) {
    out.up_mass += model.w_pmf(w) * model.s_at(w);
    out.down_mass += model.joint(w, w - 1);
  }
  out.target = model.lambda * mom.variance + r_moments(model).first;
  out.gap = std::abs(out.up_mass - out.target);
  out.exchange_gap = std::abs(out.up_mass - out.down_mass);
  return out;
}

double verify_w_function(const PairModel& model, long lo, long hi) {
  for (double r : model.r_values) {
    if (r != 0.0) throw Error(ErrorKind::precondition, "w-function identity requires R = 0");
  }
  const double mu = moments(model.w_pmf).mean;
  double worst = 0.0;
  for (long k = lo; k <= hi; ++k) {
    // f = 1{. = k}: Delta f(W) = 1{W = k-1} - 1{W = k}.
    const double lhs = (static_cast<double>(k) - mu) * model.w_pmf(k);
    const double rhs =
        (model.s_at(k - 1) * model.w_pmf(k - 1) - model.s_at(k) * model.w_pmf(k)) / model.lambda;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

namespace {

double variance_over_w(const IntegerPmf& pmf, const std::vector<double>& values) {
  double mean = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) mean += pmf.probs()[i] * values[i];
  double var = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - mean;
    var += pmf.probs()[i] * d * d;
  }
  return var;
}

}  // namespace

double var_s(const PairModel& model) { return variance_over_w(model.w_pmf, model.s_values); }

double var_r(const PairModel& model) { return variance_over_w(model.w_pmf, model.r_values); }

std::pair<double, double> s_range(const PairModel& model) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < model.s_values.size(); ++i) {
    if (model.w_pmf.probs()[i] <= 0.0) continue;
    lo = std::min(lo, model.s_values[i]);
    hi = std::max(hi, model.s_values[i]);
  }
  return {lo, hi};
}

double lipschitz_variance_bound(double l, double var_x) {
  if (l < 0.0 || var_x < 0.0) {
    throw Error(ErrorKind::invalid_parameter, "Lipschitz bound needs l >= 0 and var_x >= 0");
  }
  return l * l * var_x;
}

}  // namespace tpa
