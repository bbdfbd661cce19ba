#pragma once

// Exchangeable pairs (W, W') with |W' - W| <= 1 and linear regression
//
//   E[W' - mu | W] = (1 - lambda)(W - mu) + R,
//
// built exactly for the Poisson-binomial, hypergeometric and parity models,
// plus the structural checks every such pair must pass.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tpa/dist.hpp"

namespace tpa {

struct PoissonBinomialSpec {
  std::vector<double> p;
};

/// `balls` balls spread over `urns` urns, at most one per urn; W counts the
/// balls found in the first `marked` urns.
struct HypergeometricSpec {
  long urns = 0;
  long balls = 0;
  long marked = 0;
};

/// W = V / 2 where V is a Bi(n, 1/2) count rounded up to the next even integer.
struct ParitySpec {
  long n = 2;
};

/// Anti-voter model facts needed by the model-specific Var S bound.
struct AntiVoterSpec {
  std::string graph;
  long vertices = 0;
  long degree = 0;
  double var_q = 0.0;
  double var_s_star = 0.0;
};

using ModelSpec =
    std::variant<std::monostate, PoissonBinomialSpec, HypergeometricSpec, ParitySpec, AntiVoterSpec>;

/// Joint law of one exchangeable step on the square window of W's support.
class JointLaw {
 public:
  JointLaw() = default;
  JointLaw(long offset, std::size_t size);

  long offset() const noexcept { return offset_; }
  std::size_t size() const noexcept { return size_; }
  long last() const noexcept { return offset_ + static_cast<long>(size_) - 1; }

  /// P[W = w, W' = w2]; zero outside the window.
  double operator()(long w, long w2) const noexcept;
  void set(long w, long w2, double mass);

 private:
  long offset_ = 0;
  std::size_t size_ = 0;
  std::vector<double> mass_;
};

struct PairModel {
  std::string name;
  std::vector<std::pair<std::string, double>> parameters;
  ModelSpec spec;
  IntegerPmf w_pmf;
  JointLaw joint;
  double lambda = 0.0;
  /// S(w) = P[W' = w + 1 | W = w], indexed like w_pmf.
  std::vector<double> s_values;
  /// R as a function of W, indexed like w_pmf.
  std::vector<double> r_values;
  std::optional<double> lipschitz_s;

  double s_at(long w) const noexcept;
  double r_at(long w) const noexcept;
  /// P[W' = w - 1 | W = w] recovered from the joint law.
  double down_at(long w) const noexcept;
};

struct ExactLimits {
  long pmf = 2000;
  long joint = 200;
};

/// Assemble the joint law from up/down conditional probabilities.
PairModel assemble_pair_model(std::string name, ModelSpec spec, IntegerPmf w_pmf, double lambda,
                              std::vector<double> up, std::vector<double> down,
                              std::vector<double> r_values, std::optional<double> lipschitz_s);

PairModel build_poisson_binomial(const PoissonBinomialSpec& spec, const ExactLimits& limits = {});
PairModel build_hypergeometric(const HypergeometricSpec& spec);
PairModel build_parity(const ParitySpec& spec);

IntegerPmf hypergeometric_pmf(const HypergeometricSpec& spec);
IntegerPmf parity_pmf(long n);

/// max |P[W=w, W'=w2] - P[W=w2, W'=w]|
double verify_exchangeability(const PairModel& model);
/// Total joint mass on |w' - w| > 1.
double support_violation(const PairModel& model);
/// max over w of the distance between either joint marginal and w_pmf.
double marginal_discrepancy(const PairModel& model);
/// max_w |E[W' | W = w] - mu - (1 - lambda)(w - mu) - R(w)|
double verify_regression(const PairModel& model);

struct D1Identity {
  double up_mass = 0.0;          // E D_{+1}
  double down_mass = 0.0;        // E D_{-1}
  double target = 0.0;           // lambda sigma^2 + E[(W - mu) R]
  double gap = 0.0;              // |up_mass - target|
  double exchange_gap = 0.0;     // |up_mass - down_mass|
};

D1Identity verify_d1_identity(const PairModel& model);

/// max over k in [lo, hi] of |E[(W - mu) f(W)] - E[(S(W)/lambda) Delta f(W)]|
/// for f = 1{. = k}. Requires R = 0.
double verify_w_function(const PairModel& model, long lo, long hi);

double var_s(const PairModel& model);
double var_r(const PairModel& model);
/// E[(W - mu) R] and E[|R| (W - mu)^2].
std::pair<double, double> r_moments(const PairModel& model);

/// min and max of S over w with positive mass.
std::pair<double, double> s_range(const PairModel& model);

/// Var f(X) <= l^2 Var X for l-Lipschitz f.
double lipschitz_variance_bound(double l, double var_x);

}  // namespace tpa
