#pragma once

// Error-bound formulas for translated Poisson approximation of W from an
// exchangeable pair, plus per-model reports that put each bound next to
// the exactly computed quantity it controls.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tpa/config.hpp"
#include "tpa/dist.hpp"
#include "tpa/models.hpp"

namespace tpa {

struct BoundIngredients {
  double lambda = 0.0;
  double sigma2 = 0.0;
  double var_s = 0.0;
  double var_r = 0.0;
  double q_max = 0.0;
  double e_abs3 = 0.0;
  std::optional<double> lipschitz_s;
  /// The local-distance bound fed into the Lipschitz refinement.
  std::optional<double> d_loc_bound;

  /// Throws invalid_parameter unless lambda > 0, sigma2 > 0, variances
  /// non-negative and q_max in (0, 1].
  void validate() const;
};

/// sqrt(Var S)/(lambda sigma^2) + 2 sqrt(Var R)/(lambda sigma) + 2/sigma^2
double tv_bound(const BoundIngredients& ing);

/// 2 sqrt(q Var S)/(lambda sigma^2) + 2 q sqrt(Var R)/(lambda sigma)
///   + sqrt(Var R)/(lambda sigma^2) + 2/sigma^2
double loc_bound(const BoundIngredients& ing);

struct LipschitzLocBound {
  double value = 0.0;
  double moment_ratio = 0.0;  // E|W - mu|^3 / sigma^3
  double d_term = 0.0;        // d sigma^{3/2} + 1
};

/// 2 L (E|W-mu|^3/sigma^3 v (d sigma^{3/2} + 1))/(lambda sigma^2)
///   + 2 L q/(lambda sigma) + 2 q sqrt(Var R)/(lambda sigma)
///   + sqrt(Var R)/(lambda sigma^2) + 2/sigma^2
/// Throws missing_ingredient without L_S or d.
LipschitzLocBound lipschitz_loc_bound_terms(const BoundIngredients& ing);
double lipschitz_loc_bound(const BoundIngredients& ing);

/// (2 + sqrt(sum p^3 (1-p))) / sum p (1-p)
double pb_tv_bound(std::span<const double> p);

/// (1 - e^{-sigma^2 - f})/(sigma^2 + f) (sqrt(sum p^3(1-p)) + f)
///   + 1{sum p^2 >= 1} e^{-sigma^2/4},  f = frac(sum p^2).
double pb_refined_tv_bound(std::span<const double> p);

/// d_tv + 1/(2.3 sigma)
double qmax_bound(double d_tv, double sigma);

struct MomentBounds {
  double sigma2_lo = 0.0;
  double sigma2_hi = 0.0;
  double abs3_hi = 0.0;
};

/// sigma^2 in [(inf S - a)/lambda, (sup S - a)/lambda] and
/// E|W - mu|^3 <= (8q + 1 + sigma + E|R|(W-mu)^2)/lambda.
MomentBounds moment_bounds(double s_min, double s_max, double a, double lambda, double q_max,
                                    double sigma, double e_r_term);

/// n m (m+n)^2 (N-n)(N-m) / (m^2 (N-m+1)^2 (N-1) N^2)
double hyp_var_s_bound(long N, long m, long n);
/// (4n-2)^2 (n+1) / (16 n^2 (n+1)^2)
double parity_var_s_bound(long n);
/// (16 r^2 sigma^2 + Var Q) / (16 r^2 n^2)
double antivoter_var_s_bound(long r, long n, double sigma2, double var_q);

/// One bound compared with the exact quantity it controls:
/// holds iff exact <= bound (up to slack).
struct BoundCheck {
  std::string name;
  std::string reference;
  double bound = 0.0;
  double exact = 0.0;
  bool holds = false;
  bool vacuous = false;
};

struct BoundReport {
  std::string model;
  std::vector<std::pair<std::string, double>> parameters;
  TpParams tp;
  Distance d_tv;
  Distance d_loc;
  BoundIngredients ingredients;
  std::optional<LipschitzLocBound> lipschitz_terms;
  std::vector<BoundCheck> checks;

  bool all_hold() const noexcept;
  const BoundCheck* find(std::string_view name) const noexcept;
};

struct ReportOptions {
  double window_eps = kDefaultWindowEps;
  double slack = kDefaultTolerances.bound_slack;
};

/// Exact distances to TP(mu, sigma^2) plus every applicable bound.
BoundReport full_report(const PairModel& model, const ReportOptions& options = {});

/// exact <= bound + slack * max(1, |bound|)
bool dominates(double bound, double exact, double slack);

}  // namespace tpa
