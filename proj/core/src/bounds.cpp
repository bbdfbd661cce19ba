#include "tpa/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>

#include "tpa/error.hpp"

// Development hook: building with -DTPA_BOUND_MUTATION=k scales formula k
// by 1.01, which the verification suites must detect.
#ifdef TPA_BOUND_MUTATION
#define TPA_MUTATE(id, x) ((id) == (TPA_BOUND_MUTATION) ? 1.01 * (x) : (x))
#else
#define TPA_MUTATE(id, x) (x)
#endif

namespace tpa {

void BoundIngredients::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::invalid_parameter, "lambda must be positive");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw Error(ErrorKind::invalid_parameter, "sigma2 must be positive");
  if (!(var_s >= 0.0) || !(var_r >= 0.0)) {
    throw Error(ErrorKind::invalid_parameter, "Var S and Var R must be non-negative");
  }
  if (!(q_max > 0.0 && q_max <= 1.0)) throw Error(ErrorKind::invalid_parameter, "q_max must lie in (0, 1]");
  if (!(e_abs3 >= 0.0)) throw Error(ErrorKind::invalid_parameter, "E|W - mu|^3 must be non-negative");
  if (lipschitz_s && !(*lipschitz_s >= 0.0)) {
    throw Error(ErrorKind::invalid_parameter, "Lipschitz constant must be non-negative");
  }
}

double tv_bound(const BoundIngredients& ing) {
  ing.validate();
  const double sigma = std::sqrt(ing.sigma2);
  const double value = std::sqrt(ing.var_s) / (ing.lambda * ing.sigma2) +
                       2.0 * std::sqrt(ing.var_r) / (ing.lambda * sigma) + 2.0 / ing.sigma2;
  return TPA_MUTATE(1, value);
}

double loc_bound(const BoundIngredients& ing) {
  ing.validate();
  const double sigma = std::sqrt(ing.sigma2);
  const double sd_r = std::sqrt(ing.var_r);
  const double value = 2.0 * std::sqrt(ing.q_max * ing.var_s) / (ing.lambda * ing.sigma2) +
                       2.0 * ing.q_max * sd_r / (ing.lambda * sigma) + sd_r / (ing.lambda * ing.sigma2) +
                       2.0 / ing.sigma2;
  return TPA_MUTATE(2, value);
}

LipschitzLocBound lipschitz_loc_bound_terms(const BoundIngredients& ing) {
  ing.validate();
  if (!ing.lipschitz_s) throw Error(ErrorKind::missing_ingredient, "Lipschitz constant L_S not supplied");
  if (!ing.d_loc_bound) throw Error(ErrorKind::missing_ingredient, "local bound d not supplied");
  const double l = *ing.lipschitz_s;
  const double d = *ing.d_loc_bound;
  const double sigma = std::sqrt(ing.sigma2);
  const double sd_r = std::sqrt(ing.var_r);
  LipschitzLocBound out;
  out.moment_ratio = ing.e_abs3 / (ing.sigma2 * sigma);
  out.d_term = d * std::pow(sigma, 1.5) + 1.0;
  const double value = 2.0 * l * std::max(out.moment_ratio, out.d_term) / (ing.lambda * ing.sigma2) +
                       2.0 * l * ing.q_max / (ing.lambda * sigma) + 2.0 * ing.q_max * sd_r / (ing.lambda * sigma) +
                       sd_r / (ing.lambda * ing.sigma2) + 2.0 / ing.sigma2;
  out.value = TPA_MUTATE(3, value);
  return out;
}

double lipschitz_loc_bound(const BoundIngredients& ing) { return lipschitz_loc_bound_terms(ing).value; }

namespace {

struct PbSums {
  double var = 0.0;    // sum p (1 - p)
  double cubic = 0.0;  // sum p^3 (1 - p)
  double sq = 0.0;     // sum p^2
};

PbSums pb_sums(std::span<const double> p) {
  if (p.empty()) throw Error(ErrorKind::invalid_parameter, "Poisson-binomial needs at least one indicator");
  PbSums s;
  for (double pi : p) {
    if (!(pi >= 0.0 && pi <= 1.0)) throw Error(ErrorKind::invalid_parameter, "probabilities must lie in [0, 1]");
    s.var += pi * (1.0 - pi);
    s.cubic += pi * pi * pi * (1.0 - pi);
    s.sq += pi * pi;
  }
  if (!(s.var > 0.0)) throw Error(ErrorKind::invalid_parameter, "Poisson-binomial law is degenerate");
  return s;
}

}  // namespace

double pb_tv_bound(std::span<const double> p) {
  const PbSums s = pb_sums(p);
  return TPA_MUTATE(4, (2.0 + std::sqrt(s.cubic)) / s.var);
}

double pb_refined_tv_bound(std::span<const double> p) {
  const PbSums s = pb_sums(p);
  const double f = s.sq - std::floor(s.sq);
  const double denom = s.var + f;
  const double value = -std::expm1(-denom) / denom * (std::sqrt(s.cubic) + f) +
                       (s.sq >= 1.0 ? std::exp(-s.var / 4.0) : 0.0);
  return TPA_MUTATE(5, value);
}

double qmax_bound(double d_tv, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::invalid_parameter, "sigma must be positive");
  if (!(d_tv >= 0.0 && d_tv <= 1.0)) throw Error(ErrorKind::invalid_parameter, "d_tv must lie in [0, 1]");
  return TPA_MUTATE(6, d_tv + 1.0 / (2.3 * sigma));
}

MomentBounds moment_bounds(double s_min, double s_max, double a, double lambda, double q_max,
                                    double sigma, double e_r_term) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::invalid_parameter, "lambda must be positive");
  MomentBounds out;
  out.sigma2_lo = TPA_MUTATE(7, (s_min - a) / lambda);
  out.sigma2_hi = TPA_MUTATE(8, (s_max - a) / lambda);
  out.abs3_hi = TPA_MUTATE(9, (8.0 * q_max + 1.0 + sigma + e_r_term) / lambda);
  return out;
}

double hyp_var_s_bound(long N, long m, long n) {
  if (N < 2 || m < 1 || n < 1 || m > N || n > N) {
    throw Error(ErrorKind::invalid_parameter, "hypergeometric bound needs 1 <= m, n <= N and N >= 2");
  }
  const double Nd = static_cast<double>(N);
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  const double num = nd * md * (md + nd) * (md + nd) * (Nd - nd) * (Nd - md);
  const double den = md * md * (Nd - md + 1.0) * (Nd - md + 1.0) * (Nd - 1.0) * Nd * Nd;
  return TPA_MUTATE(10, num / den);
}

double parity_var_s_bound(long n) {
  if (n < 2) throw Error(ErrorKind::invalid_parameter, "parity bound needs n >= 2");
  const double nd = static_cast<double>(n);
  const double a = 4.0 * nd - 2.0;
  return TPA_MUTATE(11, a * a * (nd + 1.0) / (16.0 * nd * nd * (nd + 1.0) * (nd + 1.0)));
}

double antivoter_var_s_bound(long r, long n, double sigma2, double var_q) {
  if (r < 1 || n < 1 || sigma2 < 0.0 || var_q < 0.0) {
    throw Error(ErrorKind::invalid_parameter, "anti-voter bound needs r, n >= 1 and non-negative variances");
  }
  const double rd = static_cast<double>(r);
  const double nd = static_cast<double>(n);
  return TPA_MUTATE(12, (16.0 * rd * rd * sigma2 + var_q) / (16.0 * rd * rd * nd * nd));
}

// ---------------------------------------------------------------------------

bool dominates(double bound, double exact, double slack) {
  return exact <= bound + slack * std::max(1.0, std::abs(bound));
}

bool BoundReport::all_hold() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.holds; });
}

const BoundCheck* BoundReport::find(std::string_view name) const noexcept {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

BoundReport full_report(const PairModel& model, const ReportOptions& options) {
  const Moments mom = moments(model.w_pmf);
  if (!(mom.variance > 0.0)) {
    throw Error(ErrorKind::precondition, "bound report needs a non-degenerate W (sigma^2 > 0)");
  }
  BoundReport rep;
  rep.model = model.name;
  rep.parameters = model.parameters;
  rep.tp = make_tp(mom.mean, mom.variance);
  const IntegerPmf tp = tp_window(rep.tp, options.window_eps);
  rep.d_tv = d_tv(model.w_pmf, tp);
  rep.d_loc = d_loc(model.w_pmf, tp);

  const double sigma = std::sqrt(mom.variance);
  BoundIngredients& ing = rep.ingredients;
  ing.lambda = model.lambda;
  ing.sigma2 = mom.variance;
  ing.var_s = var_s(model);
  ing.var_r = var_r(model);
  ing.q_max = mom.q_max;
  ing.e_abs3 = mom.abs_central_3;
  ing.lipschitz_s = model.lipschitz_s;

  const auto add = [&](std::string name, std::string reference, double bound, double exact, bool distance) {
    BoundCheck c;
    c.name = std::move(name);
    c.reference = std::move(reference);
    c.bound = bound;
    c.exact = exact;
    c.holds = dominates(bound, exact, options.slack);
    c.vacuous = distance && bound > 1.0;
    rep.checks.push_back(std::move(c));
  };

  const double tv = tv_bound(ing);
  add("tv", "d_TV <= sqrt(Var S)/(lambda sigma^2) + 2 sqrt(Var R)/(lambda sigma) + 2/sigma^2", tv,
      rep.d_tv.value, true);
  const double loc = loc_bound(ing);
  add("loc",
      "d_loc <= 2 sqrt(q_max Var S)/(lambda sigma^2) + 2 q_max sqrt(Var R)/(lambda sigma) + sqrt(Var R)/(lambda "
      "sigma^2) + 2/sigma^2",
      loc, rep.d_loc.value, true);
  ing.d_loc_bound = loc;
  if (ing.lipschitz_s) {
    rep.lipschitz_terms = lipschitz_loc_bound_terms(ing);
    add("loc_lipschitz",
        "d_loc <= 2 L_S max(E|W-mu|^3/sigma^3, d sigma^(3/2) + 1)/(lambda sigma^2) + 2 L_S q_max/(lambda sigma) + "
        "2 q_max sqrt(Var R)/(lambda sigma) + sqrt(Var R)/(lambda sigma^2) + 2/sigma^2, d = the d_loc bound",
        rep.lipschitz_terms->value, rep.d_loc.value, true);
  }

  if (const auto* pb = std::get_if<PoissonBinomialSpec>(&model.spec)) {
    add("pb_tv", "Poisson-binomial d_TV <= (2 + sqrt(sum p^3(1-p)))/sum p(1-p)", pb_tv_bound(pb->p),
        rep.d_tv.value, true);
    add("pb_refined_tv",
        "Poisson-binomial d_TV <= (1 - e^(-sigma^2-f))/(sigma^2+f) (sqrt(sum p^3(1-p)) + f) + 1{sum p^2 >= 1} "
        "e^(-sigma^2/4), f = frac(sum p^2)",
        pb_refined_tv_bound(pb->p), rep.d_tv.value, true);
  } else if (const auto* hyp = std::get_if<HypergeometricSpec>(&model.spec)) {
    add("hyp_var_s", "hypergeometric Var S <= nm(m+n)^2(N-n)(N-m)/(m^2(N-m+1)^2(N-1)N^2)",
        hyp_var_s_bound(hyp->urns, hyp->balls, hyp->marked), ing.var_s, false);
  } else if (const auto* par = std::get_if<ParitySpec>(&model.spec)) {
    add("parity_var_s", "parity Var S <= (4n-2)^2(n+1)/(16n^2(n+1)^2)", parity_var_s_bound(par->n), ing.var_s,
        false);
  } else if (const auto* av = std::get_if<AntiVoterSpec>(&model.spec)) {
    add("antivoter_var_s", "anti-voter Var S <= (16 r^2 sigma^2 + Var Q)/(16 r^2 n^2)",
        antivoter_var_s_bound(av->degree, av->vertices, mom.variance, av->var_q), ing.var_s, false);
    add("antivoter_var_s_star", "Var S = Var E[S*(J) | W] <= Var S*(J)", av->var_s_star, ing.var_s, false);
  }

  add("qmax", "q_max <= d_TV + 1/(2.3 sigma)", qmax_bound(std::clamp(rep.d_tv.lower(), 0.0, 1.0), sigma),
      mom.q_max, true);

  const auto [s_min, s_max] = s_range(model);
  const auto [a, e_r] = r_moments(model);
  const MomentBounds mb = moment_bounds(s_min, s_max, a, model.lambda, mom.q_max, sigma, e_r);
  add("sigma2_lower", "(inf S - E[R(W-mu)])/lambda <= sigma^2", mom.variance, mb.sigma2_lo, false);
  add("sigma2_upper", "sigma^2 <= (sup S - E[R(W-mu)])/lambda", mb.sigma2_hi, mom.variance, false);
  add("abs3", "E|W-mu|^3 <= (8 q_max + 1 + sigma + E[|R|(W-mu)^2])/lambda", mb.abs3_hi, mom.abs_central_3, false);
  return rep;
}

}  // namespace tpa
