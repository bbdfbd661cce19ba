#include "tpa_cli/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>

#include "tpa/antivoter.hpp"
#include "tpa/bounds.hpp"
#include "tpa/error.hpp"
#include "tpa/models.hpp"
#include "tpa/stein.hpp"

namespace tpa {

bool SuiteResult::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"stein", "pairs", "antivoter", "rates", "bounds"};
  return names;
}

namespace {

// Accumulates the worst value of a quantity over many instances.
class Worst {
 public:
  Worst(std::string name, std::string reference, double limit)
      : name_(std::move(name)), reference_(std::move(reference)), limit_(limit) {}

  void see(double value, const std::string& where = {}) {
    if (!std::isfinite(value)) {
      value = std::numeric_limits<double>::infinity();
    }
    if (count_ == 0 || value > worst_) {
      worst_ = value;
      where_ = where;
    }
    ++count_;
  }

  CheckResult result() const {
    CheckResult c;
    c.name = name_ + (where_.empty() ? std::string{} : " (worst: " + where_ + ")");
    c.reference = reference_;
    c.value = count_ == 0 ? 0.0 : worst_;
    c.limit = limit_;
    c.passed = c.value <= limit_;
    return c;
  }

 private:
  std::string name_;
  std::string reference_;
  double limit_;
  double worst_ = 0.0;
  long count_ = 0;
  std::string where_;
};

CheckResult flag(std::string name, std::string reference, bool ok) {
  return CheckResult{std::move(name), std::move(reference), ok ? 0.0 : 1.0, 0.0, ok};
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Model grid shared by the pairs and bounds suites.

struct GridModel {
  std::string label;
  PairModel model;
};

std::vector<GridModel> model_grid(std::uint64_t seed) {
  std::vector<GridModel> grid;
  for (long n : {1L, 2L, 3L, 5L, 10L, 20L, 50L, 100L, 200L}) {
    for (double p : {0.01, 0.1, 0.5, 0.9}) {
      grid.push_back({"binomial n=" + std::to_string(n) + " p=" + fmt(p),
                      build_poisson_binomial({std::vector<double>(static_cast<std::size_t>(n), p)})});
    }
  }
  Rng rng = make_rng(split_seed(seed, 1));
  std::uniform_real_distribution<double> unif(0.02, 0.98);
  for (long n : {2L, 5L, 20L, 60L, 120L, 200L}) {
    for (int rep = 0; rep < 2; ++rep) {
      std::vector<double> p(static_cast<std::size_t>(n));
      for (double& x : p) x = unif(rng);
      grid.push_back({"poisson-binomial random n=" + std::to_string(n), build_poisson_binomial({p})});
    }
  }
  for (long N : {2L, 3L, 4L, 5L, 6L, 8L, 10L, 13L, 20L, 27L, 40L, 51L, 60L}) {
    for (long m = 1; m < N; ++m) {
      for (long n = 1; n <= N; ++n) {
        grid.push_back({"hypergeometric N=" + std::to_string(N) + " m=" + std::to_string(m) + " n=" +
                            std::to_string(n),
                        build_hypergeometric({N, m, n})});
      }
    }
  }
  for (long n = 2; n <= 128; ++n) grid.push_back({"parity n=" + std::to_string(n), build_parity({n})});
  for (long n = 4; n <= 8; ++n) {
    grid.push_back({"antivoter K" + std::to_string(n), pair_model_from_stationary(exact_stationary(complete_graph(n)))});
  }
  grid.push_back({"antivoter petersen", pair_model_from_stationary(exact_stationary(petersen_graph()))});
  return grid;
}

std::string family(const PairModel& m) { return m.name == "binomial" ? "poisson-binomial" : m.name; }

// ---------------------------------------------------------------------------

SuiteResult stein_suite(std::uint64_t seed) {
  SuiteResult out{"stein", {}};
  const double slack = kDefaultTolerances.bound_slack;
  for (double lambda : {0.5, 1.0, 4.0, 25.0, 100.0, 400.0}) {
    const std::string tag = "lambda=" + fmt(lambda);
    const PoissonTable table(lambda, default_stein_window(lambda));
    Worst residual("Stein equation residual, singletons, " + tag,
                   "lambda g(j+1) - j g(j) = 1{j in A} - Po(lambda){A}", kDefaultTolerances.stein_residual);
    Worst g_sup("sup |g_A| <= lambda^(-1/2), singletons, " + tag, "||g_A|| <= (sigma^2 + gamma)^(-1/2)", slack);
    Worst dg_sup("sup |Delta g_A| <= (1 - e^-lambda)/lambda, singletons, " + tag,
                 "||Delta g_A|| <= (1 - e^(-sigma^2-gamma))/(sigma^2 + gamma)", slack);
    Worst single("sup |g_{k}| <= 1/lambda, " + tag, "||g_{k}|| <= sigma^(-2)", slack);
    Worst abs_sum("sum |Delta g_i| <= 2/lambda, " + tag, "sum_k |Delta g_i(k)| <= 2 sigma^(-2)", slack);
    Worst sq_sum("sum (Delta g_i)^2 <= 4/lambda^2, " + tag, "sum_k (Delta g_i(k))^2 <= 4 sigma^(-4)", slack);
    bool shape = true;
    const long top = static_cast<long>(std::floor(lambda + 10.0 * std::sqrt(lambda)));
    for (long i = 0; i <= top; ++i) {
      const std::string at = "i=" + std::to_string(i);
      const SteinSolution sol = solve_stein(table, {i});
      residual.see(stein_residual(sol), at);
      const SupNorms norms = sup_norms(sol);
      g_sup.see(norms.g_sup - 1.0 / std::sqrt(lambda), at);
      dg_sup.see(norms.dg_sup + std::expm1(-lambda) / lambda, at);
      single.see(norms.g_sup - 1.0 / lambda, at);
      const DeltaSums sums = delta_sums(sol);
      abs_sum.see(sums.abs_sum - 2.0 / lambda, at);
      sq_sum.see(sums.sq_sum - 4.0 / (lambda * lambda), at);
      shape = shape && sums.shape_ok;
    }
    for (const Worst* w : {&residual, &g_sup, &dg_sup, &single, &abs_sum, &sq_sum}) out.checks.push_back(w->result());
    out.checks.push_back(flag("g_i negative and decreasing up to i, positive and decreasing after, " + tag,
                              "shape of the singleton Stein solution", shape));
  }

  // Random target sets.
  Rng rng = make_rng(split_seed(seed, 2));
  std::uniform_real_distribution<double> log_rate(std::log(0.5), std::log(400.0));
  Worst residual("Stein equation residual, random sets", "lambda g(j+1) - j g(j) = 1{j in A} - Po(lambda){A}",
                 kDefaultTolerances.stein_residual);
  Worst g_sup("sup |g_A| <= lambda^(-1/2), random sets", "||g_A|| <= (sigma^2 + gamma)^(-1/2)", slack);
  Worst dg_sup("sup |Delta g_A| <= (1 - e^-lambda)/lambda, random sets",
               "||Delta g_A|| <= (1 - e^(-sigma^2-gamma))/(sigma^2 + gamma)", slack);
  Worst linear("g_(A u B) = g_A + g_B for disjoint A, B", "linearity of the Stein equation in the indicator",
               kDefaultTolerances.stein_residual);
  for (int t = 0; t < 200; ++t) {
    const double lambda = std::exp(log_rate(rng));
    const long window = default_stein_window(lambda);
    const PoissonTable table(lambda, window);
    std::uniform_int_distribution<long> size(1, 12);
    std::uniform_int_distribution<long> point(0, window);
    std::vector<long> a, b;
    const long na = size(rng);
    for (long k = 0; k < na; ++k) a.push_back(point(rng));
    for (long k = 0; k < na; ++k) {
      const long x = point(rng);
      if (std::find(a.begin(), a.end(), x) == a.end()) b.push_back(x);
    }
    const std::string at = "lambda=" + fmt(lambda);
    const SteinSolution sa = solve_stein(table, a);
    const SteinSolution sb = solve_stein(table, b);
    std::vector<long> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    const SteinSolution sab = solve_stein(table, ab);
    residual.see(stein_residual(sa), at);
    const SupNorms norms = sup_norms(sa);
    g_sup.see(norms.g_sup - 1.0 / std::sqrt(lambda), at);
    dg_sup.see(norms.dg_sup + std::expm1(-lambda) / lambda, at);
    double gap = 0.0;
    for (long j = 0; j <= window + 1; ++j) gap = std::max(gap, std::abs(sab.g(j) - sa.g(j) - sb.g(j)));
    linear.see(gap, at);
  }
  for (const Worst* w : {&residual, &g_sup, &dg_sup, &linear}) out.checks.push_back(w->result());

  // Pointwise TP deviation mass.
  Worst tp_mass("max_k TP{k} |k - mu| <= 1", "TP(mu, sigma^2){k} |k - mu| <= 1 for all k", 1.0);
  const std::vector<std::pair<double, double>> fixed{{50.0, 25.0}, {5.3, 4.1}, {0.1, 0.1}, {4.0, 4.0}, {-3.7, 0.4}};
  for (auto [mu, s2] : fixed) tp_mass.see(tp_deviation_mass_max(make_tp(mu, s2)), "mu=" + fmt(mu) + " s2=" + fmt(s2));
  std::uniform_real_distribution<double> mu_dist(-50.0, 500.0);
  std::uniform_real_distribution<double> s2_dist(std::log(0.01), std::log(400.0));
  for (int t = 0; t < 200; ++t) {
    const double mu = mu_dist(rng);
    const double s2 = std::exp(s2_dist(rng));
    tp_mass.see(tp_deviation_mass_max(make_tp(mu, s2)), "mu=" + fmt(mu) + " s2=" + fmt(s2));
  }
  out.checks.push_back(tp_mass.result());
  return out;
}

// ---------------------------------------------------------------------------

SuiteResult pairs_suite(const std::vector<GridModel>& grid) {
  SuiteResult out{"pairs", {}};
  const double tol = kDefaultTolerances.identity;
  struct Family {
    Worst exch, support, marginal, regression, d1, wfun;
  };
  std::map<std::string, Family> families;
  for (const auto& [label, model] : grid) {
    const std::string fam = family(model);
    auto it = families.find(fam);
    if (it == families.end()) {
      const std::string tag = " [" + fam + "]";
      it = families
               .emplace(fam, Family{Worst("exchangeability asymmetry" + tag, "(W, W') and (W', W) have the same law", tol),
                                    Worst("mass on |W' - W| > 1" + tag, "W' - W in {-1, 0, 1}", 0.0),
                                    Worst("joint marginals equal L(W)" + tag, "W' has the law of W", tol),
                                    Worst("regression residual" + tag,
                                          "E[W' - mu | W] = (1 - lambda)(W - mu) + R", tol),
                                    Worst("E D_+1 = lambda sigma^2 + E[(W - mu)R]" + tag,
                                          "E D_+1 = (1/2) E(W' - W)^2 = lambda sigma^2 + E[(W - mu) R]", tol),
                                    Worst("w-function identity with w = S/lambda" + tag,
                                          "E[(W - mu) f(W)] = E[(S(W)/lambda) Delta f(W)]", tol)})
               .first;
    }
    Family& f = it->second;
    f.exch.see(verify_exchangeability(model), label);
    f.support.see(support_violation(model), label);
    f.marginal.see(marginal_discrepancy(model), label);
    f.regression.see(verify_regression(model), label);
    f.d1.see(verify_d1_identity(model).gap, label);
    f.wfun.see(verify_w_function(model, model.w_pmf.offset() - 1, model.w_pmf.last() + 1), label);
  }
  for (const auto& [name, f] : families) {
    for (const Worst* w : {&f.exch, &f.support, &f.marginal, &f.regression, &f.d1, &f.wfun}) {
      out.checks.push_back(w->result());
    }
  }
  // Exact variance of the parity model.
  Worst parity_var("parity sigma^2 = (n + 1)/16", "sigma^2 = (n + 1)/16", tol);
  for (long n = 2; n <= 128; ++n) {
    parity_var.see(std::abs(moments(parity_pmf(n)).variance - (static_cast<double>(n) + 1.0) / 16.0),
                   "n=" + std::to_string(n));
  }
  out.checks.push_back(parity_var.result());
  return out;
}

// ---------------------------------------------------------------------------

SuiteResult antivoter_suite(std::uint64_t seed) {
  SuiteResult out{"antivoter", {}};
  const double tol = kDefaultTolerances.identity;
  Worst var_identity("Var S* = (16 r^2 sigma^2 + Var Q)/(16 r^2 n^2), relative",
                     "Var S* = (16 r^2 sigma^2 + Var Q)/(16 r^2 n^2)", tol);
  Worst wq("E[W~ Q] = 0", "E[W~ Q] = 0 by flip symmetry", tol);
  Worst symmetric("w_pmf(w) = w_pmf(n - w)", "flip symmetry of the stationary law", tol);
  Worst complete_s("E[S* | W = w] = (n(n-1) - (2n-1)w + w^2)/(n(n-1)) on K_n",
                   "S(W) = (n(n-1) - (2n-1)W + W^2)/(n(n-1)) on the complete graph", tol);
  Worst var_order("Var S - Var S* <= 0", "Var S <= Var S*", tol);
  Worst two_forms("S* summed directly vs (rn - 2rW~ + Q)/(4rn)", "S*(J) = (rn - 2r W~ + Q)/(4rn)", tol);

  std::vector<Graph> graphs;
  for (long n = 4; n <= 8; ++n) graphs.push_back(complete_graph(n));
  graphs.push_back(petersen_graph());
  Rng rng = make_rng(split_seed(seed, 3));
  std::bernoulli_distribution coin(0.5);
  for (const Graph& g : graphs) {
    const StationarySummary s = exact_stationary(g);
    const long n = g.vertex_count();
    const double r = static_cast<double>(g.degree());
    const double nd = static_cast<double>(n);
    const double formula = (16.0 * r * r * s.sigma2 + s.var_q) / (16.0 * r * r * nd * nd);
    var_identity.see(std::abs(formula - s.var_s_star) / s.var_s_star, g.name());
    wq.see(std::abs(s.e_wtilde_q), g.name());
    for (long w = 0; w <= n; ++w) symmetric.see(std::abs(s.w_pmf(w) - s.w_pmf(n - w)), g.name());
    if (g.is_complete()) {
      for (long w = 0; w <= n; ++w) {
        if (s.w_pmf(w) <= 0.0) continue;
        const double wd = static_cast<double>(w);
        const double closed = (nd * (nd - 1.0) - (2.0 * nd - 1.0) * wd + wd * wd) / (nd * (nd - 1.0));
        complete_s.see(std::abs(closed - s.s_given_w[static_cast<std::size_t>(w)]), g.name());
      }
    }
    const PairModel model = pair_model_from_stationary(s);
    var_order.see(var_s(model) - s.var_s_star, g.name());
    for (int t = 0; t < 10000; ++t) {
      Configuration c{std::vector<std::uint8_t>(static_cast<std::size_t>(n))};
      for (auto& j : c.opinions) j = coin(rng) ? 1 : 0;
      two_forms.see(std::abs(s_star(c, g) - s_star_via_q(c, g)), g.name());
    }
  }
  for (const Worst* w : {&var_identity, &wq, &symmetric, &complete_s, &var_order, &two_forms}) {
    out.checks.push_back(w->result());
  }

  // Monte Carlo against the exact solver.
  for (const Graph& g : {complete_graph(16), petersen_graph()}) {
    const StationarySummary exact = exact_stationary(g);
    McmcOptions opts;
    opts.steps = 1'000'000;
    opts.burnin = 10'000;
    opts.chains = 8;
    opts.seed = seed;
    const StationarySummary mc = mcmc_estimate(g, opts);
    // A time average over T steps cannot resolve frequencies below 1/T.
    const double floor = 1.0 / static_cast<double>(opts.steps * opts.chains);
    Worst pmf("MCMC w_pmf within 3 SE of exact [" + g.name() + "]", "stationary law of W", 3.0);
    for (long w = 0; w <= g.vertex_count(); ++w) {
      const double se = std::max(mc.errors->w_pmf[static_cast<std::size_t>(w)], floor);
      pmf.see(std::abs(mc.w_pmf(w) - exact.w_pmf(w)) / se, "w=" + std::to_string(w));
    }
    Worst vq("MCMC Var Q within 3 SE of exact [" + g.name() + "]", "Var Q under the stationary law", 3.0);
    vq.see(std::abs(mc.var_q - exact.var_q) / mc.errors->var_q);
    Worst vs("MCMC Var S* within 3 SE of exact [" + g.name() + "]", "Var S* under the stationary law", 3.0);
    vs.see(std::abs(mc.var_s_star - exact.var_s_star) / mc.errors->var_s_star);
    for (const Worst* w : {&pmf, &vq, &vs}) out.checks.push_back(w->result());
  }
  return out;
}

// ---------------------------------------------------------------------------

double slope(const std::vector<long>& xs, const std::vector<double>& ys) {
  const double k = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = std::log(static_cast<double>(xs[i]));
    const double y = std::log(ys[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

SuiteResult rates_suite() {
  SuiteResult out{"rates", {}};
  for (const char* model : {"binomial", "hypergeometric", "parity"}) {
    const RateSeries s = rate_series(model);
    const std::string m = model;
    const bool tv_ok = s.tv_slope >= -0.65 && s.tv_slope <= -0.35;
    const bool loc_ok = s.loc_slope >= -1.2 && s.loc_slope <= -0.8;
    out.checks.push_back(CheckResult{"d_TV log-log slope in [-0.65, -0.35] [" + m + "]",
                                     "d_TV = O(n^(-1/2))", s.tv_slope, -0.35, tv_ok});
    out.checks.push_back(CheckResult{"d_loc log-log slope in [-1.2, -0.8] [" + m + "]", "d_loc = O(n^(-1))",
                                     s.loc_slope, -0.8, loc_ok});
  }
  return out;
}

// ---------------------------------------------------------------------------

SuiteResult bounds_suite(const std::vector<GridModel>& grid) {
  SuiteResult out{"bounds", {}};
  const double slack = kDefaultTolerances.bound_slack;

  // Dominance over the model grid: worst relative excess of exact over bound.
  std::map<std::string, Worst> excess;
  std::vector<std::string> order;
  for (const auto& [label, model] : grid) {
    if (!(moments(model.w_pmf).variance > 0.0)) continue;
    const BoundReport rep = full_report(model);
    for (const BoundCheck& c : rep.checks) {
      const std::string key = c.name + " [" + family(model) + "]";
      auto it = excess.find(key);
      if (it == excess.end()) {
        it = excess.emplace(key, Worst("exact <= bound: " + key, c.reference, slack)).first;
        order.push_back(key);
      }
      it->second.see((c.exact - c.bound) / std::max(1.0, std::abs(c.bound)), label);
    }
  }
  for (const auto& key : order) out.checks.push_back(excess.at(key).result());

  // Formula values against high-precision evaluations.
  Worst golden("bound formulas match high-precision reference values", "closed-form bound displays",
               kDefaultTolerances.identity);
  const auto rel = [](double got, double want) { return std::abs(got - want) / std::abs(want); };
  BoundIngredients ing;
  ing.lambda = 0.05;
  ing.sigma2 = 20.0;
  ing.var_s = 4e-4;
  ing.var_r = 1e-4;
  ing.q_max = 0.09;
  ing.e_abs3 = 150.0;
  ing.lipschitz_s = 0.002;
  ing.d_loc_bound = 0.3;
  golden.see(rel(tv_bound(ing), 0.20944271909999158786), "total variation bound");
  golden.see(rel(loc_bound(ing), 0.13004984471899924291), "local bound");
  golden.see(rel(lipschitz_loc_bound(ing), 0.13500871297083720125), "Lipschitz local bound");
  const std::vector<double> p{0.1, 0.3, 0.5, 0.7, 0.9, 0.25, 0.8, 0.6};
  golden.see(rel(pb_tv_bound(p), 1.862409712527321869), "Poisson-binomial bound");
  golden.see(rel(pb_refined_tv_bound(p), 1.269198231638624387), "refined Poisson-binomial bound");
  golden.see(rel(qmax_bound(0.05, 3.0), 0.19492753623188405797), "q_max bound");
  const MomentBounds mb = moment_bounds(0.1, 0.4, 0.01, 0.05, 0.09, 4.0, 0.2);
  golden.see(rel(mb.sigma2_lo, 1.8), "variance lower bound");
  golden.see(rel(mb.sigma2_hi, 7.8), "variance upper bound");
  golden.see(rel(mb.abs3_hi, 118.4), "third moment bound");
  golden.see(rel(hyp_var_s_bound(20, 10, 10), 0.043497172683775554589), "hypergeometric Var S bound");
  golden.see(rel(parity_var_s_bound(10), 0.082045454545454545455), "parity Var S bound");
  golden.see(rel(antivoter_var_s_bound(3, 4, 1.25, 2.0), 0.078993055555555555556), "anti-voter Var S bound");
  out.checks.push_back(golden.result());

  // Binomial n = 100, p = 1/2: the explicit bound is 0.18 and the general
  // bound with the same ingredients agrees with it.
  const std::vector<double> half(100, 0.5);
  Worst binomial("binomial n=100 p=1/2 bound equals 0.18", "(2 + sqrt(sum p^3(1-p)))/sum p(1-p)", 1e-14);
  binomial.see(rel(pb_tv_bound(half), 0.18));
  out.checks.push_back(binomial.result());
  Worst consistent("general bound with R = 0, Var S = n^-2 sum p^3(1-p) equals the Poisson-binomial bound",
                   "sqrt(Var S)/(lambda sigma^2) + 2/sigma^2 with lambda = 1/n", 1e-14);
  Rng rng = make_rng(7);
  std::uniform_real_distribution<double> unif(0.01, 0.99);
  for (long n : {1L, 2L, 7L, 30L, 100L, 250L}) {
    std::vector<double> q(static_cast<std::size_t>(n));
    double var = 0.0, cubic = 0.0;
    for (double& x : q) {
      x = unif(rng);
      var += x * (1.0 - x);
      cubic += x * x * x * (1.0 - x);
    }
    BoundIngredients e;
    e.lambda = 1.0 / static_cast<double>(n);
    e.sigma2 = var;
    e.var_s = cubic / static_cast<double>(n * n);
    e.q_max = 1.0;
    consistent.see(rel(tv_bound(e), pb_tv_bound(q)), "n=" + std::to_string(n));
  }
  out.checks.push_back(consistent.result());
  return out;
}

}  // namespace

RateSeries rate_series(std::string_view model) {
  RateSeries s;
  s.model = std::string(model);
  const auto add = [&](long size, const IntegerPmf& pmf) {
    const Moments mom = moments(pmf);
    const IntegerPmf tp = tp_window(make_tp(mom.mean, mom.variance));
    s.sizes.push_back(size);
    s.d_tv.push_back(d_tv(pmf, tp).value);
    s.d_loc.push_back(d_loc(pmf, tp).value);
  };
  if (model == "binomial") {
    for (long n : {16L, 32L, 64L, 128L, 256L}) add(n, binomial_pmf(n, 0.5));
  } else if (model == "hypergeometric") {
    for (long n : {8L, 16L, 32L, 64L}) add(n, hypergeometric_pmf({2 * n, n, n}));
  } else if (model == "parity") {
    for (long n : {16L, 32L, 64L, 128L}) add(n, parity_pmf(n));
  } else {
    throw Error(ErrorKind::invalid_parameter, "unknown rate-study model '" + s.model + "'");
  }
  s.tv_slope = slope(s.sizes, s.d_tv);
  s.loc_slope = slope(s.sizes, s.d_loc);
  return s;
}

std::vector<SuiteResult> run_suites(std::string_view name, std::uint64_t seed) {
  const auto& names = suite_names();
  if (name != "all" && std::find(names.begin(), names.end(), name) == names.end()) {
    throw Error(ErrorKind::invalid_parameter, "unknown suite '" + std::string(name) + "'");
  }
  std::vector<GridModel> grid;
  const auto need_grid = [&] {
    if (grid.empty()) grid = model_grid(seed);
  };
  std::vector<SuiteResult> out;
  const auto want = [&](std::string_view s) { return name == "all" || name == s; };
  if (want("stein")) out.push_back(stein_suite(seed));
  if (want("pairs")) {
    need_grid();
    out.push_back(pairs_suite(grid));
  }
  if (want("antivoter")) out.push_back(antivoter_suite(seed));
  if (want("rates")) out.push_back(rates_suite());
  if (want("bounds")) {
    need_grid();
    out.push_back(bounds_suite(grid));
  }
  return out;
}

}  // namespace tpa
