// One PASS/FAIL line per acceptance criterion. Tolerances and runtime
// limits are pinned here; the exit status is non-zero if any line fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tpa/antivoter.hpp"
#include "tpa/bounds.hpp"
#include "tpa/models.hpp"
#include "tpa/stein.hpp"
#include "tpa_cli/suites.hpp"

using namespace tpa;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  // Records a failed condition; keeps the first few messages.
  void require(bool cond, const std::string& what) {
    if (cond) return;
    if (ok || detail.size() < 400) detail += (detail.empty() ? "" : "; ") + what;
    ok = false;
  }
};

struct Criterion {
  int id;
  std::string title;
  double max_seconds;
  std::function<Outcome()> run;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct GridModel {
  std::string label;
  PairModel model;
};

// Exact grid: Poisson-binomial n <= 200 (equal and random p),
// hypergeometric N <= 60, parity n <= 128, anti-voter K4..K8 and Petersen.
const std::vector<GridModel>& grid() {
  static const std::vector<GridModel> g = [] {
    std::vector<GridModel> out;
    for (long n : {1L, 2L, 5L, 17L, 64L, 200L}) {
      for (double p : {0.02, 0.3, 0.5, 0.85}) {
        out.push_back({"binomial n=" + std::to_string(n) + " p=" + num(p),
                       build_poisson_binomial({std::vector<double>(static_cast<std::size_t>(n), p)})});
      }
    }
    Rng rng = make_rng(20261016);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (long n : {3L, 11L, 50L, 137L, 200L}) {
      std::vector<double> p(static_cast<std::size_t>(n));
      for (double& x : p) x = u(rng);
      out.push_back({"poisson-binomial random n=" + std::to_string(n), build_poisson_binomial({p})});
    }
    for (long N : {2L, 3L, 7L, 12L, 25L, 44L, 60L}) {
      for (long m = 1; m < N; ++m) {
        for (long n = 1; n <= N; ++n) {
          out.push_back({"hypergeometric N=" + std::to_string(N) + " m=" + std::to_string(m) +
                             " n=" + std::to_string(n),
                         build_hypergeometric({N, m, n})});
        }
      }
    }
    for (long n = 2; n <= 128; ++n) out.push_back({"parity n=" + std::to_string(n), build_parity({n})});
    for (long n = 4; n <= 8; ++n) {
      out.push_back({"antivoter K" + std::to_string(n),
                     pair_model_from_stationary(exact_stationary(complete_graph(n)))});
    }
    out.push_back({"antivoter petersen", pair_model_from_stationary(exact_stationary(petersen_graph()))});
    return out;
  }();
  return g;
}

bool equal_p(const PairModel& m) {
  const auto* pb = std::get_if<PoissonBinomialSpec>(&m.spec);
  if (!pb) return false;
  for (double p : pb->p) {
    if (p != pb->p.front()) return false;
  }
  return true;
}

Outcome exact_parameters() {
  Outcome o;
  for (long n : {2L, 10L, 50L}) {
    const Moments m = moments(parity_pmf(n));
    o.require(std::abs(m.variance - static_cast<double>(n + 1) / 16.0) <= 1e-13,
              "parity n=" + std::to_string(n) + " variance " + num(m.variance));
  }
  for (double mu : {1.0, 4.0, 25.0}) {
    const TpParams p = make_tp(mu, mu);
    double worst = 0.0;
    for (long k = 0; k <= static_cast<long>(mu + 40 * std::sqrt(mu) + 40); ++k) {
      worst = std::max(worst, std::abs(tp_pmf(p, k) - poisson_pmf(mu, k)));
    }
    o.require(worst <= 1e-15, "TP(mu,mu) vs Poisson at mu=" + num(mu) + " differs by " + num(worst));
  }
  if (o.ok) o.detail = "parity variance (n+1)/16 for n=2,10,50; TP(mu,mu)=Po(mu) to 1e-15";
  return o;
}

Outcome structural() {
  Outcome o;
  double worst = 0.0;
  for (const auto& [label, m] : grid()) {
    const double ex = verify_exchangeability(m);
    const double reg = verify_regression(m);
    const double sup = support_violation(m);
    const D1Identity d1 = verify_d1_identity(m);
    o.require(ex <= 1e-12, label + " exchangeability " + num(ex));
    o.require(reg <= 1e-12, label + " regression " + num(reg));
    o.require(sup == 0.0, label + " support " + num(sup));
    o.require(d1.gap <= 1e-12, label + " E D+1 gap " + num(d1.gap));
    worst = std::max({worst, ex, reg, d1.gap});
    if (m.r_values.empty() || std::all_of(m.r_values.begin(), m.r_values.end(), [](double r) { return r == 0.0; })) {
      const double wf = verify_w_function(m, m.w_pmf.offset() - 1, m.w_pmf.last() + 1);
      o.require(wf <= 1e-12, label + " w-function " + num(wf));
      worst = std::max(worst, wf);
    }
  }
  if (o.ok) o.detail = std::to_string(grid().size()) + " models, worst residual " + num(worst);
  return o;
}

Outcome stein() {
  Outcome o;
  double worst_res = 0.0;
  long solves = 0;
  for (double lambda : {0.5, 1.0, 4.0, 25.0, 100.0, 400.0}) {
    const long window = default_stein_window(lambda);
    const PoissonTable table(lambda, window);
    const std::string tag = " lambda=" + num(lambda);
    for (long i = 0; i <= window; ++i) {
      const SteinSolution sol = solve_stein(table, {i});
      const double res = stein_residual(sol);
      worst_res = std::max(worst_res, res);
      ++solves;
      const SupNorms n = sup_norms(sol);
      const DeltaSums s = delta_sums(sol);
      const std::string at = tag + " i=" + std::to_string(i);
      o.require(res <= 1e-10, "residual" + at + " " + num(res));
      o.require(dominates(1.0 / std::sqrt(lambda), n.g_sup, 1e-12), "sup g" + at);
      o.require(dominates((1.0 - std::exp(-lambda)) / lambda, n.dg_sup, 1e-12), "sup dg" + at);
      o.require(dominates(1.0 / lambda, n.g_sup, 1e-12), "singleton sup g" + at);
      o.require(dominates(2.0 / lambda, s.abs_sum, 1e-12), "sum |dg|" + at);
      o.require(dominates(4.0 / (lambda * lambda), s.sq_sum, 1e-12), "sum dg^2" + at);
    }
    for (double frac : {0.0, 0.25, 0.5, 0.99}) {
      for (double offset : {-3.0, 0.0, 17.0}) {
        const double m = tp_deviation_mass_max(make_tp(lambda + offset + frac, lambda));
        o.require(m <= 1.0, "deviation mass" + tag + " " + num(m));
      }
    }
  }
  if (o.ok) o.detail = std::to_string(solves) + " singleton solves, worst residual " + num(worst_res);
  return o;
}

Outcome dominance() {
  Outcome o;
  long checks = 0;
  for (const auto& [label, m] : grid()) {
    if (m.w_pmf.size() < 2) continue;  // degenerate W, no TP target
    const BoundReport rep = full_report(m);
    std::vector<std::string> need{"tv", "loc", "qmax", "sigma2_lower", "sigma2_upper", "abs3"};
    const bool lipschitz_defined = equal_p(m) || std::holds_alternative<HypergeometricSpec>(m.spec) ||
                                   std::holds_alternative<ParitySpec>(m.spec) ||
                                   (std::holds_alternative<AntiVoterSpec>(m.spec) && label.find("K") != std::string::npos);
    if (lipschitz_defined) need.push_back("loc_lipschitz");
    if (std::holds_alternative<HypergeometricSpec>(m.spec)) need.push_back("hyp_var_s");
    if (std::holds_alternative<ParitySpec>(m.spec)) need.push_back("parity_var_s");
    if (std::holds_alternative<AntiVoterSpec>(m.spec)) need.push_back("antivoter_var_s");
    for (const auto& name : need) o.require(rep.find(name) != nullptr, label + " missing " + name);
    for (const auto& c : rep.checks) {
      ++checks;
      o.require(c.holds, label + " " + c.name + ": exact " + num(c.exact) + " > bound " + num(c.bound));
    }
  }
  if (o.ok) o.detail = std::to_string(checks) + " bound checks, zero violations";
  return o;
}

Outcome binomial_value() {
  Outcome o;
  const std::vector<double> half(100, 0.5);
  const double b = pb_tv_bound(half);
  o.require(std::abs(b - 0.18) <= 1e-15, "bound " + num(b));
  const Distance d = d_tv(binomial_pmf(100, 0.5), tp_window(make_tp(50, 25)));
  o.require(d.value <= 0.18, "d_TV " + num(d.value));
  if (o.ok) o.detail = "bound 0.18, exact d_TV " + num(d.value);
  return o;
}

Outcome antivoter() {
  Outcome o;
  std::vector<Graph> graphs;
  for (long n = 4; n <= 8; ++n) graphs.push_back(complete_graph(n));
  graphs.push_back(petersen_graph());
  for (const Graph& g : graphs) {
    const StationarySummary s = exact_stationary(g);
    const double r = static_cast<double>(g.degree()), n = static_cast<double>(g.vertex_count());
    const double formula = (16 * r * r * s.sigma2 + s.var_q) / (16 * r * r * n * n);
    const double rel = std::abs(formula - s.var_s_star) / s.var_s_star;
    o.require(rel <= 1e-12, g.name() + " Var S* identity " + num(rel));
    o.require(std::abs(s.e_wtilde_q) <= 1e-12, g.name() + " E[W~Q] " + num(s.e_wtilde_q));
    if (g.is_complete()) {
      for (long w = 0; w <= g.vertex_count(); ++w) {
        if (s.w_pmf(w) <= 0.0) continue;
        const double wd = static_cast<double>(w);
        const double closed = (n * (n - 1) - (2 * n - 1) * wd + wd * wd) / (n * (n - 1));
        o.require(std::abs(closed - s.s_given_w[static_cast<std::size_t>(w)]) <= 1e-12,
                  g.name() + " S(w) at w=" + std::to_string(w));
      }
    }
    const double vs = var_s(pair_model_from_stationary(s));
    o.require(vs <= s.var_s_star + 1e-12, g.name() + " Var S > Var S*");
  }
  if (o.ok) o.detail = "K4..K8 and Petersen";
  return o;
}

Outcome rates() {
  Outcome o;
  std::string d;
  for (const char* model : {"binomial", "hypergeometric", "parity"}) {
    const RateSeries s = rate_series(model);
    o.require(s.tv_slope >= -0.65 && s.tv_slope <= -0.35, std::string(model) + " d_TV slope " + num(s.tv_slope));
    o.require(s.loc_slope >= -1.2 && s.loc_slope <= -0.8, std::string(model) + " d_loc slope " + num(s.loc_slope));
    d += (d.empty() ? "" : ", ") + std::string(model) + " " + num(s.tv_slope) + "/" + num(s.loc_slope);
  }
  if (o.ok) o.detail = "slopes d_TV/d_loc: " + d;
  return o;
}

Outcome mcmc() {
  Outcome o;
  double worst = 0.0;
  for (const Graph& g : {complete_graph(16), petersen_graph()}) {
    const StationarySummary exact = exact_stationary(g);
    const StationarySummary mc = mcmc_estimate(g, McmcOptions{1'000'000, 10'000, 8, 7});
    // A time average over T steps cannot resolve frequencies below 1/T.
    const double floor = 1.0 / (1'000'000.0 * 8.0);
    for (long w = 0; w <= g.vertex_count(); ++w) {
      const double se = std::max(mc.errors->w_pmf[static_cast<std::size_t>(w)], floor);
      const double z = std::abs(mc.w_pmf(w) - exact.w_pmf(w)) / se;
      worst = std::max(worst, z);
      o.require(z <= 3.0, g.name() + " w_pmf(" + std::to_string(w) + ") z=" + num(z));
    }
    const double zq = std::abs(mc.var_q - exact.var_q) / mc.errors->var_q;
    const double zs = std::abs(mc.var_s_star - exact.var_s_star) / mc.errors->var_s_star;
    o.require(zq <= 3.0, g.name() + " Var Q z=" + num(zq));
    o.require(zs <= 3.0, g.name() + " Var S* z=" + num(zs));
    worst = std::max({worst, zq, zs});
  }
  if (o.ok) o.detail = "K16 and Petersen, 10^6 steps x 8 chains, seed 7, worst |z| " + num(worst);
  return o;
}

struct Spawned {
  int code = -1;
  std::string err;
};

Spawned spawn(const std::string& exe, const std::string& args) {
  const std::string cmd = "'" + exe + "' " + args + " 2>&1 >/dev/null";
  Spawned s;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return s;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) s.err.append(buf, n);
  const int status = pclose(pipe);
  s.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return s;
}

Outcome cli_contract() {
  Outcome o;
  const Spawned good = spawn(TPA_CLI_PATH, "verify --suite all");
  o.require(good.code == 0, "verify --suite all exited " + std::to_string(good.code));
#ifdef TPA_HAVE_MUTANTS
  int caught = 0;
  for (int k = 1; k <= TPA_MUTANT_COUNT; ++k) {
    const std::string exe = std::string(TPA_MUTANT_DIR) + "/tpa_mutant_" + std::to_string(k);
    const Spawned m = spawn(exe, "verify --suite all");
    const bool rejected = m.code == 1 && m.err.find("FAILED") != std::string::npos &&
                          m.err.find("reference: ") != std::string::npos;
    o.require(rejected, "mutant " + std::to_string(k) + " exited " + std::to_string(m.code));
    caught += rejected ? 1 : 0;
  }
  if (o.ok) o.detail = "clean build exits 0; " + std::to_string(caught) + "/" + std::to_string(TPA_MUTANT_COUNT) +
                       " one-percent formula mutants rejected with a printed reference";
#else
  o.require(false, "mutants not built (TPA_MUTATION_TESTS=OFF)");
#endif
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "exact-parameter identities", 1.0, exact_parameters},
      {2, "structural identities on the exact model grid", 60.0, structural},
      {3, "Stein solution bounds over singleton sweeps", 30.0, stein},
      {4, "bound dominance on the exact model grid", 60.0, dominance},
      {5, "binomial n=100 p=1/2 bound equals 0.18", 1.0, binomial_value},
      {6, "anti-voter stationary identities", 300.0, antivoter},
      {7, "rate recovery of d_TV and d_loc", 60.0, rates},
      {8, "MCMC agrees with the exact stationary law", 120.0, mcmc},
      {9, "CLI contract and formula mutation check", 600.0, cli_contract},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.max_seconds) {
      o.ok = false;
      o.detail += "; runtime " + num(secs) + " s exceeds " + num(c.max_seconds) + " s";
    }
    std::printf("%s criterion %d: %s (%.2f s) %s\n", o.ok ? "PASS" : "FAIL", c.id, c.title.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
    failed += o.ok ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
