#include "tpa_cli/commands.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tpa/bounds.hpp"
#include "tpa/error.hpp"
#include "tpa/models.hpp"
#include "tpa_cli/serialize.hpp"
#include "tpa_cli/suites.hpp"

#ifndef TPA_VERSION
#define TPA_VERSION "0.0.0"
#endif

namespace tpa {

Graph resolve_graph(const std::string& source) {
  if (source == "petersen") return petersen_graph();
  if (source.size() > 1 && source[0] == 'K' &&
      source.find_first_not_of("0123456789", 1) == std::string::npos) {
    return complete_graph(std::stol(source.substr(1)));
  }
  std::ifstream in(source);
  if (!in) throw Error(ErrorKind::invalid_parameter, "cannot read graph file '" + source + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string name = source;
  const auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  return load_graph(buf.str(), name);
}

long exact_vertex_limit() {
  if (const char* env = std::getenv("STEIN_TPA_EXACT_LIMIT")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      throw Error(ErrorKind::invalid_parameter, "STEIN_TPA_EXACT_LIMIT must be a positive integer");
    }
    return v;
  }
  return ExactStationaryOptions{}.max_vertices;
}

namespace {

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string echo(int argc, const char* const* argv) {
  std::string out;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) out += ' ';
    out += argv[i];
  }
  return out;
}

struct Options {
  std::string format = "json";
  double eps = kDefaultWindowEps;
  // tp
  double mu = 0.0;
  double sigma2 = 0.0;
  std::optional<long> kmin, kmax;
  // bound
  std::string model;
  std::optional<long> n, N, m;
  std::optional<double> p, lipschitz;
  std::vector<double> probs;
  std::string graph;
  // verify / antivoter
  std::string suite = "all";
  std::uint64_t seed = 7;
  std::string mode = "exact";
  long steps = 1'000'000;
  long burnin = 10'000;
  long chains = 8;
};

template <class T>
T need(const std::optional<T>& v, const char* flag, const std::string& model) {
  if (!v) throw CLI::ValidationError(std::string(flag), "required for --model " + model);
  return *v;
}

PairModel build_model(const Options& o) {
  if (o.model == "binomial") {
    const long n = need(o.n, "--n", o.model);
    if (n < 1) throw Error(ErrorKind::invalid_parameter, "--n must be positive");
    return build_poisson_binomial({std::vector<double>(static_cast<std::size_t>(n), need(o.p, "--p", o.model))});
  }
  if (o.model == "poisson-binomial") {
    if (o.probs.empty()) throw CLI::ValidationError("--probs", "required for --model poisson-binomial");
    return build_poisson_binomial({o.probs});
  }
  if (o.model == "hypergeometric") {
    return build_hypergeometric({need(o.N, "--N", o.model), need(o.m, "--m", o.model), need(o.n, "--n", o.model)});
  }
  if (o.model == "parity") return build_parity({need(o.n, "--n", o.model)});
  if (o.model == "antivoter") {
    if (o.graph.empty()) throw CLI::ValidationError("--graph", "required for --model antivoter");
    ExactStationaryOptions eo;
    eo.max_vertices = exact_vertex_limit();
    return pair_model_from_stationary(exact_stationary(resolve_graph(o.graph), eo), o.lipschitz);
  }
  throw CLI::ValidationError("--model", "unknown model '" + o.model + "'");
}

void print_failures(const std::vector<std::pair<std::string, std::string>>& failures, std::ostream& err) {
  for (const auto& [name, reference] : failures) err << "FAILED " << name << "\n  reference: " << reference << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  Options o;
  CLI::App app{"Translated Poisson approximation: exact distances, error bounds and verification suites", "tpa"};
  app.set_version_flag("--version", TPA_VERSION);
  app.require_subcommand(1);

  auto* tp = app.add_subcommand("tp", "Translated Poisson pmf table");
  tp->add_option("--mu", o.mu, "mean")->required();
  tp->add_option("--sigma2", o.sigma2, "variance")->required()->check(CLI::PositiveNumber);
  tp->add_option("--kmin", o.kmin, "first k (default: window start)");
  tp->add_option("--kmax", o.kmax, "last k (default: window end)");
  tp->add_option("--eps", o.eps, "tail mass left outside the default window")->check(CLI::PositiveNumber);
  tp->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));

  auto* bound = app.add_subcommand("bound", "Bound report for one model");
  bound->add_option("--model", o.model, "binomial | poisson-binomial | hypergeometric | parity | antivoter")
      ->required()
      ->check(CLI::IsMember({"binomial", "poisson-binomial", "hypergeometric", "parity", "antivoter"}));
  bound->add_option("--n", o.n, "trials / marked urns / parity bits");
  bound->add_option("--p", o.p, "success probability (binomial)");
  bound->add_option("--probs", o.probs, "comma-separated probabilities (poisson-binomial)")->delimiter(',');
  bound->add_option("--N", o.N, "urns (hypergeometric)");
  bound->add_option("--m", o.m, "balls (hypergeometric)");
  bound->add_option("--graph", o.graph, "K<n>, petersen, or edge-list file (antivoter)");
  bound->add_option("--lipschitz", o.lipschitz, "Lipschitz constant of S for non-complete graphs");
  bound->add_option("--eps", o.eps, "tail mass left outside the TP window")->check(CLI::PositiveNumber);
  bound->add_option("--format", o.format)->check(CLI::IsMember({"json"}));

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", o.suite, "stein | pairs | antivoter | rates | bounds | all")
      ->check(CLI::IsMember({"stein", "pairs", "antivoter", "rates", "bounds", "all"}));
  verify->add_option("--seed", o.seed, "seed for randomized checks");
  verify->add_option("--format", o.format, "csv is available for --suite rates")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* av = app.add_subcommand("antivoter", "Stationary summary of the anti-voter model");
  av->add_option("--graph", o.graph, "K<n>, petersen, or edge-list file")->required();
  av->add_option("--mode", o.mode)->check(CLI::IsMember({"exact", "mcmc"}));
  av->add_option("--steps", o.steps)->check(CLI::PositiveNumber);
  av->add_option("--burnin", o.burnin)->check(CLI::NonNegativeNumber);
  av->add_option("--chains", o.chains)->check(CLI::PositiveNumber);
  av->add_option("--seed", o.seed);
  av->add_option("--format", o.format)->check(CLI::IsMember({"json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Envelope env;
  env.version = TPA_VERSION;
  env.command = echo(argc, argv);
  int status = kExitOk;
  std::vector<std::pair<std::string, std::string>> failures;
  std::string csv;

  try {
    if (*tp) {
      const TpParams params = make_tp(o.mu, o.sigma2);
      long lo = 0, hi = 0;
      if (!o.kmin || !o.kmax) {
        const IntegerPmf window = tp_window(params, o.eps);
        lo = window.offset();
        hi = window.last();
      }
      if (o.kmin) lo = *o.kmin;
      if (o.kmax) hi = *o.kmax;
      if (hi < lo) throw CLI::ValidationError("--kmax", "must not be below --kmin");
      Json rows = Json::array();
      csv = "k,pmf\n";
      for (long k = lo; k <= hi; ++k) {
        const double v = tp_pmf(params, k);
        rows.push_back(Json{{"k", k}, {"pmf", v}});
        csv += std::to_string(k) + "," + csv_number(v) + "\n";
      }
      env.payload = Json{{"params", params}, {"rows", rows}};
    } else if (*bound) {
      const PairModel model = build_model(o);
      ReportOptions ro;
      ro.window_eps = o.eps;
      const BoundReport rep = full_report(model, ro);
      env.payload = rep;
      for (const auto& c : rep.checks) {
        if (!c.holds) failures.emplace_back(c.name, c.reference);
      }
    } else if (*verify) {
      if (o.format == "csv" && o.suite != "rates") {
        throw CLI::ValidationError("--format", "csv output is only available for --suite rates");
      }
      env.seed = o.seed;
      const std::vector<SuiteResult> results = run_suites(o.suite, o.seed);
      bool passed = true;
      for (const auto& s : results) {
        passed = passed && s.passed();
        for (const auto& c : s.checks) {
          if (!c.passed) failures.emplace_back(s.suite + ": " + c.name, c.reference);
        }
      }
      env.payload = Json{{"suite", o.suite}, {"passed", passed}, {"results", results}};
      if (o.suite == "rates" || o.suite == "all") {
        Json series = Json::array();
        csv = "model,n,d_tv,d_loc\n";
        for (const char* m : {"binomial", "hypergeometric", "parity"}) {
          const RateSeries s = rate_series(m);
          series.push_back(s);
          for (std::size_t i = 0; i < s.sizes.size(); ++i) {
            csv += s.model + "," + std::to_string(s.sizes[i]) + "," + csv_number(s.d_tv[i]) + "," +
                   csv_number(s.d_loc[i]) + "\n";
          }
        }
        env.payload["rate_series"] = series;
      }
    } else if (*av) {
      const Graph g = resolve_graph(o.graph);
      StationarySummary s;
      if (o.mode == "exact") {
        ExactStationaryOptions eo;
        eo.max_vertices = exact_vertex_limit();
        s = exact_stationary(g, eo);
      } else {
        env.seed = o.seed;
        s = mcmc_estimate(g, McmcOptions{o.steps, o.burnin, o.chains, o.seed});
      }
      env.payload = s;
    }
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return kExitUsage;
  }

  if (!failures.empty()) {
    status = kExitCheckFailed;
    print_failures(failures, err);
  }
  env.timing_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  if (o.format == "csv") {
    out << csv;
  } else {
    out << Json(env).dump(2) << "\n";
  }
  return status;
}

}  // namespace tpa
