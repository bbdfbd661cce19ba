#include "tpa_cli/serialize.hpp"

#include <cmath>
#include <limits>

namespace tpa {

namespace {

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double real(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

Json numbers(const std::vector<double>& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

std::vector<double> reals(const Json& j) {
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(real(x));
  return out;
}

Json optional_number(const std::optional<double>& x) { return x ? number(*x) : Json(nullptr); }

std::optional<double> optional_real(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

Json parameters(const std::vector<std::pair<std::string, double>>& ps) {
  Json out = Json::object();
  for (const auto& [k, v] : ps) out[k] = number(v);
  return out;
}

std::vector<std::pair<std::string, double>> parameters_from(const Json& j) {
  std::vector<std::pair<std::string, double>> out;
  for (auto it = j.begin(); it != j.end(); ++it) out.emplace_back(it.key(), real(it.value()));
  return out;
}

}  // namespace

void to_json(Json& j, const IntegerPmf& v) {
  j = Json{{"offset", v.offset()},
           {"probs", numbers(std::vector<double>(v.probs().begin(), v.probs().end()))},
           {"tail_mass", v.tail_mass()}};
}

void from_json(const Json& j, IntegerPmf& v) {
  v = IntegerPmf(j.at("offset").get<long>(), reals(j.at("probs")), j.at("tail_mass").get<double>());
}

void to_json(Json& j, const TpParams& v) {
  j = Json{{"mu", number(v.mu)}, {"sigma2", number(v.sigma2)}, {"shift", v.shift}, {"gamma", number(v.gamma)}};
}

void from_json(const Json& j, TpParams& v) {
  v.mu = real(j.at("mu"));
  v.sigma2 = real(j.at("sigma2"));
  v.shift = j.at("shift").get<long>();
  v.gamma = real(j.at("gamma"));
}

void to_json(Json& j, const Distance& v) { j = Json{{"value", number(v.value)}, {"bracket", number(v.bracket)}}; }

void from_json(const Json& j, Distance& v) {
  v.value = real(j.at("value"));
  v.bracket = real(j.at("bracket"));
}

void to_json(Json& j, const BoundIngredients& v) {
  j = Json{{"lambda", number(v.lambda)},
           {"sigma2", number(v.sigma2)},
           {"var_s", number(v.var_s)},
           {"var_r", number(v.var_r)},
           {"q_max", number(v.q_max)},
           {"e_abs3", number(v.e_abs3)},
           {"lipschitz_s", optional_number(v.lipschitz_s)},
           {"d_loc_bound", optional_number(v.d_loc_bound)}};
}

void from_json(const Json& j, BoundIngredients& v) {
  v.lambda = real(j.at("lambda"));
  v.sigma2 = real(j.at("sigma2"));
  v.var_s = real(j.at("var_s"));
  v.var_r = real(j.at("var_r"));
  v.q_max = real(j.at("q_max"));
  v.e_abs3 = real(j.at("e_abs3"));
  v.lipschitz_s = optional_real(j.at("lipschitz_s"));
  v.d_loc_bound = optional_real(j.at("d_loc_bound"));
}

void to_json(Json& j, const LipschitzLocBound& v) {
  j = Json{{"value", number(v.value)}, {"moment_ratio", number(v.moment_ratio)}, {"d_term", number(v.d_term)}};
}

void from_json(const Json& j, LipschitzLocBound& v) {
  v.value = real(j.at("value"));
  v.moment_ratio = real(j.at("moment_ratio"));
  v.d_term = real(j.at("d_term"));
}

void to_json(Json& j, const BoundCheck& v) {
  j = Json{{"name", v.name},       {"reference", v.reference}, {"bound", number(v.bound)},
           {"exact", number(v.exact)}, {"holds", v.holds},         {"vacuous", v.vacuous}};
}

void from_json(const Json& j, BoundCheck& v) {
  v.name = j.at("name").get<std::string>();
  v.reference = j.at("reference").get<std::string>();
  v.bound = real(j.at("bound"));
  v.exact = real(j.at("exact"));
  v.holds = j.at("holds").get<bool>();
  v.vacuous = j.at("vacuous").get<bool>();
}

void to_json(Json& j, const BoundReport& v) {
  j = Json{{"model", v.model},
           {"parameters", parameters(v.parameters)},
           {"tp", v.tp},
           {"d_tv", v.d_tv},
           {"d_loc", v.d_loc},
           {"ingredients", v.ingredients},
           {"lipschitz_terms", v.lipschitz_terms ? Json(*v.lipschitz_terms) : Json(nullptr)},
           {"checks", v.checks},
           {"all_hold", v.all_hold()}};
}

void from_json(const Json& j, BoundReport& v) {
  v.model = j.at("model").get<std::string>();
  v.parameters = parameters_from(j.at("parameters"));
  v.tp = j.at("tp").get<TpParams>();
  v.d_tv = j.at("d_tv").get<Distance>();
  v.d_loc = j.at("d_loc").get<Distance>();
  v.ingredients = j.at("ingredients").get<BoundIngredients>();
  const Json& lt = j.at("lipschitz_terms");
  v.lipschitz_terms = lt.is_null() ? std::nullopt : std::optional<LipschitzLocBound>(lt.get<LipschitzLocBound>());
  v.checks = j.at("checks").get<std::vector<BoundCheck>>();
}

void to_json(Json& j, const StationaryErrors& v) {
  j = Json{{"w_pmf", numbers(v.w_pmf)},
           {"var_q", number(v.var_q)},
           {"var_s_star", number(v.var_s_star)},
           {"mu", number(v.mu)},
           {"sigma2", number(v.sigma2)}};
}

void from_json(const Json& j, StationaryErrors& v) {
  v.w_pmf = reals(j.at("w_pmf"));
  v.var_q = real(j.at("var_q"));
  v.var_s_star = real(j.at("var_s_star"));
  v.mu = real(j.at("mu"));
  v.sigma2 = real(j.at("sigma2"));
}

void to_json(Json& j, const StationarySummary& v) {
  j = Json{{"graph", v.graph},
           {"vertices", v.vertices},
           {"degree", v.degree},
           {"complete_graph", v.complete_graph},
           {"exact", v.exact},
           {"w_pmf", v.w_pmf},
           {"mu", number(v.mu)},
           {"sigma2", number(v.sigma2)},
           {"e_abs3", number(v.e_abs3)},
           {"mean_q", number(v.mean_q)},
           {"var_q", number(v.var_q)},
           {"var_s_star", number(v.var_s_star)},
           {"e_wtilde_q", number(v.e_wtilde_q)},
           {"s_given_w", numbers(v.s_given_w)},
           {"down_given_w", numbers(v.down_given_w)},
           {"iterations", v.iterations},
           {"final_change", number(v.final_change)},
           {"errors", v.errors ? Json(*v.errors) : Json(nullptr)}};
}

void from_json(const Json& j, StationarySummary& v) {
  v.graph = j.at("graph").get<std::string>();
  v.vertices = j.at("vertices").get<long>();
  v.degree = j.at("degree").get<long>();
  v.complete_graph = j.at("complete_graph").get<bool>();
  v.exact = j.at("exact").get<bool>();
  v.w_pmf = j.at("w_pmf").get<IntegerPmf>();
  v.mu = real(j.at("mu"));
  v.sigma2 = real(j.at("sigma2"));
  v.e_abs3 = real(j.at("e_abs3"));
  v.mean_q = real(j.at("mean_q"));
  v.var_q = real(j.at("var_q"));
  v.var_s_star = real(j.at("var_s_star"));
  v.e_wtilde_q = real(j.at("e_wtilde_q"));
  v.s_given_w = reals(j.at("s_given_w"));
  v.down_given_w = reals(j.at("down_given_w"));
  v.iterations = j.at("iterations").get<long>();
  v.final_change = real(j.at("final_change"));
  const Json& e = j.at("errors");
  v.errors = e.is_null() ? std::nullopt : std::optional<StationaryErrors>(e.get<StationaryErrors>());
}

void to_json(Json& j, const CheckResult& v) {
  j = Json{{"name", v.name},
           {"reference", v.reference},
           {"value", number(v.value)},
           {"limit", number(v.limit)},
           {"passed", v.passed}};
}

void from_json(const Json& j, CheckResult& v) {
  v.name = j.at("name").get<std::string>();
  v.reference = j.at("reference").get<std::string>();
  v.value = real(j.at("value"));
  v.limit = real(j.at("limit"));
  v.passed = j.at("passed").get<bool>();
}

void to_json(Json& j, const SuiteResult& v) {
  j = Json{{"suite", v.suite}, {"passed", v.passed()}, {"checks", v.checks}};
}

void from_json(const Json& j, SuiteResult& v) {
  v.suite = j.at("suite").get<std::string>();
  v.checks = j.at("checks").get<std::vector<CheckResult>>();
}

void to_json(Json& j, const RateSeries& v) {
  j = Json{{"model", v.model},
           {"sizes", v.sizes},
           {"d_tv", numbers(v.d_tv)},
           {"d_loc", numbers(v.d_loc)},
           {"tv_slope", number(v.tv_slope)},
           {"loc_slope", number(v.loc_slope)}};
}

void from_json(const Json& j, RateSeries& v) {
  v.model = j.at("model").get<std::string>();
  v.sizes = j.at("sizes").get<std::vector<long>>();
  v.d_tv = reals(j.at("d_tv"));
  v.d_loc = reals(j.at("d_loc"));
  v.tv_slope = real(j.at("tv_slope"));
  v.loc_slope = real(j.at("loc_slope"));
}

void to_json(Json& j, const Envelope& v) {
  j = Json{{"tool", v.tool},
           {"version", v.version},
           {"command", v.command},
           {"seed", v.seed ? Json(*v.seed) : Json(nullptr)},
           {"payload", v.payload},
           {"timing_ms", v.timing_ms}};
}

void from_json(const Json& j, Envelope& v) {
  v.tool = j.at("tool").get<std::string>();
  v.version = j.at("version").get<std::string>();
  v.command = j.at("command").get<std::string>();
  const Json& s = j.at("seed");
  v.seed = s.is_null() ? std::nullopt : std::optional<std::uint64_t>(s.get<std::uint64_t>());
  v.payload = j.at("payload");
  v.timing_ms = j.at("timing_ms").get<double>();
}

}  // namespace tpa
