#include "tpa/antivoter.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <string>
#include <thread>

#include "tpa/error.hpp"

namespace tpa {

// ---------------------------------------------------------------------------
// Graph

Graph Graph::from_edges(long n, const std::vector<std::pair<long, long>>& edges, std::string name) {
  if (n < 1) throw Error(ErrorKind::invalid_parameter, "graph needs at least one vertex");
  Graph g;
  g.name_ = std::move(name);
  g.adjacency_.assign(static_cast<std::size_t>(n), {});
  std::set<std::pair<long, long>> seen;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw Error(ErrorKind::invalid_parameter, "edge endpoint out of range");
    }
    if (u == v) throw Error(ErrorKind::invalid_parameter, "self-loop at vertex " + std::to_string(u));
    if (!seen.insert(std::minmax(u, v)).second) {
      throw Error(ErrorKind::invalid_parameter,
                  "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    }
    g.adjacency_[static_cast<std::size_t>(u)].push_back(v);
    g.adjacency_[static_cast<std::size_t>(v)].push_back(u);
  }
  for (auto& nb : g.adjacency_) std::sort(nb.begin(), nb.end());

  const auto r = static_cast<long>(g.adjacency_.front().size());
  for (long i = 0; i < n; ++i) {
    if (static_cast<long>(g.adjacency_[static_cast<std::size_t>(i)].size()) != r) {
      throw Error(ErrorKind::regularity, "graph is not regular: vertex " + std::to_string(i) + " has degree " +
                                             std::to_string(g.adjacency_[static_cast<std::size_t>(i)].size()) +
                                             ", vertex 0 has degree " + std::to_string(r));
    }
  }
  if (r == 0) throw Error(ErrorKind::regularity, "graph has no edges");
  g.degree_ = r;

  // 2-colouring BFS over every component.
  std::vector<int> colour(static_cast<std::size_t>(n), -1);
  bool bipartite = true;
  long components = 0;
  for (long s = 0; s < n; ++s) {
    if (colour[static_cast<std::size_t>(s)] >= 0) continue;
    ++components;
    colour[static_cast<std::size_t>(s)] = 0;
    std::deque<long> queue{s};
    while (!queue.empty()) {
      const long u = queue.front();
      queue.pop_front();
      for (long v : g.adjacency_[static_cast<std::size_t>(u)]) {
        int& cv = colour[static_cast<std::size_t>(v)];
        if (cv < 0) {
          cv = 1 - colour[static_cast<std::size_t>(u)];
          queue.push_back(v);
        } else if (cv == colour[static_cast<std::size_t>(u)]) {
          bipartite = false;
        }
      }
    }
  }
  g.connected_ = components == 1;
  g.bipartite_ = bipartite;
  g.cycle_ = r == 2 && g.connected_;

  if (g.bipartite_ && g.cycle_) {
    throw Error(ErrorKind::excluded_graph, "graph is a cycle of length " + std::to_string(n) +
                                               " and bipartite; the anti-voter results assume neither");
  }
  if (g.bipartite_) throw Error(ErrorKind::excluded_graph, "graph is bipartite; the anti-voter results exclude it");
  if (g.cycle_) {
    throw Error(ErrorKind::excluded_graph,
                "graph is a cycle of length " + std::to_string(n) + "; the anti-voter results exclude it");
  }
  return g;
}

Graph complete_graph(long n) {
  if (n <= 3) {
    throw Error(ErrorKind::excluded_graph,
                "K" + std::to_string(n) + " is excluded: complete graphs need n >= 4 (K3 is a cycle)");
  }
  std::vector<std::pair<long, long>> edges;
  for (long u = 0; u < n; ++u) {
    for (long v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return Graph::from_edges(n, edges, "K" + std::to_string(n));
}

Graph petersen_graph() {
  std::vector<std::pair<long, long>> edges;
  for (long i = 0; i < 5; ++i) {
    edges.emplace_back(i, (i + 1) % 5);
    edges.emplace_back(5 + i, 5 + (i + 2) % 5);
    edges.emplace_back(i, 5 + i);
  }
  return Graph::from_edges(10, edges, "petersen");
}

namespace {

struct Line {
  long number;
  std::vector<long> fields;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  long number = 0;
  while (!text.empty()) {
    const std::size_t end = text.find('\n');
    std::string_view raw = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    raw = raw.substr(0, raw.find('#'));
    const std::size_t first = raw.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;

    Line line{number, {}};
    std::size_t pos = first;
    while (pos < raw.size()) {
      const std::size_t stop = std::min(raw.find_first_of(" \t\r", pos), raw.size());
      const std::string_view tok = raw.substr(pos, stop - pos);
      long value = 0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
      if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError("expected an integer, found '" + std::string(tok) + "'", number);
      }
      line.fields.push_back(value);
      pos = raw.find_first_not_of(" \t\r", stop);
      if (pos == std::string_view::npos) break;
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace

Graph load_graph(std::string_view text, std::string name) {
  const std::vector<Line> lines = tokenize(text);
  if (lines.empty()) throw ParseError("empty graph file", 1);
  const Line& header = lines.front();
  if (header.fields.size() != 2) throw ParseError("header must be 'n m'", header.number);
  const long n = header.fields[0];
  const long m = header.fields[1];
  if (n < 1 || m < 0) throw ParseError("header needs n >= 1 and m >= 0", header.number);
  if (static_cast<long>(lines.size()) - 1 != m) {
    const long at = static_cast<long>(lines.size()) - 1 < m ? lines.back().number : lines[static_cast<std::size_t>(m + 1)].number;
    throw ParseError("header announces " + std::to_string(m) + " edges, file has " +
                         std::to_string(lines.size() - 1),
                     at);
  }
  std::vector<std::pair<long, long>> edges;
  std::set<std::pair<long, long>> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (line.fields.size() != 2) throw ParseError("edge line must be 'u v'", line.number);
    const long u = line.fields[0];
    const long v = line.fields[1];
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw ParseError("vertex index out of range [0, " + std::to_string(n - 1) + "]", line.number);
    }
    if (u == v) throw ParseError("self-loop at vertex " + std::to_string(u), line.number);
    if (!seen.insert(std::minmax(u, v)).second) {
      throw ParseError("duplicate edge " + std::to_string(u) + " " + std::to_string(v), line.number);
    }
    edges.emplace_back(u, v);
  }
  return Graph::from_edges(n, edges, std::move(name));
}

// ---------------------------------------------------------------------------
// Configurations

long Configuration::ones() const noexcept {
  return static_cast<long>(std::count(opinions.begin(), opinions.end(), std::uint8_t{1}));
}

Configuration step(const Configuration& c, const Graph& g, Rng& rng) {
  std::uniform_int_distribution<long> pick_vertex(0, g.vertex_count() - 1);
  std::uniform_int_distribution<long> pick_neighbor(0, g.degree() - 1);
  const long i = pick_vertex(rng);
  const long j = g.neighbors(i)[static_cast<std::size_t>(pick_neighbor(rng))];
  Configuration next = c;
  next.opinions[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(1 - c.opinions[static_cast<std::size_t>(j)]);
  return next;
}

long q_statistic(const Configuration& c, const Graph& g) {
  long q = 0;
  for (long i = 0; i < g.vertex_count(); ++i) {
    const long xi = 2 * c.opinions[static_cast<std::size_t>(i)] - 1;
    for (long j : g.neighbors(i)) q += xi * (2 * c.opinions[static_cast<std::size_t>(j)] - 1);
  }
  return q;
}

double s_star(const Configuration& c, const Graph& g) {
  const double r = static_cast<double>(g.degree());
  double total = 0.0;
  for (long i = 0; i < g.vertex_count(); ++i) {
    if (c.opinions[static_cast<std::size_t>(i)] != 0) continue;
    double ones = 0.0;
    for (long j : g.neighbors(i)) ones += c.opinions[static_cast<std::size_t>(j)];
    total += 1.0 - ones / r;
  }
  return total / static_cast<double>(g.vertex_count());
}

double s_star_via_q(const Configuration& c, const Graph& g) {
  const double n = static_cast<double>(g.vertex_count());
  const double r = static_cast<double>(g.degree());
  const double w_tilde = 2.0 * static_cast<double>(c.ones()) - n;
  const double q = static_cast<double>(q_statistic(c, g));
  return (r * n - 2.0 * r * w_tilde + q) / (4.0 * r * n);
}

// ---------------------------------------------------------------------------
// Exact stationary law

namespace {

std::vector<std::uint32_t> neighbor_masks(const Graph& g) {
  std::vector<std::uint32_t> masks(static_cast<std::size_t>(g.vertex_count()), 0);
  for (long i = 0; i < g.vertex_count(); ++i) {
    for (long j : g.neighbors(i)) masks[static_cast<std::size_t>(i)] |= std::uint32_t{1} << j;
  }
  return masks;
}

void check_exact_limit(const Graph& g, long limit) {
  const long cap = std::min(limit, 26L);
  if (g.vertex_count() > cap) {
    throw SizeLimitError("exact stationary solve limited to n <= " + std::to_string(cap) + " vertices (graph has " +
                             std::to_string(g.vertex_count()) + "); use mcmc_estimate instead",
                         cap);
  }
}

}  // namespace

std::vector<double> stationary_vector(const Graph& g, const ExactStationaryOptions& options, long* iterations,
                                      double* final_change) {
  check_exact_limit(g, options.max_vertices);
  const long n = g.vertex_count();
  const long r = g.degree();
  const std::size_t states = std::size_t{1} << n;
  const std::vector<std::uint32_t> masks = neighbor_masks(g);

  // Disagreement counts d_i(c): number of neighbours of i whose opinion
  // differs from J_i. Vertex i flips when the chosen neighbour agrees, so
  // c -> c ^ e_i has probability (r - d_i(c)) / (n r) and c stays put with
  // the remaining mass. Since r - d_i(c ^ e_i) = d_i(c), the pulled-back
  // update is
  //   pi'(c) = (1/(n r)) sum_i d_i(c) [pi(c) + pi(c ^ e_i)].
  std::vector<std::uint8_t> disagree(states * static_cast<std::size_t>(n));
  for (std::size_t c = 0; c < states; ++c) {
    const auto cfg = static_cast<std::uint32_t>(c);
    for (long i = 0; i < n; ++i) {
      const int ones = std::popcount(cfg & masks[static_cast<std::size_t>(i)]);
      const bool set = (cfg >> i) & 1U;
      disagree[c * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] =
          static_cast<std::uint8_t>(set ? r - ones : ones);
    }
  }

  const double scale = 1.0 / static_cast<double>(n * r);
  std::vector<double> pi(states, 1.0 / static_cast<double>(states));
  std::vector<double> next(states);
  long iter = 0;
  double change = 1.0;
  while (iter < options.max_iterations) {
    ++iter;
    for (std::size_t c = 0; c < states; ++c) {
      const std::uint8_t* d = &disagree[c * static_cast<std::size_t>(n)];
      const double here = pi[c];
      double acc = 0.0;
      for (long i = 0; i < n; ++i) acc += static_cast<double>(d[i]) * (here + pi[c ^ (std::size_t{1} << i)]);
      next[c] = scale * acc;
    }
    double total = 0.0;
    for (double v : next) total += v;
    change = 0.0;
    for (std::size_t c = 0; c < states; ++c) {
      next[c] /= total;
      change += std::abs(next[c] - pi[c]);
    }
    pi.swap(next);
    if (change <= options.tolerance) break;
  }
  if (iterations) *iterations = iter;
  if (final_change) *final_change = change;
  return pi;
}

StationarySummary exact_stationary(const Graph& g, const ExactStationaryOptions& options) {
  long iterations = 0;
  double change = 0.0;
  const std::vector<double> pi = stationary_vector(g, options, &iterations, &change);
  const long n = g.vertex_count();
  const long r = g.degree();
  const double nr = static_cast<double>(n * r);
  const std::vector<std::uint32_t> masks = neighbor_masks(g);
  const auto width = static_cast<std::size_t>(n + 1);

  std::vector<double> w_mass(width, 0.0), s_mass(width, 0.0), down_mass(width, 0.0);
  // Unweighted fallbacks for values of W that carry no stationary mass.
  std::vector<double> s_plain(width, 0.0), down_plain(width, 0.0), count(width, 0.0);
  double e_q = 0.0, e_q2 = 0.0, e_s = 0.0, e_s2 = 0.0, e_wq = 0.0;
  for (std::size_t c = 0; c < pi.size(); ++c) {
    const auto cfg = static_cast<std::uint32_t>(c);
    const int w = std::popcount(cfg);
    long up_count = 0;    // sum_i (1 - J_i) * #{neighbours with J = 0}
    long down_count = 0;  // sum_i J_i * #{neighbours with J = 1}
    long q = 0;
    for (long i = 0; i < n; ++i) {
      const int ones = std::popcount(cfg & masks[static_cast<std::size_t>(i)]);
      const bool set = (cfg >> i) & 1U;
      if (set) {
        down_count += ones;
      } else {
        up_count += r - ones;
      }
      q += (set ? 1 : -1) * (2 * ones - r);
    }
    const double s = static_cast<double>(up_count) / nr;
    const double down = static_cast<double>(down_count) / nr;
    const double p = pi[c];
    const auto wi = static_cast<std::size_t>(w);
    w_mass[wi] += p;
    s_mass[wi] += p * s;
    down_mass[wi] += p * down;
    s_plain[wi] += s;
    down_plain[wi] += down;
    count[wi] += 1.0;
    const double qd = static_cast<double>(q);
    e_q += p * qd;
    e_q2 += p * qd * qd;
    e_s += p * s;
    e_s2 += p * s * s;
    e_wq += p * static_cast<double>(2 * w - n) * qd;
  }

  StationarySummary out;
  out.graph = g.name();
  out.vertices = n;
  out.degree = r;
  out.complete_graph = g.is_complete();
  out.s_given_w.resize(width);
  out.down_given_w.resize(width);
  for (std::size_t w = 0; w < width; ++w) {
    if (w_mass[w] > 0.0) {
      out.s_given_w[w] = s_mass[w] / w_mass[w];
      out.down_given_w[w] = down_mass[w] / w_mass[w];
    } else {
      out.s_given_w[w] = s_plain[w] / count[w];
      out.down_given_w[w] = down_plain[w] / count[w];
    }
  }
  // Renormalise away the last few ulps so the pmf validates.
  const double total = std::accumulate(w_mass.begin(), w_mass.end(), 0.0);
  for (double& p : w_mass) p /= total;
  out.w_pmf = IntegerPmf(0, std::move(w_mass));
  const Moments mom = moments(out.w_pmf);
  out.mu = mom.mean;
  out.sigma2 = mom.variance;
  out.e_abs3 = mom.abs_central_3;
  out.mean_q = e_q;
  out.var_q = std::max(0.0, e_q2 - e_q * e_q);
  out.var_s_star = std::max(0.0, e_s2 - e_s * e_s);
  out.e_wtilde_q = e_wq;
  out.exact = true;
  out.iterations = iterations;
  out.final_change = change;
  return out;
}

// ---------------------------------------------------------------------------
// Monte Carlo

namespace {

struct ChainResult {
  std::vector<double> w_freq;
  std::vector<double> s_sum;  // sum of S* over visits, per w
  double mean_q = 0.0;
  double var_q = 0.0;
  double var_s = 0.0;
  double mu = 0.0;
  double sigma2 = 0.0;
};

ChainResult run_chain(const Graph& g, const McmcOptions& options, std::uint64_t chain) {
  const long n = g.vertex_count();
  const long r = g.degree();
  Rng rng = make_rng(split_seed(options.seed, chain));
  std::uniform_int_distribution<long> pick_vertex(0, n - 1);
  std::uniform_int_distribution<long> pick_neighbor(0, r - 1);
  std::bernoulli_distribution coin(0.5);

  std::vector<std::uint8_t> J(static_cast<std::size_t>(n));
  for (auto& j : J) j = coin(rng) ? 1 : 0;
  // ones_nb[i] = number of neighbours of i holding opinion 1.
  std::vector<long> ones_nb(static_cast<std::size_t>(n), 0);
  long w = 0;
  for (long i = 0; i < n; ++i) {
    w += J[static_cast<std::size_t>(i)];
    for (long j : g.neighbors(i)) ones_nb[static_cast<std::size_t>(i)] += J[static_cast<std::size_t>(j)];
  }
  long q = 0;
  for (long i = 0; i < n; ++i) {
    q += (2 * J[static_cast<std::size_t>(i)] - 1) * (2 * ones_nb[static_cast<std::size_t>(i)] - r);
  }

  const auto advance = [&] {
    const long i = pick_vertex(rng);
    const long j = g.neighbors(i)[static_cast<std::size_t>(pick_neighbor(rng))];
    const auto next = static_cast<std::uint8_t>(1 - J[static_cast<std::size_t>(j)]);
    const std::uint8_t prev = J[static_cast<std::size_t>(i)];
    if (next == prev) return;
    const long delta = next - prev;
    J[static_cast<std::size_t>(i)] = next;
    w += delta;
    q += 2 * (2 * delta) * (2 * ones_nb[static_cast<std::size_t>(i)] - r);
    for (long k : g.neighbors(i)) ones_nb[static_cast<std::size_t>(k)] += delta;
  };

  for (long t = 0; t < options.burnin; ++t) advance();

  const double nd = static_cast<double>(n);
  const double rd = static_cast<double>(r);
  ChainResult res;
  res.w_freq.assign(static_cast<std::size_t>(n + 1), 0.0);
  res.s_sum.assign(static_cast<std::size_t>(n + 1), 0.0);
  double sq = 0.0, sq2 = 0.0, ss = 0.0, ss2 = 0.0, sw = 0.0, sw2 = 0.0;
  for (long t = 0; t < options.steps; ++t) {
    advance();
    const double qd = static_cast<double>(q);
    const double wt = 2.0 * static_cast<double>(w) - nd;
    const double s = (rd * nd - 2.0 * rd * wt + qd) / (4.0 * rd * nd);
    res.w_freq[static_cast<std::size_t>(w)] += 1.0;
    res.s_sum[static_cast<std::size_t>(w)] += s;
    sq += qd;
    sq2 += qd * qd;
    ss += s;
    ss2 += s * s;
    sw += static_cast<double>(w);
    sw2 += static_cast<double>(w) * static_cast<double>(w);
  }
  const double T = static_cast<double>(options.steps);
  for (double& f : res.w_freq) f /= T;
  res.mean_q = sq / T;
  res.var_q = sq2 / T - res.mean_q * res.mean_q;
  res.var_s = ss2 / T - (ss / T) * (ss / T);
  res.mu = sw / T;
  res.sigma2 = sw2 / T - res.mu * res.mu;
  return res;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe across(const std::vector<double>& xs) {
  const double k = static_cast<double>(xs.size());
  MeanSe out;
  for (double x : xs) out.mean += x;
  out.mean /= k;
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.se = std::sqrt(ss / (k - 1.0) / k);
  return out;
}

}  // namespace

StationarySummary mcmc_estimate(const Graph& g, const McmcOptions& options) {
  if (options.chains < 1) throw Error(ErrorKind::precondition, "mcmc_estimate needs at least one chain");
  if (options.steps < 1) throw Error(ErrorKind::precondition, "mcmc_estimate needs steps > 0");
  if (options.burnin < 0) throw Error(ErrorKind::precondition, "mcmc_estimate needs burnin >= 0");

  const auto chains = static_cast<std::size_t>(options.chains);
  std::vector<ChainResult> results(chains);
  {
    std::vector<std::thread> workers;
    workers.reserve(chains);
    for (std::size_t k = 0; k < chains; ++k) {
      workers.emplace_back([&, k] { results[k] = run_chain(g, options, k); });
    }
    for (auto& t : workers) t.join();
  }

  const long n = g.vertex_count();
  const auto width = static_cast<std::size_t>(n + 1);
  const auto collect = [&](auto field) {
    std::vector<double> xs;
    xs.reserve(chains);
    for (const auto& res : results) xs.push_back(field(res));
    return across(xs);
  };

  StationarySummary out;
  out.graph = g.name();
  out.vertices = n;
  out.degree = g.degree();
  out.complete_graph = g.is_complete();
  out.exact = false;
  StationaryErrors errors;
  std::vector<double> w_pmf(width);
  errors.w_pmf.resize(width);
  for (std::size_t w = 0; w < width; ++w) {
    const MeanSe m = collect([w](const ChainResult& c) { return c.w_freq[w]; });
    w_pmf[w] = m.mean;
    errors.w_pmf[w] = m.se;
  }
  const double total = std::accumulate(w_pmf.begin(), w_pmf.end(), 0.0);
  for (double& p : w_pmf) p /= total;

  out.s_given_w.assign(width, 0.0);
  out.down_given_w.assign(width, 0.0);
  const double nd = static_cast<double>(n);
  for (std::size_t w = 0; w < width; ++w) {
    double visits = 0.0;
    double s = 0.0;
    for (const auto& res : results) {
      visits += res.w_freq[w];
      s += res.s_sum[w] / static_cast<double>(options.steps);
    }
    out.s_given_w[w] = visits > 0.0 ? s / visits : std::numeric_limits<double>::quiet_NaN();
    // E[down* | W] = E[S* | W] - (1 - 2W/n) holds configuration by configuration.
    out.down_given_w[w] = out.s_given_w[w] - (1.0 - 2.0 * static_cast<double>(w) / nd);
  }

  const MeanSe q = collect([](const ChainResult& c) { return c.var_q; });
  const MeanSe s = collect([](const ChainResult& c) { return c.var_s; });
  const MeanSe mu = collect([](const ChainResult& c) { return c.mu; });
  const MeanSe s2 = collect([](const ChainResult& c) { return c.sigma2; });
  out.var_q = q.mean;
  out.var_s_star = s.mean;
  out.mean_q = collect([](const ChainResult& c) { return c.mean_q; }).mean;
  errors.var_q = q.se;
  errors.var_s_star = s.se;
  errors.mu = mu.se;
  errors.sigma2 = s2.se;

  out.w_pmf = IntegerPmf(0, std::move(w_pmf));
  const Moments mom = moments(out.w_pmf);
  out.mu = mom.mean;
  out.sigma2 = mom.variance;
  out.e_abs3 = mom.abs_central_3;
  out.e_wtilde_q = std::numeric_limits<double>::quiet_NaN();
  out.iterations = options.steps;
  out.final_change = 0.0;
  out.errors = std::move(errors);
  return out;
}

// ---------------------------------------------------------------------------

PairModel pair_model_from_stationary(const StationarySummary& summary, std::optional<double> lipschitz_s) {
  if (!summary.exact) {
    throw Error(ErrorKind::precondition, "pair model needs an exact stationary summary, not a Monte-Carlo one");
  }
  const double n = static_cast<double>(summary.vertices);
  if (!lipschitz_s && summary.complete_graph) lipschitz_s = 2.0 / (n - 1.0);

  std::vector<double> r(summary.s_given_w.size(), 0.0);
  AntiVoterSpec spec{summary.graph, summary.vertices, summary.degree, summary.var_q, summary.var_s_star};
  PairModel model = assemble_pair_model("antivoter", std::move(spec), summary.w_pmf, 2.0 / n, summary.s_given_w,
                                        summary.down_given_w, std::move(r), lipschitz_s);
  model.parameters = {{"n", n}, {"r", static_cast<double>(summary.degree)}};
  return model;
}

}  // namespace tpa
