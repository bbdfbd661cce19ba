#pragma once

// Anti-voter model on a finite r-regular graph: a uniformly chosen vertex i
// takes the opposite of the opinion of a uniformly chosen neighbour.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tpa/config.hpp"
#include "tpa/dist.hpp"
#include "tpa/models.hpp"

namespace tpa {

class Graph {
 public:
  /// Builds and validates an undirected graph. Throws regularity for
  /// unequal degrees and excluded_graph for bipartite graphs or cycles.
  static Graph from_edges(long n, const std::vector<std::pair<long, long>>& edges, std::string name = {});

  long vertex_count() const noexcept { return static_cast<long>(adjacency_.size()); }
  long degree() const noexcept { return degree_; }
  long edge_count() const noexcept { return vertex_count() * degree_ / 2; }
  const std::vector<long>& neighbors(long i) const { return adjacency_.at(static_cast<std::size_t>(i)); }
  const std::string& name() const noexcept { return name_; }

  bool connected() const noexcept { return connected_; }
  bool bipartite() const noexcept { return bipartite_; }
  bool is_cycle() const noexcept { return cycle_; }
  bool is_complete() const noexcept { return degree_ == vertex_count() - 1; }

 private:
  std::vector<std::vector<long>> adjacency_;
  long degree_ = 0;
  std::string name_;
  bool connected_ = false;
  bool bipartite_ = false;
  bool cycle_ = false;
};

/// K_n, n >= 4.
Graph complete_graph(long n);
Graph petersen_graph();

/// Text format: first line "n m", then m lines "u v" (0-based, undirected).
Graph load_graph(std::string_view text, std::string name = {});

/// Opinions J_i in {0, 1}.
struct Configuration {
  std::vector<std::uint8_t> opinions;

  long ones() const noexcept;
  bool operator==(const Configuration&) const = default;
};

Configuration step(const Configuration& c, const Graph& g, Rng& rng);

/// Q = sum_i sum_{j in N(i)} (2J_i - 1)(2J_j - 1); each edge counted twice.
long q_statistic(const Configuration& c, const Graph& g);

/// S*(J) = (1/n) sum_i (1 - J_i)(1 - (1/r) sum_{j in N(i)} J_j).
double s_star(const Configuration& c, const Graph& g);
/// The same quantity as (rn - 2r W~ + Q) / (4rn), W~ = sum (2J_i - 1).
double s_star_via_q(const Configuration& c, const Graph& g);

/// Standard errors attached to Monte-Carlo summaries.
struct StationaryErrors {
  std::vector<double> w_pmf;
  double var_q = 0.0;
  double var_s_star = 0.0;
  double mu = 0.0;
  double sigma2 = 0.0;
};

struct StationarySummary {
  std::string graph;
  long vertices = 0;
  long degree = 0;
  bool complete_graph = false;

  IntegerPmf w_pmf;
  double var_q = 0.0;
  double mean_q = 0.0;
  double var_s_star = 0.0;
  /// E[S*(J) | W = w] and E[D_{-1} | W = w], indexed by w = 0..n.
  std::vector<double> s_given_w;
  std::vector<double> down_given_w;
  double mu = 0.0;
  double sigma2 = 0.0;
  double e_abs3 = 0.0;
  /// E[W~ Q]; vanishes by flip symmetry.
  double e_wtilde_q = 0.0;

  bool exact = true;
  long iterations = 0;
  double final_change = 0.0;
  /// Present only for Monte-Carlo summaries.
  std::optional<StationaryErrors> errors;
};

struct ExactStationaryOptions {
  long max_vertices = 16;
  double tolerance = 1e-13;
  long max_iterations = 1'000'000;
};

/// Power iteration on the 2^n-state chain.
StationarySummary exact_stationary(const Graph& g, const ExactStationaryOptions& options = {});

/// Stationary probabilities of all 2^n configurations (bit i = J_i).
std::vector<double> stationary_vector(const Graph& g, const ExactStationaryOptions& options = {},
                                      long* iterations = nullptr, double* final_change = nullptr);

struct McmcOptions {
  long steps = 1'000'000;
  long burnin = 10'000;
  long chains = 8;
  std::uint64_t seed = 1;
};

/// Time averages over independent chains; chain k uses split_seed(seed, k).
StationarySummary mcmc_estimate(const Graph& g, const McmcOptions& options);

/// lambda = 2/n, R = 0, S = E[S* | W]. On complete graphs L_S = 2/(n-1)
/// unless a Lipschitz constant is supplied.
PairModel pair_model_from_stationary(const StationarySummary& summary,
                                     std::optional<double> lipschitz_s = std::nullopt);

}  // namespace tpa
