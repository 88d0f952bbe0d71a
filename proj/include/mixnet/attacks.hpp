#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "mixnet/error.hpp"
#include "mixnet/graph.hpp"
#include "mixnet/markov.hpp"
#include "mixnet/random.hpp"

namespace mixnet {

/// The k highest-degree nodes, ties broken toward smaller ids. Returned sorted
/// by rank (highest degree first).
inline std::vector<NodeId> top_degree_nodes(const Graph& g, std::size_t k) {
  if (k > g.node_count()) throw InvalidArgument("top_degree_nodes: k exceeds node count");
  std::vector<NodeId> ids(g.node_count());
  for (NodeId u = 0; u < ids.size(); ++u) ids[u] = u;
  std::stable_sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) { return g.out_degree(a) > g.out_degree(b); });
  ids.resize(k);
  return ids;
}

/// k distinct nodes drawn uniformly.
inline std::vector<NodeId> random_nodes(const Graph& g, std::size_t k, std::uint64_t seed) {
  if (k > g.node_count()) throw InvalidArgument("random_nodes: k exceeds node count");
  std::vector<NodeId> ids(g.node_count());
  for (NodeId u = 0; u < ids.size(); ++u) ids[u] = u;
  Rng rng = make_rng(seed, "random-compromise");
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(k);
  std::sort(ids.begin(), ids.end());
  return ids;
}

struct CompromiseScenario {
  std::vector<NodeId> compromised;
  /// Number of mixes on a route (walk_length - 1 transitions).
  std::size_t walk_length = 3;
  std::size_t n_walks = 100'000;
  std::uint64_t seed = 0;
  /// Walk workers; results are reproducible for a fixed worker count.
  std::size_t threads = 1;
};

struct CompromiseEstimate {
  std::size_t walk_length = 0;
  std::size_t n_walks = 0;
  std::size_t compromised_walks = 0;
  /// Fraction of routes whose every mix is compromised.
  double fraction = 0.0;
  /// Binomial standard error sqrt(f (1 - f) / n).
  double sigma = 0.0;
  /// Normal-approximation 95% half width (1.96 sigma).
  double ci95 = 0.0;
};

struct BatchRow {
  std::size_t max_degree = 0;
  double mean_degree = 0.0;
  /// 1 / max degree: smallest per-link probability in the network.
  double p_min = 0.0;
  double batch_size = 0.0;
};

struct AttackReport {
  std::vector<CompromiseEstimate> estimates;
  std::vector<NodeId> compromised;
  /// Stationary mass of the compromised set.
  std::optional<double> pi_mass;
  std::optional<double> gap;
  /// Gilbert bound per estimate (same order as `estimates`).
  std::vector<double> gilbert_bounds;
  std::optional<BatchRow> batch;
};

/// Monte-Carlo estimate of the probability that a route (first mix uniform,
/// each next mix uniform over out-neighbors) consists only of compromised mixes.
inline CompromiseEstimate simulate_compromise(const Graph& g, const CompromiseScenario& s) {
  const std::size_t n = g.node_count();
  if (s.walk_length < 1) throw InvalidArgument("simulate_compromise: walk_length must be >= 1");
  if (s.n_walks < 1) throw InvalidArgument("simulate_compromise: n_walks must be >= 1");
  if (n == 0) throw InvalidArgument("simulate_compromise: empty graph");
  std::vector<char> bad(n, 0);
  for (NodeId u : s.compromised) {
    if (u >= n) throw InvalidArgument("simulate_compromise: compromised node out of range");
    bad[u] = 1;
  }
  if (s.walk_length > 1)
    for (NodeId u = 0; u < n; ++u)
      if (g.out_degree(u) == 0) throw GraphConditionError("simulate_compromise: node with no out-neighbors");

  const std::size_t workers = std::max<std::size_t>(1, std::min(s.threads, s.n_walks));
  std::vector<std::size_t> hits(workers, 0);
  auto run = [&](std::size_t w) {
    const std::size_t begin = s.n_walks * w / workers, end = s.n_walks * (w + 1) / workers;
    Rng rng = make_rng(s.seed, "walks", w);
    std::uniform_int_distribution<NodeId> first(0, static_cast<NodeId>(n - 1));
    std::size_t count = 0;
    for (std::size_t i = begin; i < end; ++i) {
      NodeId u = first(rng);
      bool inside = bad[u];
      for (std::size_t hop = 1; hop < s.walk_length && inside; ++hop) {
        auto nb = g.neighbors(u);
        u = nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)];
        inside = bad[u];
      }
      count += inside;
    }
    hits[w] = count;
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  CompromiseEstimate e;
  e.walk_length = s.walk_length;
  e.n_walks = s.n_walks;
  for (auto h : hits) e.compromised_walks += h;
  e.fraction = static_cast<double>(e.compromised_walks) / static_cast<double>(s.n_walks);
  e.sigma = std::sqrt(e.fraction * (1.0 - e.fraction) / static_cast<double>(s.n_walks));
  e.ci95 = 1.96 * e.sigma;
  return e;
}

/// Closed form (|B| - 1) / prod_{j in B} k_j for a set B of interconnected hubs
/// with degrees k_j; zero when the route is longer than |B|. Only meaningful for
/// hub cliques of preferential-attachment graphs.
inline double analytic_compromise_ba(const std::vector<std::size_t>& hub_degrees, std::size_t route_length) {
  for (auto k : hub_degrees)
    if (k < 1) throw InvalidArgument("analytic_compromise_ba: degrees must be >= 1");
  if (route_length > hub_degrees.size() || hub_degrees.empty()) return 0.0;
  double prod = 1.0;
  for (auto k : hub_degrees) prod *= static_cast<double>(k);
  return (static_cast<double>(hub_degrees.size()) - 1.0) / prod;
}

/// Chernoff-type bound on the probability that a walk of length t stays in a
/// set of stationary mass pi_S, given eigenvalue gap `gap`:
/// (1 + (1 - pi_S) gap / 10) exp(-t (1 - pi_S)^2 gap / 20), clamped to [0, 1].
inline double gilbert_bound(double pi_S, double gap, std::size_t t) {
  if (!(pi_S >= 0.0 && pi_S <= 1.0)) throw InvalidArgument("gilbert_bound: pi_S must be in [0, 1]");
  if (!(gap >= 0.0 && gap <= 1.0)) throw InvalidArgument("gilbert_bound: gap must be in [0, 1]");
  const double outside = 1.0 - pi_S;
  const double b = (1.0 + outside * gap / 10.0) * std::exp(-static_cast<double>(t) * outside * outside * gap / 20.0);
  return std::clamp(b, 0.0, 1.0);
}

/// Messages per batch so that every outgoing link of a node of this degree is
/// used: (9 / f^2) (1 - p) / p with p = 1/degree, i.e. (9 / f^2)(degree - 1).
/// f is the tolerated deviation as a percentage number (5 means 5%).
inline double batch_size(std::size_t degree, double f) {
  if (degree < 1) throw InvalidArgument("batch_size: degree must be >= 1");
  if (!(f > 0.0)) throw InvalidArgument("batch_size: f must be > 0");
  return 9.0 / (f * f) * (static_cast<double>(degree) - 1.0);
}

/// Network-wide batch size, set by the highest-degree node.
inline BatchRow network_batch_size(const Graph& g, double f) {
  const auto stats = degree_stats(g);
  if (stats.max < 1) throw GraphConditionError("network_batch_size: graph has no edges");
  BatchRow row;
  row.max_degree = stats.max;
  row.mean_degree = stats.mean;
  row.p_min = 1.0 / static_cast<double>(stats.max);
  row.batch_size = batch_size(stats.max, f);
  return row;
}

/// Stationary mass of a node set.
inline double set_mass(const Distribution& pi, const std::vector<NodeId>& nodes) {
  double s = 0.0;
  for (NodeId u : nodes) s += pi.probs.at(u);
  return s;
}

}  // namespace mixnet
