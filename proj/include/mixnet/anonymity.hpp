#pragma once

#include <cmath>
#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixnet/error.hpp"
#include "mixnet/graph.hpp"
#include "mixnet/markov.hpp"
#include "mixnet/random.hpp"

namespace mixnet {

/// Shannon entropy in bits, with 0 log 0 = 0.
inline double entropy_bits(std::span<const double> p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

inline double entropy(const Distribution& d) { return entropy_bits(d.probs); }

/// Maximal anonymity of the network: entropy of the stationary distribution.
inline double max_anonymity(const Distribution& pi) { return entropy(pi); }

enum class CriterionKind {
  /// entropy(q_t) >= max_anonymity - threshold
  EntropyGap,
  /// Delta(t) <= threshold
  Rpd,
};

/// Entropy gap, in bits, at which a trace counts as converged by default.
inline constexpr double kDefaultEntropyGap = 0.1;
inline constexpr double kDefaultRpdThreshold = 0.01;
/// Gap below which entropy counts as saturated for route-length recommendations.
inline constexpr double kSaturationGap = 0.01;

struct ConvergenceCriterion {
  CriterionKind kind = CriterionKind::EntropyGap;
  double threshold = kDefaultEntropyGap;

  static ConvergenceCriterion entropy_gap(double bits = kDefaultEntropyGap) { return {CriterionKind::EntropyGap, bits}; }
  static ConvergenceCriterion relative_distance(double delta = kDefaultRpdThreshold) {
    return {CriterionKind::Rpd, delta};
  }

  bool met(double entropy, double rpd, double max_bits) const {
    return kind == CriterionKind::EntropyGap ? entropy >= max_bits - threshold : rpd <= threshold;
  }

  std::string name() const { return kind == CriterionKind::EntropyGap ? "entropy-gap" : "rpd"; }
};

struct TracePoint {
  std::size_t t = 0;
  double entropy_bits = 0.0;
  double rpd = 0.0;
};

struct ConvergenceReport {
  std::vector<TracePoint> trace;
  double max_anonymity_bits = 0.0;
  /// First t meeting the criterion; empty when not reached within the trace.
  std::optional<std::size_t> t_converge;
  ConvergenceCriterion criterion;
  /// Delta(t) stopped decreasing for 10 consecutive steps above the threshold,
  /// or the walk is periodic and never converged. Lazy mode fixes both.
  bool oscillation_detected = false;
  /// Number of point-mass starts averaged into the trace (0 for a single q0).
  std::size_t starts = 0;
};

namespace detail {

inline void finish_report(ConvergenceReport& r, const TransitionMatrix& P) {
  for (const auto& p : r.trace)
    if (r.criterion.met(p.entropy_bits, p.rpd, r.max_anonymity_bits)) {
      r.t_converge = p.t;
      break;
    }
  // A non-lazy walk on a bipartite graph has period 2 and never settles from a
  // one-sided start; its Delta(t) creeps down to a plateau the window rule misses.
  if (!r.t_converge && !P.lazy() && !P.bipartition().empty()) {
    r.oscillation_detected = true;
    return;
  }
  constexpr std::size_t window = 10;
  std::size_t run = 0;
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    const bool stalled = r.trace[i].rpd >= r.trace[i - 1].rpd && r.trace[i].rpd > kDefaultRpdThreshold;
    run = stalled ? run + 1 : 0;
    if (run >= window) {
      r.oscillation_detected = true;
      break;
    }
  }
}

}  // namespace detail

/// Entropy and Delta(t) of q_t = q_0 P^t for t = 0..t_max.
inline ConvergenceReport convergence_profile(const TransitionMatrix& P, const Distribution& pi, const Distribution& q0,
                                             std::size_t t_max,
                                             ConvergenceCriterion criterion = ConvergenceCriterion{}) {
  if (t_max < 1) throw InvalidArgument("convergence_profile: t_max must be >= 1");
  if (q0.size() != P.size() || pi.size() != P.size()) throw InvalidArgument("convergence_profile: dimension mismatch");
  ConvergenceReport r;
  r.criterion = criterion;
  r.max_anonymity_bits = max_anonymity(pi);
  Distribution q = q0;
  std::vector<double> next(q.size());
  for (std::size_t t = 0; t <= t_max; ++t) {
    r.trace.push_back({t, entropy(q), rpd(q, pi)});
    if (t == t_max) break;
    P.left_multiply(q.probs, next);
    q.probs.swap(next);
  }
  detail::finish_report(r, P);
  return r;
}

inline ConvergenceReport convergence_profile(const TransitionMatrix& P, const Distribution& q0, std::size_t t_max,
                                             ConvergenceCriterion criterion = ConvergenceCriterion{}) {
  return convergence_profile(P, stationary(P), q0, t_max, criterion);
}

/// Trace averaged over messages inserted at a random node: for each start s
/// the walk begins at a point mass on s, and the reported entropy and Delta(t)
/// at step t are the means over all starts.
inline ConvergenceReport mean_convergence_profile(const TransitionMatrix& P, const Distribution& pi,
                                                  std::span<const NodeId> starts, std::size_t t_max,
                                                  ConvergenceCriterion criterion = ConvergenceCriterion{}) {
  if (t_max < 1) throw InvalidArgument("mean_convergence_profile: t_max must be >= 1");
  if (starts.empty()) throw InvalidArgument("mean_convergence_profile: no start nodes");
  if (pi.size() != P.size()) throw InvalidArgument("mean_convergence_profile: dimension mismatch");
  const std::size_t n = P.size();
  for (double x : pi.probs)
    if (!(x > 0.0)) throw InvalidArgument("mean_convergence_profile: stationary distribution has a zero entry");
  ConvergenceReport r;
  r.criterion = criterion;
  r.max_anonymity_bits = max_anonymity(pi);
  r.starts = starts.size();
  // Columns processed in blocks; within a block entry (v, k) sits at v * width + k.
  constexpr std::size_t block = 16;
  std::vector<double> ent(t_max + 1, 0.0), dist(t_max + 1, 0.0);
  std::vector<double> cur, nxt;
  for (std::size_t b0 = 0; b0 < starts.size(); b0 += block) {
    const std::size_t width = std::min(block, starts.size() - b0);
    cur.assign(n * width, 0.0);
    nxt.assign(n * width, 0.0);
    for (std::size_t k = 0; k < width; ++k) {
      const NodeId s = starts[b0 + k];
      if (s >= n) throw InvalidArgument("mean_convergence_profile: start node out of range");
      cur[s * width + k] = 1.0;
    }
    std::vector<double> h(width), d(width);
    for (std::size_t t = 0; t <= t_max; ++t) {
      std::fill(h.begin(), h.end(), 0.0);
      std::fill(d.begin(), d.end(), 0.0);
      for (std::size_t v = 0; v < n; ++v) {
        const double* x = cur.data() + v * width;
        const double pv = pi[v];
        for (std::size_t k = 0; k < width; ++k) {
          if (x[k] > 0.0) h[k] -= x[k] * std::log2(x[k]);
          d[k] = std::max(d[k], std::abs(x[k] - pv) / pv);
        }
      }
      for (std::size_t k = 0; k < width; ++k) {
        ent[t] += h[k];
        dist[t] += d[k];
      }
      if (t == t_max) break;
      P.left_multiply_block(cur, nxt, width);
      cur.swap(nxt);
    }
  }
  const double count = static_cast<double>(starts.size());
  for (std::size_t t = 0; t <= t_max; ++t) r.trace.push_back({t, ent[t] / count, dist[t] / count});
  detail::finish_report(r, P);
  return r;
}

/// `count` distinct insertion nodes drawn uniformly (all nodes, in order, when
/// count >= n).
inline std::vector<NodeId> random_starts(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), NodeId{0});
  if (count >= n) return ids;
  Rng rng = make_rng(seed, "starts");
  // partial Fisher-Yates
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(ids[i], ids[pick(rng)]);
  }
  ids.resize(count);
  std::sort(ids.begin(), ids.end());
  return ids;
}

/// Smallest t whose entropy reaches `fraction` of the maximal anonymity. The
/// target is capped at max - kSaturationGap, so fraction = 1 means saturation.
inline std::size_t recommend_route_length(const ConvergenceReport& report, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw InvalidArgument("recommend_route_length: fraction must be in (0, 1]");
  const double target = std::min(fraction * report.max_anonymity_bits, report.max_anonymity_bits - kSaturationGap);
  for (const auto& p : report.trace)
    if (p.entropy_bits >= target) return p.t;
  throw Error("recommend_route_length: target entropy not reached within the trace");
}

}  // namespace mixnet
