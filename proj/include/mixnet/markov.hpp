#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mixnet/error.hpp"
#include "mixnet/graph.hpp"

namespace mixnet {

/// Probability vector over nodes.
struct Distribution {
  std::vector<double> probs;

  Distribution() = default;
  explicit Distribution(std::vector<double> p) : probs(std::move(p)) {}

  std::size_t size() const noexcept { return probs.size(); }
  double operator[](std::size_t i) const noexcept { return probs[i]; }

  static Distribution uniform(std::size_t n) { return Distribution(std::vector<double>(n, 1.0 / n)); }
  static Distribution point_mass(std::size_t n, NodeId at) {
    std::vector<double> p(n, 0.0);
    p.at(at) = 1.0;
    return Distribution(std::move(p));
  }

  double total() const {
    double s = 0.0;
    for (double x : probs) s += x;
    return s;
  }

  /// Non-negative entries summing to 1 within `tol`.
  bool valid(double tol = 1e-9) const {
    for (double x : probs)
      if (!(x >= 0.0)) return false;
    return std::abs(total() - 1.0) <= tol;
  }

  double min() const {
    double m = std::numeric_limits<double>::infinity();
    for (double x : probs) m = std::min(m, x);
    return m;
  }
};

/// Route-selection chain of a graph: from node i the next hop is uniform over
/// the out-neighbors of i, so row i holds 1/outdeg(i) on each of them.
///
/// In lazy mode the chain is (P + I)/2; it shares the stationary distribution
/// of a reversible P and removes periodicity.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;

  explicit TransitionMatrix(const Graph& g, bool lazy = false)
      : n_(g.node_count()), lazy_(lazy), reversible_(!g.directed()), offsets_(g.offsets().begin(), g.offsets().end()),
        targets_(g.targets().begin(), g.targets().end()) {
    inv_degree_.resize(n_);
    for (NodeId u = 0; u < n_; ++u) {
      const auto d = g.out_degree(u);
      if (d == 0) throw GraphConditionError("node " + std::to_string(u) + " has no out-neighbors");
      inv_degree_[u] = 1.0 / static_cast<double>(d);
    }
    tr_ = transpose(g);
    if (reversible_) {
      degree_.resize(n_);
      for (NodeId u = 0; u < n_; ++u) degree_[u] = static_cast<double>(g.out_degree(u));
      bipartition_ = mixnet::bipartition(g);
    }
    for (NodeId u = 0; u < n_; ++u)
      if (std::abs(row_sum(u) - 1.0) > 1e-12) throw Error("transition row does not sum to 1");
  }

  std::size_t size() const noexcept { return n_; }
  bool lazy() const noexcept { return lazy_; }
  /// Built from an undirected graph (a reversible chain).
  bool reversible() const noexcept { return reversible_; }
  /// Two-coloring (+1/-1) of the underlying undirected graph, empty otherwise.
  std::span<const std::int8_t> bipartition() const noexcept { return bipartition_; }
  /// Degrees of the underlying undirected graph (empty for directed chains).
  std::span<const double> degrees() const noexcept { return degree_; }

  TransitionMatrix with_lazy(bool lazy) const {
    TransitionMatrix t = *this;
    t.lazy_ = lazy;
    return t;
  }

  std::span<const NodeId> row(NodeId u) const noexcept {
    return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
  }
  /// Probability on each off-diagonal entry of row u.
  double row_value(NodeId u) const noexcept { return lazy_ ? 0.5 * inv_degree_[u] : inv_degree_[u]; }
  double diagonal(NodeId) const noexcept { return lazy_ ? 0.5 : 0.0; }

  double row_sum(NodeId u) const noexcept {
    double s = diagonal(u);
    for (std::size_t k = offsets_[u]; k < offsets_[u + 1]; ++k) s += row_value(u);
    return s;
  }

  /// out = in * P (row vector times matrix). Each output entry is a fixed-order
  /// sum over in-neighbors, so results do not depend on scheduling.
  void left_multiply(std::span<const double> in, std::span<double> out) const {
    for (NodeId v = 0; v < n_; ++v) {
      double s = 0.0;
      for (NodeId u : tr_.in_neighbors(v)) s += in[u] * inv_degree_[u];
      out[v] = lazy_ ? 0.5 * (s + in[v]) : s;
    }
  }

  /// Same as left_multiply for `width` interleaved vectors (node-major layout:
  /// entry (v, k) at v * width + k).
  void left_multiply_block(std::span<const double> in, std::span<double> out, std::size_t width) const {
    for (NodeId v = 0; v < n_; ++v) {
      double* o = out.data() + v * width;
      for (std::size_t k = 0; k < width; ++k) o[k] = 0.0;
      for (NodeId u : tr_.in_neighbors(v)) {
        const double w = inv_degree_[u];
        const double* x = in.data() + u * width;
        for (std::size_t k = 0; k < width; ++k) o[k] += x[k] * w;
      }
      if (lazy_) {
        const double* x = in.data() + v * width;
        for (std::size_t k = 0; k < width; ++k) o[k] = 0.5 * (o[k] + x[k]);
      }
    }
  }

  /// out = P * f (matrix times column vector, i.e. one-step expectation of f).
  void right_multiply(std::span<const double> f, std::span<double> out) const {
    for (NodeId u = 0; u < n_; ++u) {
      double s = 0.0;
      for (std::size_t k = offsets_[u]; k < offsets_[u + 1]; ++k) s += f[targets_[k]];
      s *= inv_degree_[u];
      out[u] = lazy_ ? 0.5 * (s + f[u]) : s;
    }
  }

 private:
  std::size_t n_ = 0;
  bool lazy_ = false;
  bool reversible_ = false;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
  std::vector<double> inv_degree_;
  Transpose tr_;
  std::vector<double> degree_;
  std::vector<std::int8_t> bipartition_;
};

inline TransitionMatrix transition_matrix(const Graph& g, bool lazy = false) { return TransitionMatrix(g, lazy); }

/// One step of the walk: q * P.
inline Distribution step(const TransitionMatrix& P, const Distribution& q) {
  if (q.size() != P.size()) throw InvalidArgument("step: dimension mismatch");
  Distribution out(std::vector<double>(q.size()));
  P.left_multiply(q.probs, out.probs);
  return out;
}

inline double l1_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

struct StationaryOptions {
  double tol = 1e-13;
  std::size_t max_iter = 1'000'000;
};

struct StationaryResult {
  Distribution pi;
  std::size_t iterations = 0;
  /// ||pi P - pi||_1 at exit.
  double residual = 0.0;
  /// Max-norm distance to d_i / 2L for reversible chains, NaN otherwise.
  double closed_form_error = std::numeric_limits<double>::quiet_NaN();
};

/// d_i / 2L for the chain of an undirected graph.
inline Distribution degree_stationary(const TransitionMatrix& P) {
  if (!P.reversible()) throw InvalidArgument("degree_stationary: chain is not reversible");
  auto d = P.degrees();
  double total = 0.0;
  for (double x : d) total += x;
  std::vector<double> pi(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) pi[i] = d[i] / total;
  return Distribution(std::move(pi));
}

/// Power iteration from the uniform distribution until ||pi P - pi||_1 <= tol.
/// Throws ConvergenceError (with the last residual) after max_iter steps; a
/// periodic chain never converges here and needs lazy mode.
inline StationaryResult stationary_detailed(const TransitionMatrix& P, const StationaryOptions& opt = {}) {
  const std::size_t n = P.size();
  if (n == 0) throw InvalidArgument("stationary: empty chain");
  std::vector<double> x(n, 1.0 / n), y(n);
  StationaryResult r;
  for (std::size_t it = 1; it <= opt.max_iter; ++it) {
    P.left_multiply(x, y);
    // Renormalize against drift.
    double s = 0.0;
    for (double v : y) s += v;
    for (double& v : y) v /= s;
    r.residual = l1_distance(x, y);
    x.swap(y);
    if (r.residual <= opt.tol) {
      r.iterations = it;
      r.pi = Distribution(std::move(x));
      if (P.reversible()) {
        auto exact = degree_stationary(P);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(exact[i] - r.pi[i]));
        r.closed_form_error = err;
      }
      return r;
    }
  }
  throw ConvergenceError("stationary distribution did not converge (try lazy mode)", r.residual);
}

inline Distribution stationary(const TransitionMatrix& P, double tol = 1e-13, std::size_t max_iter = 1'000'000) {
  return stationary_detailed(P, {tol, max_iter}).pi;
}

/// Relative point-wise distance: max_i |q_i - pi_i| / pi_i.
inline double rpd(const Distribution& q, const Distribution& pi) {
  if (q.size() != pi.size()) throw InvalidArgument("rpd: dimension mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(pi[i] > 0.0)) throw InvalidArgument("rpd: stationary distribution has a zero entry");
    worst = std::max(worst, std::abs(q[i] - pi[i]) / pi[i]);
  }
  return worst;
}

}  // namespace mixnet
