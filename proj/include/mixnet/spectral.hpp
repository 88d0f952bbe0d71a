#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "mixnet/error.hpp"
#include "mixnet/generators.hpp"
#include "mixnet/graph.hpp"
#include "mixnet/markov.hpp"
#include "mixnet/random.hpp"

namespace mixnet {

enum class SpectralMethod {
  /// Power iteration on the pi-weighted space with the trivial eigenvectors deflated.
  Deflation,
  /// Geometric decay rate of the relative point-wise distance (non-reversible chains).
  DecayRate,
};

inline std::string to_string(SpectralMethod m) {
  return m == SpectralMethod::Deflation ? "deflation" : "decay-rate";
}

struct SpectralSummary {
  /// Largest eigenvalue modulus after removing the eigenvalue 1 and, for
  /// bipartite chains, the period eigenvalue -1.
  double lambda2 = 0.0;
  /// Eigenvalue gap 1 - lambda2.
  double gap = 1.0;
  std::size_t iterations = 0;
  bool converged = false;
  SpectralMethod method = SpectralMethod::Deflation;
};

struct SpectralOptions {
  /// Relative residual ||P^2 f - rho f|| / ||f|| (deflation) or target
  /// distance (decay rate) that stops the iteration.
  double tol = 1e-10;
  std::size_t max_iter = 10'000;
  std::uint64_t seed = 1;
};

namespace detail {

inline double pi_dot(std::span<const double> pi, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += pi[i] * a[i] * b[i];
  return s;
}

// Removes the components along the constant function (eigenvalue 1) and the
// bipartition sign function (eigenvalue -1) under the pi-weighted inner product.
inline void deflate(std::span<const double> pi, std::span<const std::int8_t> side, std::span<double> f) {
  double c = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) c += pi[i] * f[i];
  for (double& x : f) x -= c;
  if (!side.empty()) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += pi[i] * f[i] * side[i];
    for (std::size_t i = 0; i < f.size(); ++i) f[i] -= s * side[i];
  }
}

inline SpectralSummary lambda2_reversible(const TransitionMatrix& P, const Distribution& pi,
                                          const SpectralOptions& opt) {
  const std::size_t n = P.size();
  SpectralSummary out;
  out.method = SpectralMethod::Deflation;
  std::span<const std::int8_t> side = P.lazy() ? std::span<const std::int8_t>{} : P.bipartition();
  const std::size_t trivial = 1 + (side.empty() ? 0 : 1);
  if (n <= trivial) {
    out.lambda2 = 0.0;
    out.gap = 1.0;
    out.converged = true;
    return out;
  }
  Rng rng = make_rng(opt.seed, "lambda2");
  std::normal_distribution<double> gauss;
  std::vector<double> f(n), g(n), h(n);
  for (double& x : f) x = gauss(rng);
  detail::deflate(pi.probs, side, f);
  double rho = 0.0;
  for (std::size_t it = 1; it <= opt.max_iter; ++it) {
    double norm = std::sqrt(pi_dot(pi.probs, f, f));
    if (norm == 0.0) {
      // Start vector landed in the trivial eigenspace; every other eigenvalue is 0.
      out.lambda2 = 0.0;
      out.iterations = it;
      out.converged = true;
      out.gap = 1.0;
      return out;
    }
    for (double& x : f) x /= norm;
    P.right_multiply(f, g);
    P.right_multiply(g, h);
    detail::deflate(pi.probs, side, h);
    // P is self-adjoint in the pi inner product, so <Pf, Pf> = <f, P^2 f>.
    rho = pi_dot(pi.probs, f, h);
    double res2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = h[i] - rho * f[i];
      res2 += pi.probs[i] * r * r;
    }
    out.iterations = it;
    if (std::sqrt(res2) <= opt.tol * std::max(rho, 1e-300) || rho == 0.0) {
      out.converged = true;
      f.swap(h);
      break;
    }
    f.swap(h);
  }
  out.lambda2 = std::clamp(std::sqrt(std::max(rho, 0.0)), 0.0, 1.0);
  out.gap = 1.0 - out.lambda2;
  return out;
}

inline SpectralSummary lambda2_decay(const TransitionMatrix& P, const Distribution& pi, const SpectralOptions& opt) {
  // Delta(t) from a point mass decays like lambda2^t once transients die out;
  // the rate is read off the second half of the trajectory.
  const std::size_t n = P.size();
  SpectralSummary out;
  out.method = SpectralMethod::DecayRate;
  Rng rng = make_rng(opt.seed, "lambda2");
  const auto start = std::uniform_int_distribution<NodeId>(0, static_cast<NodeId>(n - 1))(rng);
  Distribution q = Distribution::point_mass(n, start);
  std::vector<double> next(n);
  std::vector<double> deltas{rpd(q, pi)};
  const double floor = std::max(opt.tol, 1e-12);
  for (std::size_t it = 1; it <= opt.max_iter; ++it) {
    P.left_multiply(q.probs, next);
    q.probs.swap(next);
    deltas.push_back(rpd(q, pi));
    out.iterations = it;
    if (deltas.back() <= floor) {
      out.converged = true;
      break;
    }
  }
  const std::size_t t1 = deltas.size() - 1, t0 = t1 / 2;
  double rate = 1.0;
  if (t1 > t0 && deltas[t0] > 0.0 && deltas[t1] > 0.0)
    rate = std::pow(deltas[t1] / deltas[t0], 1.0 / static_cast<double>(t1 - t0));
  out.lambda2 = std::clamp(rate, 0.0, 1.0);
  out.gap = 1.0 - out.lambda2;
  return out;
}

}  // namespace detail

/// Second-largest eigenvalue modulus of the chain.
///
/// Reversible chains: power iteration with P^2 on the complement of the
/// trivial eigenvectors in the pi-weighted inner product; the Rayleigh quotient
/// of P^2 converges to lambda2^2 from below. Directed chains: decay rate of
/// Delta(t) from a random point mass.
inline SpectralSummary lambda2_estimate(const TransitionMatrix& P, const Distribution& pi,
                                        const SpectralOptions& opt = {}) {
  if (pi.size() != P.size()) throw InvalidArgument("lambda2_estimate: dimension mismatch");
  return P.reversible() ? detail::lambda2_reversible(P, pi, opt) : detail::lambda2_decay(P, pi, opt);
}

/// Smallest t with lambda2^t / pi_min <= delta_target.
inline std::size_t sinclair_steps(double lambda2, double pi_min, double delta_target) {
  if (!(lambda2 > 0.0 && lambda2 < 1.0)) throw InvalidArgument("sinclair_steps: need 0 < lambda2 < 1");
  if (!(pi_min > 0.0 && pi_min <= 1.0)) throw InvalidArgument("sinclair_steps: need 0 < pi_min <= 1");
  if (!(delta_target > 0.0)) throw InvalidArgument("sinclair_steps: need delta_target > 0");
  auto bound = [&](double t) { return std::pow(lambda2, t) / pi_min; };
  if (bound(0) <= delta_target) return 0;
  auto t = static_cast<std::size_t>(
      std::max(0.0, std::ceil(std::log(delta_target * pi_min) / std::log(lambda2))));
  // The log estimate can be off by one either way in floating point.
  while (t > 0 && bound(static_cast<double>(t - 1)) <= delta_target) --t;
  while (bound(static_cast<double>(t)) > delta_target) ++t;
  return t;
}

/// Lower bound 2 sqrt(D-1) / D on lambda2 of a D-regular graph.
inline double regular_lambda2_bound(std::size_t degree) {
  return 2.0 * std::sqrt(static_cast<double>(degree) - 1.0) / static_cast<double>(degree);
}

inline constexpr std::size_t kMaxConductanceNodes = 24;

/// Conductance min |cut(S)| / vol(S) over node sets with vol(S) <= vol(V)/2,
/// by enumerating all subsets (Gray-code order).
inline double conductance_exact(const Graph& g) {
  const std::size_t n = g.node_count();
  if (g.directed()) throw InvalidArgument("conductance_exact: graph must be undirected");
  if (n > kMaxConductanceNodes)
    throw GraphConditionError("conductance_exact: n=" + std::to_string(n) + " exceeds " +
                              std::to_string(kMaxConductanceNodes));
  if (n < 2) throw GraphConditionError("conductance_exact: need at least 2 nodes");
  if (!is_connected(g)) throw GraphConditionError("conductance_exact: graph is disconnected");
  std::vector<std::uint32_t> nbr_mask(n, 0);
  std::vector<long> deg(n);
  long total_vol = 0;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : g.neighbors(u)) nbr_mask[u] |= 1u << v;
    deg[u] = static_cast<long>(g.out_degree(u));
    total_vol += deg[u];
  }
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t set = 0;
  long cut = 0, vol = 0;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < count; ++i) {
    const auto u = static_cast<unsigned>(std::countr_zero(i));
    const long inside = std::popcount(nbr_mask[u] & set);
    if (set & (1u << u)) {
      set &= ~(1u << u);
      cut -= deg[u] - 2 * inside;
      vol -= deg[u];
    } else {
      cut += deg[u] - 2 * inside;
      vol += deg[u];
      set |= 1u << u;
    }
    if (vol > 0 && 2 * vol <= total_vol) best = std::min(best, static_cast<double>(cut) / static_cast<double>(vol));
  }
  return best;
}

/// Conductance sandwich 1 - 2 Phi <= lambda2 <= 1 - Phi^2 / 2.
struct ConductanceBounds {
  double lower;
  double upper;
  bool contains(double lambda2, double slack = 0.0) const {
    return lambda2 >= lower - slack && lambda2 <= upper + slack;
  }
};

inline ConductanceBounds conductance_bounds(double phi) { return {1.0 - 2.0 * phi, 1.0 - phi * phi / 2.0}; }

struct SizeSweepRow {
  std::size_t n = 0;
  double mean_lambda2 = 0.0;
  double stddev = 0.0;
  std::vector<double> samples;
};

struct SizeSweep {
  std::vector<SizeSweepRow> rows;
  /// max - min of the per-size means.
  double spread() const {
    if (rows.empty()) return 0.0;
    double lo = rows.front().mean_lambda2, hi = lo;
    for (const auto& r : rows) {
      lo = std::min(lo, r.mean_lambda2);
      hi = std::max(hi, r.mean_lambda2);
    }
    return hi - lo;
  }
};

/// Generates `trials` graphs of the template model at each size and estimates
/// lambda2 on the giant component of each. Trial seeds are derived from the
/// template seed, the size and the trial index.
inline SizeSweep lambda2_size_experiment(const GeneratorConfig& model, const std::vector<std::size_t>& sizes,
                                         std::size_t trials, const SpectralOptions& opt = {}) {
  if (sizes.empty()) throw InvalidArgument("lambda2_size_experiment: no sizes");
  if (trials == 0) throw InvalidArgument("lambda2_size_experiment: trials must be >= 1");
  SizeSweep sweep;
  for (std::size_t n : sizes) {
    SizeSweepRow row;
    row.n = n;
    for (std::size_t t = 0; t < trials; ++t) {
      GeneratorConfig c = model;
      c.n = n;
      if (c.model == Model::KWS) {
        c.side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
        c.n = c.side * c.side;
      }
      c.seed = derive_seed(model.seed, "size-sweep", n * 1'000'003ULL + t);
      Graph g = giant_component(generate(c)).graph;
      TransitionMatrix P(g);
      Distribution pi = P.reversible() ? degree_stationary(P) : stationary(P);
      row.samples.push_back(lambda2_estimate(P, pi, opt).lambda2);
    }
    double mean = 0.0;
    for (double x : row.samples) mean += x;
    mean /= static_cast<double>(row.samples.size());
    double var = 0.0;
    for (double x : row.samples) var += (x - mean) * (x - mean);
    row.mean_lambda2 = mean;
    row.stddev = row.samples.size() > 1 ? std::sqrt(var / static_cast<double>(row.samples.size() - 1)) : 0.0;
    sweep.rows.push_back(std::move(row));
  }
  return sweep;
}

}  // namespace mixnet
