#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "mixnet/error.hpp"
#include "mixnet/graph.hpp"
#include "mixnet/random.hpp"

namespace mixnet {

// ---------------------------------------------------------------------------
// Erdos-Renyi
// ---------------------------------------------------------------------------

/// G(n, p): every unordered pair linked independently with probability p.
inline Graph gen_er(std::size_t n, double p, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("gen_er: n must be >= 2");
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("gen_er: p must lie in (0, 1)");
  Rng rng = make_rng(seed, "er");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Arc> arcs;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (unit(rng) < p) arcs.emplace_back(u, v);
  return Graph::from_arcs(n, false, arcs);
}

// ---------------------------------------------------------------------------
// Barabasi-Albert preferential attachment
// ---------------------------------------------------------------------------

/// Linear preferential attachment grown from an m-node clique. Each arriving
/// node links to m distinct existing nodes, each pick proportional to current
/// degree among the nodes not yet picked.
inline Graph gen_ba(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("gen_ba: n must be >= 2");
  if (m < 1 || m >= n) throw InvalidArgument("gen_ba: need 1 <= m < n");
  Rng rng = make_rng(seed, "ba");
  std::vector<Arc> arcs;
  // One entry per arc endpoint: a uniform draw from it is degree-proportional.
  std::vector<NodeId> endpoints;
  endpoints.reserve(2 * m * n);
  for (NodeId u = 0; u < m; ++u)
    for (NodeId v = u + 1; v < m; ++v) {
      arcs.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  std::vector<NodeId> picked;
  for (NodeId v = static_cast<NodeId>(m); v < n; ++v) {
    picked.clear();
    while (picked.size() < m) {
      NodeId t;
      if (endpoints.empty()) {
        // m == 1 and no edges yet: every existing node has degree 0.
        t = std::uniform_int_distribution<NodeId>(0, v - 1)(rng);
      } else {
        t = endpoints[std::uniform_int_distribution<std::size_t>(0, endpoints.size() - 1)(rng)];
      }
      if (std::find(picked.begin(), picked.end(), t) == picked.end()) picked.push_back(t);
    }
    for (NodeId t : picked) {
      arcs.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return Graph::from_arcs(n, false, arcs);
}

// ---------------------------------------------------------------------------
// Configuration-model wiring shared by the degree-sequence generators
// ---------------------------------------------------------------------------

/// Erdos-Gallai test.
inline bool is_graphical(std::vector<std::size_t> degrees) {
  std::sort(degrees.begin(), degrees.end(), std::greater<>());
  const std::size_t n = degrees.size();
  std::uint64_t total = 0;
  for (auto d : degrees) {
    if (d >= n && n > 0) return false;
    total += d;
  }
  if (total % 2) return false;
  // Prefix sums of min(d_i, k) are evaluated through a pointer sweep.
  std::uint64_t lhs = 0;
  std::vector<std::uint64_t> suffix(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + degrees[i];
  std::size_t split = n;  // first index with degree < k+1 (degrees sorted descending)
  for (std::size_t k = 0; k < n; ++k) {
    lhs += degrees[k];
    const std::uint64_t kk = k + 1;
    while (split > 0 && degrees[split - 1] < kk) --split;
    // nodes j > k: those with index < split contribute kk, the rest contribute d_j.
    std::uint64_t rhs = kk * (kk - 1);
    std::size_t lo = k + 1;
    if (split > lo) {
      rhs += kk * (split - lo) + suffix[split];
    } else {
      rhs += suffix[lo];
    }
    if (lhs > rhs) return false;
  }
  return true;
}

namespace detail {

inline std::uint64_t edge_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

/// Random stub matching for a fixed degree sequence, then double-edge swaps to
/// remove self-loops and multi-edges. Throws GenerationError if defects remain
/// after `max_passes` repair passes.
inline Graph configuration_model(const std::vector<std::size_t>& degrees, Rng& rng, int max_passes = 100) {
  std::vector<NodeId> stubs;
  for (NodeId u = 0; u < degrees.size(); ++u) stubs.insert(stubs.end(), degrees[u], u);
  if (stubs.size() % 2) throw InvalidArgument("configuration_model: odd degree sum");
  std::shuffle(stubs.begin(), stubs.end(), rng);
  const std::size_t m = stubs.size() / 2;
  std::vector<Arc> edges(m);
  std::unordered_multiset<std::uint64_t> present;
  present.reserve(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    edges[i] = {stubs[2 * i], stubs[2 * i + 1]};
    present.insert(edge_key(edges[i].first, edges[i].second));
  }
  auto defective = [&](std::size_t i) {
    auto [a, b] = edges[i];
    return a == b || present.count(edge_key(a, b)) > 1;
  };
  std::uniform_int_distribution<std::size_t> pick(0, m ? m - 1 : 0);
  for (int pass = 0; pass < max_passes; ++pass) {
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < m; ++i)
      if (defective(i)) bad.push_back(i);
    if (bad.empty()) break;
    for (std::size_t i : bad) {
      if (!defective(i)) continue;
      for (int attempt = 0; attempt < 20; ++attempt) {
        std::size_t j = pick(rng);
        if (j == i) continue;
        auto [a, b] = edges[i];
        auto [c, d] = edges[j];
        if (rng() & 1) std::swap(c, d);
        // (a,b),(c,d) -> (a,c),(b,d)
        if (a == c || b == d) continue;
        const auto k1 = edge_key(a, c), k2 = edge_key(b, d);
        if (k1 == k2 || present.count(k1) || present.count(k2)) continue;
        present.erase(present.find(edge_key(a, b)));
        present.erase(present.find(edge_key(c, d)));
        present.insert(k1);
        present.insert(k2);
        edges[i] = {a, c};
        edges[j] = {b, d};
        break;
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    if (defective(i)) throw GenerationError("configuration model: could not remove self-loops/multi-edges");
  return Graph::from_arcs(degrees.size(), false, edges);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scale-free random graph with a power-law degree sequence
// ---------------------------------------------------------------------------

/// Power-law degree law y = e^alpha * x^-beta on degrees 1..cutoff, where the
/// cutoff is the largest degree with y >= 1, i.e. floor(e^(alpha/beta)),
/// capped at n-1.
struct PowerLawDegrees {
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t cutoff = 1;

  double weight(std::size_t x) const { return std::pow(static_cast<double>(x), -beta); }

  double mean() const {
    double num = 0.0, den = 0.0;
    for (std::size_t x = 1; x <= cutoff; ++x) {
      const double w = weight(x);
      num += w * static_cast<double>(x);
      den += w;
    }
    return num / den;
  }

  static PowerLawDegrees from_alpha_beta(std::size_t n, double alpha, double beta) {
    if (!(beta >= 0.0)) throw InvalidArgument("gen_sfr: beta must be >= 0");
    PowerLawDegrees d{alpha, beta, 1};
    const double c = beta > 0.0 ? std::floor(std::exp(alpha / beta)) : static_cast<double>(n - 1);
    d.cutoff = static_cast<std::size_t>(std::clamp(c, 1.0, static_cast<double>(n - 1)));
    return d;
  }

  /// Fixes beta and picks the cutoff (equivalently alpha = beta * ln cutoff)
  /// whose distribution mean is closest to `target`.
  static PowerLawDegrees for_mean(std::size_t n, double beta, double target) {
    if (!(beta > 0.0)) throw InvalidArgument("gen_sfr: beta must be > 0");
    PowerLawDegrees d{0.0, beta, n - 1};
    if (target < 1.0 || target > d.mean())
      throw InvalidArgument("gen_sfr: mean degree " + std::to_string(target) + " unreachable for beta=" +
                            std::to_string(beta));
    std::size_t lo = 1, hi = n - 1;  // smallest cutoff with mean >= target
    while (lo < hi) {
      d.cutoff = (lo + hi) / 2;
      if (d.mean() < target) lo = d.cutoff + 1;
      else hi = d.cutoff;
    }
    d.cutoff = lo;
    if (lo > 1) {
      PowerLawDegrees below = d;
      below.cutoff = lo - 1;
      if (std::abs(below.mean() - target) < std::abs(d.mean() - target)) d = below;
    }
    d.alpha = beta * std::log(static_cast<double>(d.cutoff));
    return d;
  }
};

/// Scale-free random graph: n i.i.d. degrees from `law`, wired uniformly at
/// random by the configuration model.
inline Graph gen_sfr(std::size_t n, const PowerLawDegrees& law, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("gen_sfr: n must be >= 2");
  Rng rng = make_rng(seed, "sfr");
  std::vector<double> w(law.cutoff);
  for (std::size_t x = 1; x <= law.cutoff; ++x) w[x - 1] = law.weight(x);
  std::discrete_distribution<std::size_t> draw(w.begin(), w.end());
  constexpr int max_retries = 50;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    std::vector<std::size_t> deg(n);
    for (auto& d : deg) d = draw(rng) + 1;
    std::size_t total = 0;
    for (auto d : deg) total += d;
    if (total % 2) {
      std::vector<NodeId> ones;
      for (NodeId u = 0; u < n; ++u)
        if (deg[u] == 1) ones.push_back(u);
      if (!ones.empty()) {
        ++deg[ones[std::uniform_int_distribution<std::size_t>(0, ones.size() - 1)(rng)]];
      } else {
        std::vector<NodeId> room;
        for (NodeId u = 0; u < n; ++u)
          if (deg[u] + 1 < n) room.push_back(u);
        if (room.empty()) continue;
        ++deg[room[std::uniform_int_distribution<std::size_t>(0, room.size() - 1)(rng)]];
      }
    }
    if (!is_graphical(deg)) continue;
    try {
      return detail::configuration_model(deg, rng);
    } catch (const GenerationError&) {
      continue;
    }
  }
  throw GenerationError("gen_sfr: degree sequence non-graphical after retries");
}

inline Graph gen_sfr(std::size_t n, double alpha, double beta, std::uint64_t seed) {
  return gen_sfr(n, PowerLawDegrees::from_alpha_beta(n, alpha, beta), seed);
}

// ---------------------------------------------------------------------------
// Kleinberg small world on a hard-edged lattice
// ---------------------------------------------------------------------------

namespace detail {

inline std::size_t lattice_distance(std::size_t side, NodeId u, NodeId v) {
  const auto ui = u / side, uj = u % side, vi = v / side, vj = v % side;
  return (ui > vi ? ui - vi : vi - ui) + (uj > vj ? uj - vj : vj - uj);
}

/// Draws long-range targets for one node with Pr(v) proportional to
/// d(u,v)^-r_exp over all v farther than the local radius.
class LongRangeSampler {
 public:
  LongRangeSampler(std::size_t side, std::size_t radius, double r_exp)
      : side_(side), radius_(radius), weight_of_distance_(2 * side + 1, 0.0) {
    for (std::size_t d = radius + 1; d < weight_of_distance_.size(); ++d)
      weight_of_distance_[d] = std::pow(static_cast<double>(d), -r_exp);
    cumulative_.resize(side * side);
  }

  /// `count` distinct targets for node u; throws if fewer candidates exist.
  std::vector<NodeId> sample(NodeId u, std::size_t count, Rng& rng) {
    const std::size_t n = side_ * side_;
    double total = 0.0;
    std::size_t candidates = 0;
    for (NodeId v = 0; v < n; ++v) {
      const double w = weight_of_distance_[lattice_distance(side_, u, v)];
      if (w > 0.0) ++candidates;
      total += w;
      cumulative_[v] = total;
    }
    if (count > candidates) throw InvalidArgument("gen_kws: q exceeds the number of non-local nodes");
    std::uniform_real_distribution<double> unit(0.0, total);
    std::vector<NodeId> out;
    while (out.size() < count) {
      const double x = unit(rng);
      auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
      if (it == cumulative_.end()) continue;
      const auto v = static_cast<NodeId>(it - cumulative_.begin());
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
    return out;
  }

 private:
  std::size_t side_;
  std::size_t radius_;
  std::vector<double> weight_of_distance_;
  std::vector<double> cumulative_;
};

}  // namespace detail

/// Directed small-world graph on a side x side lattice (node id i*side + j).
/// Every node links to all nodes within lattice (l1) distance `radius`, plus q
/// distinct long-range links drawn with Pr proportional to d^-r_exp.
inline Graph gen_kws(std::size_t side, std::size_t radius, std::size_t q, double r_exp, std::uint64_t seed) {
  if (side < 2) throw InvalidArgument("gen_kws: side must be >= 2");
  if (radius < 1) throw InvalidArgument("gen_kws: radius must be >= 1");
  if (!(r_exp >= 0.0)) throw InvalidArgument("gen_kws: r_exp must be >= 0");
  const std::size_t n = side * side;
  Rng rng = make_rng(seed, "kws");
  std::vector<Arc> arcs;
  const auto r = static_cast<long>(radius);
  for (NodeId u = 0; u < n; ++u) {
    const long ui = u / side, uj = u % side;
    for (long di = -r; di <= r; ++di) {
      const long span = r - std::abs(di);
      for (long dj = -span; dj <= span; ++dj) {
        const long vi = ui + di, vj = uj + dj;
        if ((di == 0 && dj == 0) || vi < 0 || vj < 0 || vi >= static_cast<long>(side) ||
            vj >= static_cast<long>(side))
          continue;
        arcs.emplace_back(u, static_cast<NodeId>(vi * side + vj));
      }
    }
  }
  if (q > 0) {
    detail::LongRangeSampler sampler(side, radius, r_exp);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v : sampler.sample(u, q, rng)) arcs.emplace_back(u, v);
  }
  return Graph::from_arcs(n, true, arcs);
}

// ---------------------------------------------------------------------------
// Random D-regular graph
// ---------------------------------------------------------------------------

namespace detail {

// One pairing attempt; empty result if the remaining stubs cannot be joined.
inline std::optional<std::vector<Arc>> try_regular_pairing(std::size_t n, std::size_t degree, Rng& rng) {
  std::vector<NodeId> stubs;
  stubs.reserve(n * degree);
  for (NodeId u = 0; u < n; ++u) stubs.insert(stubs.end(), degree, u);
  std::unordered_set<std::uint64_t> edges;
  edges.reserve(n * degree);
  std::vector<Arc> out;
  while (!stubs.empty()) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::map<NodeId, std::size_t> leftover;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      NodeId a = stubs[i], b = stubs[i + 1];
      if (a != b && edges.insert(edge_key(a, b)).second) {
        out.emplace_back(std::min(a, b), std::max(a, b));
      } else {
        ++leftover[a];
        ++leftover[b];
      }
    }
    if (leftover.empty()) break;
    // Some pair of distinct leftover nodes must still be joinable.
    bool suitable = false;
    for (auto i = leftover.begin(); i != leftover.end() && !suitable; ++i)
      for (auto j = std::next(i); j != leftover.end(); ++j)
        if (!edges.count(edge_key(i->first, j->first))) {
          suitable = true;
          break;
        }
    if (!suitable) return std::nullopt;
    stubs.clear();
    for (auto [u, c] : leftover) stubs.insert(stubs.end(), c, u);
  }
  return out;
}

}  // namespace detail

/// Uniform-ish random simple D-regular graph by stub pairing, restarting on
/// dead ends and regenerating until connected.
inline Graph gen_regular(std::size_t n, std::size_t degree, std::uint64_t seed) {
  if (degree < 3) throw InvalidArgument("gen_regular: D must be >= 3");
  if (degree >= n) throw InvalidArgument("gen_regular: D must be < n");
  if ((n * degree) % 2) throw InvalidArgument("gen_regular: n*D must be even");
  constexpr std::uint64_t max_attempts = 1000;
  for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng = make_rng(seed, "regular", attempt);
    auto arcs = detail::try_regular_pairing(n, degree, rng);
    if (!arcs) continue;
    Graph g = Graph::from_arcs(n, false, *arcs);
    if (is_connected(g)) return g;
  }
  throw GenerationError("gen_regular: pairing failed after retries");
}

// ---------------------------------------------------------------------------
// Config-driven dispatch
// ---------------------------------------------------------------------------

enum class Model { ER, BA, SFR, KWS, Regular };

inline std::string to_string(Model m) {
  switch (m) {
    case Model::ER: return "er";
    case Model::BA: return "ba";
    case Model::SFR: return "sfr";
    case Model::KWS: return "kws";
    case Model::Regular: return "regular";
  }
  return "?";
}

inline Model parse_model(const std::string& s) {
  if (s == "er") return Model::ER;
  if (s == "ba") return Model::BA;
  if (s == "sfr") return Model::SFR;
  if (s == "kws") return Model::KWS;
  if (s == "regular") return Model::Regular;
  throw ParseError("unknown model '" + s + "'");
}

/// Default power-law exponent when the SFR model targets a mean degree.
inline constexpr double kDefaultSfrBeta = 1.3;
/// Default long-range distance exponent of the small-world model.
inline constexpr double kDefaultKwsExponent = 2.0;

struct GeneratorConfig {
  Model model = Model::ER;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  // ER
  double p = 0.0;
  // BA
  std::size_t m = 0;
  // SFR: either alpha (with beta) or a target mean degree (beta fixed)
  std::optional<double> alpha;
  double beta = kDefaultSfrBeta;
  std::optional<double> mean_degree;
  // KWS (n = side * side)
  std::size_t side = 0;
  std::size_t radius = 1;
  std::size_t q = 0;
  double r_exp = kDefaultKwsExponent;
  // REGULAR
  std::size_t degree = 0;

  void validate() const {
    auto fail = [](const std::string& msg) { throw InvalidArgument("invalid config: " + msg); };
    switch (model) {
      case Model::ER:
        if (n < 2) fail("n must be >= 2");
        if (!(p > 0.0 && p < 1.0)) fail("p must lie in (0, 1)");
        break;
      case Model::BA:
        if (n < 2) fail("n must be >= 2");
        if (m < 1 || m >= n) fail("need 1 <= m < n");
        break;
      case Model::SFR:
        if (n < 2) fail("n must be >= 2");
        if (!alpha && !mean_degree) fail("sfr needs alpha or mean_degree");
        if (!(beta >= 0.0)) fail("beta must be >= 0");
        break;
      case Model::KWS:
        if (side < 2) fail("side must be >= 2");
        if (n != side * side) fail("n must equal side^2");
        if (radius < 1) fail("radius must be >= 1");
        if (!(r_exp >= 0.0)) fail("r_exp must be >= 0");
        break;
      case Model::Regular:
        if (degree < 3) fail("D must be >= 3");
        if (degree >= n) fail("D must be < n");
        if ((n * degree) % 2) fail("n*D must be even");
        break;
    }
  }

  /// Flat key=value map of the parameters relevant to the model.
  std::map<std::string, std::string> to_map() const {
    auto num = [](double x) {
      std::ostringstream o;
      o.precision(17);
      o << x;
      return o.str();
    };
    std::map<std::string, std::string> kv{
        {"model", to_string(model)}, {"n", std::to_string(n)}, {"seed", std::to_string(seed)}};
    switch (model) {
      case Model::ER: kv["p"] = num(p); break;
      case Model::BA: kv["m"] = std::to_string(m); break;
      case Model::SFR:
        if (alpha) kv["alpha"] = num(*alpha);
        kv["beta"] = num(beta);
        if (mean_degree) kv["mean_degree"] = num(*mean_degree);
        break;
      case Model::KWS:
        kv["side"] = std::to_string(side);
        kv["radius"] = std::to_string(radius);
        kv["q"] = std::to_string(q);
        kv["r_exp"] = num(r_exp);
        break;
      case Model::Regular: kv["degree"] = std::to_string(degree); break;
    }
    return kv;
  }

  std::string to_key_values() const {
    std::string out;
    for (const auto& [k, v] : to_map()) out += k + "=" + v + "\n";
    return out;
  }

  static GeneratorConfig from_key_values(const std::string& text) {
    GeneratorConfig c;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool have_model = false;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError("expected key=value", lineno);
      const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
      try {
        if (key == "model") c.model = parse_model(val), have_model = true;
        else if (key == "n") c.n = std::stoull(val);
        else if (key == "seed") c.seed = std::stoull(val);
        else if (key == "p") c.p = std::stod(val);
        else if (key == "m") c.m = std::stoull(val);
        else if (key == "alpha") c.alpha = std::stod(val);
        else if (key == "beta") c.beta = std::stod(val);
        else if (key == "mean_degree") c.mean_degree = std::stod(val);
        else if (key == "side") c.side = std::stoull(val);
        else if (key == "radius") c.radius = std::stoull(val);
        else if (key == "q") c.q = std::stoull(val);
        else if (key == "r_exp") c.r_exp = std::stod(val);
        else if (key == "degree") c.degree = std::stoull(val);
        else throw ParseError("unknown key '" + key + "'", lineno);
      } catch (const std::logic_error&) {
        throw ParseError("bad value for '" + key + "'", lineno);
      }
    }
    if (!have_model) throw ParseError("missing model");
    return c;
  }
};

inline Graph generate(const GeneratorConfig& c) {
  c.validate();
  switch (c.model) {
    case Model::ER: return gen_er(c.n, c.p, c.seed);
    case Model::BA: return gen_ba(c.n, c.m, c.seed);
    case Model::SFR: {
      auto law = c.mean_degree ? PowerLawDegrees::for_mean(c.n, c.beta, *c.mean_degree)
                               : PowerLawDegrees::from_alpha_beta(c.n, *c.alpha, c.beta);
      return gen_sfr(c.n, law, c.seed);
    }
    case Model::KWS: return gen_kws(c.side, c.radius, c.q, c.r_exp, c.seed);
    case Model::Regular: return gen_regular(c.n, c.degree, c.seed);
  }
  throw InvalidArgument("unknown model");
}

}  // namespace mixnet
