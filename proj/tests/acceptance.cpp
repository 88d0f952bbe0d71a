// One PASS/FAIL line per acceptance criterion. Seeds are fixed; a failing line
// is reported as is.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mixnet/mixnet.hpp"
#include "oracles.hpp"

using namespace mixnet;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::size_t worker_count() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

struct Measured {
  double max_bits = 0.0;
  double t = -1.0;  // -1: not reached
  Graph graph;
};

// Max anonymity and mean convergence time over point-mass starts, on the giant component.
Measured measure(const Graph& raw, std::size_t starts, std::size_t t_max, std::uint64_t seed) {
  Measured m;
  m.graph = raw.directed() ? raw : giant_component(raw).graph;
  const bool lazy = !m.graph.directed() && !bipartition(m.graph).empty();
  TransitionMatrix P(m.graph, lazy);
  Distribution pi = P.reversible() ? degree_stationary(P) : stationary(P);
  auto ids = random_starts(m.graph.node_count(), starts, seed);
  auto r = mean_convergence_profile(P, pi, ids, t_max);
  m.max_bits = r.max_anonymity_bits;
  if (r.t_converge) m.t = static_cast<double>(*r.t_converge);
  return m;
}

std::string fmt(double x, int prec = 4) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(prec);
  o << x;
  return o.str();
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("violated: ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  Outcome o;
  const auto t0 = clock_type::now();
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.note(std::string("exception: ") + e.what());
  }
  if (!o.pass) ++failures;
  std::printf("%s criterion %d (%s) [%.1f s]: %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), seconds_since(t0),
              o.detail.c_str());
  std::fflush(stdout);
}

constexpr std::size_t kN = 5000;
constexpr std::size_t kStarts = 200;
constexpr std::size_t kTMax = 100;

// Topologies of criteria 1-4 (first seed), used again by the attack criteria.
std::vector<std::pair<std::string, Graph>> baseline_topologies() {
  std::vector<std::pair<std::string, Graph>> out;
  out.emplace_back("regular D=14", gen_regular(kN, 14, 1));
  out.emplace_back("ER p=0.0028", giant_component(gen_er(kN, 0.0028, 1)).graph);
  for (int d = 2; d <= 6; ++d)
    out.emplace_back("SFR <d>=" + std::to_string(d),
                     giant_component(gen_sfr(kN, PowerLawDegrees::for_mean(kN, kDefaultSfrBeta, d), 1)).graph);
  for (std::size_t m = 2; m <= 7; ++m) out.emplace_back("BA m=" + std::to_string(m), gen_ba(kN, m, 1));
  return out;
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = clock_type::now();
  Graph g = gen_regular(kN, 14, 1);
  auto m = measure(g, kStarts, kTMax, 1);
  TransitionMatrix P(g);
  const double l2 = lambda2_estimate(P, degree_stationary(P)).lambda2;
  const double secs = seconds_since(t0);
  o.note("H=" + fmt(m.max_bits) + " lambda2=" + fmt(l2) + " t=" + fmt(m.t, 0) + " runtime=" + fmt(secs, 1) + "s");
  o.require(std::abs(m.max_bits - 12.2877) <= 1e-3, "H within 1e-3 of 12.2877");
  o.require(l2 >= 0.515 && l2 <= 0.62, "lambda2 in [0.515, 0.62]");
  o.require(m.t >= 0 && m.t <= 8, "t <= 8");
  o.require(secs < 30.0, "runtime < 30 s");
  return o;
}

Outcome criterion2() {
  Outcome o;
  double h = 0.0;
  std::string ts, ds;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Graph g = gen_er(kN, 0.0028, seed);
    const double mean_deg = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
    auto m = measure(g, kStarts, kTMax, seed);
    h += m.max_bits / 5.0;
    ts += fmt(m.t, 0) + " ";
    ds += fmt(mean_deg, 2) + " ";
    o.require(std::abs(mean_deg - 14.0) <= 0.5, "mean degree 14 +- 0.5 (seed " + std::to_string(seed) + ")");
    o.require(m.t >= 5 && m.t <= 9, "t in [5, 9] (seed " + std::to_string(seed) + ")");
  }
  o.note("mean degrees " + ds + "mean H=" + fmt(h) + " t per seed " + ts);
  o.require(std::abs(h - 12.2339) <= 0.05, "mean H 12.2339 +- 0.05");
  return o;
}

Outcome criterion3() {
  Outcome o;
  const double h_ref[] = {11.4383, 11.5626, 11.5958, 11.6135, 11.6351};
  const double t_ref[] = {8, 7, 6, 6, 5};
  std::vector<double> hs, ts;
  for (int d = 2; d <= 6; ++d) {
    auto law = PowerLawDegrees::for_mean(kN, kDefaultSfrBeta, d);
    double h = 0.0, t = 0.0;
    bool reached = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto m = measure(gen_sfr(kN, law, seed), kStarts, kTMax, seed);
      h += m.max_bits / 5.0;
      t += m.t / 5.0;
      reached = reached && m.t >= 0;
    }
    hs.push_back(h);
    ts.push_back(t);
    const int i = d - 2;
    o.note("<d>=" + std::to_string(d) + " H=" + fmt(h) + " t=" + fmt(t, 1));
    o.require(reached, "converged within horizon (<d>=" + std::to_string(d) + ")");
    o.require(std::abs(h - h_ref[i]) <= 0.15, "H +-0.15 of " + fmt(h_ref[i]) + " (<d>=" + std::to_string(d) + ")");
    o.require(std::abs(t - t_ref[i]) <= 2.0, "t +-2 of " + fmt(t_ref[i], 0) + " (<d>=" + std::to_string(d) + ")");
  }
  for (std::size_t i = 1; i < hs.size(); ++i) {
    o.require(hs[i] > hs[i - 1], "H strictly increasing at <d>=" + std::to_string(i + 2));
    o.require(ts[i] <= ts[i - 1], "t non-increasing at <d>=" + std::to_string(i + 2));
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  const double h_ref[] = {11.5852, 11.6961, 11.7293, 11.7687, 11.7953, 11.8090};
  const double t_ref[] = {15, 10, 6, 6, 6, 6};
  std::vector<double> ts;
  for (std::size_t m = 2; m <= 7; ++m) {
    auto r = measure(gen_ba(kN, m, 1), kStarts, kTMax, 1);
    ts.push_back(r.t);
    const std::size_t i = m - 2;
    o.note("m=" + std::to_string(m) + " H=" + fmt(r.max_bits) + " t=" + fmt(r.t, 0));
    o.require(std::abs(r.max_bits - h_ref[i]) <= 0.15, "H +-0.15 of " + fmt(h_ref[i]) + " (m=" + std::to_string(m) + ")");
    o.require(r.t >= 0 && std::abs(r.t - t_ref[i]) <= 3.0, "t +-3 of " + fmt(t_ref[i], 0) + " (m=" + std::to_string(m) + ")");
  }
  for (std::size_t i = 1; i < ts.size(); ++i)
    o.require(ts[i] <= ts[i - 1], "t non-increasing at m=" + std::to_string(i + 2));
  return o;
}

Outcome criterion5() {
  Outcome o;
  constexpr std::size_t side = 71;  // 5041 nodes
  constexpr std::size_t kws_starts = 64, kws_tmax = 300;
  auto t_of = [&](std::size_t radius, std::size_t q) {
    auto m = measure(gen_kws(side, radius, q, kDefaultKwsExponent, 1), kws_starts, kws_tmax, 1);
    o.note("r=" + std::to_string(radius) + " q=" + std::to_string(q) + " t=" + (m.t < 0 ? "not reached" : fmt(m.t, 0)));
    return m.t < 0 ? static_cast<double>(kws_tmax + 1) : m.t;
  };
  const double r1q10 = t_of(1, 10), r1q2 = t_of(1, 2);
  const double r4q2 = t_of(4, 2), r4q10 = t_of(4, 10);
  o.require(r1q10 <= 8, "radius 1, q=10: t <= 8");
  o.require(r4q2 >= 40, "radius 4, q=2: t >= 40");
  o.require(r4q10 >= 40, "radius 4, q=10: t >= 40");
  o.require(r4q2 >= 4 * r1q2, "ratio r4/r1 >= 4 at q=2");
  o.require(r4q10 >= 4 * r1q10, "ratio r4/r1 >= 4 at q=10");
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto t0 = clock_type::now();
  auto from_pmin = [](double p_min) { return static_cast<std::size_t>(std::llround(1.0 / p_min)); };
  const double expander = batch_size(from_pmin(0.0714), 5);
  const double er = batch_size(from_pmin(0.0333), 5);
  const double lj = batch_size(from_pmin(0.00857), 5);
  o.note("expander=" + fmt(expander, 2) + " ER=" + fmt(er, 2) + " LJ=" + fmt(lj, 2));
  o.require(std::abs(expander - 4.68) < 1e-9, "expander 4.68");
  o.require(std::abs(er - 10.44) < 1e-9, "ER 10.44");
  o.require(std::abs(lj - 41.64) <= 0.2, "LJ 41.64 +- 0.2");
  // SF-linear: the printed p_min values are too coarse to pin the hub degree,
  // so the degree is the one the row's batch size implies.
  const double sf_batch[] = {74.16, 74.16, 86.04, 93.6, 96.12, 112.32};
  std::string sf;
  for (double b : sf_batch) {
    const auto deg = static_cast<std::size_t>(std::llround(b / (9.0 / 25.0))) + 1;
    const double got = batch_size(deg, 5);
    sf += std::to_string(deg) + "->" + fmt(got, 2) + " ";
    o.require(std::abs(got - b) <= 0.2, "SF-linear " + fmt(b, 2) + " +- 0.2");
  }
  o.note("SF-linear degrees " + sf);
  // the network form agrees with the formula on a star whose hub has degree 116
  std::vector<Arc> arcs;
  for (NodeId u = 1; u <= 116; ++u) arcs.emplace_back(0, u);
  const auto row = network_batch_size(Graph::from_arcs(117, false, arcs), 5);
  o.require(row.batch_size == batch_size(116, 5), "network_batch_size matches batch_size on a star");
  o.require(batch_size(14, 5) == expander, "deterministic");
  const double secs = seconds_since(t0);
  o.require(secs < 1.0, "runtime < 1 s");
  return o;
}

Outcome criterion7(const std::vector<std::pair<std::string, Graph>>& topo) {
  Outcome o;
  double worst5 = 0.0;
  std::string worst_name;
  std::uint64_t seed = 700;
  for (const auto& [name, g] : topo)
    for (std::size_t k : {10, 25, 50}) {
      auto top = top_degree_nodes(g, k);
      double prev = 0.0, prev_sigma = 0.0;
      for (std::size_t len = 3; len <= 6; ++len) {
        auto e = simulate_compromise(g, {top, len, 100'000, ++seed, worker_count()});
        const std::string at = name + " k=" + std::to_string(k) + " len=" + std::to_string(len);
        if (len >= 5) {
          o.require(e.fraction < 1e-3, "fraction < 1e-3 at " + at + " (got " + fmt(e.fraction, 5) + ")");
          if (e.fraction >= worst5) worst5 = e.fraction, worst_name = at;
        }
        if (len > 3)
          o.require(e.fraction <= prev + 3 * std::hypot(e.sigma, prev_sigma), "monotone at " + at);
        prev = e.fraction, prev_sigma = e.sigma;
      }
    }
  o.note("largest fraction at length >= 5: " + fmt(worst5, 5) + " (" + worst_name + ")");
  return o;
}

// Connected graphs on n nodes up to isomorphism, as edge lists.
std::vector<std::vector<Arc>> connected_graphs(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  const std::size_t e = pairs.size();
  std::vector<std::vector<int>> index(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < e; ++i) index[pairs[i].first][pairs[i].second] = index[pairs[i].second][pairs[i].first] = static_cast<int>(i);
  std::vector<std::vector<NodeId>> perms;
  std::vector<NodeId> p(n);
  std::iota(p.begin(), p.end(), NodeId{0});
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));

  std::set<std::uint32_t> seen;
  std::vector<std::vector<Arc>> out;
  for (std::uint32_t mask = 0; mask < (1u << e); ++mask) {
    std::uint32_t canon = UINT32_MAX;
    for (const auto& q : perms) {
      std::uint32_t img = 0;
      for (std::size_t i = 0; i < e; ++i)
        if (mask >> i & 1u) img |= 1u << index[q[pairs[i].first]][q[pairs[i].second]];
      canon = std::min(canon, img);
    }
    if (!seen.insert(canon).second) continue;
    std::vector<Arc> arcs;
    for (std::size_t i = 0; i < e; ++i)
      if (canon >> i & 1u) arcs.emplace_back(pairs[i].first, pairs[i].second);
    if (is_connected(Graph::from_arcs(n, false, arcs))) out.push_back(std::move(arcs));
  }
  return out;
}

Graph random_connected(std::size_t n, double p, std::uint64_t seed) {
  for (std::uint64_t s = seed;; s += 7919) {
    Graph g = gen_er(n, p, s);
    if (is_connected(g)) return g;
  }
}

Outcome criterion8() {
  Outcome o;
  // (a) stationary distribution against d_i / 2L
  double worst_a = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Graph g = random_connected(20 + seed * 7, 0.15 + 0.005 * static_cast<double>(seed % 10), 8000 + seed);
    TransitionMatrix P(g, !bipartition(g).empty());
    auto power = stationary(P);
    for (NodeId u = 0; u < g.node_count(); ++u)
      worst_a = std::max(worst_a, std::abs(power[u] - static_cast<double>(g.out_degree(u)) /
                                                          (2.0 * static_cast<double>(g.edge_count()))));
  }
  o.note("(a) max error " + fmt(worst_a * 1e9, 3) + "e-9");
  o.require(worst_a <= 1e-8, "(a) stationary within 1e-8");

  // (b) simulation against exhaustive walk enumeration
  std::size_t graphs = 0, comparisons = 0, misses = 0;
  double worst_z = 0.0;
  std::uint64_t seed = 8100;
  for (std::size_t n = 2; n <= 6; ++n)
    for (const auto& arcs : connected_graphs(n)) {
      Graph g = Graph::from_arcs(n, false, arcs);
      auto bad = top_degree_nodes(g, (n + 1) / 2);
      ++graphs;
      for (int len = 1; len <= 4; ++len) {
        const double exact = oracle::all_compromised_probability(g, bad, len);
        auto e = simulate_compromise(g, {bad, static_cast<std::size_t>(len), 100'000, ++seed, 1});
        const double sigma = std::sqrt(exact * (1.0 - exact) / 100'000.0);
        const double dev = std::abs(e.fraction - exact);
        ++comparisons;
        if (sigma > 0) worst_z = std::max(worst_z, dev / sigma);
        if (dev > 3 * sigma + 1e-12) ++misses;
      }
    }
  o.note("(b) " + std::to_string(graphs) + " graphs, " + std::to_string(comparisons) + " comparisons, " +
         std::to_string(misses) + " beyond 3 sigma, max |z|=" + fmt(worst_z, 2));
  o.require(graphs == 142, "(b) 142 connected graphs on 2..6 nodes");
  o.require(misses == 0, "(b) all within 3 sigma");

  // (c) lambda2 against the dense spectrum
  std::vector<Graph> small;
  for (std::size_t n = 3; n <= 12; ++n) {
    std::vector<Arc> kn, cn, pn, sn, kb;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) kn.emplace_back(u, v);
      cn.emplace_back(u, static_cast<NodeId>((u + 1) % n));
      if (u + 1 < n) pn.emplace_back(u, u + 1);
      if (u > 0) sn.emplace_back(0, u);
      for (NodeId v = static_cast<NodeId>(n / 2); v < n; ++v)
        if (u < n / 2) kb.emplace_back(u, v);
    }
    for (auto* a : {&kn, &cn, &pn, &sn, &kb}) small.push_back(Graph::from_arcs(n, false, *a));
  }
  for (std::uint64_t s = 0; s < 60; ++s) small.push_back(random_connected(4 + s % 9, 0.3 + 0.01 * static_cast<double>(s % 20), 8200 + s));
  double worst_c = 0.0;
  for (const auto& g : small)
    for (bool lazy : {false, true}) {
      TransitionMatrix P(g, lazy);
      const double est = lambda2_estimate(P, degree_stationary(P)).lambda2;
      worst_c = std::max(worst_c, std::abs(est - oracle::lambda2_dense(g, lazy)));
    }
  o.note("(c) " + std::to_string(small.size()) + " graphs, max error " + fmt(worst_c * 1e9, 3) + "e-9");
  o.require(worst_c <= 1e-6, "(c) lambda2 within 1e-6");

  // (d) conductance sandwich
  std::size_t violations = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    Graph g = random_connected(5 + s % 12, 0.3, 8300 + s);
    const double phi = conductance_exact(g);
    TransitionMatrix P(g);
    const double l2 = lambda2_estimate(P, degree_stationary(P)).lambda2;
    if (!conductance_bounds(phi).contains(l2, 1e-9)) ++violations;
  }
  o.note("(d) " + std::to_string(violations) + " of 20 outside the conductance bounds");
  o.require(violations == 0, "(d) 1-2phi <= lambda2 <= 1-phi^2/2");
  return o;
}

Outcome criterion9() {
  Outcome o;
  const auto t0 = clock_type::now();
  GeneratorConfig c;
  c.model = Model::BA;
  c.m = 3;
  c.seed = 9;
  auto sweep = lambda2_size_experiment(c, {1000, 2000, 4000}, 5);
  const double secs = seconds_since(t0);
  for (const auto& r : sweep.rows) o.note("n=" + std::to_string(r.n) + " mean lambda2=" + fmt(r.mean_lambda2));
  o.note("spread=" + fmt(sweep.spread()) + " runtime=" + fmt(secs, 1) + "s");
  o.require(sweep.spread() < 0.05, "spread < 0.05");
  o.require(secs < 300.0, "runtime < 5 min");
  return o;
}

Outcome criterion10(const std::vector<std::pair<std::string, Graph>>& topo) {
  Outcome o;
  std::uint64_t seed = 1000;
  double tightest = 1.0;
  std::string tight_at;
  for (const auto& [name, g] : topo) {
    TransitionMatrix P(g);
    if (!P.reversible()) continue;
    auto pi = degree_stationary(P);
    auto top = top_degree_nodes(g, 50);
    const double mass = set_mass(pi, top);
    const double gap = lambda2_estimate(P, pi).gap;
    for (std::size_t t = 3; t <= 10; ++t) {
      auto e = simulate_compromise(g, {top, t, 100'000, ++seed, worker_count()});
      const double bound = gilbert_bound(mass, gap, t);
      const double margin = bound - (e.fraction - 3 * e.sigma);
      if (margin < tightest) tightest = margin, tight_at = name + " t=" + std::to_string(t);
      o.require(margin >= 0, name + " t=" + std::to_string(t));
    }
  }
  o.note("smallest margin " + fmt(tightest, 4) + " (" + tight_at + ")");
  return o;
}

}  // namespace

int main() {
  report(1, "expander baseline", criterion1);
  report(2, "ER baseline", criterion2);
  report(3, "scale-free random sweep", criterion3);
  report(4, "preferential attachment sweep", criterion4);
  report(5, "small-world contrast", criterion5);
  report(6, "batch-size table", criterion6);
  const auto topo = baseline_topologies();
  report(7, "compromised routes", [&] { return criterion7(topo); });
  report(8, "oracle equivalences", criterion8);
  report(9, "lambda2 size independence", criterion9);
  report(10, "Gilbert bound", [&] { return criterion10(topo); });
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
