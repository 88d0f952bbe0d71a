#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "mixnet/error.hpp"

namespace mixnet {

using NodeId = std::uint32_t;
using Arc = std::pair<NodeId, NodeId>;

// Counts of arcs discarded while building a simple graph.
struct SimplifyReport {
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
};

/// Simple graph over nodes 0..n-1 in compressed adjacency form.
///
/// Undirected graphs store every edge as two arcs; `edge_count()` then counts
/// undirected edges. Neighbor lists are sorted ascending. Immutable after
/// construction.
class Graph {
 public:
  Graph() = default;

  /// Builds a simple graph from an arc list. Self-loops and repeated arcs
  /// (for undirected graphs, repeated edges in either orientation) are dropped
  /// and counted in `report` when given.
  static Graph from_arcs(std::size_t n, bool directed, std::span<const Arc> arcs,
                         SimplifyReport* report = nullptr) {
    std::vector<Arc> cleaned;
    cleaned.reserve(directed ? arcs.size() : 2 * arcs.size());
    SimplifyReport rep;
    for (auto [u, v] : arcs) {
      if (u >= n || v >= n) throw InvalidArgument("arc endpoint out of range");
      if (u == v) {
        ++rep.self_loops;
        continue;
      }
      if (!directed && u > v) std::swap(u, v);
      cleaned.emplace_back(u, v);
    }
    std::sort(cleaned.begin(), cleaned.end());
    auto last = std::unique(cleaned.begin(), cleaned.end());
    rep.duplicates = static_cast<std::size_t>(cleaned.end() - last);
    cleaned.erase(last, cleaned.end());

    Graph g;
    g.directed_ = directed;
    g.edge_count_ = cleaned.size();
    if (!directed) {
      const std::size_t m = cleaned.size();
      for (std::size_t i = 0; i < m; ++i) cleaned.emplace_back(cleaned[i].second, cleaned[i].first);
      std::sort(cleaned.begin(), cleaned.end());
    }
    g.offsets_.assign(n + 1, 0);
    for (const auto& [u, v] : cleaned) ++g.offsets_[u + 1];
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.targets_.resize(cleaned.size());
    for (std::size_t i = 0; i < cleaned.size(); ++i) g.targets_[i] = cleaned[i].second;
    if (report) *report = rep;
    return g;
  }

  /// Builds from per-node neighbor lists (must already describe a simple graph).
  static Graph from_adjacency(bool directed, const std::vector<std::vector<NodeId>>& adj) {
    std::vector<Arc> arcs;
    for (std::size_t u = 0; u < adj.size(); ++u)
      for (NodeId v : adj[u])
        if (directed || u < v) arcs.emplace_back(static_cast<NodeId>(u), v);
    return from_arcs(adj.size(), directed, arcs);
  }

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  bool directed() const noexcept { return directed_; }
  /// Undirected edges L for undirected graphs, arcs for directed graphs.
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::size_t arc_count() const noexcept { return targets_.size(); }

  std::span<const NodeId> neighbors(NodeId u) const noexcept {
    return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
  }
  std::size_t out_degree(NodeId u) const noexcept { return offsets_[u + 1] - offsets_[u]; }
  bool has_arc(NodeId u, NodeId v) const noexcept {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// All arcs (u, v) in row order; for undirected graphs each edge once with u < v.
  std::vector<Arc> arcs() const {
    std::vector<Arc> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < node_count(); ++u)
      for (NodeId v : neighbors(u))
        if (directed_ || u < v) out.emplace_back(u, v);
    return out;
  }

  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const NodeId> targets() const noexcept { return targets_; }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  bool directed_ = false;
  std::size_t edge_count_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
};

/// Out-degrees (degrees for undirected graphs).
struct DegreeSequence {
  std::vector<std::size_t> degrees;

  std::size_t sum() const { return std::accumulate(degrees.begin(), degrees.end(), std::size_t{0}); }
};

struct DegreeStats {
  DegreeSequence sequence;
  std::size_t min = 0;
  std::size_t max = 0;
  double mean = 0.0;
};

inline DegreeSequence degree_sequence(const Graph& g) {
  DegreeSequence ds;
  ds.degrees.resize(g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) ds.degrees[u] = g.out_degree(u);
  return ds;
}

inline DegreeStats degree_stats(const Graph& g) {
  DegreeStats s;
  s.sequence = degree_sequence(g);
  const auto& d = s.sequence.degrees;
  if (d.empty()) return s;
  auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  s.min = *lo;
  s.max = *hi;
  // 2L/n for undirected graphs, arcs/n for directed ones; both equal arc_count/n.
  s.mean = static_cast<double>(g.arc_count()) / static_cast<double>(d.size());
  return s;
}

/// In-neighbor lists as a compressed structure (transpose of the arc set).
struct Transpose {
  std::vector<std::size_t> offsets;
  std::vector<NodeId> sources;

  std::span<const NodeId> in_neighbors(NodeId v) const noexcept {
    return {sources.data() + offsets[v], sources.data() + offsets[v + 1]};
  }
};

inline Transpose transpose(const Graph& g) {
  const std::size_t n = g.node_count();
  Transpose t;
  t.offsets.assign(n + 1, 0);
  for (NodeId v : g.targets()) ++t.offsets[v + 1];
  std::partial_sum(t.offsets.begin(), t.offsets.end(), t.offsets.begin());
  t.sources.resize(g.arc_count());
  std::vector<std::size_t> fill(t.offsets.begin(), t.offsets.end() - 1);
  // Row-order traversal keeps each in-list sorted by source id.
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v : g.neighbors(u)) t.sources[fill[v]++] = u;
  return t;
}

/// Component label per node (weak connectivity for directed graphs). Labels are
/// assigned in order of each component's smallest node id.
inline std::vector<std::uint32_t> component_labels(const Graph& g, std::size_t* count = nullptr) {
  const std::size_t n = g.node_count();
  constexpr auto unset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> label(n, unset);
  Transpose rev;
  if (g.directed()) rev = transpose(g);
  std::uint32_t next = 0;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (label[s] != unset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      auto visit = [&](NodeId v) {
        if (label[v] == unset) {
          label[v] = next;
          stack.push_back(v);
        }
      };
      for (NodeId v : g.neighbors(u)) visit(v);
      if (g.directed())
        for (NodeId v : rev.in_neighbors(u)) visit(v);
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

inline bool is_connected(const Graph& g) {
  std::size_t count = 0;
  component_labels(g, &count);
  return count <= 1;
}

/// Subgraph induced by `keep` (sorted ascending); node keep[i] becomes i.
inline Graph induced_subgraph(const Graph& g, std::span<const NodeId> keep) {
  constexpr auto absent = static_cast<NodeId>(-1);
  std::vector<NodeId> relabel(g.node_count(), absent);
  for (std::size_t i = 0; i < keep.size(); ++i) relabel[keep[i]] = static_cast<NodeId>(i);
  std::vector<Arc> arcs;
  for (NodeId u : keep)
    for (NodeId v : g.neighbors(u))
      if (relabel[v] != absent && (g.directed() || u < v)) arcs.emplace_back(relabel[u], relabel[v]);
  return Graph::from_arcs(keep.size(), g.directed(), arcs);
}

struct ComponentResult {
  Graph graph;
  /// original_id[i] is the input id of output node i.
  std::vector<NodeId> original_id;
  double retained_fraction = 0.0;
};

/// Largest (weakly) connected component, relabeled 0..n'-1 in original order.
/// Equal-size components are resolved in favor of the one holding the smallest id.
inline ComponentResult giant_component(const Graph& g) {
  if (g.node_count() == 0) throw InvalidArgument("giant_component: empty graph");
  std::size_t count = 0;
  auto label = component_labels(g, &count);
  std::vector<std::size_t> size(count, 0);
  for (auto l : label) ++size[l];
  // max_element returns the first maximum, i.e. the lowest label.
  const auto best = static_cast<std::uint32_t>(std::max_element(size.begin(), size.end()) - size.begin());
  ComponentResult r;
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (label[u] == best) r.original_id.push_back(u);
  r.graph = count == 1 ? g : induced_subgraph(g, r.original_id);
  r.retained_fraction = static_cast<double>(r.original_id.size()) / static_cast<double>(g.node_count());
  return r;
}

/// Two-coloring of an undirected graph, or empty when it is not bipartite.
inline std::vector<std::int8_t> bipartition(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::int8_t> side(n, 0);
  std::queue<NodeId> q;
  for (NodeId s = 0; s < n; ++s) {
    if (side[s] != 0) continue;
    side[s] = 1;
    q.push(s);
    while (!q.empty()) {
      NodeId u = q.front();
      q.pop();
      for (NodeId v : g.neighbors(u)) {
        if (side[v] == 0) {
          side[v] = static_cast<std::int8_t>(-side[u]);
          q.push(v);
        } else if (side[v] == side[u]) {
          return {};
        }
      }
    }
  }
  return side;
}

}  // namespace mixnet
