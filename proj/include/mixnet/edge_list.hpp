#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mixnet/error.hpp"
#include "mixnet/graph.hpp"

namespace mixnet {

// Edge-list text format:
//
//   # directed=<0|1> n=<int>      optional first header line
//   # any other comment
//   u v                           one arc per line
//
// Whitespace tolerant, LF or CRLF line endings.

struct LoadOptions {
  /// Overrides the header's directedness; undirected when neither is given.
  std::optional<bool> directed;
  /// Compact sparse ids to 0..k-1 in ascending order of external id.
  bool remap_ids = false;
};

struct LoadResult {
  Graph graph;
  SimplifyReport dropped;
  /// external_id[i] is the id in the file of node i (identity unless remapped).
  std::vector<std::uint64_t> external_id;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline bool parse_u64(std::string_view tok, std::uint64_t& out) {
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc{} && p == tok.data() + tok.size();
}

// Reads "key=value" pairs out of a header comment.
inline void parse_header(std::string_view body, std::optional<bool>& directed,
                         std::optional<std::uint64_t>& n) {
  std::istringstream in{std::string(body)};
  std::string tok;
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    std::string_view key(tok.data(), eq), val(tok.data() + eq + 1, tok.size() - eq - 1);
    std::uint64_t x = 0;
    if (!parse_u64(val, x)) continue;
    if (key == "directed") directed = (x != 0);
    if (key == "n") n = x;
  }
}

}  // namespace detail

inline LoadResult read_edge_list(std::istream& in, const LoadOptions& opts = {}) {
  std::optional<bool> header_directed;
  std::optional<std::uint64_t> header_n;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
  std::string line;
  std::size_t lineno = 0;
  bool seen_body = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto s = detail::trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      if (!seen_body) detail::parse_header(s.substr(1), header_directed, header_n);
      continue;
    }
    seen_body = true;
    std::istringstream ls{std::string(s)};
    std::string a, b, extra;
    std::uint64_t u = 0, v = 0;
    if (!(ls >> a >> b) || (ls >> extra) || !detail::parse_u64(a, u) || !detail::parse_u64(b, v))
      throw ParseError("expected two non-negative integers", lineno);
    raw.emplace_back(u, v);
  }

  const bool directed = opts.directed.value_or(header_directed.value_or(false));
  LoadResult r;
  std::uint64_t n = 0;
  if (opts.remap_ids) {
    for (auto [u, v] : raw) {
      r.external_id.push_back(u);
      r.external_id.push_back(v);
    }
    std::sort(r.external_id.begin(), r.external_id.end());
    r.external_id.erase(std::unique(r.external_id.begin(), r.external_id.end()), r.external_id.end());
    std::unordered_map<std::uint64_t, NodeId> index;
    for (std::size_t i = 0; i < r.external_id.size(); ++i) index[r.external_id[i]] = static_cast<NodeId>(i);
    for (auto& [u, v] : raw) {
      u = index[u];
      v = index[v];
    }
    n = r.external_id.size();
  } else {
    for (auto [u, v] : raw) n = std::max({n, u + 1, v + 1});
    if (header_n) {
      if (*header_n < n) throw ParseError("node id exceeds header n=" + std::to_string(*header_n));
      n = *header_n;
    }
    if (n > std::numeric_limits<NodeId>::max()) throw ParseError("node id too large");
    r.external_id.resize(n);
    std::iota(r.external_id.begin(), r.external_id.end(), std::uint64_t{0});
  }
  if (n == 0) throw ParseError("empty graph");

  std::vector<Arc> arcs;
  arcs.reserve(raw.size());
  for (auto [u, v] : raw) arcs.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  r.graph = Graph::from_arcs(n, directed, arcs, &r.dropped);
  return r;
}

inline LoadResult load_edge_list(const std::string& path, const LoadOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_edge_list(in, opts);
}

inline LoadResult load_edge_list(const std::string& path, bool directed) {
  return load_edge_list(path, LoadOptions{directed, false});
}

inline void write_edge_list(const Graph& g, std::ostream& out) {
  out << "# directed=" << (g.directed() ? 1 : 0) << " n=" << g.node_count() << '\n';
  for (auto [u, v] : g.arcs()) out << u << ' ' << v << '\n';
}

inline void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_edge_list(g, out);
  out.flush();
  if (!out) throw Error("write failed: " + path);
}

}  // namespace mixnet
