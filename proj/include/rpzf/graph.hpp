#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rpzf/errors.hpp"

namespace rpzf {

// Simple, undirected, connected graph on vertices 0..n-1.
// Connectivity and simplicity are enforced at construction.
class Graph {
 public:
  Graph(int n, const std::vector<std::pair<int, int>>& edges) : n_(n), adj_(static_cast<std::size_t>(std::max(n, 0))) {
    if (n < 2) throw DomainError("graph: vertex count must be at least 2");
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
      if (u < 0 || u >= n || v < 0 || v >= n)
        throw DomainError("graph: vertex index out of range: (" + std::to_string(u) + "," + std::to_string(v) + ")");
      if (u == v) throw DomainError("graph: self-loop at vertex " + std::to_string(u));
      auto key = std::minmax(u, v);
      if (!seen.insert(key).second)
        throw DomainError("graph: duplicate edge (" + std::to_string(key.first) + "," + std::to_string(key.second) + ")");
      adj_[static_cast<std::size_t>(u)].push_back(v);
      adj_[static_cast<std::size_t>(v)].push_back(u);
    }
    edge_count_ = static_cast<int>(seen.size());
    for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
    if (!connected()) throw DomainError("graph: not connected");
  }

  int vertex_count() const { return n_; }
  int edge_count() const { return edge_count_; }
  const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }

  bool adjacent(int u, int v) const {
    const auto& nbrs = adj_[static_cast<std::size_t>(u)];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
  }

 private:
  bool connected() const {
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj_[static_cast<std::size_t>(u)]) {
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          ++reached;
          q.push(v);
        }
      }
    }
    return reached == n_;
  }

  int n_ = 0;
  int edge_count_ = 0;
  std::vector<std::vector<int>> adj_;
};

inline Graph complete_graph(int n) {
  if (n < 2) throw DomainError("complete graph: n must be at least 2");
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return Graph(n, e);
}

inline Graph path_graph(int n) {
  if (n < 2) throw DomainError("path graph: n must be at least 2");
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u + 1 < n; ++u) e.emplace_back(u, u + 1);
  return Graph(n, e);
}

inline Graph cycle_graph(int n) {
  if (n < 3) throw DomainError("cycle graph: n must be at least 3");
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u + 1 < n; ++u) e.emplace_back(u, u + 1);
  e.emplace_back(n - 1, 0);
  return Graph(n, e);
}

// Universal vertex is 0; vertices 1..n-1 are the leaves.
inline Graph star_graph(int n) {
  if (n < 2) throw DomainError("star graph: n must be at least 2");
  std::vector<std::pair<int, int>> e;
  for (int v = 1; v < n; ++v) e.emplace_back(0, v);
  return Graph(n, e);
}

// Parts are U = [0, m) and V = [m, m+n).
inline Graph complete_bipartite_graph(int m, int n) {
  if (m < 1 || n < 1) throw DomainError("complete bipartite graph: both part sizes must be at least 1");
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < n; ++v) e.emplace_back(u, m + v);
  return Graph(m + n, e);
}

// Structure predicates used to decide whether a collapsed state space applies.
inline bool is_complete(const Graph& g) {
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) != g.vertex_count() - 1) return false;
  return true;
}

// Star with the universal vertex labeled 0 (the labeling the collapsed space assumes).
inline bool is_star_centered_at_zero(const Graph& g) {
  int n = g.vertex_count();
  if (n < 3) return false;
  if (g.degree(0) != n - 1) return false;
  for (int v = 1; v < n; ++v)
    if (g.degree(v) != 1) return false;
  return true;
}

// Complete bipartite with contiguous parts [0,m) and [m,m+n).
inline bool is_complete_bipartite(const Graph& g, int m, int n) {
  if (m < 1 || n < 1 || g.vertex_count() != m + n) return false;
  for (int u = 0; u < m; ++u) {
    if (g.degree(u) != n) return false;
    for (int x : g.neighbors(u))
      if (x < m) return false;
  }
  for (int v = m; v < m + n; ++v)
    if (g.degree(v) != m) return false;
  return true;
}

// Edge-list format: optional '#' comment lines and blank lines; the first data
// line is the vertex count; every following data line is one edge "u v", 0-based.
inline Graph graph_from_edge_list(std::istream& in) {
  std::string line;
  int n = -1;
  std::vector<std::pair<int, int>> edges;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    std::vector<long long> nums;
    while (ls >> tok) {
      std::size_t pos = 0;
      long long v = 0;
      try {
        v = std::stoll(tok, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != tok.size())
        throw ParseError("edge list line " + std::to_string(lineno) + ": expected integer, got '" + tok + "'");
      nums.push_back(v);
    }
    if (nums.empty()) continue;
    if (n < 0) {
      if (nums.size() != 1)
        throw ParseError("edge list line " + std::to_string(lineno) + ": first data line must be the vertex count alone");
      if (nums[0] < 2 || nums[0] > 1000000)
        throw DomainError("edge list: vertex count must be in [2, 1000000]");
      n = static_cast<int>(nums[0]);
    } else {
      if (nums.size() != 2)
        throw ParseError("edge list line " + std::to_string(lineno) + ": expected 'u v'");
      edges.emplace_back(static_cast<int>(nums[0]), static_cast<int>(nums[1]));
    }
  }
  if (n < 0) throw ParseError("edge list: missing vertex count line");
  return Graph(n, edges);  // Graph constructor reports self-loops, duplicates, disconnection
}

inline Graph graph_from_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open edge list file: " + path);
  return graph_from_edge_list(in);
}

}  // namespace rpzf
