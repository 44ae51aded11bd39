#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ecsim {

using NodeId = int;
using EdgeId = int;

struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Undirected simple graph. Edge ids are dense in [0,m) in input order;
// adjacency lists are sorted by neighbor id. Immutable after build().
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : n_(n), adj_(n) {}

  static Graph from_edges(int n, std::vector<std::pair<NodeId, NodeId>> edges) {
    Graph g(n);
    g.edges_ = std::move(edges);
    g.build();
    return g;
  }

  int node_count() const { return n_; }
  int edge_count() const { return int(edges_.size()); }

  std::pair<NodeId, NodeId> endpoints(EdgeId e) const {
    check_edge(e);
    return edges_[e];
  }
  NodeId other_end(EdgeId e, NodeId v) const {
    auto [a, b] = endpoints(e);
    return a == v ? b : a;
  }
  const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }

  // (neighbor, edge id), sorted by neighbor id.
  const std::vector<std::pair<NodeId, EdgeId>>& neighbors(NodeId v) const {
    check_node(v);
    return adj_[v];
  }
  int degree(NodeId v) const { return int(neighbors(v).size()); }

  int edge_degree(EdgeId e) const {
    auto [u, v] = endpoints(e);
    return degree(u) + degree(v) - 2;
  }

  void check_node(NodeId v) const {
    if (v < 0 || v >= n_) throw UsageError("node id out of range: " + std::to_string(v));
  }
  void check_edge(EdgeId e) const {
    if (e < 0 || e >= int(edges_.size()))
      throw UsageError("edge id out of range: " + std::to_string(e));
  }

 private:
  void build() {
    adj_.assign(n_, {});
    for (EdgeId e = 0; e < int(edges_.size()); ++e) {
      auto [u, v] = edges_[e];
      check_node(u);
      check_node(v);
      if (u == v) throw UsageError("self-loop at node " + std::to_string(u));
      adj_[u].push_back({v, e});
      adj_[v].push_back({u, e});
    }
    for (auto& lst : adj_) {
      std::sort(lst.begin(), lst.end());
      for (size_t i = 1; i < lst.size(); ++i)
        if (lst[i - 1].first == lst[i].first)
          throw UsageError("parallel edge between " + std::to_string(lst[i].first) +
                           " and its neighbor");
    }
  }

  int n_ = 0;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::vector<std::vector<std::pair<NodeId, EdgeId>>> adj_;
};

enum class Side : unsigned char { U, V };

struct Bipartition {
  std::vector<Side> side;

  bool valid_for(const Graph& g) const {
    if (int(side.size()) != g.node_count()) return false;
    for (auto [u, v] : g.edges())
      if (side[u] == side[v]) return false;
    return true;
  }
  // Endpoints of e ordered (U-side, V-side).
  std::pair<NodeId, NodeId> oriented_ends(const Graph& g, EdgeId e) const {
    auto [a, b] = g.endpoints(e);
    if (side[a] == Side::U) return {a, b};
    return {b, a};
  }
};

struct GraphStats {
  int delta = 0;      // max node degree
  int bar_delta = 0;  // max edge degree (line-graph degree)
};

inline GraphStats compute_stats(const Graph& g) {
  GraphStats s;
  for (NodeId v = 0; v < g.node_count(); ++v) s.delta = std::max(s.delta, g.degree(v));
  for (EdgeId e = 0; e < g.edge_count(); ++e) s.bar_delta = std::max(s.bar_delta, g.edge_degree(e));
  return s;
}

// Directed graph with stable arc ids; at most one arc per unordered node pair
// (arcs arise as orientations of a simple graph).
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(int n) : n_(n), out_(n), in_(n), und_(n) {}

  static Digraph from_arcs(int n, std::vector<std::pair<NodeId, NodeId>> arcs) {
    Digraph d(n);
    d.arcs_ = std::move(arcs);
    d.build();
    return d;
  }

  int node_count() const { return n_; }
  int arc_count() const { return int(arcs_.size()); }
  std::pair<NodeId, NodeId> arc(EdgeId e) const { return arcs_[e]; }
  const std::vector<std::pair<NodeId, NodeId>>& arcs() const { return arcs_; }

  const std::vector<std::pair<NodeId, EdgeId>>& out_neighbors(NodeId v) const { return out_[v]; }
  const std::vector<std::pair<NodeId, EdgeId>>& in_neighbors(NodeId v) const { return in_[v]; }
  // Degree in the undirected version; game priorities use this.
  int degree(NodeId v) const { return int(und_[v].size()); }
  const std::vector<std::pair<NodeId, EdgeId>>& neighbors(NodeId v) const { return und_[v]; }

 private:
  void build() {
    out_.assign(n_, {});
    in_.assign(n_, {});
    und_.assign(n_, {});
    for (EdgeId e = 0; e < int(arcs_.size()); ++e) {
      auto [u, v] = arcs_[e];
      if (u < 0 || u >= n_ || v < 0 || v >= n_) throw UsageError("arc endpoint out of range");
      if (u == v) throw UsageError("self-loop arc at node " + std::to_string(u));
      out_[u].push_back({v, e});
      in_[v].push_back({u, e});
      und_[u].push_back({v, e});
      und_[v].push_back({u, e});
    }
    for (auto& lst : und_) {
      std::sort(lst.begin(), lst.end());
      for (size_t i = 1; i < lst.size(); ++i)
        if (lst[i - 1].first == lst[i].first)
          throw UsageError("duplicate arc between one node pair");
    }
    for (auto& lst : out_) std::sort(lst.begin(), lst.end());
    for (auto& lst : in_) std::sort(lst.begin(), lst.end());
  }

  int n_ = 0;
  std::vector<std::pair<NodeId, NodeId>> arcs_;
  std::vector<std::vector<std::pair<NodeId, EdgeId>>> out_, in_, und_;
};

// Edge orientation of a bipartite 2-colored graph. Directions are stated
// relative to the bipartition: UtoV means the U-side endpoint points at the
// V-side endpoint.
enum class EdgeDir : unsigned char { UtoV, VtoU, Unoriented };

struct Orientation {
  std::vector<EdgeDir> dir;  // edge id -> direction

  bool complete() const {
    for (EdgeDir d : dir)
      if (d == EdgeDir::Unoriented) return false;
    return true;
  }
  // Incoming-edge counts recomputed from the direction map.
  std::vector<int> recount_x(const Graph& g, const Bipartition& bip) const {
    std::vector<int> x(g.node_count(), 0);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      auto [u, v] = bip.oriented_ends(g, e);
      if (dir[e] == EdgeDir::UtoV) ++x[v];
      else if (dir[e] == EdgeDir::VtoU) ++x[u];
    }
    return x;
  }
};

// Line graph: one node per edge of g, adjacency = edge adjacency in g.
// Line-node ids equal the edge ids of g.
inline Graph line_graph(const Graph& g) {
  std::vector<std::pair<NodeId, NodeId>> ledges;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto& inc = g.neighbors(v);
    for (size_t i = 0; i < inc.size(); ++i)
      for (size_t j = i + 1; j < inc.size(); ++j)
        ledges.push_back({std::min(inc[i].second, inc[j].second),
                          std::max(inc[i].second, inc[j].second)});
  }
  std::sort(ledges.begin(), ledges.end());
  ledges.erase(std::unique(ledges.begin(), ledges.end()), ledges.end());
  return Graph::from_edges(g.edge_count(), std::move(ledges));
}

// Subgraph of g induced by the given edges, on the same node universe.
// Keeps original edge ids via the returned mapping (sub edge id -> g edge id).
struct EdgeSubgraph {
  Graph graph;
  std::vector<EdgeId> orig_edge;  // sub id -> original id
};

inline EdgeSubgraph edge_subgraph(const Graph& g, const std::vector<EdgeId>& keep) {
  std::vector<std::pair<NodeId, NodeId>> es;
  es.reserve(keep.size());
  for (EdgeId e : keep) es.push_back(g.endpoints(e));
  EdgeSubgraph s;
  s.graph = Graph::from_edges(g.node_count(), std::move(es));
  s.orig_edge = keep;
  return s;
}

}  // namespace ecsim
