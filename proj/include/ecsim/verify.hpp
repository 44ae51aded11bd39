#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ecsim/graph.hpp"
#include "ecsim/io.hpp"
#include "ecsim/rational.hpp"

namespace ecsim {

// Every validator here recomputes all counts from scratch; nothing is trusted
// from algorithm-side counters.

struct Violation {
  std::string check;
  long long entity = -1;  // edge or node id, -1 if global
  std::string lhs;
  std::string rhs;
};

struct Verdict {
  bool ok = true;
  std::vector<Violation> violations;

  void fail(std::string check, long long entity, std::string lhs, std::string rhs) {
    ok = false;
    violations.push_back({std::move(check), entity, std::move(lhs), std::move(rhs)});
  }
  void merge(const Verdict& other) {
    if (!other.ok) {
      ok = false;
      violations.insert(violations.end(), other.violations.begin(), other.violations.end());
    }
  }
  std::string summary(size_t max_items = 5) const {
    if (ok) return "ok";
    std::string s = std::to_string(violations.size()) + " violation(s):";
    for (size_t i = 0; i < violations.size() && i < max_items; ++i) {
      const auto& v = violations[i];
      s += " [" + v.check + " @" + std::to_string(v.entity) + ": " + v.lhs + " !<= " + v.rhs + "]";
    }
    return s;
  }
};

// Color 0 = uncolored. Checks totality, adjacency conflicts, list membership,
// palette bounds.
inline Verdict check_proper_edge_coloring(const Graph& g, const std::vector<int>& coloring,
                                          const ListAssignment* lists = nullptr,
                                          int palette = 0) {
  Verdict out;
  if (int(coloring.size()) != g.edge_count()) {
    out.fail("coloring-size", -1, std::to_string(coloring.size()),
             std::to_string(g.edge_count()));
    return out;
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    int c = coloring[e];
    if (c == 0) {
      out.fail("uncolored-edge", e, "0", ">=1");
      continue;
    }
    if (palette > 0 && (c < 1 || c > palette))
      out.fail("off-palette", e, std::to_string(c), "[1," + std::to_string(palette) + "]");
    if (lists) {
      const auto& L = lists->lists[e];
      if (!std::binary_search(L.begin(), L.end(), c))
        out.fail("off-list", e, std::to_string(c), "list of edge " + std::to_string(e));
    }
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto& inc = g.neighbors(v);
    for (size_t i = 0; i < inc.size(); ++i)
      for (size_t j = i + 1; j < inc.size(); ++j) {
        EdgeId a = inc[i].second, b = inc[j].second;
        if (coloring[a] != 0 && coloring[a] == coloring[b])
          out.fail("adjacent-equal", a,
                   "color " + std::to_string(coloring[a]) + " = edge " + std::to_string(b),
                   "distinct");
      }
  }
  return out;
}

// Exact monochromatic-degree recount per node.
inline Verdict check_defect_vertex(const Graph& g, const std::vector<int>& color, int d) {
  Verdict out;
  if (int(color.size()) != g.node_count()) {
    out.fail("coloring-size", -1, std::to_string(color.size()), std::to_string(g.node_count()));
    return out;
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    int mono = 0;
    for (auto [w, e] : g.neighbors(v))
      if (color[w] == color[v]) ++mono;
    if (mono > d) out.fail("vertex-defect", v, std::to_string(mono), std::to_string(d));
  }
  return out;
}

inline int max_monochromatic_degree(const Graph& g, const std::vector<int>& color) {
  int best = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    int mono = 0;
    for (auto [w, e] : g.neighbors(v))
      if (color[w] == color[v]) ++mono;
    best = std::max(best, mono);
  }
  return best;
}

// Generalized balanced-orientation conditions, both clauses per edge:
//   UtoV: x_v - x_u <= eta_e + 1 + (eps/2) deg(e) + beta
//   VtoU: x_u - x_v <= -eta_e + 1 + (eps/2) deg(e) + beta
inline Verdict check_orientation_balance(const Graph& g, const Bipartition& bip,
                                         const Orientation& ori, const std::vector<Rat>& eta,
                                         const Rat& eps, const Rat& beta) {
  Verdict out;
  if (!bip.valid_for(g)) {
    out.fail("bipartition", -1, "invalid", "valid");
    return out;
  }
  auto x = ori.recount_x(g, bip);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    auto [u, v] = bip.oriented_ends(g, e);
    Rat common = Rat(1) + eps * Rat::fraction(g.edge_degree(e), 2) + beta;
    if (ori.dir[e] == EdgeDir::UtoV) {
      Rat lhs = Rat(x[v] - x[u]);
      Rat rhs = eta[e] + common;
      if (!(lhs <= rhs)) out.fail("balance-UtoV", e, lhs.str(), rhs.str());
    } else if (ori.dir[e] == EdgeDir::VtoU) {
      Rat lhs = Rat(x[u] - x[v]);
      Rat rhs = -eta[e] + common;
      if (!(lhs <= rhs)) out.fail("balance-VtoU", e, lhs.str(), rhs.str());
    } else {
      out.fail("unoriented-edge", e, "unoriented", "oriented");
    }
  }
  return out;
}

// Edges in id order get the smallest list color unused by colored neighbors.
// Succeeds whenever |L_e| > deg(e) for all e.
struct GreedyResult {
  bool success = true;
  std::vector<int> coloring;
  EdgeId stuck_edge = -1;
};

inline GreedyResult sequential_greedy_oracle(const Graph& g, const ListAssignment& lists) {
  GreedyResult r;
  r.coloring.assign(g.edge_count(), 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    auto [u, v] = g.endpoints(e);
    std::set<int> used;
    for (auto [w, f] : g.neighbors(u))
      if (r.coloring[f] != 0) used.insert(r.coloring[f]);
    for (auto [w, f] : g.neighbors(v))
      if (r.coloring[f] != 0) used.insert(r.coloring[f]);
    int pick = 0;
    for (int c : lists.lists[e])
      if (!used.count(c)) {
        pick = c;
        break;
      }
    if (pick == 0) {
      r.success = false;
      r.stuck_edge = e;
      return r;
    }
    r.coloring[e] = pick;
  }
  return r;
}

// Exact chromatic index by exhaustive search; oracle for tiny instances.
inline int brute_force_min_colors(const Graph& g) {
  if (g.edge_count() > 12) throw UsageError("brute_force_min_colors caps at m <= 12");
  const int m = g.edge_count();
  if (m == 0) return 0;
  // Precompute adjacency between edges.
  std::vector<std::vector<char>> adjacent(m, std::vector<char>(m, 0));
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto& inc = g.neighbors(v);
    for (size_t i = 0; i < inc.size(); ++i)
      for (size_t j = i + 1; j < inc.size(); ++j)
        adjacent[inc[i].second][inc[j].second] = adjacent[inc[j].second][inc[i].second] = 1;
  }
  for (int k = 1; k <= m; ++k) {
    std::vector<int> col(m, 0);
    // Backtracking over edges in id order.
    std::function<bool(int)> rec = [&](int e) -> bool {
      if (e == m) return true;
      for (int c = 1; c <= k; ++c) {
        bool okc = true;
        for (int f = 0; f < e; ++f)
          if (adjacent[e][f] && col[f] == c) {
            okc = false;
            break;
          }
        if (!okc) continue;
        col[e] = c;
        if (rec(e + 1)) return true;
        col[e] = 0;
      }
      return false;
    };
    if (rec(0)) return k;
  }
  return m;
}

// Brute-force max edge degree via pairwise adjacency count; test oracle for
// the Delta-bar invariant.
inline int brute_force_bar_delta(const Graph& g) {
  int best = 0;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    auto [u, v] = g.endpoints(e);
    int cnt = 0;
    for (EdgeId f = 0; f < g.edge_count(); ++f) {
      if (f == e) continue;
      auto [a, b] = g.endpoints(f);
      if (a == u || a == v || b == u || b == v) ++cnt;
    }
    best = std::max(best, cnt);
  }
  return best;
}

}  // namespace ecsim
