#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>

#include "ecsim/graph.hpp"

namespace ecsim {

// Generators are pure functions of (model, n, delta_target, seed).
// mt19937_64 has a standard-specified sequence; the reductions below avoid
// std::uniform_int_distribution, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, bound), bound >= 1, by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t lim = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do { x = eng_(); } while (x >= lim);
    return x % bound;
  }
  int range(int lo, int hi) { return lo + int(below(std::uint64_t(hi - lo + 1))); }
  bool coin() { return (eng_() & 1u) != 0; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 eng_;
};

enum class GraphModel { regular_bipartite, random_bipartite, random_general };

inline GraphModel parse_model(const std::string& s) {
  if (s == "regular_bipartite") return GraphModel::regular_bipartite;
  if (s == "random_bipartite") return GraphModel::random_bipartite;
  if (s == "random_general") return GraphModel::random_general;
  throw UsageError("unknown graph model: " + s);
}

struct Generated {
  Graph graph;
  std::optional<Bipartition> bipartition;
};

namespace gen_detail {

// d disjoint perfect matchings between sides of size n, from one random
// permutation and d shift offsets; simple by construction.
inline std::vector<std::pair<NodeId, NodeId>> regular_bipartite_edges(int n, int d, Rng& rng) {
  std::vector<int> pi(n), sigma(n);
  std::iota(pi.begin(), pi.end(), 0);
  std::iota(sigma.begin(), sigma.end(), 0);
  rng.shuffle(pi);
  rng.shuffle(sigma);
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(size_t(n) * d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < n; ++i) edges.push_back({i, n + sigma[(pi[i] + j) % n]});
  return edges;
}

}  // namespace gen_detail

// For bipartite models, n is the size of EACH side (node ids: U = [0,n),
// V = [n,2n)). delta_target bounds the max degree; regular_bipartite hits it
// exactly.
inline Generated generate(GraphModel model, int n, int delta_target, std::uint64_t seed) {
  if (n <= 0) throw UsageError("generator needs n >= 1");
  if (delta_target < 0) throw UsageError("generator needs delta >= 0");
  Rng rng(seed * 0x9E3779B97F4A7C15ull + 12345);
  switch (model) {
    case GraphModel::regular_bipartite: {
      if (delta_target > n)
        throw UsageError("regular bipartite needs delta <= n (side size)");
      auto edges = gen_detail::regular_bipartite_edges(n, delta_target, rng);
      Generated out{Graph::from_edges(2 * n, std::move(edges)), Bipartition{}};
      out.bipartition->side.assign(2 * n, Side::U);
      for (int v = n; v < 2 * n; ++v) out.bipartition->side[v] = Side::V;
      return out;
    }
    case GraphModel::random_bipartite: {
      if (delta_target > n)
        throw UsageError("random bipartite needs delta <= n (side size)");
      // delta_target rounds of random partial matchings (each pair kept with
      // probability 1/2), deduplicated; max degree <= delta_target.
      std::vector<std::pair<NodeId, NodeId>> edges;
      std::vector<int> perm(n);
      for (int j = 0; j < delta_target; ++j) {
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        for (int i = 0; i < n; ++i)
          if (rng.coin()) edges.push_back({i, n + perm[i]});
      }
      std::sort(edges.begin(), edges.end());
      edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
      // Dedup may drop edges; degrees only shrink. Restore input order
      // determinism by sorting (already sorted).
      Generated out{Graph::from_edges(2 * n, std::move(edges)), Bipartition{}};
      out.bipartition->side.assign(2 * n, Side::U);
      for (int v = n; v < 2 * n; ++v) out.bipartition->side[v] = Side::V;
      return out;
    }
    case GraphModel::random_general: {
      if (delta_target > std::max(0, n - 1))
        throw UsageError("random general needs delta <= n-1");
      // delta_target rounds of random partial matchings on [n].
      std::vector<std::pair<NodeId, NodeId>> edges;
      std::vector<int> perm(n);
      for (int j = 0; j < delta_target; ++j) {
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        for (int i = 0; i + 1 < n; i += 2) {
          if (!rng.coin()) continue;
          NodeId a = perm[i], b = perm[i + 1];
          edges.push_back({std::min(a, b), std::max(a, b)});
        }
      }
      std::sort(edges.begin(), edges.end());
      edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
      return Generated{Graph::from_edges(n, std::move(edges)), std::nullopt};
    }
  }
  throw UsageError("unreachable model");
}

// Orientation helpers for token-game test instances.
inline Digraph orient_acyclic(const Graph& g) {
  std::vector<std::pair<NodeId, NodeId>> arcs;
  arcs.reserve(g.edge_count());
  for (auto [u, v] : g.edges()) arcs.push_back({std::min(u, v), std::max(u, v)});
  return Digraph::from_arcs(g.node_count(), std::move(arcs));
}

inline Digraph orient_random(const Graph& g, std::uint64_t seed) {
  Rng rng(seed ^ 0xD1B54A32D192ED03ull);
  std::vector<std::pair<NodeId, NodeId>> arcs;
  arcs.reserve(g.edge_count());
  for (auto [u, v] : g.edges())
    arcs.push_back(rng.coin() ? std::pair{u, v} : std::pair{v, u});
  return Digraph::from_arcs(g.node_count(), std::move(arcs));
}

}  // namespace ecsim
