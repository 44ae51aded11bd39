#pragma once

// Instance builders shared by the unit suites and the acceptance runner.

#include <algorithm>
#include <set>
#include <vector>

#include "ecsim/generate.hpp"
#include "ecsim/graph.hpp"
#include "ecsim/io.hpp"
#include "ecsim/list_ec.hpp"

namespace ecsim::testutil {

// Lists of size deg(e)+extra drawn from [1, space]; sorted, duplicate-free.
inline ListAssignment random_lists(const Graph& g, int space, int extra, Rng& rng) {
  ListAssignment la;
  la.c1 = 1;
  la.c2 = space;
  la.lists.resize(g.edge_count());
  la.eta.assign(g.edge_count(), std::nullopt);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    int want = std::min(space, g.edge_degree(e) + extra);
    std::set<int> pick;
    while (int(pick.size()) < want) pick.insert(1 + int(rng.below(std::uint64_t(space))));
    la.lists[e].assign(pick.begin(), pick.end());
  }
  return la;
}

// High-slack instance on a regular bipartite graph: |L_e| = ceil(S*d(e))+1+extra
// colors from a space of the given size.
struct SlackFixture {
  Graph graph;
  Bipartition bip;
  ListAssignment lists;
  SlackInstance inst;
};

inline SlackFixture slack_fixture(int side, int degree, int space, const Rat& S,
                                  std::uint64_t seed) {
  SlackFixture f;
  auto gen = generate(GraphModel::regular_bipartite, side, degree, seed);
  f.graph = std::move(gen.graph);
  f.bip = *gen.bipartition;
  f.lists.c1 = 1;
  f.lists.c2 = space;
  f.lists.lists.resize(f.graph.edge_count());
  f.lists.eta.assign(f.graph.edge_count(), std::nullopt);
  f.inst.slack = S;
  f.inst.c1 = 1;
  f.inst.c2 = space;
  f.inst.bar_delta = compute_stats(f.graph).bar_delta;
  f.inst.degree_bound.resize(f.graph.edge_count());
  Rng rng(seed * 31 + 7);
  for (EdgeId e = 0; e < f.graph.edge_count(); ++e) {
    int d = f.graph.edge_degree(e);
    f.inst.degree_bound[e] = d;
    long long want = (S * Rat(d)).floor() + 2;
    if (want > space) want = space;
    std::set<int> pick;
    while (int(pick.size()) < want) pick.insert(1 + int(rng.below(std::uint64_t(space))));
    f.lists.lists[e].assign(pick.begin(), pick.end());
  }
  return f;
}

}  // namespace ecsim::testutil
