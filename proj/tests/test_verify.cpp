#include <doctest.h>

#include "ecsim/generate.hpp"
#include "ecsim/verify.hpp"

using namespace ecsim;

namespace {
Graph path_edges(int edges) {
  std::vector<std::pair<NodeId, NodeId>> es;
  for (int i = 0; i < edges; ++i) es.push_back({i, i + 1});
  return Graph::from_edges(edges + 1, std::move(es));
}
Graph complete_graph(int n) {
  std::vector<std::pair<NodeId, NodeId>> es;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) es.push_back({i, j});
  return Graph::from_edges(n, std::move(es));
}
}  // namespace

TEST_CASE("check_proper_edge_coloring") {
  auto p3 = path_edges(3);
  CHECK(check_proper_edge_coloring(p3, {1, 2, 3}, nullptr, 3).ok);
  CHECK(check_proper_edge_coloring(p3, {1, 2, 1}, nullptr, 3).ok);

  auto bad = check_proper_edge_coloring(p3, {1, 1, 2});
  CHECK(!bad.ok);
  CHECK(bad.violations[0].check == "adjacent-equal");

  ListAssignment la;
  la.c1 = 1;
  la.c2 = 9;
  la.lists = {{1, 2}, {3}, {4}};
  la.eta.assign(3, std::nullopt);
  auto off = check_proper_edge_coloring(p3, {1, 3, 9}, &la);
  CHECK(!off.ok);
  CHECK(off.violations[0].check == "off-list");

  auto unc = check_proper_edge_coloring(p3, {1, 0, 2});
  CHECK(!unc.ok);
  CHECK(unc.violations[0].check == "uncolored-edge");
}

TEST_CASE("check_defect_vertex") {
  auto k3 = complete_graph(3);
  CHECK(check_defect_vertex(k3, {1, 2, 3}, 0).ok);
  CHECK(!check_defect_vertex(k3, {1, 1, 1}, 1).ok);
  CHECK(check_defect_vertex(k3, {1, 1, 1}, 2).ok);
}

TEST_CASE("check_orientation_balance: star oriented inward fails at beta 0") {
  // K_{1,3}, center node 0 on side V, all edges oriented toward the center.
  auto g = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
  Bipartition bip{{Side::V, Side::U, Side::U, Side::U}};
  Orientation ori{{EdgeDir::UtoV, EdgeDir::UtoV, EdgeDir::UtoV}};
  std::vector<Rat> eta(3, Rat(0));
  auto verdict = check_orientation_balance(g, bip, ori, eta, Rat(0), Rat(0));
  CHECK(!verdict.ok);  // x_center - x_leaf = 3 > 0 + 1 + 0 + 0
  // Matching with any orientation is fine: |dx| = 1 <= 1 + beta.
  auto m = Graph::from_edges(4, {{0, 2}, {1, 3}});
  Bipartition mb{{Side::U, Side::U, Side::V, Side::V}};
  Orientation mo{{EdgeDir::UtoV, EdgeDir::VtoU}};
  CHECK(check_orientation_balance(m, mb, mo, {Rat(0), Rat(0)}, Rat(0), Rat(0)).ok);
}

TEST_CASE("sequential greedy oracle") {
  SUBCASE("degree+1 always succeeds") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto gen = generate(GraphModel::random_general, 40, 6, seed);
      ListAssignment la;
      la.c1 = 1;
      la.c2 = 200;
      la.lists.resize(gen.graph.edge_count());
      la.eta.assign(gen.graph.edge_count(), std::nullopt);
      Rng rng(seed);
      for (EdgeId e = 0; e < gen.graph.edge_count(); ++e) {
        std::set<int> pick;
        while (int(pick.size()) < gen.graph.edge_degree(e) + 1)
          pick.insert(1 + int(rng.below(200)));
        la.lists[e].assign(pick.begin(), pick.end());
      }
      auto r = sequential_greedy_oracle(gen.graph, la);
      CHECK(r.success);
      CHECK(check_proper_edge_coloring(gen.graph, r.coloring, &la).ok);
    }
  }
  SUBCASE("empty list reports the stuck edge") {
    auto g = Graph::from_edges(2, {{0, 1}});
    ListAssignment la;
    la.c1 = 1;
    la.c2 = 4;
    la.lists = {{}};
    la.eta.assign(1, std::nullopt);
    auto r = sequential_greedy_oracle(g, la);
    CHECK(!r.success);
    CHECK(r.stuck_edge == 0);
  }
  SUBCASE("triangle with lists {1,2,3}") {
    auto g = complete_graph(3);
    ListAssignment la;
    la.c1 = 1;
    la.c2 = 3;
    la.lists.assign(3, {1, 2, 3});
    la.eta.assign(3, std::nullopt);
    // Brute force over 27 assignments agrees a solution exists.
    int count = 0;
    for (int a = 1; a <= 3; ++a)
      for (int b = 1; b <= 3; ++b)
        for (int c = 1; c <= 3; ++c)
          if (a != b && a != c && b != c) ++count;
    CHECK(count > 0);
    CHECK(sequential_greedy_oracle(g, la).success);
  }
}

TEST_CASE("brute force chromatic index") {
  CHECK(brute_force_min_colors(complete_graph(3)) == 3);
  CHECK(brute_force_min_colors(path_edges(2)) == 2);
  CHECK(brute_force_min_colors(complete_graph(4)) == 3);
  CHECK(brute_force_min_colors(Graph::from_edges(2, {})) == 0);
  // m > 12 capped.
  CHECK_THROWS_AS(brute_force_min_colors(complete_graph(6)), UsageError);
}
