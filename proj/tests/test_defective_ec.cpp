#include <doctest.h>

#include "ecsim/defective_ec.hpp"
#include "ecsim/generate.hpp"

using namespace ecsim;

TEST_CASE("eta_from_lambda direct evaluations") {
  // Path u-v-w-z picked so the middle edge has prescribed endpoint degrees.
  // Edge 0 = {0,1}: deg(0)=1, deg(1)=2.
  auto g = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  Bipartition bip{{Side::U, Side::V, Side::U, Side::V}};

  SUBCASE("lambda=1/2 with equal degrees cancels") {
    DefectiveParams spec{std::vector<Rat>(3, Rat::fraction(1, 2)), Rat::fraction(1, 3), Rat(7)};
    // Middle edge {1,2}: deg = 2 both sides.
    CHECK(eta_from_lambda(g, bip, 1, spec) == Rat(0));
  }
  SUBCASE("lambda=1/2, deg(u)=3, deg(v)=5 gives (5-3)/2") {
    std::vector<std::pair<NodeId, NodeId>> es;
    // u=0 with degree 3, v=1 with degree 5, e = {0,1}.
    es.push_back({0, 1});
    for (int i = 2; i <= 3; ++i) es.push_back({0, i});     // u side extras
    for (int i = 4; i <= 7; ++i) es.push_back({1, i});     // v side extras
    auto h = Graph::from_edges(8, std::move(es));
    Bipartition hb{{Side::U, Side::V, Side::V, Side::V, Side::U, Side::U, Side::U, Side::U}};
    DefectiveParams spec{std::vector<Rat>(h.edge_count(), Rat::fraction(1, 2)), Rat(0), Rat(0)};
    CHECK(eta_from_lambda(h, hb, 0, spec) == Rat(1));
  }
  SUBCASE("lambda=1, eps=0, beta=0, deg(u)=2, deg(v)=3") {
    std::vector<std::pair<NodeId, NodeId>> es{{0, 1}, {0, 2}, {1, 3}, {1, 4}};
    auto h = Graph::from_edges(5, std::move(es));
    Bipartition hb{{Side::U, Side::V, Side::V, Side::U, Side::U}};
    DefectiveParams spec{std::vector<Rat>(4, Rat(1)), Rat(0), Rat(0)};
    // eta = 1 - 2 - 0 + 3 + 0 + 0 = 2.
    CHECK(eta_from_lambda(h, hb, 0, spec) == Rat(2));
  }
}

TEST_CASE("all-blue is legal when lambda is zero") {
  auto gen = generate(GraphModel::random_bipartite, 12, 4, 3);
  std::vector<Rat> lambda(gen.graph.edge_count(), Rat(0));
  Session s(ExecutionMode::local());
  auto res = defective_2ec(gen.graph, *gen.bipartition, lambda, Rat::fraction(1, 2), s);
  auto verdict = check_defective_2ec(gen.graph, lambda, Rat::fraction(1, 2),
                                     Rat(2 * res.beta_used), res.coloring);
  INFO(verdict.summary());
  CHECK(verdict.ok);
  // Red defect budget is zero, so no red edge may have a red neighbor; the
  // run keeps every edge blue.
  for (int c : res.coloring) CHECK(c == kBlue);
}

TEST_CASE("single edge: either color is legal") {
  auto g = Graph::from_edges(2, {{0, 1}});
  Bipartition bip{{Side::U, Side::V}};
  std::vector<Rat> lambda{Rat::fraction(1, 3)};
  Session s(ExecutionMode::local());
  auto res = defective_2ec(g, bip, lambda, Rat(1), s);
  CHECK((res.coloring[0] == kRed || res.coloring[0] == kBlue));
  CHECK(check_defective_2ec(g, lambda, Rat(1), Rat(0), res.coloring).ok);
}

TEST_CASE("random bipartite Delta=64, lambda=1/2: definition verified") {
  auto gen = generate(GraphModel::random_bipartite, 96, 64, 7);
  std::vector<Rat> lambda(gen.graph.edge_count(), Rat::fraction(1, 2));
  Session s(ExecutionMode::congest_default(gen.graph.node_count()));
  Rat eps = Rat::fraction(1, 2);
  auto res = defective_2ec(gen.graph, *gen.bipartition, lambda, eps, s);
  auto verdict =
      check_defective_2ec(gen.graph, lambda, eps, Rat(2 * res.beta_used), res.coloring);
  INFO(verdict.summary());
  CHECK(verdict.ok);
  CHECK(s.metrics().oracle_rounds == 0);
}

TEST_CASE("regular specialization: both bounds reduce to (1+eps)deg/2 + beta_art") {
  auto gen = generate(GraphModel::regular_bipartite, 32, 8, 5);
  std::vector<Rat> lambda(gen.graph.edge_count(), Rat::fraction(1, 2));
  Session s(ExecutionMode::local());
  Rat eps = Rat::fraction(1, 4);
  auto res = defective_2ec(gen.graph, *gen.bipartition, lambda, eps, s);
  // By hand: same-color degree <= (1+eps)*deg(e)/2 + beta_art for every edge.
  for (EdgeId e = 0; e < gen.graph.edge_count(); ++e) {
    auto [u, v] = gen.graph.endpoints(e);
    int same = 0;
    for (NodeId w : {u, v})
      for (auto [z, f] : gen.graph.neighbors(w))
        if (f != e && res.coloring[f] == res.coloring[e]) ++same;
    Rat bound = (Rat(1) + eps) * Rat::fraction(gen.graph.edge_degree(e), 2) + Rat(res.beta_used);
    CHECK(Rat(same) <= bound);
  }
}

TEST_CASE("check_defective_2ec rejects a bad coloring") {
  // Path of two edges, all red, lambda = 0, beta = 0: a red edge has one red
  // neighbor but budget 0.
  auto g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  std::vector<Rat> lambda(2, Rat(0));
  std::vector<int> all_red(2, kRed);
  auto verdict = check_defective_2ec(g, lambda, Rat(0), Rat(0), all_red);
  CHECK(!verdict.ok);

  auto empty = Graph::from_edges(3, {});
  CHECK(check_defective_2ec(empty, {}, Rat(0), Rat(0), {}).ok);
}

TEST_CASE("degenerate lambda values pass without special-casing") {
  auto gen = generate(GraphModel::random_bipartite, 16, 6, 9);
  const int m = gen.graph.edge_count();
  std::vector<Rat> lambda(m);
  Rng rng(42);
  for (int e = 0; e < m; ++e) {
    int pick = int(rng.below(4));
    lambda[e] = pick == 0 ? Rat(0) : pick == 1 ? Rat(1) : Rat::fraction(int(rng.below(7)), 7);
  }
  Session s(ExecutionMode::local());
  Rat eps = Rat::fraction(1, 2);
  auto res = defective_2ec(gen.graph, *gen.bipartition, lambda, eps, s);
  auto verdict =
      check_defective_2ec(gen.graph, lambda, eps, Rat(2 * res.beta_used), res.coloring);
  INFO(verdict.summary());
  CHECK(verdict.ok);
}
