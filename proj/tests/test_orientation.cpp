#include <doctest.h>

#include "ecsim/generate.hpp"
#include "ecsim/orientation.hpp"

using namespace ecsim;

namespace {
std::vector<Rat> zero_eta(const Graph& g) { return std::vector<Rat>(g.edge_count(), Rat(0)); }
}  // namespace

TEST_CASE("eval_phase_params at nu=1/8, bar=64") {
  // Only the formulas are under test; any 33-regular bipartite graph has
  // edge degree exactly 64.
  auto gen = generate(GraphModel::regular_bipartite, 33, 33, 2);
  GraphStats st = compute_stats(gen.graph);
  REQUIRE(st.bar_delta == 64);
  auto params = OrientationParams::make(Rat(1), st.bar_delta, zero_eta(gen.graph));
  CHECK(params.nu == Rat::fraction(1, 8));
  std::vector<EdgeDir> dir(gen.graph.edge_count(), EdgeDir::Unoriented);
  auto d = eval_phase_params(gen.graph, st, dir, 1, params);
  CHECK(d.k_phi == 8);      // ceil((1/8)*64)
  CHECK(d.delta_phi == 1);  // max(1, floor((1/16)(1/8)^6*64/ln^3 64)) = max(1,0)
  // deg_G(e) = 0 => k_e = 0.
  auto p1 = OrientationParams::make(Rat(1), 2, std::vector<Rat>(1, Rat(0)));
  CHECK(growth_k_e(p1, 0) == Rat(0));
}

TEST_CASE("phase cap reaches decay*bar <= 4") {
  for (int bar : {2, 4, 16, 126}) {
    auto params = OrientationParams::make(Rat::fraction(1, 4), bar, {});
    CHECK(params.decay[params.phase_cap] * Rat(bar) <= Rat(4));
    if (params.phase_cap > 0) CHECK(params.decay[params.phase_cap - 1] * Rat(bar) > Rat(4));
    // Round-up powers stay valid upper bounds and decrease.
    for (int i = 1; i <= params.phase_cap; ++i) CHECK(params.decay[i] < params.decay[i - 1]);
  }
}

TEST_CASE("single edge: oriented, balanced with any beta >= 0") {
  auto g = Graph::from_edges(2, {{0, 1}});
  Bipartition bip{{Side::U, Side::V}};
  Session s(ExecutionMode::local());
  auto res = compute_balanced_orientation(g, bip, zero_eta(g), Rat(1), s);
  CHECK(res.orientation.complete());
  CHECK(check_orientation_balance(g, bip, res.orientation, zero_eta(g), Rat(1),
                                  Rat(res.trace.beta_used))
            .ok);
  CHECK(check_phase_lemmas(g, bip, res.trace).ok);
}

TEST_CASE("perfect matching: |x difference| = 1") {
  auto g = Graph::from_edges(6, {{0, 3}, {1, 4}, {2, 5}});
  Bipartition bip{{Side::U, Side::U, Side::U, Side::V, Side::V, Side::V}};
  Session s(ExecutionMode::local());
  auto res = compute_balanced_orientation(g, bip, zero_eta(g), Rat(1), s);
  CHECK(res.orientation.complete());
  for (EdgeId e = 0; e < 3; ++e) {
    auto [u, v] = bip.oriented_ends(g, e);
    CHECK(std::abs(res.x[u] - res.x[v]) <= 1);
  }
  CHECK(check_orientation_balance(g, bip, res.orientation, zero_eta(g), Rat(1), Rat(0)).ok);
}

TEST_CASE("3-regular bipartite 2x64: definition holds with beta_art") {
  auto gen = generate(GraphModel::regular_bipartite, 64, 3, 11);
  Session s(ExecutionMode::congest_default(128));
  auto eta = zero_eta(gen.graph);
  auto res = compute_balanced_orientation(gen.graph, *gen.bipartition, eta, Rat(1), s);
  CHECK(res.orientation.complete());
  auto verdict = check_orientation_balance(gen.graph, *gen.bipartition, res.orientation, eta,
                                           Rat(1), Rat(res.trace.beta_used));
  INFO(verdict.summary());
  CHECK(verdict.ok);
  CHECK(check_phase_lemmas(gen.graph, *gen.bipartition, res.trace).ok);
}

TEST_CASE("x accounting and flip bookkeeping are exact across a sweep") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    int delta = 4 << (seed % 3);
    auto gen = generate(GraphModel::random_bipartite, 4 * delta, delta, seed);
    if (gen.graph.edge_count() == 0) continue;
    Session s(ExecutionMode::congest_default(gen.graph.node_count()));
    Rat eps = seed % 2 ? Rat::fraction(1, 2) : Rat(1);
    auto res = compute_balanced_orientation(gen.graph, *gen.bipartition, zero_eta(gen.graph),
                                            eps, s);
    CHECK(res.orientation.complete());
    auto verdict = check_phase_lemmas(gen.graph, *gen.bipartition, res.trace);
    INFO("seed ", seed, ": ", verdict.summary());
    CHECK(verdict.ok);
    CHECK(check_orientation_balance(gen.graph, *gen.bipartition, res.orientation,
                                    zero_eta(gen.graph), eps, Rat(res.trace.beta_used))
              .ok);
    // Per-phase engine rounds <= 6*floor(k/delta) + c0 (declared c0 = 4).
    for (const auto& pt : res.trace.phases)
      CHECK(pt.rounds <= 6LL * (pt.k_phi / pt.delta_phi) + 4);
    CHECK(int(res.trace.phases.size()) <= res.trace.params.phase_cap);
    CHECK(s.metrics().oracle_rounds == 0);
  }
}

TEST_CASE("forged trace fails the decay lemma") {
  auto gen = generate(GraphModel::regular_bipartite, 16, 4, 3);
  Session s(ExecutionMode::local());
  auto res = compute_balanced_orientation(gen.graph, *gen.bipartition, zero_eta(gen.graph),
                                          Rat(1), s);
  REQUIRE(!res.trace.phases.empty());
  auto forged = res.trace;
  // Claim nothing was oriented in phase 1: unoriented degrees stay maximal.
  forged.phases[0].newly_oriented.clear();
  forged.phases[0].flipped.clear();
  auto verdict = check_phase_lemmas(gen.graph, *gen.bipartition, forged);
  CHECK(!verdict.ok);
}

TEST_CASE("empty graph is vacuously balanced") {
  auto g = Graph::from_edges(4, {});
  Bipartition bip{{Side::U, Side::U, Side::V, Side::V}};
  Session s(ExecutionMode::local());
  auto res = compute_balanced_orientation(g, bip, {}, Rat(1), s);
  CHECK(check_phase_lemmas(g, bip, res.trace).ok);
  CHECK(check_orientation_balance(g, bip, res.orientation, {}, Rat(1), Rat(0)).ok);
}

TEST_CASE("non-bipartite input rejected") {
  auto g = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  Bipartition bip{{Side::U, Side::V, Side::V}};
  Session s(ExecutionMode::local());
  CHECK_THROWS_AS(compute_balanced_orientation(g, bip, zero_eta(g), Rat(1), s), UsageError);
}
