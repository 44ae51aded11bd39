#include <doctest.h>

#include "ecsim/generate.hpp"
#include "ecsim/sim.hpp"

using namespace ecsim;

namespace {

// Each node sends its id once and halts upon hearing from every neighbor.
struct EchoProgram {
  struct State {
    std::vector<std::uint64_t> heard;
    int remaining = 0;
  };
  using Output = std::vector<std::uint64_t>;

  unsigned id_width;

  bool init(const NodeCtx& ctx, State& st) {
    st.remaining = ctx.degree();
    return st.remaining == 0;  // isolated nodes halt at init
  }
  bool on_round(const NodeCtx& ctx, State& st, const Inbox& in, Outbox& out) {
    if (ctx.round == 1)
      for (int p = 0; p < ctx.degree(); ++p)
        out.send(p, Message{}.push(std::uint64_t(ctx.id), id_width));
    for (const auto& m : in) {
      st.heard.push_back(m.msg.at(0));
      --st.remaining;
    }
    return st.remaining == 0 && ctx.round >= 1 && !st.heard.empty();
  }
  Output output(const NodeCtx&, const State& st) { return st.heard; }
};

struct OversizeProgram {
  struct State {};
  using Output = int;
  bool init(const NodeCtx&, State&) { return false; }
  bool on_round(const NodeCtx& ctx, State&, const Inbox&, Outbox& out) {
    if (ctx.degree() > 0) out.send(0, Message{}.push(0, 64).push(0, 64).push(0, 64));
    return true;
  }
  Output output(const NodeCtx&, const State&) { return 0; }
};

// State after r rounds is a pure function of the r-hop neighborhood: each
// node folds neighbor digests into a running hash.
struct GossipHash {
  struct State {
    std::uint64_t digest = 0;
  };
  using Output = std::uint64_t;
  int total_rounds = 0;

  bool init(const NodeCtx& ctx, State& st) {
    st.digest = 0x9E3779B97F4A7C15ull * (ctx.id + 1);
    return false;
  }
  bool on_round(const NodeCtx& ctx, State& st, const Inbox& in, Outbox& out) {
    std::uint64_t acc = st.digest;
    for (const auto& m : in) acc = acc * 1099511628211ull + m.msg.at(0);
    st.digest = acc;
    if (ctx.round < total_rounds)
      for (int p = 0; p < ctx.degree(); ++p)
        out.send(p, Message{}.push(st.digest & 0xFFFFull, 16));
    return ctx.round >= total_rounds;
  }
  Output output(const NodeCtx&, const State& st) { return st.digest; }
};

}  // namespace

TEST_CASE("echo handshake on K_2") {
  auto g = Graph::from_edges(2, {{0, 1}});
  Session s(ExecutionMode::local());
  EchoProgram prog{bits_for(1)};
  auto outs = s.run_stage(Topology::of(g), prog);
  CHECK(s.metrics().rounds == 2);
  REQUIRE(outs[0].size() == 1);
  CHECK(outs[0][0] == 1);
  CHECK(outs[1][0] == 0);
  CHECK(s.metrics().messages_total == 2);
  CHECK(s.metrics().oracle_rounds == 0);
}

TEST_CASE("empty graph halts at init with zero rounds") {
  auto g = Graph::from_edges(4, {});
  Session s(ExecutionMode::local());
  EchoProgram prog{8};
  s.run_stage(Topology::of(g), prog);
  CHECK(s.metrics().rounds == 0);
}

TEST_CASE("CONGEST rejects oversize message naming round and edge") {
  auto g = Graph::from_edges(2, {{0, 1}});
  Session s(ExecutionMode::congest(64));
  OversizeProgram prog;
  try {
    s.run_stage(Topology::of(g), prog);
    FAIL("expected ProtocolViolation");
  } catch (const ProtocolViolation& e) {
    std::string w = e.what();
    CHECK(w.find("round 1") != std::string::npos);
    CHECK(w.find("edge 0") != std::string::npos);
    CHECK(w.find("192") != std::string::npos);
  }
}

TEST_CASE("field overflow is a protocol violation") {
  CHECK_THROWS_AS(Message{}.push(256, 8), ProtocolViolation);
  CHECK_NOTHROW(Message{}.push(255, 8));
}

TEST_CASE("encode/decode round trip") {
  Message m;
  m.push(0, 5).push(127, 8).push(42, 7);
  auto bytes = encode_message(m);
  CHECK(bytes.size() == 3);  // 20 bits
  auto back = decode_message(bytes, {5, 8, 7});
  CHECK(back.at(0) == 0);
  CHECK(back.at(1) == 127);
  CHECK(back.at(2) == 42);

  // Color 2*Delta-1 at Delta=64: field sized for palette 2*Delta is 8 bits.
  Message c;
  c.push(127, bits_for(128));
  CHECK(c.bits() == 8);
  CHECK(decode_message(encode_message(c), {8}).at(0) == 127);
}

TEST_CASE("oracle accounting") {
  Session s(ExecutionMode::local());
  CHECK(s.metrics().oracle_rounds == 0);
  int x = s.oracle("max-uncolored-degree", [] { return 41; });
  CHECK(x == 41);
  CHECK(s.metrics().oracle_rounds == 1);
  s.oracle("second-query", [] { return 0; });
  CHECK(s.metrics().oracle_rounds == 2);
  CHECK(s.oracle_assisted());
}

TEST_CASE("round budget timeout") {
  auto g = Graph::from_edges(2, {{0, 1}});
  Session s(ExecutionMode::local(), 10);
  GossipHash prog{1000};
  CHECK_THROWS_AS(s.run_stage(Topology::of(g), prog), TimeoutError);
}

TEST_CASE("replay determinism") {
  auto gen = generate(GraphModel::random_general, 40, 5, 11);
  for (int rep = 0; rep < 2; ++rep) {
    Session a(ExecutionMode::congest_default(40));
    Session b(ExecutionMode::congest_default(40));
    GossipHash p1{6}, p2{6};
    auto o1 = a.run_stage(Topology::of(gen.graph), p1);
    auto o2 = b.run_stage(Topology::of(gen.graph), p2);
    CHECK(o1 == o2);
    CHECK(a.metrics().rounds == b.metrics().rounds);
    CHECK(a.metrics().messages_total == b.metrics().messages_total);
    CHECK(a.metrics().max_message_bits == b.metrics().max_message_bits);
  }
}

// Perturbing the graph outside the r-ball of v leaves v's round-r state
// unchanged.
TEST_CASE("locality fuzz") {
  auto gen = generate(GraphModel::random_general, 60, 4, 3);
  const Graph& g = gen.graph;
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    NodeId v = NodeId(rng.below(60));
    int r = 1 + int(rng.below(3));
    // BFS r-ball.
    std::vector<int> dist(g.node_count(), -1);
    std::vector<NodeId> q{v};
    dist[v] = 0;
    for (size_t h = 0; h < q.size(); ++h) {
      NodeId u = q[h];
      if (dist[u] == r) continue;
      for (auto [w, e] : g.neighbors(u))
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          q.push_back(w);
        }
    }
    // Remove every edge with both endpoints strictly outside the ball, and
    // add a fresh far edge if possible.
    std::vector<std::pair<NodeId, NodeId>> kept;
    std::vector<NodeId> far;
    for (NodeId u = 0; u < g.node_count(); ++u)
      if (dist[u] < 0) far.push_back(u);
    for (auto [a, b] : g.edges())
      if (!(dist[a] < 0 && dist[b] < 0)) kept.push_back({a, b});
    int removed_all_far = int(g.edge_count() - kept.size());
    if (far.size() >= 2) kept.push_back({far[0], far[1]});
    auto g2 = Graph::from_edges(g.node_count(), std::move(kept));
    if (removed_all_far == 0 && far.size() < 2) continue;  // no perturbation possible

    Session a(ExecutionMode::local());
    Session b(ExecutionMode::local());
    GossipHash p1{r}, p2{r};
    auto o1 = a.run_stage(Topology::of(g), p1);
    auto o2 = b.run_stage(Topology::of(g2), p2);
    CHECK(o1[v] == o2[v]);
  }
}
