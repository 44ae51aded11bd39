#pragma once

#include <algorithm>
#include <vector>

#include "ecsim/graph.hpp"
#include "ecsim/rational.hpp"
#include "ecsim/sim.hpp"
#include "ecsim/verify.hpp"

namespace ecsim {

// Generalized token dropping game on a directed graph. Tokens move along
// arcs, at most once per arc; an arc is passive iff a token moved over it.
// The game runs floor(k/quantum)-1 phases, each phase in exactly 6 engine
// rounds (announce / proposals / accepts / token transfer / bookkeeping x2),
// plus one setup round exchanging (degree, alpha).

struct TokenGameConfig {
  int max_tokens = 1;       // k: capacity per node
  int quantum = 1;          // delta: per-phase passivation quantum
  std::vector<int> alpha;   // per-node slack control, alpha_v >= 1

  void validate(int n) const {
    if (max_tokens < 1) throw UsageError("token game needs k >= 1");
    if (int(alpha.size()) != n) throw UsageError("alpha size must equal node count");
    int amin = max_tokens + 1;
    for (int a : alpha) amin = std::min(amin, a);
    for (int a : alpha)
      if (a < 1) throw UsageError("alpha_v >= 1 required");
    if (quantum < 1 || quantum > amin)
      throw UsageError("quantum must satisfy 1 <= delta <= min alpha");
  }
  int phases() const { return std::max(0, max_tokens / quantum - 1); }
};

struct PhaseRecord {
  // Per node.
  std::vector<std::vector<EdgeId>> proposal_arcs;  // arcs (w->v) over which v proposed
  std::vector<int> p;                              // proposals received (as sender)
  std::vector<int> q;                              // proposals accepted (tokens sent)
  std::vector<int> r;                              // tokens received
  std::vector<int> x_after, y_after;
  // Per arc.
  std::vector<EdgeId> moved_arcs;
};

struct TokenGameState {
  std::vector<int> x, y;
  std::vector<char> passive;  // per arc
  int phases_run = 0;

  int tau(NodeId v) const { return x[v] + y[v]; }
};

struct TokenGameResult {
  TokenGameState state;
  std::vector<PhaseRecord> records;
  long long rounds = 0;  // engine rounds of this game
};

namespace token_detail {

struct NodeHistory {
  std::vector<std::vector<EdgeId>> proposal_arcs;  // per phase
  std::vector<int> p, q, r, x_after, y_after;
  std::vector<std::vector<EdgeId>> moved_out;  // arcs I sent a token over, per phase
  int x_final = 0, y_final = 0;
};

struct GameProgram {
  struct PeerInfo {
    int deg = 0, alpha = 0;
  };
  struct State {
    int x = 0, y = 0, xp = 0, yp = 0;
    int t = 0;
    std::vector<char> arc_passive;   // per port
    std::vector<PeerInfo> peer;      // per port
    std::vector<char> active_peer;   // activity bit per port, from round 1 of phase
    std::vector<int> proposed_ports;  // ports I proposed over this phase
    std::vector<int> accepted_out;    // ports whose proposals I accepted this phase
    std::vector<char> accepted_in;    // per port: accept received (token incoming)
    int p = 0, q = 0, r = 0;
    NodeHistory hist;
  };
  using Output = NodeHistory;

  const TokenGameConfig* cfg;
  const std::vector<int>* init_tokens;
  const Digraph* dg;
  unsigned deg_width, alpha_width;

  bool init(const NodeCtx& ctx, State& st) const {
    st.x = (*init_tokens)[ctx.id];
    st.y = 0;
    st.arc_passive.assign(ctx.degree(), 0);
    st.peer.assign(ctx.degree(), {});
    st.active_peer.assign(ctx.degree(), 0);
    st.accepted_in.assign(ctx.degree(), 0);
    if (cfg->phases() == 0) {
      st.hist.x_final = st.x;
      st.hist.y_final = st.y;
      return true;
    }
    return false;
  }

  bool on_round(const NodeCtx& ctx, State& st, const Inbox& in, Outbox& out) const {
    const int k = cfg->max_tokens, delta = cfg->quantum;
    const int av = (*cfg).alpha[ctx.id];
    if (ctx.round == 1) {  // setup: exchange (deg, alpha)
      for (int p = 0; p < ctx.degree(); ++p)
        out.send(p, Message{}
                        .push(std::uint64_t(dg->degree(ctx.id)), deg_width)
                        .push(std::uint64_t(av), alpha_width));
      return false;
    }
    const int step = (ctx.round - 2) % 6 + 1;
    const int t = (ctx.round - 2) / 6 + 1;
    switch (step) {
      case 1: {  // announce activity; steps 1-2 of the phase
        if (t == 1)
          for (const auto& m : in)
            st.peer[m.port] = {int(m.msg.at(0)), int(m.msg.at(1))};
        st.t = t;
        const bool active = st.x >= av + delta;
        if (active) {
          st.xp = st.x - delta;
          st.yp = st.y + delta;
        } else {
          st.xp = st.x;
          st.yp = st.y;
        }
        for (int p = 0; p < ctx.degree(); ++p)
          if (!st.arc_passive[p]) out.send(p, Message{}.push(active ? 1 : 0, 1));
        st.proposed_ports.clear();
        std::fill(st.accepted_in.begin(), st.accepted_in.end(), 0);
        st.p = st.q = st.r = 0;
        return false;
      }
      case 2: {  // step 4: token proposals over active in-arcs
        std::fill(st.active_peer.begin(), st.active_peer.end(), 0);
        for (const auto& m : in) st.active_peer[m.port] = char(m.msg.at(0));
        if (st.xp <= k - t * delta - av) {
          std::vector<int> cand;  // ports of S(v): active in-neighbors on active arcs
          for (int p = 0; p < ctx.degree(); ++p)
            if (ctx.link(p).dir == -1 && !st.arc_passive[p] && st.active_peer[p]) cand.push_back(p);
          const long long cap = (long long)k - (long long)t * delta - st.xp;
          const size_t want = size_t(std::min<long long>((long long)cand.size(), cap));
          // Priority: smaller deg_G(w)/alpha_w, ties by node id.
          std::sort(cand.begin(), cand.end(), [&](int a, int b) {
            long long lhs = (long long)st.peer[a].deg * st.peer[b].alpha;
            long long rhs = (long long)st.peer[b].deg * st.peer[a].alpha;
            if (lhs != rhs) return lhs < rhs;
            return ctx.link(a).peer < ctx.link(b).peer;
          });
          cand.resize(want);
          for (int p : cand) {
            out.send(p, Message{}.push(1, 1));
            st.proposed_ports.push_back(p);
          }
        }
        return false;
      }
      case 3: {  // step 5: accept q = min(p, x') proposals, smallest proposer id first
        std::vector<int> proposers;
        for (const auto& m : in) proposers.push_back(m.port);
        st.p = int(proposers.size());
        st.q = std::min(st.p, st.xp);
        std::sort(proposers.begin(), proposers.end(),
                  [&](int a, int b) { return ctx.link(a).peer < ctx.link(b).peer; });
        proposers.resize(st.q);
        std::vector<EdgeId> moved;
        st.accepted_out = proposers;
        for (int p : proposers) {
          out.send(p, Message{}.push(1, 1));  // accept
          st.arc_passive[p] = 1;
          moved.push_back(ctx.link(p).edge);
        }
        st.hist.moved_out.resize(t);
        st.hist.moved_out[t - 1] = std::move(moved);
        return false;
      }
      case 4: {  // token transfer: the accepting sender moves the tokens
        for (const auto& m : in) {
          st.accepted_in[m.port] = 1;  // accept heard by the proposer
          st.arc_passive[m.port] = 1;
        }
        for (int p : st.accepted_out) out.send(p, Message{}.push(1, 1));
        st.accepted_out.clear();
        return false;
      }
      case 5: {  // bookkeeping: count received tokens, settle x(t), y(t)
        for (const auto& m : in) {
          st.arc_passive[m.port] = 1;
          ++st.r;
        }
        st.x = st.xp + st.r - st.q;
        st.y = st.yp;
        st.hist.proposal_arcs.resize(t);
        for (int p : st.proposed_ports) st.hist.proposal_arcs[t - 1].push_back(ctx.link(p).edge);
        st.hist.p.push_back(st.p);
        st.hist.q.push_back(st.q);
        st.hist.r.push_back(st.r);
        st.hist.x_after.push_back(st.x);
        st.hist.y_after.push_back(st.y);
        return false;
      }
      case 6: {  // bookkeeping (phase boundary)
        if (t == cfg->phases()) {
          st.hist.x_final = st.x;
          st.hist.y_final = st.y;
          return true;
        }
        return false;
      }
    }
    return false;
  }

  Output output(const NodeCtx&, const State& st) const { return st.hist; }
};

}  // namespace token_detail

inline TokenGameResult run_token_game(const Digraph& dg, const std::vector<int>& init_tokens,
                                      const TokenGameConfig& cfg, Session& session) {
  const int n = dg.node_count();
  cfg.validate(n);
  if (int(init_tokens.size()) != n) throw UsageError("init_tokens size must equal node count");
  for (int t : init_tokens)
    if (t < 0 || t > cfg.max_tokens)
      throw UsageError("initial tokens must lie in [0, k]");

  int max_alpha = 1;
  for (int a : cfg.alpha) max_alpha = std::max(max_alpha, a);
  token_detail::GameProgram prog{&cfg, &init_tokens, &dg, bits_for(std::uint64_t(n)),
                                 bits_for(std::uint64_t(max_alpha))};
  const long long rounds_before = session.metrics().rounds;
  auto hist = session.run_stage(Topology::of(dg), prog);

  TokenGameResult res;
  res.rounds = session.metrics().rounds - rounds_before;
  res.state.phases_run = cfg.phases();
  res.state.x.resize(n);
  res.state.y.resize(n);
  res.state.passive.assign(dg.arc_count(), 0);
  const int T = cfg.phases();
  res.records.resize(T);
  for (int t = 0; t < T; ++t) {
    auto& rec = res.records[t];
    rec.proposal_arcs.assign(n, {});
    rec.p.assign(n, 0);
    rec.q.assign(n, 0);
    rec.r.assign(n, 0);
    rec.x_after.assign(n, 0);
    rec.y_after.assign(n, 0);
  }
  for (NodeId v = 0; v < n; ++v) {
    const auto& h = hist[v];
    res.state.x[v] = h.x_final;
    res.state.y[v] = h.y_final;
    for (int t = 0; t < T; ++t) {
      auto& rec = res.records[t];
      if (t < int(h.proposal_arcs.size())) rec.proposal_arcs[v] = h.proposal_arcs[t];
      rec.p[v] = h.p[t];
      rec.q[v] = h.q[t];
      rec.r[v] = h.r[t];
      rec.x_after[v] = h.x_after[t];
      rec.y_after[v] = h.y_after[t];
      if (t < int(h.moved_out.size()))
        for (EdgeId e : h.moved_out[t]) {
          rec.moved_arcs.push_back(e);
          res.state.passive[e] = 1;
        }
    }
  }
  for (auto& rec : res.records) std::sort(rec.moved_arcs.begin(), rec.moved_arcs.end());
  return res;
}

// Final slack tolerance for an arc (u,v): 2(a_u+a_v) + (d_u d_v/(a_u a_v) +
// d_u/a_u + d_v/a_v) * delta. Exposed for reporting; checks below use the
// cross-multiplied exact form.
inline Rat token_slack_sigma(const Digraph& dg, const TokenGameConfig& cfg, EdgeId arc) {
  auto [u, v] = dg.arc(arc);
  Rat au(cfg.alpha[u]), av(cfg.alpha[v]);
  Rat du(dg.degree(u)), dv(dg.degree(v));
  return Rat(2) * (au + av) + (du * dv / (au * av) + du / au + dv / av) * Rat(cfg.quantum);
}

// Post-hoc validation of one run: (a) per-arc single move / direction /
// moved<=>passive, (b) phase-local capacity legality with sends before
// receives, (c) x_v(t) <= max(2 alpha_v, k - t delta) and y_v(t) <= k - x_v(t)
// at every t, (d) the passive-token bound on active arcs at every t, (e) the
// final slack bound. The verdict carries the first violated clause.
inline Verdict validate_token_run(const Digraph& dg, const std::vector<int>& init_tokens,
                                  const TokenGameConfig& cfg, const TokenGameState& state,
                                  const std::vector<PhaseRecord>& records) {
  Verdict out;
  const int n = dg.node_count();
  const int k = cfg.max_tokens, delta = cfg.quantum;
  const int T = cfg.phases();
  if (int(records.size()) != T) {
    out.fail("phase-count", -1, std::to_string(records.size()), std::to_string(T));
    return out;
  }

  std::vector<int> x = init_tokens, y(n, 0);
  std::vector<char> passive(dg.arc_count(), 0);
  std::vector<char> moved_ever(dg.arc_count(), 0);

  for (int ti = 0; ti < T; ++ti) {
    const int t = ti + 1;
    const auto& rec = records[ti];
    // Recompute the phase deterministically from its record.
    std::vector<char> in_A(n, 0);
    std::vector<int> xp(n), yp(n);
    for (NodeId v = 0; v < n; ++v) {
      in_A[v] = x[v] >= cfg.alpha[v] + delta;
      xp[v] = in_A[v] ? x[v] - delta : x[v];
      yp[v] = in_A[v] ? y[v] + delta : y[v];
    }
    // Proposals: verify each proposal arc is an active in-arc from an active node.
    std::vector<int> p(n, 0);
    for (NodeId v = 0; v < n; ++v) {
      for (EdgeId e : rec.proposal_arcs[v]) {
        auto [w, head] = dg.arc(e);
        if (head != v) out.fail("a:proposal-direction", e, "head", std::to_string(v));
        if (passive[e]) out.fail("a:proposal-on-passive", e, "passive", "active");
        if (!in_A[w]) out.fail("a:proposal-to-inactive", e, "inactive", "active");
        ++p[w];
      }
    }
    // Moves: each moved arc proposed this phase, previously unmoved, along arc direction.
    std::vector<int> r(n, 0), sent(n, 0);
    for (EdgeId e : rec.moved_arcs) {
      auto [u, v] = dg.arc(e);
      if (moved_ever[e]) out.fail("a:double-move", e, "2 moves", "<= 1 move");
      moved_ever[e] = 1;
      bool proposed = false;
      for (EdgeId f : rec.proposal_arcs[v]) proposed |= (f == e);
      if (!proposed) out.fail("a:unproposed-move", e, "moved", "proposed");
      passive[e] = 1;
      ++r[v];
      ++sent[u];
    }
    for (NodeId v = 0; v < n; ++v) {
      if (rec.p[v] != p[v]) out.fail("record-p", v, std::to_string(rec.p[v]), std::to_string(p[v]));
      int q = std::min(p[v], xp[v]);
      if (rec.q[v] != q) out.fail("record-q", v, std::to_string(rec.q[v]), std::to_string(q));
      if (sent[v] != q) out.fail("record-sent", v, std::to_string(sent[v]), std::to_string(q));
      if (rec.r[v] != r[v]) out.fail("record-r", v, std::to_string(rec.r[v]), std::to_string(r[v]));
      if (r[v] > int(rec.proposal_arcs[v].size()))
        out.fail("r-over-proposals", v, std::to_string(r[v]),
                 std::to_string(rec.proposal_arcs[v].size()));
      // (b) all sends before all receives.
      if (xp[v] - q < 0) out.fail("b:negative-active", v, std::to_string(xp[v] - q), ">= 0");
      if (xp[v] - q + r[v] + yp[v] > k)
        out.fail("b:capacity", v, std::to_string(xp[v] - q + r[v] + yp[v]), std::to_string(k));
      x[v] = xp[v] + r[v] - q;
      y[v] = yp[v];
      if (rec.x_after[v] != x[v] || rec.y_after[v] != y[v])
        out.fail("record-xy", v,
                 std::to_string(rec.x_after[v]) + "," + std::to_string(rec.y_after[v]),
                 std::to_string(x[v]) + "," + std::to_string(y[v]));
      // (c) active/passive token count bounds.
      if (x[v] > std::max(2 * cfg.alpha[v], k - t * delta))
        out.fail("c:x-bound", v, std::to_string(x[v]),
                 "max(" + std::to_string(2 * cfg.alpha[v]) + "," +
                     std::to_string(k - t * delta) + ")");
      if (y[v] > k - x[v]) out.fail("c:y-bound", v, std::to_string(y[v]), std::to_string(k - x[v]));
    }
    // (d) passive-token difference on arcs still active at the end of phase t.
    for (EdgeId e = 0; e < dg.arc_count(); ++e) {
      if (passive[e]) continue;
      auto [u, v] = dg.arc(e);
      i128 au = cfg.alpha[u], av = cfg.alpha[v];
      i128 du = dg.degree(u), dv = dg.degree(v);
      i128 lhs = i128(y[u] - y[v]) * au * av;
      i128 rhs = 2 * av * au * av + (du * dv + du * av + dv * au) * i128(delta);
      if (lhs > rhs) out.fail("d:passive-diff", e, std::to_string(y[u] - y[v]), "slack bound");
    }
  }

  // (a) moved <=> passive against the reported final state.
  for (EdgeId e = 0; e < dg.arc_count(); ++e) {
    if (bool(state.passive[e]) != bool(moved_ever[e]))
      out.fail("a:moved-iff-passive", e, state.passive[e] ? "passive" : "active",
               moved_ever[e] ? "moved" : "unmoved");
    if (bool(passive[e]) != bool(moved_ever[e]))
      out.fail("a:internal-passive", e, "-", "-");
  }
  for (NodeId v = 0; v < n; ++v)
    if (state.x[v] != x[v] || state.y[v] != y[v])
      out.fail("final-xy", v, std::to_string(state.x[v]) + "," + std::to_string(state.y[v]),
               std::to_string(x[v]) + "," + std::to_string(y[v]));

  // (e) final slack bound.
  for (NodeId v = 0; v < n; ++v) {
    int tau = x[v] + y[v];
    if (tau > k || tau < 0) out.fail("e:tau-capacity", v, std::to_string(tau), std::to_string(k));
  }
  for (EdgeId e = 0; e < dg.arc_count(); ++e) {
    if (passive[e]) continue;
    auto [u, v] = dg.arc(e);
    i128 au = cfg.alpha[u], av = cfg.alpha[v];
    i128 du = dg.degree(u), dv = dg.degree(v);
    i128 lhs = i128((x[u] + y[u]) - (x[v] + y[v])) * au * av;
    i128 rhs = 2 * (au + av) * au * av + (du * dv + du * av + dv * au) * i128(delta);
    if (lhs > rhs)
      out.fail("e:final-slack", e, std::to_string((x[u] + y[u]) - (x[v] + y[v])),
               token_slack_sigma(dg, cfg, e).str());
  }
  return out;
}

}  // namespace ecsim
