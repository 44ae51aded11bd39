#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "ecsim/graph.hpp"
#include "ecsim/rational.hpp"
#include "ecsim/sim.hpp"
#include "ecsim/token_game.hpp"
#include "ecsim/verify.hpp"

namespace ecsim {

// Explicit constant for the orientation balance guarantee:
//   beta_art = ceil(7/2 + 28*8^5*ln^3(max(bar,3))/eps^5 + c_tail), c_tail = 6
// absorbing the final orientation of <= 5 leftover unoriented edges per node.
inline long long beta_art(int bar_delta, const Rat& eps) {
  Rat lm = ln_fix20(double(std::max(bar_delta, 3)));
  Rat val = Rat::fraction(7, 2) + Rat(28 * 32768) * lm.pow(3) / eps.pow(5) + Rat(6);
  return val.ceil();
}

struct OrientationParams {
  Rat eps;                 // in (0,1]
  Rat nu;                  // eps/8, in (0, 1/8]
  std::vector<Rat> eta;    // per edge
  int phase_cap = 0;       // min{phi >= 0 : decay[phi]*bar <= 4}
  std::vector<Rat> decay;  // decay[phi] >= (1-nu)^phi, Fix20 round-up recurrence
  Rat ln_bar;              // ln(max(bar,2)), Fix20

  static OrientationParams make(const Rat& eps, int bar_delta, std::vector<Rat> eta) {
    if (!(eps > Rat(0)) || eps > Rat(1)) throw UsageError("eps must be in (0,1]");
    OrientationParams p;
    p.eps = eps;
    p.nu = eps / Rat(8);
    p.eta = std::move(eta);
    p.ln_bar = ln_fix20(double(std::max(bar_delta, 2)));
    // Round-up powers keep the degree-decay induction exact:
    // d <= decay[phi-1]*bar - k_phi <= (1-nu)*decay[phi-1]*bar <= decay[phi]*bar.
    Rat pw(1);
    p.decay.push_back(pw);
    const Rat one_minus(Rat(1) - p.nu);
    while (pw * Rat(bar_delta) > Rat(4)) {
      pw = Rat((pw * one_minus * Rat(kFixDen)).ceil_big(), BigInt(kFixDen));
      p.decay.push_back(pw);
    }
    p.phase_cap = int(p.decay.size()) - 1;
    return p;
  }
};

// Per-phase derived quantities of the orientation algorithm.
struct PhaseDerived {
  int k_phi = 0;
  int delta_phi = 0;
  std::vector<int> alpha;    // per node
  std::vector<int> d_minus;  // per node; bar_delta when no incident oriented edge
  std::vector<Rat> k_e;      // per edge
  std::vector<Rat> xi_e;     // per edge
};

namespace orient_detail {

inline int phase_k(const OrientationParams& p, int bar_delta, int phi) {
  return int((p.nu * p.decay[phi - 1] * Rat(bar_delta)).ceil());
}
inline int phase_quantum(const OrientationParams& p, int bar_delta, int phi) {
  Rat v = p.nu.pow(6) / (Rat(16) * p.ln_bar.pow(3)) * p.decay[phi - 1] * Rat(bar_delta);
  return int(std::max<long long>(1, v.floor()));
}
inline int node_alpha(const OrientationParams& p, int d_minus) {
  Rat v = p.nu.pow(2) / (Rat(4) * p.ln_bar) * Rat(d_minus + 1);
  return int(std::max<long long>(1, v.floor()));
}
// d_minus over edges oriented strictly before the current phase; bar_delta
// for nodes without one (min over the empty set, clamped to the upper bound).
inline std::vector<int> d_minus_map(const Graph& g, const std::vector<EdgeDir>& dir,
                                    int bar_delta) {
  std::vector<int> dm(g.node_count(), bar_delta);
  std::vector<char> has(g.node_count(), 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (dir[e] == EdgeDir::Unoriented) continue;
    auto [u, v] = g.endpoints(e);
    int de = g.edge_degree(e);
    for (NodeId w : {u, v}) {
      if (!has[w] || de < dm[w]) dm[w] = de;
      has[w] = 1;
    }
  }
  return dm;
}

}  // namespace orient_detail

inline Rat growth_k_e(const OrientationParams& p, int edge_degree) {
  return Rat((p.nu / (Rat(1) - p.nu) * Rat(edge_degree)).ceil_big(), BigInt(1));
}
inline Rat growth_xi_e(const OrientationParams& p, int edge_degree) {
  return Rat::fraction(5, 2) * (p.nu / p.ln_bar) * growth_k_e(p, edge_degree) +
         Rat(28) * p.ln_bar.pow(2) / p.nu.pow(4);
}

inline PhaseDerived eval_phase_params(const Graph& g, const GraphStats& stats,
                                      const std::vector<EdgeDir>& dir, int phi,
                                      const OrientationParams& p) {
  if (phi < 1) throw UsageError("phase index starts at 1");
  PhaseDerived d;
  d.k_phi = orient_detail::phase_k(p, stats.bar_delta, phi);
  d.delta_phi = orient_detail::phase_quantum(p, stats.bar_delta, phi);
  d.d_minus = orient_detail::d_minus_map(g, dir, stats.bar_delta);
  d.alpha.resize(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v)
    d.alpha[v] = orient_detail::node_alpha(p, d.d_minus[v]);
  d.k_e.reserve(g.edge_count());
  d.xi_e.reserve(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    d.k_e.push_back(growth_k_e(p, g.edge_degree(e)));
    d.xi_e.push_back(growth_xi_e(p, g.edge_degree(e)));
  }
  return d;
}

struct OrientationPhaseTrace {
  std::vector<std::pair<EdgeId, EdgeDir>> newly_oriented;
  std::vector<EdgeId> flipped;
  std::vector<int> x_after;
  int k_phi = 0, delta_phi = 0, game_phases = 0;
  long long rounds = 0;
};

struct OrientationTrace {
  OrientationParams params;
  GraphStats stats;
  std::vector<OrientationPhaseTrace> phases;
  std::vector<std::pair<EdgeId, EdgeDir>> leftover;
  long long beta_used = 0;
};

struct OrientationResult {
  Orientation orientation;
  std::vector<int> x;  // final incoming counts
  OrientationTrace trace;
};

namespace orient_detail {

// One phase's message exchange: round 1 broadcast (x, unoriented degree),
// round 2 derive proposals locally and send accepts, round 3 learn accepts.
struct PhaseExchangeProgram {
  struct State {
    std::vector<int> peer_x, peer_udeg;
    std::vector<signed char> new_dir;  // per port: -1 none, 0 toward me, 1 toward peer
    int accepted = 0;
  };
  struct Out {
    std::vector<signed char> new_dir;
    int accepted = 0;
  };
  using Output = Out;

  const Graph* g;
  const Bipartition* bip;
  const std::vector<EdgeDir>* dir;
  const std::vector<Rat>* eta;
  const std::vector<int>* x;
  long long thresh_num = 0;  // E_phi test: d(e) * 2^20 > thresh_num
  int k_phi = 1;
  unsigned width = 8;

  int unoriented_deg(const NodeCtx& ctx) const {
    int c = 0;
    for (int p = 0; p < ctx.degree(); ++p)
      if ((*dir)[ctx.link(p).edge] == EdgeDir::Unoriented) ++c;
    return c;
  }

  bool init(const NodeCtx& ctx, State& st) const {
    st.peer_x.assign(ctx.degree(), 0);
    st.peer_udeg.assign(ctx.degree(), 0);
    st.new_dir.assign(ctx.degree(), -1);
    return false;
  }

  bool on_round(const NodeCtx& ctx, State& st, const Inbox& in, Outbox& out) const {
    const NodeId me = ctx.id;
    if (ctx.round == 1) {
      Message m;
      m.push(std::uint64_t((*x)[me]), width).push(std::uint64_t(unoriented_deg(ctx)), width);
      for (int p = 0; p < ctx.degree(); ++p) out.send(p, m);
      return false;
    }
    if (ctx.round == 2) {
      for (const auto& m : in) {
        st.peer_x[m.port] = int(m.msg.at(0));
        st.peer_udeg[m.port] = int(m.msg.at(1));
      }
      // Edges in E_phi proposing to me, by the shared rule.
      const int my_udeg = unoriented_deg(ctx);
      std::vector<std::pair<EdgeId, int>> candidates;
      for (int p = 0; p < ctx.degree(); ++p) {
        EdgeId e = ctx.link(p).edge;
        if ((*dir)[e] != EdgeDir::Unoriented) continue;
        long long de = my_udeg + st.peer_udeg[p] - 2;
        if (de * kFixDen <= thresh_num) continue;  // not in E_phi
        auto [u, v] = bip->oriented_ends(*g, e);
        int xu = (u == me) ? (*x)[me] : st.peer_x[p];
        int xv = (v == me) ? (*x)[me] : st.peer_x[p];
        bool to_v = Rat(xv - xu) <= (*eta)[e];
        NodeId target = to_v ? v : u;
        if (target == me) candidates.push_back({e, p});
      }
      std::sort(candidates.begin(), candidates.end());
      if (int(candidates.size()) > k_phi) candidates.resize(k_phi);
      st.accepted = int(candidates.size());
      for (auto [e, p] : candidates) {
        st.new_dir[p] = 0;  // toward me
        out.send(p, Message{}.push(1, 1));
      }
      return false;
    }
    // Round 3: accepts arrive; those edges are oriented toward the peer.
    for (const auto& m : in) st.new_dir[m.port] = 1;
    return true;
  }

  Output output(const NodeCtx&, const State& st) const { return {st.new_dir, st.accepted}; }
};

// Final round for leftover unoriented edges: orient by the proposal rule on
// the final x values (simultaneous, deterministic).
struct LeftoverProgram {
  struct State {
    std::vector<int> peer_x;
  };
  using Output = std::vector<int>;
  const std::vector<int>* x;
  unsigned width = 8;

  bool init(const NodeCtx& ctx, State& st) const {
    st.peer_x.assign(ctx.degree(), 0);
    return ctx.degree() == 0;
  }
  bool on_round(const NodeCtx& ctx, State& st, const Inbox& in, Outbox& out) const {
    if (ctx.round == 1) {
      for (int p = 0; p < ctx.degree(); ++p)
        out.send(p, Message{}.push(std::uint64_t((*x)[ctx.id]), width));
      return false;
    }
    for (const auto& m : in) st.peer_x[m.port] = int(m.msg.at(0));
    return true;
  }
  Output output(const NodeCtx&, const State& st) const { return st.peer_x; }
};

}  // namespace orient_detail

// Generalized balanced edge orientation of a 2-colored bipartite graph
// (phases of proposals + one token dropping game per phase).
inline OrientationResult compute_balanced_orientation(const Graph& g, const Bipartition& bip,
                                                      const std::vector<Rat>& eta, const Rat& eps,
                                                      Session& session) {
  if (!bip.valid_for(g)) throw UsageError("balanced orientation needs a valid bipartition");
  if (int(eta.size()) != g.edge_count()) throw UsageError("eta must cover every edge");
  const int n = g.node_count();
  GraphStats stats = compute_stats(g);
  OrientationResult res;
  res.trace.params = OrientationParams::make(eps, stats.bar_delta, eta);
  res.trace.stats = stats;
  res.trace.beta_used = beta_art(stats.bar_delta, eps);
  const OrientationParams& P = res.trace.params;

  std::vector<EdgeDir> dir(g.edge_count(), EdgeDir::Unoriented);
  std::vector<int> x(n, 0);
  Topology topo = Topology::of(g);
  const unsigned width = bits_for(std::uint64_t(std::max(n, 2)));

  for (int phi = 1; phi <= P.phase_cap; ++phi) {
    OrientationPhaseTrace pt;
    pt.k_phi = orient_detail::phase_k(P, stats.bar_delta, phi);
    pt.delta_phi = orient_detail::phase_quantum(P, stats.bar_delta, phi);
    auto dm = orient_detail::d_minus_map(g, dir, stats.bar_delta);
    const long long rounds0 = session.metrics().rounds;

    // Steps 1-4: proposals and accepts.
    orient_detail::PhaseExchangeProgram prog{
        &g,  &bip, &dir, &P.eta, &x,
        (P.decay[phi] * Rat(stats.bar_delta) * Rat(kFixDen)).floor(),
        pt.k_phi, width};
    auto outs = session.run_stage(topo, prog);

    // Step 5: edges oriented before this phase that violate their eta test.
    std::vector<EdgeId> violating;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (dir[e] == EdgeDir::Unoriented) continue;
      auto [u, v] = bip.oriented_ends(g, e);
      if (dir[e] == EdgeDir::UtoV && Rat(x[v] - x[u]) > P.eta[e]) violating.push_back(e);
      if (dir[e] == EdgeDir::VtoU && Rat(x[u] - x[v]) > -P.eta[e]) violating.push_back(e);
    }

    // Commit step-4 orientations (toward the accepting node).
    for (NodeId v = 0; v < n; ++v) {
      const auto& links = topo.adj[v];
      for (int p = 0; p < int(links.size()); ++p) {
        if (outs[v].new_dir[p] != 0) continue;  // oriented toward me only
        EdgeId e = links[p].edge;
        auto [u, w] = bip.oriented_ends(g, e);
        dir[e] = (w == v) ? EdgeDir::UtoV : EdgeDir::VtoU;
        pt.newly_oriented.push_back({e, dir[e]});
      }
    }
    std::sort(pt.newly_oriented.begin(), pt.newly_oriented.end());

    // Step 6: token dropping on the violating edges, reversed.
    const int game_T = std::max(0, pt.k_phi / pt.delta_phi - 1);
    pt.game_phases = game_T;
    if (!violating.empty() && game_T > 0) {
      std::vector<std::pair<NodeId, NodeId>> arcs;
      arcs.reserve(violating.size());
      for (EdgeId e : violating) {
        auto [u, v] = bip.oriented_ends(g, e);
        // Reverse of the current orientation.
        arcs.push_back(dir[e] == EdgeDir::UtoV ? std::pair{v, u} : std::pair{u, v});
      }
      Digraph dg = Digraph::from_arcs(n, std::move(arcs));
      TokenGameConfig cfg;
      cfg.max_tokens = pt.k_phi;
      cfg.quantum = pt.delta_phi;
      cfg.alpha.resize(n);
      for (NodeId v = 0; v < n; ++v) cfg.alpha[v] = orient_detail::node_alpha(P, dm[v]);
      std::vector<int> tokens(n);
      for (NodeId v = 0; v < n; ++v) tokens[v] = outs[v].accepted;
      auto game = run_token_game(dg, tokens, cfg, session);
      // Step 7: flip every edge a token moved over.
      for (EdgeId a = 0; a < dg.arc_count(); ++a) {
        if (!game.state.passive[a]) continue;
        EdgeId e = violating[a];
        dir[e] = dir[e] == EdgeDir::UtoV ? EdgeDir::VtoU : EdgeDir::UtoV;
        pt.flipped.push_back(e);
      }
    }

    // Recount incoming edges from the direction map (exact bookkeeping).
    Orientation snapshot{dir};
    x = snapshot.recount_x(g, bip);
    pt.x_after = x;
    pt.rounds = session.metrics().rounds - rounds0;
    res.trace.phases.push_back(std::move(pt));

    // Fully quiescent and complete: every later phase would be a no-op.
    bool any_unoriented = false;
    for (EdgeDir d : dir) any_unoriented |= (d == EdgeDir::Unoriented);
    const auto& last = res.trace.phases.back();
    if (!any_unoriented && violating.empty() && last.flipped.empty() &&
        last.newly_oriented.empty())
      break;
  }

  // Leftovers: orient by the proposal rule on the final x values.
  bool any_left = false;
  for (EdgeDir d : dir) any_left |= (d == EdgeDir::Unoriented);
  if (any_left) {
    orient_detail::LeftoverProgram lp{&x, width};
    session.run_stage(topo, lp);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (dir[e] != EdgeDir::Unoriented) continue;
      auto [u, v] = bip.oriented_ends(g, e);
      dir[e] = Rat(x[v] - x[u]) <= P.eta[e] ? EdgeDir::UtoV : EdgeDir::VtoU;
      res.trace.leftover.push_back({e, dir[e]});
    }
  }
  res.orientation.dir = dir;
  res.x = Orientation{dir}.recount_x(g, bip);
  return res;
}

// Exact per-phase checks: (a) unoriented edges decay as d(e,phi) <=
// decay[phi]*bar; (b) oriented edges obey the growth bound
// |x-difference| <= (-)eta + k_e + phi*xi_e.
inline Verdict check_phase_lemmas(const Graph& g, const Bipartition& bip,
                                  const OrientationTrace& trace) {
  Verdict out;
  const OrientationParams& P = trace.params;
  const int bar = trace.stats.bar_delta;
  if (int(trace.phases.size()) > P.phase_cap)
    out.fail("phase-cap", -1, std::to_string(trace.phases.size()), std::to_string(P.phase_cap));

  std::vector<EdgeDir> dir(g.edge_count(), EdgeDir::Unoriented);
  std::vector<int> udeg(g.node_count(), 0);
  for (NodeId v = 0; v < g.node_count(); ++v) udeg[v] = g.degree(v);

  for (int pi = 0; pi < int(trace.phases.size()); ++pi) {
    const int phi = pi + 1;
    const auto& pt = trace.phases[pi];
    for (auto [e, d] : pt.newly_oriented) {
      if (dir[e] != EdgeDir::Unoriented) {
        out.fail("reorient", e, "already oriented", "unoriented");
        continue;
      }
      dir[e] = d;
      auto [u, v] = g.endpoints(e);
      --udeg[u];
      --udeg[v];
    }
    for (EdgeId e : pt.flipped) {
      if (dir[e] == EdgeDir::Unoriented) {
        out.fail("flip-unoriented", e, "unoriented", "oriented");
        continue;
      }
      dir[e] = dir[e] == EdgeDir::UtoV ? EdgeDir::VtoU : EdgeDir::UtoV;
    }
    // x accounting is exact.
    auto x = Orientation{dir}.recount_x(g, bip);
    if (x != pt.x_after) out.fail("x-recount", phi, "trace x", "recount");

    // (a) degree decay for still-unoriented edges.
    const Rat bound_a = P.decay[phi] * Rat(bar);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (dir[e] != EdgeDir::Unoriented) continue;
      auto [u, v] = g.endpoints(e);
      int de = udeg[u] + udeg[v] - 2;
      if (Rat(de) > bound_a)
        out.fail("decay-bound", e, std::to_string(de), "phase " + std::to_string(phi) + ": " +
                                                           bound_a.str());
    }
    // (b) growth bound for oriented edges, both directions.
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (dir[e] == EdgeDir::Unoriented) continue;
      auto [u, v] = bip.oriented_ends(g, e);
      Rat ke = growth_k_e(P, g.edge_degree(e));
      Rat xie = growth_xi_e(P, g.edge_degree(e));
      Rat slack = ke + Rat(phi) * xie;
      if (dir[e] == EdgeDir::UtoV) {
        if (Rat(x[v] - x[u]) > P.eta[e] + slack)
          out.fail("growth-bound-UtoV", e, std::to_string(x[v] - x[u]),
                   (P.eta[e] + slack).str());
      } else {
        if (Rat(x[u] - x[v]) > -P.eta[e] + slack)
          out.fail("growth-bound-VtoU", e, std::to_string(x[u] - x[v]),
                   (-P.eta[e] + slack).str());
      }
    }
  }
  return out;
}

}  // namespace ecsim
