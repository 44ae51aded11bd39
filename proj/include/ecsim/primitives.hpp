#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "ecsim/graph.hpp"
#include "ecsim/rational.hpp"
#include "ecsim/sim.hpp"

namespace ecsim {

struct VertexColoring {
  std::vector<int> color;  // 1-based
  int palette_size = 0;
  int defect_bound = 0;  // 0 for proper
};

// Declared artifact constants.
inline int k_lin(int delta) { return std::max(4 * delta * delta, delta + 1); }
inline constexpr int kDefConstant = 32;  // K_def in palette <= K_def * ceil(Delta/p)^2

namespace prim_detail {

inline bool is_prime(long long x) {
  if (x < 2) return false;
  for (long long d = 2; d * d <= x; ++d)
    if (x % d == 0) return false;
  return true;
}
inline long long next_prime(long long x) {
  long long q = std::max<long long>(2, x);
  while (!is_prime(q)) ++q;
  return q;
}
inline int digits_base(long long K, long long q) {
  int d = 1;
  long long pw = q;
  while (pw < K) {
    pw *= q;
    ++d;
  }
  return d;
}

struct PolyStep {
  long long q;
  int d;
};

// Color-reduction schedule: iterated polynomial pairs (a, f(a)) over GF(q),
// one communication round per step, then a one-color-per-round tail down to
// k_lin(Delta). The whole schedule is a pure function of (K0, Delta), so all
// nodes share it.
struct LinialSchedule {
  std::vector<PolyStep> steps;
  long long k_after_poly = 0;
  long long k_target = 0;
  int tail_len = 0;
  int total_rounds() const {
    if (steps.empty() && tail_len == 0) return 0;
    return int(steps.size()) + 1 + tail_len;
  }
};

inline LinialSchedule linial_schedule(long long K0, int delta) {
  LinialSchedule s;
  s.k_target = k_lin(delta);
  long long K = K0;
  while (K > s.k_target) {
    // Smallest feasible prime: q > Delta*(d-1) for d = ceil(log_q K).
    long long q = 2;
    while (true) {
      q = next_prime(q);
      int d = digits_base(K, q);
      if ((long long)delta * (d - 1) < q) break;
      ++q;
    }
    if (q * q >= K) break;  // no single step makes progress
    s.steps.push_back({q, digits_base(K, q)});
    K = q * q;
  }
  s.k_after_poly = K;
  s.tail_len = int(std::max<long long>(0, K - s.k_target));
  return s;
}

// Evaluate the polynomial with base-q digit coefficients of `color` at point a.
inline long long poly_eval(long long color, long long q, int d, long long a) {
  long long acc = 0, pw = 1;
  for (int i = 0; i < d; ++i) {
    acc = (acc + (color % q) * pw) % q;
    color /= q;
    pw = (pw * a) % q;
  }
  return acc;
}

// Shared broadcast-style program for Linial reduction and defective steps.
// Round 1 broadcasts the initial color; round s+1 applies step s and
// broadcasts the result; tail rounds recolor one top color class per round.
struct ColorReduceProgram {
  struct State {
    long long color = 0;
    std::vector<long long> nbr;  // per port, current neighbor color
  };
  using Output = long long;

  const std::vector<long long>* init_colors;
  LinialSchedule sched;
  int delta = 0;
  unsigned width = 0;
  bool defective = false;  // pick collision-minimizing a instead of collision-free

  bool init(const NodeCtx& ctx, State& st) const {
    st.color = (*init_colors)[ctx.id];
    st.nbr.assign(ctx.degree(), -1);
    return sched.total_rounds() == 0;
  }

  bool on_round(const NodeCtx& ctx, State& st, const Inbox& in, Outbox& out) const {
    for (const auto& m : in) st.nbr[m.port] = (long long)m.msg.at(0);
    const int S = int(sched.steps.size());
    bool changed = false;
    if (ctx.round == 1) {
      changed = true;  // initial broadcast
    } else if (ctx.round <= S + 1) {
      const auto& stp = sched.steps[ctx.round - 2];
      long long besta = -1, bestcoll = 1 << 30;
      for (long long a = 0; a < stp.q; ++a) {
        long long mine = poly_eval(st.color, stp.q, stp.d, a);
        long long coll = 0;
        for (int p = 0; p < ctx.degree(); ++p)
          if (st.nbr[p] >= 0 && st.nbr[p] != st.color &&
              poly_eval(st.nbr[p], stp.q, stp.d, a) == mine)
            ++coll;
        if (!defective) {
          if (coll == 0) {
            besta = a;
            break;
          }
        } else if (coll < bestcoll) {
          bestcoll = coll;
          besta = a;
        }
      }
      if (besta < 0) throw ProtocolViolation("no collision-free point; schedule broken");
      st.color = besta * stp.q + poly_eval(st.color, stp.q, stp.d, besta);
      changed = true;
    } else {
      // Tail: kill color (k_after_poly - j + 1) in tail round j. Color
      // classes of a proper coloring are independent sets.
      long long victim = sched.k_after_poly - (ctx.round - S - 2);
      if (st.color == victim - 1) {  // colors are 0-based internally
        for (long long c = 0; c <= delta; ++c) {
          bool used = false;
          for (int p = 0; p < ctx.degree(); ++p) used |= (st.nbr[p] == c);
          if (!used) {
            st.color = c;
            changed = true;
            break;
          }
        }
        if (!changed) throw ProtocolViolation("tail recoloring found no free color");
      }
    }
    if (changed)
      for (int p = 0; p < ctx.degree(); ++p)
        out.send(p, Message{}.push(std::uint64_t(st.color), width));
    return ctx.round >= sched.total_rounds();
  }

  Output output(const NodeCtx&, const State& st) const { return st.color; }
};

}  // namespace prim_detail

enum class LinialMode { algorithmic, oracle };

// Proper vertex coloring with palette <= k_lin(Delta). Oracle mode computes a
// greedy (Delta+1)-coloring through the session's oracle hook.
inline VertexColoring linial_coloring(const Graph& g, Session& session,
                                      LinialMode mode = LinialMode::algorithmic) {
  const int n = g.node_count();
  VertexColoring out;
  out.color.assign(n, 1);
  out.defect_bound = 0;
  int delta = 0;
  for (NodeId v = 0; v < n; ++v) delta = std::max(delta, g.degree(v));
  if (n == 0) {
    out.palette_size = 1;
    return out;
  }
  if (mode == LinialMode::oracle) {
    out.color = session.oracle("greedy-vertex-coloring", [&] {
      std::vector<int> col(n, 0);
      for (NodeId v = 0; v < n; ++v) {
        std::vector<char> used(size_t(delta) + 2, 0);
        for (auto [w, e] : g.neighbors(v))
          if (col[w] > 0 && col[w] <= delta + 1) used[col[w]] = 1;
        int c = 1;
        while (used[c]) ++c;
        col[v] = c;
      }
      return col;
    });
    out.palette_size = delta + 1;
    return out;
  }
  if (delta == 0) {
    out.palette_size = 1;
    return out;
  }
  auto sched = prim_detail::linial_schedule(n, delta);
  std::vector<long long> ids(n);
  for (NodeId v = 0; v < n; ++v) ids[v] = v;  // unique ids, realized as id+1
  long long width_src = std::max<long long>((long long)n, sched.k_after_poly);
  prim_detail::ColorReduceProgram prog{&ids, sched, delta,
                                       bits_for(std::uint64_t(width_src)), false};
  auto colors = session.run_stage(Topology::of(g), prog);
  for (NodeId v = 0; v < n; ++v) out.color[v] = int(colors[v]) + 1;
  // Steps only fire while they shrink the palette, so the final bound is
  // min(n, k_lin(Delta)).
  out.palette_size = int(std::min<long long>((long long)n, sched.k_target));
  return out;
}

// p-defective coloring from a proper base coloring, via collision-budgeted
// polynomial steps. Palette <= kDefConstant * ceil(Delta/p)^2.
inline VertexColoring defective_coloring_p(const Graph& g, int p, const VertexColoring& base,
                                           Session& session) {
  using namespace prim_detail;
  if (p <= 0) throw UsageError("defective_coloring_p needs p >= 1 (use the base for p=0)");
  const int n = g.node_count();
  int delta = 0;
  for (NodeId v = 0; v < n; ++v) delta = std::max(delta, g.degree(v));
  VertexColoring out;
  if (p >= delta) {  // one class, defect <= Delta <= p
    out.color.assign(n, 1);
    out.palette_size = 1;
    out.defect_bound = delta;
    return out;
  }
  // Greedy schedule: repeatedly apply the cheapest palette-shrinking step
  // within the remaining collision budget.
  long long K = base.palette_size;
  long long budget = p;
  LinialSchedule sched;
  sched.k_target = 0;
  long long spent = 0;
  auto ceil_root = [](long long K_, int d_) {
    long long r = 1;
    auto pow_ge = [&](long long q) {
      long long pw = 1;
      for (int i = 0; i < d_; ++i) {
        pw *= q;
        if (pw >= K_) return true;
      }
      return pw >= K_;
    };
    while (!pow_ge(r)) ++r;
    return r;
  };
  while (true) {
    long long best_q = -1;
    int best_d = 0;
    long long best_cost = 0;
    for (int d = 1; d <= digits_base(K, 2); ++d) {
      // Need q^d >= K and floor(Delta(d-1)/q) <= budget.
      long long lo = std::max<long long>(2, ceil_root(K, d));
      lo = std::max(lo, (long long)delta * (d - 1) / (budget + 1) + 1);
      long long q = next_prime(lo);
      if (best_q < 0 || q < best_q) {
        best_q = q;
        best_d = d;
        best_cost = (long long)delta * (d - 1) / q;
      }
    }
    if (best_q < 0 || best_q * best_q >= K) break;
    sched.steps.push_back({best_q, best_d});
    budget -= best_cost;
    spent += best_cost;
    K = best_q * best_q;
  }
  sched.k_after_poly = K;
  sched.tail_len = 0;

  std::vector<long long> init(n);
  for (NodeId v = 0; v < n; ++v) init[v] = base.color[v] - 1;
  ColorReduceProgram prog{&init, sched, delta,
                          bits_for(std::uint64_t(std::max<long long>(base.palette_size, K))),
                          true};
  auto colors = session.run_stage(Topology::of(g), prog);
  out.color.resize(n);
  for (NodeId v = 0; v < n; ++v) out.color[v] = int(colors[v]) + 1;
  out.palette_size = int(K);
  out.defect_bound = int(spent);
  return out;
}

namespace prim_detail {

// One pass of threshold local search over 4 colors, scheduled by the classes
// of a defective base coloring. A node flips when its current monochromatic
// count beats the best alternative by at least `threshold`.
struct FlipPassProgram {
  struct State {
    int color4 = 0;                // 0..3
    std::vector<int> nbr;          // per port
    bool flipped = false;
  };
  using Output = std::pair<int, int>;  // (color, flipped?)

  const std::vector<int>* cur4;
  const std::vector<int>* cls;  // schedule class per node, 1-based
  int num_classes = 0;
  int threshold = 1;

  bool init(const NodeCtx& ctx, State& st) const {
    st.color4 = (*cur4)[ctx.id];
    st.nbr.assign(ctx.degree(), -1);
    return false;
  }
  bool on_round(const NodeCtx& ctx, State& st, const Inbox& in, Outbox& out) const {
    for (const auto& m : in) st.nbr[m.port] = int(m.msg.at(0));
    bool send = false;
    if (ctx.round == 1) {
      send = true;  // announce current color
    } else if ((*cls)[ctx.id] == ctx.round - 1) {
      int cnt[4] = {0, 0, 0, 0};
      for (int p = 0; p < ctx.degree(); ++p)
        if (st.nbr[p] >= 0) ++cnt[st.nbr[p]];
      int best = 0;
      for (int c = 1; c < 4; ++c)
        if (cnt[c] < cnt[best]) best = c;
      if (cnt[st.color4] - cnt[best] >= threshold) {
        st.color4 = best;
        st.flipped = true;
        send = true;
      }
    }
    if (send)
      for (int p = 0; p < ctx.degree(); ++p)
        out.send(p, Message{}.push(std::uint64_t(st.color4), 2));
    return ctx.round >= num_classes + 1;
  }
  Output output(const NodeCtx&, const State& st) const { return {st.color4, st.flipped ? 1 : 0}; }
};

}  // namespace prim_detail

// (ceil(eps1*Delta) + floor(Delta/2))-defective 4-coloring. Threshold local
// search scheduled by a ceil(eps1*Delta)-defective coloring; at stability the
// per-node monochromatic count is <= floor(Delta/4) + ceil(eps1*Delta).
inline VertexColoring refine_to_4(const Graph& g, const Rat& eps1, const VertexColoring& base,
                                  Session& session) {
  const int n = g.node_count();
  int delta = 0;
  for (NodeId v = 0; v < n; ++v) delta = std::max(delta, g.degree(v));
  VertexColoring out;
  out.palette_size = 4;
  if (delta == 0) {
    out.color.assign(n, 1);
    out.defect_bound = 0;
    return out;
  }
  const int p = int((eps1 * Rat(delta)).ceil());
  out.defect_bound = p + delta / 2;  // contract bound
  VertexColoring defcol = defective_coloring_p(g, std::max(1, p), base, session);

  std::vector<int> cur(n);
  for (NodeId v = 0; v < n; ++v) cur[v] = (defcol.color[v] - 1) % 4;
  prim_detail::FlipPassProgram prog{&cur, &defcol.color, defcol.palette_size,
                                    std::max(1, p) + 1};
  // Passes run until a full quiet pass; each flip lowers the monochromatic-
  // edge potential, so this terminates.
  while (true) {
    auto res = session.run_stage(Topology::of(g), prog);
    long long flips = 0;
    for (NodeId v = 0; v < n; ++v) {
      cur[v] = res[v].first;
      flips += res[v].second;
    }
    if (flips == 0) break;
  }
  out.color.resize(n);
  for (NodeId v = 0; v < n; ++v) out.color[v] = cur[v] + 1;
  return out;
}

// Delta/2-ish defective O(1)-coloring: refine_to_4 with eps1 = 1/8.
// c_const = 4; defect <= floor(Delta/2) + ceil(Delta/8).
inline VertexColoring defective_const(const Graph& g, const VertexColoring& base,
                                      Session& session) {
  auto out = refine_to_4(g, Rat::fraction(1, 8), base, session);
  int delta = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) delta = std::max(delta, g.degree(v));
  out.defect_bound = delta / 2 + int(Rat::fraction(delta, 8).ceil());
  return out;
}

// Proper edge-coloring schedule: a proper coloring of the line graph.
struct EdgeSchedule {
  std::vector<int> cls;  // edge id -> class, 1-based
  int num_classes = 0;
};

// Schedule for a 2-colored bipartite graph from local port ranks. Class of
// e = (rank of e at its U endpoint, rank at its V endpoint), flattened.
// Adjacent edges share an endpoint and differ in that endpoint's rank.
inline EdgeSchedule port_pair_schedule(const Graph& g, const Bipartition& bip) {
  int du = 0, dv = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (bip.side[v] == Side::U) du = std::max(du, g.degree(v));
    else dv = std::max(dv, g.degree(v));
  }
  EdgeSchedule s;
  s.cls.assign(g.edge_count(), 0);
  std::vector<int> next_rank(g.node_count(), 0);
  // Ranks assigned in edge-id order at each endpoint.
  std::vector<int> rank_u(g.edge_count(), 0), rank_v(g.edge_count(), 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    auto [u, v] = bip.oriented_ends(g, e);
    rank_u[e] = next_rank[u]++;
    rank_v[e] = next_rank[v]++;
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) s.cls[e] = rank_u[e] * std::max(dv, 1) + rank_v[e] + 1;
  s.num_classes = du * std::max(dv, 1) + dv;
  for (EdgeId e = 0; e < g.edge_count(); ++e) s.num_classes = std::max(s.num_classes, s.cls[e]);
  return s;
}

inline void check_schedule_proper(const Graph& g, const EdgeSchedule& sched) {
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto& inc = g.neighbors(v);
    for (size_t i = 0; i < inc.size(); ++i)
      for (size_t j = i + 1; j < inc.size(); ++j)
        if (sched.cls[inc[i].second] == sched.cls[inc[j].second])
          throw UsageError("schedule is not a proper line-graph coloring");
  }
}

namespace prim_detail {

// Greedy edge coloring by schedule classes. Both endpoints of an edge track
// the colors used at each endpoint (via one broadcast per newly colored
// edge), so they decide the same color locally; rounds = number of classes
// processed. A class window plus a carried-in partial coloring lets callers
// run the schedule in chunks.
struct GreedyEdgeProgram {
  struct State {
    std::vector<std::vector<char>> peer_used;  // per port: colors used at peer
    std::vector<char> own_used;
    std::vector<int> edge_color;  // per port, 0 = uncolored
    bool stuck = false;
  };
  using Output = std::pair<std::vector<int>, bool>;  // per-port colors, stuck?

  const Graph* g = nullptr;
  const EdgeSchedule* sched = nullptr;
  const std::vector<std::vector<int>>* lists = nullptr;  // nullptr = palette mode
  int palette = 0;
  unsigned width = 0;
  int class_lo = 1, class_hi = 0;          // inclusive window; hi 0 = all classes
  const std::vector<int>* carried = nullptr;  // existing partial coloring

  int hi() const { return class_hi > 0 ? class_hi : sched->num_classes; }

  bool init(const NodeCtx& ctx, State& st) const {
    st.peer_used.assign(ctx.degree(), std::vector<char>(size_t(palette) + 1, 0));
    st.own_used.assign(size_t(palette) + 1, 0);
    st.edge_color.assign(ctx.degree(), 0);
    if (carried) {
      // Incident and neighbor-incident colors are local knowledge (heard as
      // broadcasts while earlier classes ran).
      for (int p = 0; p < ctx.degree(); ++p) {
        int c = (*carried)[ctx.link(p).edge];
        st.edge_color[p] = c;
        if (c >= 1 && c <= palette) st.own_used[c] = 1;
      }
      for (int p = 0; p < ctx.degree(); ++p)
        for (auto [w, f] : g->neighbors(ctx.link(p).peer)) {
          int c = (*carried)[f];
          if (c >= 1 && c <= palette) st.peer_used[p][c] = 1;
        }
    }
    return class_lo > hi();
  }
  bool on_round(const NodeCtx& ctx, State& st, const Inbox& in, Outbox& out) const {
    for (const auto& m : in) {
      int c = int(m.msg.at(0));
      if (c >= 1 && c <= palette) st.peer_used[m.port][c] = 1;
    }
    const int cls = class_lo + ctx.round - 1;
    int newly = -1;
    for (int p = 0; p < ctx.degree(); ++p) {
      EdgeId e = ctx.link(p).edge;
      if ((*sched).cls[e] != cls || st.edge_color[p] != 0) continue;
      int pick = 0;
      if (lists) {
        for (int c : (*lists)[e])
          if (!st.own_used[c] && !st.peer_used[p][c]) {
            pick = c;
            break;
          }
      } else {
        for (int c = 1; c <= palette; ++c)
          if (!st.own_used[c] && !st.peer_used[p][c]) {
            pick = c;
            break;
          }
      }
      if (pick == 0) {
        st.stuck = true;
        continue;
      }
      st.edge_color[p] = pick;
      st.own_used[pick] = 1;
      newly = pick;
    }
    if (newly > 0)
      for (int p = 0; p < ctx.degree(); ++p)
        out.send(p, Message{}.push(std::uint64_t(newly), width));
    return class_lo + ctx.round - 1 >= hi();
  }
  Output output(const NodeCtx&, const State& st) const { return {st.edge_color, st.stuck}; }
};

struct GreedyOutcome {
  std::vector<int> coloring;
  std::optional<EdgeId> stuck_edge;
};

inline GreedyOutcome run_greedy(const Graph& g, const EdgeSchedule& sched,
                                const std::vector<std::vector<int>>* lists, int palette,
                                Session& session) {
  check_schedule_proper(g, sched);
  GreedyEdgeProgram prog{&g, &sched, lists, palette,
                         bits_for(std::uint64_t(std::max(palette, 1)))};
  auto res = session.run_stage(Topology::of(g), prog);
  GreedyOutcome out;
  out.coloring.assign(g.edge_count(), 0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto& inc = g.neighbors(v);
    for (int p = 0; p < int(inc.size()); ++p) {
      EdgeId e = inc[p].second;
      int c = res[v].first[p];
      if (out.coloring[e] == 0) out.coloring[e] = c;
      else if (c != out.coloring[e])
        throw ProtocolViolation("endpoints disagree on edge color");
    }
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (out.coloring[e] == 0 && !out.stuck_edge) out.stuck_edge = e;
  return out;
}

}  // namespace prim_detail

// Proper edge coloring with colors in [1, palette]; schedule classes are
// processed in order, one engine round each.
inline std::vector<int> greedy_edge_coloring(const Graph& g, int palette,
                                             const EdgeSchedule& sched, Session& session) {
  GraphStats st = compute_stats(g);
  if (palette < st.bar_delta + 1)
    throw UsageError("palette " + std::to_string(palette) + " below edge degree bound " +
                     std::to_string(st.bar_delta + 1));
  auto out = prim_detail::run_greedy(g, sched, nullptr, palette, session);
  if (out.stuck_edge) throw ProtocolViolation("greedy stuck despite sufficient palette");
  return out.coloring;
}

// List variant: colors come from per-edge lists; may fail explicitly.
struct ListGreedyResult {
  std::vector<int> coloring;
  std::optional<EdgeId> stuck_edge;
  bool ok() const { return !stuck_edge.has_value(); }
};

inline ListGreedyResult greedy_list_edge_coloring(const Graph& g,
                                                  const std::vector<std::vector<int>>& lists,
                                                  int max_color, const EdgeSchedule& sched,
                                                  Session& session) {
  auto out = prim_detail::run_greedy(g, sched, &lists, max_color, session);
  return {std::move(out.coloring), out.stuck_edge};
}

// Schedule from a Linial coloring of the line graph (general graphs).
inline EdgeSchedule linial_line_schedule(const Graph& g, Session& session,
                                         LinialMode mode = LinialMode::algorithmic) {
  Graph lg = line_graph(g);
  auto vc = linial_coloring(lg, session, mode);
  EdgeSchedule s;
  s.cls = vc.color;
  s.num_classes = vc.palette_size;
  for (int c : s.cls) s.num_classes = std::max(s.num_classes, c);
  return s;
}

}  // namespace ecsim
