#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ecsim/graph.hpp"

namespace ecsim {

struct ProtocolViolation : std::runtime_error {
  explicit ProtocolViolation(const std::string& what) : std::runtime_error(what) {}
};
struct TimeoutError : std::runtime_error {
  explicit TimeoutError(const std::string& what) : std::runtime_error(what) {}
};

inline unsigned bits_for(std::uint64_t max_value) {
  unsigned b = 1;
  while (max_value >> b) ++b;
  return b;
}

// Protocol messages are tuples of fixed-width unsigned fields, so CONGEST
// accounting is bit-exact.
struct MsgField {
  std::uint64_t value = 0;
  std::uint32_t width = 0;
};

struct Message {
  std::uint32_t nfields = 0;
  std::array<MsgField, 4> field{};

  Message& push(std::uint64_t value, std::uint32_t width) {
    if (width == 0 || width > 64) throw ProtocolViolation("field width must be in [1,64]");
    if (width < 64 && (value >> width) != 0)
      throw ProtocolViolation("field value " + std::to_string(value) + " exceeds " +
                              std::to_string(width) + "-bit width");
    if (nfields >= field.size()) throw ProtocolViolation("too many fields in one message");
    field[nfields++] = {value, width};
    return *this;
  }
  std::uint32_t bits() const {
    std::uint32_t b = 0;
    for (std::uint32_t i = 0; i < nfields; ++i) b += field[i].width;
    return b;
  }
  std::uint64_t at(std::uint32_t i) const {
    if (i >= nfields) throw ProtocolViolation("message field index out of range");
    return field[i].value;
  }
};

// Bit-exact wire form; round-trip identity with the declared widths.
inline std::vector<std::uint8_t> encode_message(const Message& m) {
  std::vector<std::uint8_t> out((m.bits() + 7) / 8, 0);
  std::uint32_t pos = 0;
  for (std::uint32_t i = 0; i < m.nfields; ++i) {
    for (std::uint32_t b = 0; b < m.field[i].width; ++b, ++pos)
      if ((m.field[i].value >> b) & 1u) out[pos / 8] |= std::uint8_t(1u << (pos % 8));
  }
  return out;
}

inline Message decode_message(const std::vector<std::uint8_t>& bytes,
                              const std::vector<std::uint32_t>& widths) {
  std::uint32_t total = 0;
  for (auto w : widths) total += w;
  if (bytes.size() < (total + 7) / 8) throw ProtocolViolation("encoded message too short");
  Message m;
  std::uint32_t pos = 0;
  for (auto w : widths) {
    std::uint64_t v = 0;
    for (std::uint32_t b = 0; b < w; ++b, ++pos)
      if ((bytes[pos / 8] >> (pos % 8)) & 1u) v |= std::uint64_t(1) << b;
    m.push(v, w);
  }
  return m;
}

struct ExecutionMode {
  enum class Kind { LOCAL, CONGEST } kind = Kind::LOCAL;
  int bandwidth_bits = 0;  // CONGEST only

  static ExecutionMode local() { return {Kind::LOCAL, 0}; }
  static ExecutionMode congest(int bandwidth) {
    if (bandwidth < 1) throw UsageError("CONGEST bandwidth must be >= 1 bit");
    return {Kind::CONGEST, bandwidth};
  }
  // Default CONGEST width: ceil(4*log2(n)).
  static ExecutionMode congest_default(int n) {
    return congest(int(std::ceil(4.0 * std::log2(double(std::max(n, 2))))));
  }
  bool is_congest() const { return kind == Kind::CONGEST; }
};

struct RoundMetrics {
  long long rounds = 0;
  long long oracle_rounds = 0;
  long long messages_total = 0;
  int max_message_bits = 0;
};

// One link of a node: peer id, underlying edge id, reciprocal port at the
// peer, and arc direction for digraph stages (+1 out, -1 in, 0 undirected).
struct Link {
  NodeId peer = -1;
  EdgeId edge = -1;
  int peer_port = -1;
  int dir = 0;
};

struct Topology {
  int n = 0;
  std::vector<std::vector<Link>> adj;

  static Topology of(const Graph& g) {
    Topology t;
    t.n = g.node_count();
    t.adj.resize(t.n);
    for (NodeId v = 0; v < t.n; ++v)
      for (auto [w, e] : g.neighbors(v)) t.adj[v].push_back({w, e, -1, 0});
    t.fill_peer_ports();
    return t;
  }
  static Topology of(const Digraph& d) {
    Topology t;
    t.n = d.node_count();
    t.adj.resize(t.n);
    for (NodeId v = 0; v < t.n; ++v)
      for (auto [w, e] : d.neighbors(v)) {
        auto [a, b] = d.arc(e);
        t.adj[v].push_back({w, e, -1, a == v ? +1 : -1});
      }
    t.fill_peer_ports();
    return t;
  }

  void fill_peer_ports() {
    for (NodeId v = 0; v < n; ++v)
      for (int p = 0; p < int(adj[v].size()); ++p) {
        const Link& l = adj[v][p];
        if (l.peer_port >= 0) continue;
        auto& plist = adj[l.peer];
        for (int q = 0; q < int(plist.size()); ++q)
          if (plist[q].edge == l.edge) {
            adj[v][p].peer_port = q;
            plist[q].peer_port = p;
            break;
          }
      }
  }
};

struct NodeCtx {
  NodeId id = 0;
  int n = 0;
  const std::vector<Link>* links = nullptr;
  int round = 0;  // 1-based during on_round, 0 during init

  int degree() const { return int(links->size()); }
  const Link& link(int port) const { return (*links)[port]; }
};

struct InMsg {
  int port = -1;  // receiver's port of the link the message arrived on
  Message msg;
};
using Inbox = std::vector<InMsg>;

class Outbox {
 public:
  void send(int port, const Message& m) {
    for (const auto& s : sends_)
      if (s.first == port) throw ProtocolViolation("two messages on one edge in one round");
    sends_.push_back({port, m});
  }
  const std::vector<std::pair<int, Message>>& sends() const { return sends_; }
  void clear() { sends_.clear(); }

 private:
  std::vector<std::pair<int, Message>> sends_;
};

// Synchronous lockstep executor. An algorithm is a sequence of stages run
// through one Session; metrics accumulate across stages.
//
// Program concept:
//   struct P {
//     using State = ...; using Output = ...;
//     bool init(const NodeCtx&, State&);                    // true = halt at init
//     bool on_round(const NodeCtx&, State&, const Inbox&, Outbox&);  // true = halt
//     Output output(const NodeCtx&, const State&);
//   };
class Session {
 public:
  explicit Session(ExecutionMode mode, long long round_budget = 10'000'000)
      : mode_(mode), budget_(round_budget) {}

  const ExecutionMode& mode() const { return mode_; }
  const RoundMetrics& metrics() const { return metrics_; }
  bool oracle_assisted() const { return metrics_.oracle_rounds > 0; }

  // Fold in metrics of stages that ran in parallel on edge-disjoint
  // subgraphs: rounds advance by the slowest branch, traffic sums.
  void absorb_parallel(const std::vector<RoundMetrics>& branches) {
    long long max_rounds = 0;
    for (const auto& b : branches) {
      max_rounds = std::max(max_rounds, b.rounds);
      metrics_.messages_total += b.messages_total;
      metrics_.oracle_rounds += b.oracle_rounds;
      metrics_.max_message_bits = std::max(metrics_.max_message_bits, b.max_message_bits);
    }
    metrics_.rounds += max_rounds;
  }

  // Centralized hook; each invocation costs one oracle round and flags the run.
  template <class F>
  auto oracle(std::string_view name, F&& f) {
    ++metrics_.oracle_rounds;
    oracle_log_.emplace_back(name);
    return f();
  }
  const std::vector<std::string>& oracle_log() const { return oracle_log_; }

  template <class P>
  std::vector<typename P::Output> run_stage(const Topology& topo, P& prog) {
    const int n = topo.n;
    if (mode_.is_congest() &&
        mode_.bandwidth_bits < int(std::ceil(std::log2(double(std::max(n, 2))))))
      throw UsageError("CONGEST bandwidth below ceil(log2 n)");
    std::vector<typename P::State> state(n);
    std::vector<char> halted(n, 0);
    int alive = 0;
    for (NodeId v = 0; v < n; ++v) {
      NodeCtx ctx{v, n, &topo.adj[v], 0};
      if (prog.init(ctx, state[v]))
        halted[v] = 1;
      else
        ++alive;
    }
    std::vector<Inbox> cur(n), nxt(n);
    Outbox out;
    long long stage_rounds = 0;
    while (alive > 0) {
      if (metrics_.rounds + stage_rounds >= budget_)
        throw TimeoutError("round budget " + std::to_string(budget_) + " exhausted with " +
                           std::to_string(alive) + " non-halted nodes");
      ++stage_rounds;
      const int round = int(stage_rounds);
      for (NodeId v = 0; v < n; ++v) {
        if (halted[v]) continue;
        NodeCtx ctx{v, n, &topo.adj[v], round};
        out.clear();
        bool halt = prog.on_round(ctx, state[v], cur[v], out);
        for (const auto& [port, msg] : out.sends()) {
          const Link& l = topo.adj[v][size_t(port)];
          const int bits = int(msg.bits());
          if (mode_.is_congest() && bits > mode_.bandwidth_bits)
            throw ProtocolViolation("round " + std::to_string(round) + " edge " +
                                    std::to_string(l.edge) + ": message of " +
                                    std::to_string(bits) + " bits exceeds bandwidth " +
                                    std::to_string(mode_.bandwidth_bits));
          metrics_.max_message_bits = std::max(metrics_.max_message_bits, bits);
          ++metrics_.messages_total;
          if (!halted[l.peer]) nxt[l.peer].push_back({l.peer_port, msg});
        }
        if (halt) {
          halted[v] = 1;
          --alive;
        }
      }
      for (NodeId v = 0; v < n; ++v) {
        cur[v].clear();
        std::swap(cur[v], nxt[v]);
      }
    }
    metrics_.rounds += stage_rounds;
    std::vector<typename P::Output> outputs;
    outputs.reserve(n);
    for (NodeId v = 0; v < n; ++v) {
      NodeCtx ctx{v, n, &topo.adj[v], 0};
      outputs.push_back(prog.output(ctx, state[v]));
    }
    return outputs;
  }

 private:
  ExecutionMode mode_;
  long long budget_;
  RoundMetrics metrics_;
  std::vector<std::string> oracle_log_;
};

}  // namespace ecsim
