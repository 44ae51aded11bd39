#pragma once

#include <json.hpp>

#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "ecsim/graph.hpp"
#include "ecsim/rational.hpp"
#include "ecsim/sim.hpp"

namespace ecsim {

// Fixed-schema run report. Field order is part of the schema; sweeps rely on
// byte-identical serialization for determinism checks.
struct RunReport {
  std::string algorithm;
  int n = 0;
  long long m = 0;
  int delta = 0;
  int bar_delta = 0;
  std::string eps;  // exact rational string
  long long rounds = 0;
  long long oracle_rounds = 0;
  long long colors_used = 0;
  int max_defect = 0;
  int max_message_bits = 0;
  std::uint64_t seed = 0;
  long long beta_used = 0;
  bool fallback_triggered = false;
  bool ok = false;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["algorithm"] = algorithm;
    j["n"] = n;
    j["m"] = m;
    j["delta"] = delta;
    j["bar_delta"] = bar_delta;
    j["eps"] = eps;
    j["rounds"] = rounds;
    j["oracle_rounds"] = oracle_rounds;
    j["colors_used"] = colors_used;
    j["max_defect"] = max_defect;
    j["max_message_bits"] = max_message_bits;
    j["seed"] = seed;
    j["beta_used"] = beta_used;
    j["fallback_triggered"] = fallback_triggered;
    j["ok"] = ok;
    return j;
  }
  std::string to_json_string() const { return to_json().dump(2) + "\n"; }

  static constexpr const char* csv_header = "alg,n,m,delta,eps,seed,rounds,oracle_rounds,colors,ok";
  std::string csv_row() const {
    std::string s;
    s += algorithm + ",";
    s += std::to_string(n) + "," + std::to_string(m) + "," + std::to_string(delta) + ",";
    s += eps + "," + std::to_string(seed) + "," + std::to_string(rounds) + ",";
    s += std::to_string(oracle_rounds) + "," + std::to_string(colors_used) + ",";
    s += ok ? "1" : "0";
    return s;
  }

  void fill_metrics(const RoundMetrics& mtr) {
    rounds = mtr.rounds;
    oracle_rounds = mtr.oracle_rounds;
    max_message_bits = mtr.max_message_bits;
  }
  void fill_graph(const Graph& g) {
    n = g.node_count();
    m = g.edge_count();
    GraphStats st = compute_stats(g);
    delta = st.delta;
    bar_delta = st.bar_delta;
  }
};

inline long long distinct_colors(const std::vector<int>& coloring) {
  std::set<int> used;
  for (int c : coloring)
    if (c != 0) used.insert(c);
  return (long long)used.size();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write file: " + path);
  f << content;
}

}  // namespace ecsim
