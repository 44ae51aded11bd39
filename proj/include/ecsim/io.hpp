#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ecsim/graph.hpp"
#include "ecsim/rational.hpp"

namespace ecsim {

struct ParseError : std::runtime_error {
  ParseError(const std::string& file, int line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what), line_no(line) {}
  int line_no;
};

// Per-edge sorted color lists within a declared space [c1..c2].
struct ListAssignment {
  int c1 = 1, c2 = 0;                    // color space bounds, inclusive
  std::vector<std::vector<int>> lists;   // edge id -> ascending colors
  std::vector<std::optional<Rat>> eta;   // optional per-edge eta column

  int space_size() const { return c2 >= c1 ? c2 - c1 + 1 : 0; }
};

namespace io_detail {

inline std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

inline long long parse_int(const std::string& file, int ln, const std::string& tok) {
  try {
    size_t pos = 0;
    long long v = std::stoll(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(file, ln, "expected integer, got '" + tok + "'");
  }
}

inline double parse_real(const std::string& file, int ln, const std::string& tok) {
  try {
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(file, ln, "expected real, got '" + tok + "'");
  }
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError(path, 0, "cannot open file");
  return f;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write file: " + path);
  return f;
}

}  // namespace io_detail

// Graph file: line 1 "n m"; then m lines "u v" (0-based).
inline Graph read_graph(const std::string& path) {
  using namespace io_detail;
  auto f = open_in(path);
  std::string line;
  int ln = 0;
  int n = -1;
  long long m = -1;
  std::vector<std::pair<NodeId, NodeId>> edges;
  while (std::getline(f, line)) {
    ++ln;
    auto tk = tokens(line);
    if (tk.empty()) continue;
    if (n < 0) {
      if (tk.size() != 2) throw ParseError(path, ln, "header must be 'n m'");
      n = int(parse_int(path, ln, tk[0]));
      m = parse_int(path, ln, tk[1]);
      if (n < 0 || m < 0) throw ParseError(path, ln, "negative n or m");
      continue;
    }
    if (tk.size() != 2) throw ParseError(path, ln, "edge line must be 'u v'");
    long long u = parse_int(path, ln, tk[0]);
    long long v = parse_int(path, ln, tk[1]);
    if (u < 0 || u >= n || v < 0 || v >= n) throw ParseError(path, ln, "node index out of range");
    edges.push_back({NodeId(u), NodeId(v)});
  }
  if (n < 0) throw ParseError(path, ln, "missing header line");
  if (static_cast<long long>(edges.size()) != m)
    throw ParseError(path, ln, "expected " + std::to_string(m) + " edges, got " +
                                   std::to_string(edges.size()));
  try {
    return Graph::from_edges(n, std::move(edges));
  } catch (const UsageError& e) {
    throw ParseError(path, ln, e.what());
  }
}

inline void write_graph(const std::string& path, const Graph& g) {
  auto f = io_detail::open_out(path);
  f << g.node_count() << ' ' << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) f << u << ' ' << v << '\n';
}

// Bipartition file: n lines of "U" or "V".
inline Bipartition read_bipartition(const std::string& path, int n) {
  using namespace io_detail;
  auto f = open_in(path);
  Bipartition b;
  std::string line;
  int ln = 0;
  while (std::getline(f, line)) {
    ++ln;
    auto tk = tokens(line);
    if (tk.empty()) continue;
    if (tk.size() != 1 || (tk[0] != "U" && tk[0] != "V"))
      throw ParseError(path, ln, "expected 'U' or 'V'");
    b.side.push_back(tk[0] == "U" ? Side::U : Side::V);
  }
  if (int(b.side.size()) != n)
    throw ParseError(path, ln, "expected " + std::to_string(n) + " side lines");
  return b;
}

inline void write_bipartition(const std::string& path, const Bipartition& b) {
  auto f = io_detail::open_out(path);
  for (Side s : b.side) f << (s == Side::U ? "U" : "V") << '\n';
}

// Lists file: per line "edge_id k c1 ... ck" with colors ascending;
// an optional trailing real is the per-edge eta value.
inline ListAssignment read_lists(const std::string& path, int m, int c1 = 1, int c2 = 0) {
  using namespace io_detail;
  auto f = open_in(path);
  ListAssignment la;
  la.lists.assign(m, {});
  la.eta.assign(m, std::nullopt);
  std::vector<bool> seen(m, false);
  std::string line;
  int ln = 0;
  int maxc = 0, minc = 0;
  bool any = false;
  while (std::getline(f, line)) {
    ++ln;
    auto tk = tokens(line);
    if (tk.empty()) continue;
    long long e = parse_int(path, ln, tk[0]);
    if (e < 0 || e >= m) throw ParseError(path, ln, "edge id out of range");
    if (seen[e]) throw ParseError(path, ln, "duplicate edge id " + std::to_string(e));
    seen[e] = true;
    if (tk.size() < 2) throw ParseError(path, ln, "missing list length");
    long long k = parse_int(path, ln, tk[1]);
    if (k < 0 || tk.size() < size_t(2 + k)) throw ParseError(path, ln, "bad list length");
    std::vector<int> cs;
    for (long long i = 0; i < k; ++i) {
      long long c = parse_int(path, ln, tk[2 + i]);
      if (!cs.empty() && c <= cs.back()) throw ParseError(path, ln, "colors must be ascending");
      cs.push_back(int(c));
    }
    if (!cs.empty()) {
      if (!any) { minc = cs.front(); maxc = cs.back(); any = true; }
      minc = std::min(minc, cs.front());
      maxc = std::max(maxc, cs.back());
    }
    la.lists[e] = std::move(cs);
    if (tk.size() == size_t(2 + k + 1))
      la.eta[e] = fix20(parse_real(path, ln, tk[2 + k]));
    else if (tk.size() > size_t(2 + k + 1))
      throw ParseError(path, ln, "trailing tokens after eta field");
  }
  if (c2 >= c1) {
    la.c1 = c1;
    la.c2 = c2;
  } else {
    la.c1 = any ? minc : 1;
    la.c2 = any ? maxc : 0;
  }
  for (const auto& cs : la.lists)
    for (int c : cs)
      if (c < la.c1 || c > la.c2) throw ParseError(path, ln, "color outside declared space");
  return la;
}

inline void write_lists(const std::string& path, const ListAssignment& la) {
  auto f = io_detail::open_out(path);
  for (EdgeId e = 0; e < int(la.lists.size()); ++e) {
    f << e << ' ' << la.lists[e].size();
    for (int c : la.lists[e]) f << ' ' << c;
    if (la.eta[e]) f << ' ' << la.eta[e]->to_double();
    f << '\n';
  }
}

// Coloring file: per line "edge_id color". Color 0 = uncolored.
inline std::vector<int> read_coloring(const std::string& path, int m) {
  using namespace io_detail;
  auto f = open_in(path);
  std::vector<int> col(m, 0);
  std::vector<bool> seen(m, false);
  std::string line;
  int ln = 0;
  while (std::getline(f, line)) {
    ++ln;
    auto tk = tokens(line);
    if (tk.empty()) continue;
    if (tk.size() != 2) throw ParseError(path, ln, "coloring line must be 'edge_id color'");
    long long e = parse_int(path, ln, tk[0]);
    long long c = parse_int(path, ln, tk[1]);
    if (e < 0 || e >= m) throw ParseError(path, ln, "edge id out of range");
    if (seen[e]) throw ParseError(path, ln, "duplicate edge id " + std::to_string(e));
    seen[e] = true;
    col[e] = int(c);
  }
  return col;
}

inline void write_coloring(const std::string& path, const std::vector<int>& col) {
  auto f = io_detail::open_out(path);
  for (EdgeId e = 0; e < int(col.size()); ++e) f << e << ' ' << col[e] << '\n';
}

// Token-game node file: per line "node_id tokens alpha".
struct TokenNodeInput {
  std::vector<int> tokens;
  std::vector<int> alpha;
};

inline TokenNodeInput read_token_nodes(const std::string& path, int n) {
  using namespace io_detail;
  auto f = open_in(path);
  TokenNodeInput t;
  t.tokens.assign(n, 0);
  t.alpha.assign(n, 1);
  std::vector<bool> seen(n, false);
  std::string line;
  int ln = 0;
  while (std::getline(f, line)) {
    ++ln;
    auto tk = tokens(line);
    if (tk.empty()) continue;
    if (tk.size() != 3) throw ParseError(path, ln, "expected 'node_id tokens alpha'");
    long long v = parse_int(path, ln, tk[0]);
    if (v < 0 || v >= n) throw ParseError(path, ln, "node id out of range");
    if (seen[v]) throw ParseError(path, ln, "duplicate node id");
    seen[v] = true;
    t.tokens[v] = int(parse_int(path, ln, tk[1]));
    t.alpha[v] = int(parse_int(path, ln, tk[2]));
  }
  return t;
}

}  // namespace ecsim
