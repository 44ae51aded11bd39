#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ecsim/cli.hpp"

using namespace ecsim;

namespace {
namespace fs = std::filesystem;

fs::path work_dir() {
  auto d = fs::temp_directory_path() / "ecsim_cli_test";
  fs::create_directories(d);
  return d;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"ecsim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(int(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("gen twice yields identical files") {
  auto d = work_dir();
  auto g1 = (d / "g1.txt").string(), g2 = (d / "g2.txt").string();
  CHECK(run_cli({"gen", "--model", "regular_bipartite", "--n", "16", "--delta", "3", "--seed",
                 "1", "--out", g1}) == 0);
  CHECK(run_cli({"gen", "--model", "regular_bipartite", "--n", "16", "--delta", "3", "--seed",
                 "1", "--out", g2}) == 0);
  CHECK(slurp(g1) == slurp(g2));
  CHECK(slurp(g1 + ".bip") == slurp(g2 + ".bip"));
}

TEST_CASE("end-to-end run produces ok=true and a verifiable coloring") {
  auto d = work_dir();
  auto g = (d / "g.txt").string();
  auto r = (d / "r.json").string();
  auto c = (d / "c.txt").string();
  REQUIRE(run_cli({"gen", "--model", "random_general", "--n", "48", "--delta", "6", "--seed",
                   "7", "--out", g}) == 0);
  CHECK(run_cli({"run", "--alg", "cong-gen", "--eps", "0.5", "--mode", "congest:64", "--graph",
                 g, "--out", r, "--coloring-out", c}) == 0);
  auto j = nlohmann::ordered_json::parse(slurp(r));
  CHECK(j["ok"].get<bool>());
  CHECK(j["oracle_rounds"].get<long long>() == 0);
  CHECK(run_cli({"verify", "--graph", g, "--coloring", c}) == 0);
}

TEST_CASE("verify flags a conflict with exit 1") {
  auto d = work_dir();
  auto g = (d / "vg.txt").string();
  auto c = (d / "vc.txt").string();
  {
    std::ofstream f(g);
    f << "3 2\n0 1\n1 2\n";
  }
  {
    std::ofstream f(c);
    f << "0 1\n1 1\n";
  }
  CHECK(run_cli({"verify", "--graph", g, "--coloring", c}) == 1);
}

TEST_CASE("bad flags exit 2") {
  CHECK(run_cli({"run"}) == 2);
  auto d = work_dir();
  auto g = (d / "bg.txt").string();
  {
    std::ofstream f(g);
    f << "2 1\n0 1\n";
  }
  CHECK(run_cli({"run", "--alg", "nope", "--graph", g}) == 2);
  CHECK(run_cli({"run", "--alg", "cong-bip", "--graph", g}) == 2);  // missing --bip
}

TEST_CASE("token game run via files") {
  auto d = work_dir();
  auto g = (d / "tg.txt").string();
  auto t = (d / "tt.txt").string();
  auto r = (d / "tr.json").string();
  {
    std::ofstream f(g);
    f << "2 1\n0 1\n";  // one arc 0 -> 1
  }
  {
    std::ofstream f(t);
    f << "0 4 1\n1 0 1\n";
  }
  CHECK(run_cli({"run", "--alg", "token", "--graph", g, "--tokens", t, "--k", "4", "--delta",
                 "1", "--out", r}) == 0);
  auto j = nlohmann::ordered_json::parse(slurp(r));
  CHECK(j["ok"].get<bool>());
  CHECK(j["rounds"].get<long long>() <= 24);
}

TEST_CASE("list-d1 run from generated lists") {
  auto d = work_dir();
  auto g = (d / "lg.txt").string();
  auto l = (d / "ll.txt").string();
  REQUIRE(run_cli({"gen", "--model", "random_general", "--n", "40", "--delta", "5", "--seed",
                   "3", "--out", g, "--lists-out", l}) == 0);
  CHECK(run_cli({"run", "--alg", "list-d1", "--graph", g, "--lists", l}) == 0);
}

TEST_CASE("sweep emits a CSV with one row per cell and is deterministic") {
  auto d = work_dir();
  auto s1 = (d / "s1.csv").string(), s2 = (d / "s2.csv").string();
  CHECK(run_cli({"sweep", "--alg", "token", "--delta-list", "4,6", "--eps-list", "1/2",
                 "--seeds", "2", "--out", s1}) == 0);
  CHECK(run_cli({"sweep", "--alg", "token", "--delta-list", "4,6", "--eps-list", "1/2",
                 "--seeds", "2", "--out", s2}) == 0);
  auto t1 = slurp(s1);
  CHECK(t1 == slurp(s2));
  int lines = 0;
  for (char ch : t1) lines += ch == '\n';
  CHECK(lines == 1 + 2 * 2);
  CHECK(t1.rfind(RunReport::csv_header, 0) == 0);
}

TEST_CASE("config file provides defaults, flags win") {
  auto d = work_dir();
  auto cfg = (d / "cfg.ini").string();
  auto g = (d / "cg.txt").string();
  {
    std::ofstream f(cfg);
    f << "[gen]\nn = 10\ndelta = 2\nmodel = random_general\nseed = 5\nout = " << g << "\n";
  }
  CHECK(run_cli({"--config", cfg, "gen"}) == 0);
  auto first = slurp(g);
  CHECK(run_cli({"--config", cfg, "gen", "--seed", "6"}) == 0);
  CHECK(slurp(g) != first);  // flag overrode the config seed
}
