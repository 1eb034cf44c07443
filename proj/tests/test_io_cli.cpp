#include "oracles.hpp"

#include "bcslab/cli.hpp"
#include "bcslab/json_io.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace bcslab;
using json_io::Json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string> &args, const std::string &input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string &rel) { return std::string(BCSLAB_DATA_DIR) + "/" + rel; }

std::string slurp(const std::string &path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string temp_path(const std::string &name) {
  return (std::filesystem::temp_directory_path() / ("bcslab_test_" + name)).string();
}

} // namespace

TEST(JsonIo, AssignmentRoundTrip) {
  const auto a = mermin_peres_assignment();
  const auto back = json_io::assignment_from_json(json_io::assignment_to_json(a, magic_square()));
  EXPECT_TRUE(verify_assignment(magic_square(), back, 0.0).pass);
  EXPECT_EQ(json_io::assignment_to_json(back), json_io::assignment_to_json(a));
  const auto d = a.to_dense();
  const auto dback = json_io::assignment_from_json(json_io::assignment_to_json(d));
  for (const auto &[n, m] : d.as_dense().ops) EXPECT_LT((dback.as_dense().ops.at(n) - m).norm(), 1e-15);
}

TEST(JsonIo, AssignmentErrors) {
  EXPECT_THROW(json_io::assignment_from_json(Json::parse(R"({"rep":"sparse","ops":{}})")), Error);
  EXPECT_THROW(json_io::assignment_from_json(Json::parse(R"({"ops":{}})")), Error);
}

TEST(JsonIo, GameRoundTrip) {
  for (const auto &g : {chsh_game(), derive_game(magic_square())}) {
    const Json j = json_io::game_to_json(g);
    const auto back = json_io::game_from_json(j);
    EXPECT_EQ(json_io::game_to_json(back), j);
    EXPECT_EQ(classical_game_value(back), classical_game_value(g));
  }
}

TEST(JsonIo, GameRejectsBadDistribution) {
  Json j = json_io::game_to_json(chsh_game());
  j["pairs"][0]["prob"] = "1/2";
  EXPECT_THROW(json_io::game_from_json(j), Error);
}

TEST(JsonIo, StrategyRoundTrip) {
  const auto g = chsh_game();
  const auto s = chsh_optimal_strategy();
  const auto back = json_io::strategy_from_json(json_io::strategy_to_json(g, s), g);
  EXPECT_NEAR(game_value(g, back), game_value(g, s), 1e-12);
}

TEST(JsonIo, CertificateRoundTrip) {
  const auto c = std::get<Certificate>(certify_gadget(magic_square(), "x2", "x4", PairKind::Anticommute, 6));
  const Json j = json_io::certificate_to_json(c);
  const auto back = json_io::certificate_from_json(j);
  EXPECT_TRUE(verify_certificate(back));
  EXPECT_EQ(json_io::certificate_to_json(back), j);
}

TEST(JsonIo, TraceHasAllParts) {
  const Json j = json_io::trace_to_json(reduce_3sat_to_1in3(oracle::cnf(2, {{"v0", "-v1"}})).trace);
  EXPECT_EQ(j["reduction"], "3sat-to-1in3");
  EXPECT_TRUE(j["var_map"].contains("v1"));
  EXPECT_FALSE(j["gadgets"].empty());
  EXPECT_FALSE(j["fresh"].empty());
}

TEST(Cli, MagicSquareClassicalIsUnsat) {
  const auto gen = run({"gen", "magic-square"});
  ASSERT_EQ(gen.code, 0);
  const auto r = run({"solve", "--classical"}, gen.out);
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "{\"sat\":false}\n");
  const auto p = run({"solve", "-", "--parity"}, gen.out);
  EXPECT_EQ(p.code, 1);
  EXPECT_EQ(p.out, r.out);
}

TEST(Cli, CliffordRankFourVerifies) {
  const auto gen = run({"gen", "clifford", "--rank", "4"});
  ASSERT_EQ(gen.code, 0);
  const auto r = run({"verify", "--assignment", "-"}, gen.out);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(Json::parse(r.out).at("pass").get<bool>());
}

TEST(Cli, PrismCertificate) {
  const auto r = run({"certify", "--gadget", "prism", "--pair", "a,e", "--degree", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["status"], "certified");
  EXPECT_EQ(j["proofs"].size(), 9u);
  const auto check = run({"check-certificate"}, r.out);
  EXPECT_EQ(check.code, 0);
  EXPECT_TRUE(Json::parse(check.out)["valid"].get<bool>());
}

TEST(Cli, TamperedCertificateFailsCheck) {
  const auto r = run({"certify", "--gadget", "onein3", "--pair", "x,y", "--degree", "6"});
  ASSERT_EQ(r.code, 0);
  Json j = Json::parse(r.out);
  j["proofs"][0]["combination"][0]["coeff"] = "(7+0i)";
  const auto check = run({"check-certificate", "-"}, j.dump());
  EXPECT_EQ(check.code, 1);
  EXPECT_FALSE(Json::parse(check.out)["valid"].get<bool>());
}

TEST(Cli, LowDegreeIsInconclusive) {
  const auto r = run({"certify", "--gadget", "prism", "--pair", "a,e", "--degree", "2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(Json::parse(r.out)["status"], "inconclusive");
}

TEST(Cli, DegreeCapFromEnvironment) {
  ::setenv("BCSLAB_DEGREE_CAP", "2", 1);
  const auto r = run({"certify", "--gadget", "prism", "--pair", "a,e"});
  ::unsetenv("BCSLAB_DEGREE_CAP");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(Json::parse(r.out)["degree"], 2);
}

TEST(Cli, CertifyFromFileWithAnticommute) {
  const auto r = run({"certify", "--bcs", data("bcs/magic_square.bcs"), "--pair", "x2,x4", "--anticommute", "--degree", "6"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, SolversOnCorpus) {
  struct Case {
    const char *file, *flag;
    int code;
  };
  for (const auto &c : {Case{"twosat_sat", "--2sat", 0}, Case{"twosat_unsat", "--2sat", 1}, Case{"horn_sat", "--horn", 0},
                        Case{"horn_unsat", "--horn", 1}, Case{"parity_sat", "--parity", 0}, Case{"parity_unsat", "--parity", 1},
                        Case{"sat3_small", "--classical", 0}, Case{"sat3_unsat", "--classical", 1}}) {
    const std::string path = data(std::string("bcs/") + c.file + ".bcs");
    const auto r = run({"solve", path, c.flag});
    ASSERT_EQ(r.code, c.code) << c.file << " " << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["sat"].get<bool>(), c.code == 0);
    if (c.code != 0) continue;
    const Bcs b = parse_bcs(slurp(path));
    std::vector<std::uint8_t> bits;
    for (const auto &n : b.names()) bits.push_back(static_cast<std::uint8_t>(j["assignment"][n].get<int>()));
    EXPECT_TRUE(oracle::satisfies(b, bits)) << c.file;
  }
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"solve", "--classical", "--bogus"}, "var x\n").code, 2);
  EXPECT_EQ(run({"solve", "--classical", "--parity"}, "var x\n").code, 2);
  EXPECT_EQ(run({"solve"}, "var x\n").code, 2);
  EXPECT_EQ(run({"solve", "/nonexistent/file.bcs", "--classical"}).code, 2);
  EXPECT_EQ(run({"solve", "--classical"}, "this is not a bcs\n").code, 2);
  EXPECT_EQ(run({"solve", "--horn", data("bcs/sat3_small.bcs")}).code, 2);
  EXPECT_EQ(run({"gen", "clifford", "--rank", "1"}).code, 2);
  EXPECT_EQ(run({"verify", "--assignment", "-"}, "{not json").code, 2);
  EXPECT_EQ(run({"verify", "--assignment", "-", "--bcs", "-"}, "{}").code, 2);
  EXPECT_EQ(run({"certify", "--pair", "a,e"}).code, 2);
  EXPECT_EQ(run({"certify", "--gadget", "prism", "--pair", "a"}).code, 2);
  const auto r = run({"solve", "--classical"}, "this is not a bcs\n");
  EXPECT_NE(r.err.find("bcslab:"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("certify"), std::string::npos);
}

TEST(Cli, FailingVerificationExitsOne) {
  Json a;
  a["rep"] = "pauli";
  a["n"] = 1;
  a["ops"] = Json::object();
  for (int k = 1; k <= 9; ++k) a["ops"]["x" + std::to_string(k)] = "I";
  const auto r = run({"verify", "--assignment", "-", "--bcs", data("bcs/magic_square.bcs")}, a.dump());
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(Json::parse(r.out)["pass"].get<bool>());
}

TEST(Cli, GameValues) {
  EXPECT_EQ(run({"value", "--classical", "--game", data("games/chsh.json")}).out, "3/4\n");
  EXPECT_EQ(run({"value", "--classical", "--game", data("games/magic_square_game.json")}).out, "17/18\n");
  const auto chsh = run({"simulate", "--game", data("games/chsh.json"), "--strategy", data("games/chsh_strategy.json")});
  ASSERT_EQ(chsh.code, 0) << chsh.err;
  EXPECT_NEAR(std::stod(chsh.out), std::pow(std::cos(std::acos(-1.0) / 8), 2), 1e-11);
  const auto ms = run({"simulate", "--game", data("games/magic_square_game.json"), "--strategy",
                       data("games/magic_square_strategy.json")});
  ASSERT_EQ(ms.code, 0) << ms.err;
  EXPECT_NEAR(std::stod(ms.out), 1.0, 1e-9);
}

TEST(Cli, ShippedGamesMatchGenerators) {
  EXPECT_EQ(slurp(data("games/chsh.json")), run({"gen", "chsh"}).out);
  EXPECT_EQ(slurp(data("games/chsh_strategy.json")), run({"gen", "chsh", "--strategy"}).out);
  EXPECT_EQ(slurp(data("games/magic_square_game.json")), run({"derive-game", data("bcs/magic_square.bcs")}).out);
  EXPECT_EQ(slurp(data("magic_square_bundle.json")), run({"gen", "magic-square", "--with-assignment"}).out);
  EXPECT_EQ(slurp(data("games/magic_square_strategy.json")),
            run({"strategy", "--assignment", data("magic_square_bundle.json")}).out);
}

TEST(Cli, ParseIsIdentityOnCanonicalCorpus) {
  std::size_t n = 0;
  for (const auto &e : std::filesystem::directory_iterator(data("bcs"))) {
    if (e.path().filename() == "comments.bcs") continue;
    const std::string text = slurp(e.path().string());
    const auto r = run({"parse", e.path().string()});
    ASSERT_EQ(r.code, 0) << e.path();
    EXPECT_EQ(r.out, text) << e.path();
    ++n;
  }
  EXPECT_GE(n, 20u);
  for (const auto &e : std::filesystem::directory_iterator(data("graphs"))) {
    const auto r = run({"parse", "--graph", e.path().string()});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(run({"parse", "--graph", "-"}, r.out).out, r.out);
  }
}

TEST(Cli, ReduceWritesTrace) {
  const std::string trace = temp_path("trace.json");
  const auto r = run({"reduce", data("bcs/sat3_small.bcs"), "--to", "3coloring", "--trace", trace});
  ASSERT_EQ(r.code, 0) << r.err;
  const Graph g = parse_graph(r.out);
  const Json t = Json::parse(slurp(trace));
  EXPECT_EQ(t["reduction"], "3sat-to-3coloring");
  for (const auto &f : t["fresh"]) EXPECT_TRUE(g.find(f.get<std::string>()));
  std::filesystem::remove(trace);
  const auto as_bcs = run({"reduce", data("bcs/sat3_small.bcs"), "--to", "3coloring", "--emit", "bcs"});
  ASSERT_EQ(as_bcs.code, 0);
  EXPECT_EQ(parse_bcs(as_bcs.out).num_vars(), 3 * g.num_vertices());
}

TEST(Cli, ReduceOccurrenceLimit) {
  const auto r = run({"reduce", data("bcs/occurrence_heavy.bcs"), "--occ-limit", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (auto o : parse_bcs(r.out).occurrences()) EXPECT_LE(o, 3u);
  EXPECT_EQ(run({"reduce", data("bcs/occurrence_heavy.bcs"), "--occ-limit", "2"}).code, 2);
}

TEST(Cli, ColoringAndKsGenerators) {
  const auto k4 = run({"gen", "coloring-bcs", "--graph", data("graphs/k4.graph")});
  ASSERT_EQ(k4.code, 0);
  EXPECT_EQ(run({"solve", "--classical"}, k4.out).code, 1);
  const auto k4four = run({"gen", "coloring-bcs", "--graph", data("graphs/k4.graph"), "--colors", "4"});
  EXPECT_EQ(run({"solve", "--classical"}, k4four.out).code, 0);
  const auto odd = run({"gen", "ks-bcs", "--sets", data("ks/odd_cover.txt")});
  ASSERT_EQ(odd.code, 0);
  EXPECT_EQ(run({"solve", "--classical"}, odd.out).code, 1);
}

TEST(Cli, OutputsAreDeterministic) {
  const std::vector<std::vector<std::string>> commands{
      {"gen", "magic-square", "--with-assignment"},
      {"gen", "clifford", "--rank", "5"},
      {"certify", "--gadget", "onein3", "--pair", "x,y", "--degree", "6"},
      {"reduce", data("bcs/sat3_mixed.bcs"), "--to", "1in3"},
      {"reduce", data("bcs/ksat5.bcs"), "--to", "3sat"},
      {"strategy", "--assignment", data("magic_square_bundle.json")},
      {"simulate", "--game", data("games/chsh.json"), "--strategy", data("games/chsh_strategy.json")},
  };
  for (const auto &c : commands) {
    const auto a = run(c), b = run(c);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out) << c[0];
  }
}
