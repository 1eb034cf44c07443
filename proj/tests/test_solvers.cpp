#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace bcslab;

namespace {

bool is_horn(const std::vector<std::string> &clause) {
  return std::count_if(clause.begin(), clause.end(), [](const std::string &l) { return l.front() != '-'; }) <= 1;
}

/// Every subset of `pool` with at most `max_size` members, in lexicographic order.
void for_each_subset(std::size_t pool, std::size_t max_size, const std::function<void(const std::vector<std::size_t> &)> &f) {
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    f(cur);
    if (cur.size() == max_size) return;
    for (std::size_t i = start; i < pool; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

Bcs random_parity(std::mt19937 &rng, std::size_t n, std::size_t m) {
  Bcs b;
  for (std::size_t v = 0; v < n; ++v) b.add_variable("v" + std::to_string(v));
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<std::string> vars;
    for (std::size_t v = 0; v < n; ++v) {
      if (rng() % 3 == 0) vars.push_back("v" + std::to_string(v));
    }
    b.add_parity(vars, rng() % 2);
  }
  return b;
}

Bcs random_mixed(std::mt19937 &rng, std::size_t n, std::size_t m) {
  Bcs b;
  for (std::size_t v = 0; v < n; ++v) b.add_variable("v" + std::to_string(v));
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<VarId> pool(n);
    for (std::size_t v = 0; v < n; ++v) pool[v] = static_cast<VarId>(v);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(1 + rng() % std::min<std::size_t>(n, 4));
    switch (rng() % 4) {
    case 0:
      b.add_constraint(Parity{pool, rng() % 2 == 1});
      break;
    case 1: {
      Clause c;
      for (auto v : pool) c.literals.push_back({v, rng() % 2 == 1});
      b.add_constraint(c);
      break;
    }
    case 2:
      b.add_constraint(ExactlyOne{pool});
      break;
    default: {
      Table t{pool, {}};
      for (std::uint64_t tuple = 0; tuple < (std::uint64_t{1} << pool.size()); ++tuple) {
        if (rng() % 2) t.satisfying.insert(tuple);
      }
      b.add_constraint(t);
    }
    }
  }
  return b;
}

/// Independent game value: every deterministic pair of Alice and Bob answer
/// functions.
Rational enumerate_game_value(const GameSpec &g) {
  std::vector<std::size_t> radix;
  for (const auto &as : g.answersA) radix.push_back(as.size());
  for (const auto &bs : g.answersB) radix.push_back(bs.size());
  std::vector<std::size_t> f(radix.size(), 0);
  Rational best(0);
  while (true) {
    Rational v(0);
    for (const auto &qp : g.pairs) {
      if (qp.win[f[qp.s]][f[g.questionsA.size() + qp.t]]) v += qp.prob;
    }
    if (v > best) best = v;
    std::size_t k = 0;
    while (k < f.size() && ++f[k] == radix[k]) f[k++] = 0;
    if (k == f.size()) break;
  }
  return best;
}

} // namespace

TEST(TwoSat, Examples) {
  const auto sat = oracle::cnf(2, {{"v0", "v1"}, {"-v0", "v1"}});
  auto r = solve_2sat(sat);
  ASSERT_TRUE(r);
  EXPECT_TRUE(oracle::satisfies(sat, *r));
  EXPECT_EQ((*r)[1], 1);
  const auto unsat = oracle::cnf(2, {{"v0", "v1"}, {"-v0", "v1"}, {"v0", "-v1"}, {"-v0", "-v1"}});
  EXPECT_FALSE(solve_2sat(unsat));
  EXPECT_FALSE(solve_2sat(oracle::cnf(1, {{"v0"}, {"-v0"}})));
  EXPECT_TRUE(solve_2sat(oracle::cnf(3, {})));
}

TEST(TwoSat, RejectsWideClauses) { EXPECT_THROW(solve_2sat(oracle::cnf(3, {{"v0", "v1", "v2"}})), Error); }

TEST(TwoSat, ExhaustiveSmallInstances) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto pool = oracle::all_clauses(n, 2);
    std::size_t checked = 0;
    for_each_subset(pool.size(), n == 3 ? 4 : pool.size(), [&](const std::vector<std::size_t> &pick) {
      std::vector<std::vector<std::string>> cs;
      for (auto i : pick) cs.push_back(pool[i]);
      const auto b = oracle::cnf(n, cs);
      const auto r = solve_2sat(b);
      ASSERT_EQ(r.has_value(), oracle::brute_sat(b).has_value());
      if (r) {
        ASSERT_TRUE(oracle::satisfies(b, *r));
      }
      ++checked;
    });
    EXPECT_GT(checked, 0u);
  }
}

TEST(TwoSat, RandomLargerInstances) {
  std::mt19937 rng(31);
  for (int k = 0; k < 500; ++k) {
    const std::size_t n = 4 + rng() % 12;
    const auto b = oracle::random_cnf(rng, n, 1 + rng() % (2 * n), 1, 2);
    const auto r = solve_2sat(b);
    ASSERT_EQ(r.has_value(), oracle::brute_sat(b).has_value());
    if (r) {
      ASSERT_TRUE(oracle::satisfies(b, *r));
    }
  }
}

TEST(TwoSat, SccPassScansEachEdgeOnce) {
  std::mt19937 rng(32);
  for (std::size_t n : {10, 100, 1000, 10000}) {
    const auto b = oracle::random_cnf(rng, n, 2 * n, 2, 2);
    const auto d = solve_2sat_detailed(b);
    EXPECT_EQ(d.graph.num_edges(), 2 * b.constraints().size());
    EXPECT_EQ(d.graph.edge_visits, d.graph.num_edges());
  }
}

TEST(Horn, Examples) {
  const auto b = oracle::cnf(3, {{"v0"}, {"-v0", "v1"}, {"-v1", "-v2"}});
  const auto r = solve_hornsat(b);
  ASSERT_TRUE(r);
  EXPECT_EQ(*r, (std::vector<std::uint8_t>{1, 1, 0}));
  EXPECT_FALSE(solve_hornsat(oracle::cnf(2, {{"v0"}, {"-v0", "v1"}, {"-v1"}})));
  EXPECT_EQ(*solve_hornsat(oracle::cnf(2, {{"-v0", "-v1"}})), (std::vector<std::uint8_t>{0, 0}));
}

TEST(Horn, RejectsNonHornClauses) { EXPECT_THROW(solve_hornsat(oracle::cnf(2, {{"v0", "v1"}})), Error); }

TEST(Horn, ExhaustiveSmallInstancesGiveMinimalModel) {
  for (std::size_t n = 1; n <= 3; ++n) {
    std::vector<std::vector<std::string>> pool;
    for (const auto &c : oracle::all_clauses(n, n)) {
      if (is_horn(c)) pool.push_back(c);
    }
    for_each_subset(pool.size(), n == 3 ? 3 : pool.size(), [&](const std::vector<std::size_t> &pick) {
      std::vector<std::vector<std::string>> cs;
      for (auto i : pick) cs.push_back(pool[i]);
      const auto b = oracle::cnf(n, cs);
      const auto r = solve_hornsat(b);
      ASSERT_EQ(r.has_value(), oracle::brute_sat(b).has_value());
      if (!r) return;
      ASSERT_TRUE(oracle::satisfies(b, *r));
      // every model contains the returned one
      for (std::uint32_t m = 0; m < (1U << n); ++m) {
        std::vector<std::uint8_t> x(n);
        for (std::size_t v = 0; v < n; ++v) x[v] = (m >> v) & 1U;
        if (!oracle::satisfies(b, x)) continue;
        for (std::size_t v = 0; v < n; ++v) ASSERT_LE((*r)[v], x[v]);
      }
    });
  }
}

TEST(Horn, GraphHasTrueAndFalseVertices) {
  const auto g = horn_graph(oracle::cnf(2, {{"v0"}, {"-v0", "-v1"}}));
  EXPECT_EQ(g.true_vertex(), 2u);
  EXPECT_EQ(g.false_vertex(), 3u);
}

TEST(Gf2, Examples) {
  Bcs b;
  b.add_variable("x");
  b.add_variable("y");
  b.add_parity({"x", "y"}, true);
  const auto r = solve_parity_gf2(b);
  ASSERT_TRUE(r);
  EXPECT_EQ(*r, (std::vector<std::uint8_t>{1, 0}));
  EXPECT_FALSE(solve_parity_gf2(magic_square()));
  Bcs empty_odd;
  empty_odd.add_parity({}, true);
  EXPECT_FALSE(solve_parity_gf2(empty_odd));
}

TEST(Gf2, SolutionCountIsPowerOfTwo) {
  std::mt19937 rng(33);
  for (int k = 0; k < 300; ++k) {
    const std::size_t n = 1 + rng() % 10;
    const auto b = random_parity(rng, n, rng() % (n + 3));
    const auto d = solve_parity_gf2_detailed(b);
    const auto count = oracle::count_solutions(b);
    ASSERT_EQ(d.assignment.has_value(), count > 0);
    if (!d.assignment) continue;
    EXPECT_TRUE(oracle::satisfies(b, *d.assignment));
    EXPECT_EQ(count, std::size_t{1} << (n - d.rank));
  }
}

TEST(Gf2, WideSystem) {
  Bcs b;
  for (int v = 0; v < 200; ++v) b.add_variable("v" + std::to_string(v));
  for (int v = 0; v + 1 < 200; ++v) b.add_parity({"v" + std::to_string(v), "v" + std::to_string(v + 1)}, true);
  const auto d = solve_parity_gf2_detailed(b);
  ASSERT_TRUE(d.assignment);
  EXPECT_EQ(d.rank, 199u);
  EXPECT_TRUE(oracle::satisfies(b, *d.assignment));
}

TEST(Classical, MatchesBruteForce) {
  std::mt19937 rng(34);
  for (int k = 0; k < 2000; ++k) {
    const std::size_t n = 1 + rng() % 12;
    const auto b = random_mixed(rng, n, rng() % (n + 4));
    const auto r = solve_classical(b);
    ASSERT_EQ(r.has_value(), oracle::brute_sat(b).has_value()) << serialize_bcs(b);
    if (r) {
      ASSERT_TRUE(oracle::satisfies(b, *r));
    }
  }
}

TEST(Classical, MagicSquareIsUnsatisfiable) {
  EXPECT_FALSE(solve_classical(magic_square()));
  EXPECT_FALSE(classical_solve_bruteforce(magic_square()));
}

TEST(GameValue, MagicSquareGame) {
  const auto g = derive_game(magic_square());
  const Rational v = classical_game_value(g);
  EXPECT_EQ(v, enumerate_game_value(g));
  EXPECT_EQ(v, Rational(17, 18));
}

TEST(GameValue, Chsh) {
  const auto g = chsh_game();
  EXPECT_EQ(classical_game_value(g), Rational(3, 4));
  EXPECT_EQ(enumerate_game_value(g), Rational(3, 4));
}

TEST(GameValue, AlwaysWinningVerifier) {
  auto g = chsh_game();
  for (auto &qp : g.pairs) {
    for (auto &row : qp.win) std::fill(row.begin(), row.end(), 1);
  }
  EXPECT_EQ(classical_game_value(g), Rational(1));
}

TEST(GameValue, PerfectIffSatisfiable) {
  std::mt19937 rng(35);
  int sat = 0, unsat = 0;
  for (int k = 0; k < 150; ++k) {
    const auto b = oracle::random_cnf(rng, 2 + rng() % 3, 1 + rng() % 7, 1, 3);
    const auto g = derive_game(b);
    const Rational v = classical_game_value(g);
    ASSERT_EQ(v, enumerate_game_value(g));
    const bool s = oracle::brute_sat(b).has_value();
    ASSERT_EQ(v == 1, s) << serialize_bcs(b);
    (s ? sat : unsat)++;
  }
  EXPECT_GT(sat, 0);
  EXPECT_GT(unsat, 0);
}
