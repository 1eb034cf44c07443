#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace bcslab;

namespace {

constexpr double kTol = 1e-10;

/// <psi| A (x) B |psi> from the explicit d^2 vector, with psi[i d + j] = M(i, j).
double explicit_correlation(const Matrix &m, const Matrix &a, const Matrix &b) {
  const Eigen::Index d = m.rows();
  Eigen::VectorXcd psi(d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) psi(i * d + j) = m(i, j);
  }
  return (psi.adjoint() * dense::kron(a, b) * psi)(0, 0).real();
}

double explicit_value(const GameSpec &g, const Strategy &s) {
  double value = 0;
  for (const auto &qp : g.pairs) {
    for (const auto &[a, pa] : s.alice[qp.s]) {
      for (const auto &[b, pb] : s.bob[qp.t]) {
        if (qp.win[a][b]) value += qp.prob.get_d() * explicit_correlation(s.state, pa, pb);
      }
    }
  }
  return value;
}

/// Two-outcome PVM from a random rank-r projector.
Pvm random_binary_pvm(std::mt19937 &rng, Eigen::Index d) {
  const Matrix u = oracle::haar_unitary(rng, d);
  const Eigen::Index r = static_cast<Eigen::Index>(rng() % (d + 1));
  const Matrix p = u.leftCols(r) * u.leftCols(r).adjoint();
  return {{0, p}, {1, dense::identity(d) - p}};
}

Strategy magic_square_strategy() { return strategy_from_assignment(magic_square(), mermin_peres_assignment()); }

Eigen::Index rank_of(const Matrix &p) { return static_cast<Eigen::Index>(std::lround(p.trace().real())); }

} // namespace

TEST(GameSim, MagicSquarePerfectAtDimensionFour) {
  const auto g = derive_game(magic_square());
  const auto s = magic_square_strategy();
  EXPECT_EQ(s.dim, 4);
  EXPECT_NEAR(game_value(g, s), 1.0, kTol);
  EXPECT_NEAR(explicit_value(g, s), 1.0, kTol);
}

TEST(GameSim, MagicSquareAlicePvms) {
  const auto s = magic_square_strategy();
  ASSERT_EQ(s.alice.size(), 6u);
  ASSERT_EQ(s.bob.size(), 9u);
  for (const auto &pvm : s.alice) {
    EXPECT_LE(pvm.size(), 4u);
    Eigen::Index total = 0;
    for (const auto &[a, p] : pvm) {
      EXPECT_GE(rank_of(p), 1);
      total += rank_of(p);
    }
    EXPECT_EQ(total, 4);
  }
  EXPECT_NO_THROW(validate_strategy(s, kTol));
}

TEST(GameSim, AliceAnswersSatisfyConstraints) {
  const auto b = magic_square();
  const auto s = magic_square_strategy();
  for (std::size_t c = 0; c < b.constraints().size(); ++c) {
    for (const auto &[a, p] : s.alice[c]) EXPECT_TRUE(b.constraints()[c].satisfied_by_local(a)) << c << " " << a;
  }
}

TEST(GameSim, BobAgreesWithAlice) {
  // Alice's bit for a scope variable and Bob's answer never disagree
  const auto b = magic_square();
  const auto s = magic_square_strategy();
  for (std::size_t c = 0; c < b.constraints().size(); ++c) {
    const auto scope = b.constraints()[c].scope();
    for (std::size_t j = 0; j < scope.size(); ++j) {
      double disagree = 0;
      for (const auto &[a, pa] : s.alice[c]) {
        for (const auto &[bit, pb] : s.bob[scope[j]]) {
          if (((a >> j) & 1U) != bit) disagree += explicit_correlation(s.state, pa, pb);
        }
      }
      EXPECT_NEAR(disagree, 0.0, kTol);
    }
  }
}

TEST(GameSim, ChshOptimal) {
  const auto g = chsh_game();
  const auto s = chsh_optimal_strategy();
  validate_strategy(s, kTol);
  const double expected = std::pow(std::cos(std::acos(-1.0) / 8), 2);
  EXPECT_NEAR(game_value(g, s), expected, kTol);
  EXPECT_NEAR(explicit_value(g, s), expected, kTol);
}

TEST(GameSim, DeterministicClassicalStrategyWins) {
  const auto src = oracle::cnf(3, {{"v0", "-v1"}, {"v1", "v2"}, {"-v0", "-v2"}});
  const auto sol = oracle::brute_sat(src);
  ASSERT_TRUE(sol);
  const auto s = strategy_from_assignment(src, classical_assignment(src, *sol));
  EXPECT_EQ(s.dim, 1);
  EXPECT_NEAR(game_value(derive_game(src), s), 1.0, kTol);
}

TEST(GameSim, MatchesExplicitTensorProduct) {
  std::mt19937 rng(51);
  const auto g = chsh_game();
  for (int k = 0; k < 50; ++k) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng() % 2);
    Strategy s;
    s.dim = d;
    const Matrix u = oracle::haar_unitary(rng, d * d);
    s.state = u.col(0).reshaped(d, d).transpose();
    s.alice = {random_binary_pvm(rng, d), random_binary_pvm(rng, d)};
    s.bob = {random_binary_pvm(rng, d), random_binary_pvm(rng, d)};
    validate_strategy(s, 1e-9);
    const double v = game_value(g, s);
    EXPECT_NEAR(v, explicit_value(g, s), 1e-9);
    EXPECT_GE(v, -1e-12);
    EXPECT_LE(v, std::pow(std::cos(std::acos(-1.0) / 8), 2) + 1e-9);
  }
}

TEST(GameSim, InvariantUnderLocalUnitaries) {
  std::mt19937 rng(52);
  const auto g = derive_game(magic_square());
  const auto s = magic_square_strategy();
  for (int k = 0; k < 5; ++k) {
    const Matrix u = oracle::haar_unitary(rng, 4);
    const Matrix ub = u.conjugate();
    Strategy t = s;
    t.state = u * s.state * ub.transpose();
    for (auto &pvm : t.alice) {
      for (auto &[a, p] : pvm) p = u * p * u.adjoint();
    }
    for (auto &pvm : t.bob) {
      for (auto &[b, p] : pvm) p = ub * p * ub.adjoint();
    }
    validate_strategy(t, 1e-9);
    EXPECT_NEAR(game_value(g, t), 1.0, 1e-9);
  }
}

TEST(GameSim, ShapeErrors) {
  const auto g = chsh_game();
  auto s = chsh_optimal_strategy();
  auto missing = s;
  missing.bob.pop_back();
  EXPECT_THROW(game_value(g, missing), Error);
  auto bad_answer = s;
  bad_answer.alice[0][1].first = 2;
  EXPECT_THROW(game_value(g, bad_answer), Error);
  auto bad_dim = s;
  bad_dim.bob[0][0].second = dense::identity(3);
  EXPECT_THROW(game_value(g, bad_dim), Error);
  EXPECT_THROW(validate_strategy(bad_dim), Error);
}

TEST(GameSim, ValidationCatchesBadStrategies) {
  auto s = chsh_optimal_strategy();
  auto unnormalized = s;
  unnormalized.state *= 2.0;
  EXPECT_THROW(validate_strategy(unnormalized), Error);
  auto incomplete = s;
  incomplete.alice[0].pop_back();
  EXPECT_THROW(validate_strategy(incomplete), Error);
  auto not_projector = s;
  not_projector.bob[1][0].second *= 0.5;
  EXPECT_THROW(validate_strategy(not_projector), Error);
}

TEST(GameSim, RejectsFailingAssignment) {
  const Bcs b = magic_square();
  std::map<std::string, Matrix> ops;
  for (const auto &n : b.names()) ops.emplace(n, dense::identity(2));
  EXPECT_THROW(strategy_from_assignment(b, OperatorAssignment::dense(2, ops)), Error);
}

TEST(GameSim, CliffordStrategyIsPerfect) {
  const auto [b, a] = clifford_bcs(3);
  const auto s = strategy_from_assignment(b, a);
  validate_strategy(s, 1e-9);
  EXPECT_NEAR(game_value(derive_game(b), s), 1.0, 1e-9);
}
