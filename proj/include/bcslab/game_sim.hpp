#pragma once

#include "bcslab/assignments.hpp"
#include "bcslab/bcs.hpp"
#include "bcslab/dense.hpp"
#include "bcslab/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace bcslab {

/// Projective measurement: (answer index, projector) pairs.
using Pvm = std::vector<std::pair<std::size_t, Matrix>>;

/// Shared state sum_ij M_ij |i>|j> with M = `state`, plus one PVM per
/// question for each player (indexed like the game's question lists).
struct Strategy {
  Eigen::Index dim = 1;
  Matrix state;
  std::vector<Pvm> alice;
  std::vector<Pvm> bob;
};

inline Matrix maximally_entangled(Eigen::Index d) {
  return dense::identity(d) / std::sqrt(static_cast<double>(d));
}

/// Checks shapes, Hermiticity, orthogonality and completeness of every PVM
/// and normalization of the state. Throws Error describing the first failure.
inline void validate_strategy(const Strategy &s, double tol = 1e-10) {
  const Eigen::Index d = s.dim;
  if (s.state.rows() != d || s.state.cols() != d) throw Error("strategy state must be a d x d amplitude table");
  if (std::abs(s.state.squaredNorm() - 1.0) > tol) throw Error("strategy state is not normalized");
  auto check = [&](const std::vector<Pvm> &side, const char *who) {
    for (std::size_t q = 0; q < side.size(); ++q) {
      Matrix sum = Matrix::Zero(d, d);
      for (std::size_t i = 0; i < side[q].size(); ++i) {
        const Matrix &p = side[q][i].second;
        const std::string where = std::string(who) + " question " + std::to_string(q);
        if (p.rows() != d || p.cols() != d) throw Error(where + ": projector has the wrong dimension");
        if (dense::operator_norm(p - p.adjoint()) > tol) throw Error(where + ": projector is not Hermitian");
        if (dense::operator_norm(p * p - p) > tol) throw Error(where + ": operator is not a projector");
        for (std::size_t j = i + 1; j < side[q].size(); ++j) {
          if (side[q][j].first == side[q][i].first) throw Error(where + ": repeated answer");
          if (dense::operator_norm(p * side[q][j].second) > tol) throw Error(where + ": projectors not orthogonal");
        }
        sum += p;
      }
      if (dense::operator_norm(sum - dense::identity(d)) > tol) {
        throw Error(std::string(who) + " question " + std::to_string(q) + ": projectors do not sum to the identity");
      }
    }
  };
  check(s.alice, "Alice");
  check(s.bob, "Bob");
}

/// <psi| A (x) B |psi> = tr(M^dag A M B^T).
inline double correlation(const Matrix &state, const Matrix &a, const Matrix &b) {
  return (state.adjoint() * a * state * b.transpose()).trace().real();
}

/// Sum over supported (s, t) of p(s,t) V(a,b|s,t) <psi|A_s^a (x) B_t^b|psi>.
inline double game_value(const GameSpec &g, const Strategy &s) {
  if (s.alice.size() != g.questionsA.size() || s.bob.size() != g.questionsB.size()) {
    throw Error("strategy question count does not match the game");
  }
  for (std::size_t q = 0; q < s.alice.size(); ++q) {
    for (const auto &[a, p] : s.alice[q]) {
      if (a >= g.answersA[q].size()) throw Error("strategy answer out of range for Alice question " + g.questionsA[q]);
      if (p.rows() != s.dim) throw Error("strategy projector dimension mismatch");
    }
  }
  for (std::size_t q = 0; q < s.bob.size(); ++q) {
    for (const auto &[b, p] : s.bob[q]) {
      if (b >= g.answersB[q].size()) throw Error("strategy answer out of range for Bob question " + g.questionsB[q]);
      if (p.rows() != s.dim) throw Error("strategy projector dimension mismatch");
    }
  }
  double value = 0.0;
  for (const auto &qp : g.pairs) {
    double v = 0.0;
    for (const auto &[a, pa] : s.alice[qp.s]) {
      for (const auto &[b, pb] : s.bob[qp.t]) {
        if (qp.win[a][b]) v += correlation(s.state, pa, pb);
      }
    }
    value += qp.prob.get_d() * v;
  }
  return value;
}

namespace detail {

/// Joint eigenprojectors of commuting Hermitian operators by successive
/// splitting: each part is kept as an orthonormal basis of its range, and the
/// next operator is diagonalized after compression to that range. Each part
/// carries the bit pattern (bit j from operator j).
inline std::vector<std::pair<std::uint64_t, Matrix>> joint_projectors(const std::vector<Matrix> &ops, Domain domain,
                                                                      Eigen::Index dim, double tol) {
  std::vector<std::pair<std::uint64_t, Matrix>> parts{{0, dense::identity(dim)}};
  for (std::size_t j = 0; j < ops.size(); ++j) {
    std::vector<std::pair<std::uint64_t, Matrix>> next;
    for (const auto &[mask, basis] : parts) {
      const Matrix h = basis.adjoint() * ops[j] * basis;
      Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) / 2.0);
      const auto &vals = es.eigenvalues();
      Eigen::Index k = 0;
      while (k < vals.size()) {
        Eigen::Index end = k + 1;
        while (end < vals.size() && vals(end) - vals(k) <= 1e-8) ++end;
        const double ev = vals.segment(k, end - k).mean();
        bool bit;
        if (domain == Domain::Bool01) {
          if (std::abs(ev) < tol) bit = false;
          else if (std::abs(ev - 1.0) < tol) bit = true;
          else throw Error("operator eigenvalue " + std::to_string(ev) + " is not 0 or 1");
        } else {
          if (std::abs(ev - 1.0) < tol) bit = false;
          else if (std::abs(ev + 1.0) < tol) bit = true;
          else throw Error("operator eigenvalue " + std::to_string(ev) + " is not +1 or -1");
        }
        next.emplace_back(mask | (bit ? (std::uint64_t{1} << j) : 0), basis * es.eigenvectors().middleCols(k, end - k));
        k = end;
      }
    }
    parts = std::move(next);
  }
  for (auto &[mask, basis] : parts) basis = basis * basis.adjoint();
  return parts;
}

} // namespace detail

/// Alice measures the joint eigenspaces of a constraint's scope operators
/// (answer = scope bit pattern), Bob measures the entrywise conjugate of a
/// variable's operator, and they share the maximally entangled state.
inline Strategy strategy_from_assignment(const Bcs &b, const OperatorAssignment &assignment, double tol = 1e-9) {
  const auto report = verify_assignment(b, assignment, tol);
  if (!report.pass) throw Error("assignment does not pass verification");
  const OperatorAssignment dn = assignment.to_dense();
  const auto &ops = dn.as_dense();
  const Eigen::Index d = ops.dim;
  auto op = [&](VarId v) -> const Matrix & {
    auto it = ops.ops.find(b.name(v));
    if (it == ops.ops.end()) throw Error("assignment has no operator for '" + b.name(v) + "'");
    return it->second;
  };
  Strategy s;
  s.dim = d;
  s.state = maximally_entangled(d);
  for (const auto &c : b.constraints()) {
    auto scope = c.scope();
    std::vector<Matrix> mats;
    for (std::size_t i = 0; i < scope.size(); ++i) {
      mats.push_back(op(scope[i]));
      for (std::size_t j = 0; j < i; ++j) {
        if (dense::operator_norm(mats[i] * mats[j] - mats[j] * mats[i]) > 1e-6) {
          throw Error("scope operators of constraint " + std::to_string(c.id) + " do not commute: '" +
                      b.name(scope[j]) + "' and '" + b.name(scope[i]) + "'");
        }
      }
    }
    Pvm pvm;
    for (auto &[mask, p] : detail::joint_projectors(mats, b.domain(), d, 1e-6)) pvm.emplace_back(mask, std::move(p));
    std::sort(pvm.begin(), pvm.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
    s.alice.push_back(std::move(pvm));
  }
  for (VarId v = 0; v < b.num_vars(); ++v) {
    Pvm pvm;
    for (auto &[mask, p] : detail::joint_projectors({op(v).conjugate()}, b.domain(), d, 1e-6)) pvm.emplace_back(mask, std::move(p));
    std::sort(pvm.begin(), pvm.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
    s.bob.push_back(std::move(pvm));
  }
  return s;
}

/// Outcome projectors of a +-1 observable: answer 0 for +1, 1 for -1.
inline Pvm observable_pvm(const Matrix &o) {
  const Eigen::Index d = o.rows();
  return {{0, (dense::identity(d) + o) / 2.0}, {1, (dense::identity(d) - o) / 2.0}};
}

/// A0 = Z, A1 = X, B0 = (Z+X)/sqrt2, B1 = (Z-X)/sqrt2 on the EPR pair.
inline Strategy chsh_optimal_strategy() {
  Matrix Z = to_dense(PauliWord::parse("Z"));
  Matrix X = to_dense(PauliWord::parse("X"));
  const double r = 1.0 / std::sqrt(2.0);
  Strategy s;
  s.dim = 2;
  s.state = maximally_entangled(2);
  s.alice = {observable_pvm(Z), observable_pvm(X)};
  s.bob = {observable_pvm(r * (Z + X)), observable_pvm(r * (Z - X))};
  return s;
}

} // namespace bcslab
