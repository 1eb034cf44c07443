#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into the solver or reduction code under test.

#include "bcslab.hpp"

#include <algorithm>
#include <bit>
#include <complex>
#include <functional>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using bcslab::Bcs;
using bcslab::Matrix;

/// Evaluates one constraint straight from its definition.
inline bool holds(const bcslab::Constraint &c, const std::vector<std::uint8_t> &x) {
  if (const auto *p = std::get_if<bcslab::Parity>(&c.kind)) {
    int s = 0;
    for (auto v : p->vars) s ^= x[v];
    return s == (p->parity ? 1 : 0);
  }
  if (const auto *cl = std::get_if<bcslab::Clause>(&c.kind)) {
    for (const auto &l : cl->literals) {
      if ((x[l.var] != 0) != l.negated) return true;
    }
    return false;
  }
  if (const auto *e = std::get_if<bcslab::ExactlyOne>(&c.kind)) {
    int s = 0;
    for (auto v : e->vars) s += x[v];
    return s == 1;
  }
  const auto &t = std::get<bcslab::Table>(c.kind);
  for (auto tuple : t.satisfying) {
    bool match = true;
    for (std::size_t j = 0; j < t.vars.size(); ++j) {
      if (((tuple >> j) & 1U) != x[t.vars[j]]) match = false;
    }
    if (match) return true;
  }
  return false;
}

inline bool satisfies(const Bcs &b, const std::vector<std::uint8_t> &x) {
  for (const auto &c : b.constraints()) {
    if (!holds(c, x)) return false;
  }
  return true;
}

/// Exhaustive search, variable 0 as the most significant bit.
inline std::optional<std::vector<std::uint8_t>> brute_sat(const Bcs &b) {
  const std::size_t n = b.num_vars();
  if (n > 26) throw std::runtime_error("oracle brute_sat: too many variables");
  std::vector<std::uint8_t> x(n);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    for (std::size_t v = 0; v < n; ++v) x[v] = (m >> (n - 1 - v)) & 1U;
    if (satisfies(b, x)) return x;
  }
  return std::nullopt;
}

inline std::size_t count_solutions(const Bcs &b) {
  const std::size_t n = b.num_vars();
  std::size_t count = 0;
  std::vector<std::uint8_t> x(n);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    for (std::size_t v = 0; v < n; ++v) x[v] = (m >> v) & 1U;
    if (satisfies(b, x)) ++count;
  }
  return count;
}

/// Plain recursive backtracking in declaration order, for targets too big to
/// enumerate. Checks every constraint whose scope is fully assigned.
inline bool backtrack_sat(const Bcs &b) {
  const std::size_t n = b.num_vars();
  std::vector<std::vector<std::size_t>> closing(n + 1);
  for (std::size_t i = 0; i < b.constraints().size(); ++i) {
    std::size_t last = 0;
    for (auto v : b.constraints()[i].scope()) last = std::max<std::size_t>(last, v + 1);
    closing[last].push_back(i);
  }
  // exactly-one constraints are also pruned as soon as two members are set
  std::vector<std::vector<std::size_t>> one_of(n);
  for (std::size_t i = 0; i < b.constraints().size(); ++i) {
    if (const auto *e = std::get_if<bcslab::ExactlyOne>(&b.constraints()[i].kind)) {
      for (auto v : e->vars) one_of[v].push_back(i);
    }
  }
  std::vector<std::uint8_t> x(n, 0);
  std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
    for (auto i : closing[k]) {
      if (!holds(b.constraints()[i], x)) return false;
    }
    if (k > 0 && x[k - 1]) {
      for (auto i : one_of[k - 1]) {
        int ones = 0;
        for (auto v : std::get<bcslab::ExactlyOne>(b.constraints()[i].kind).vars) {
          if (v < k) ones += x[v];
        }
        if (ones > 1) return false;
      }
    }
    if (k == n) return true;
    for (std::uint8_t bit : {0, 1}) {
      x[k] = bit;
      if (go(k + 1)) return true;
    }
    x[k] = 0;
    return false;
  };
  return go(0);
}

/// Backtracking k-coloring in vertex order.
inline bool colorable(const bcslab::Graph &g, std::size_t k) {
  const std::size_t n = g.num_vertices();
  std::vector<int> col(n, -1);
  std::function<bool(std::size_t)> go = [&](std::size_t v) -> bool {
    if (v == n) return true;
    for (std::size_t c = 0; c < k; ++c) {
      bool ok = true;
      for (auto w : g.neighbors(v)) {
        if (col[w] == static_cast<int>(c)) ok = false;
      }
      if (!ok) continue;
      col[v] = static_cast<int>(c);
      if (go(v + 1)) return true;
    }
    col[v] = -1;
    return false;
  };
  return go(0);
}

/// Dense Pauli word from letters with an overall complex factor.
inline Matrix pauli_matrix(const std::string &letters, std::complex<double> factor = 1.0) {
  using C = std::complex<double>;
  Matrix I(2, 2), X(2, 2), Y(2, 2), Z(2, 2);
  I << 1, 0, 0, 1;
  X << 0, 1, 1, 0;
  Y << 0, C(0, -1), C(0, 1), 0;
  Z << 1, 0, 0, -1;
  Matrix m = Matrix::Identity(1, 1);
  for (char l : letters) {
    const Matrix &f = l == 'X' ? X : l == 'Y' ? Y : l == 'Z' ? Z : I;
    Matrix next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = m(i, j) * f;
    }
    m = next;
  }
  return factor * m;
}

inline std::string random_letters(std::mt19937 &rng, std::size_t n) {
  static const char L[4] = {'I', 'X', 'Y', 'Z'};
  std::string s;
  for (std::size_t k = 0; k < n; ++k) s.push_back(L[rng() % 4]);
  return s;
}

/// Haar-random unitary by QR of a complex Gaussian matrix.
inline Matrix haar_unitary(std::mt19937 &rng, Eigen::Index d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = {g(rng), g(rng)};
  }
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < d; ++k) {
    const auto ph = r(k, k) / std::abs(r(k, k));
    q.col(k) *= ph;
  }
  return q;
}

/// Random clause instance over variables v0..v(n-1).
inline Bcs random_cnf(std::mt19937 &rng, std::size_t n, std::size_t m, std::size_t min_arity, std::size_t max_arity) {
  Bcs b;
  for (std::size_t v = 0; v < n; ++v) b.add_variable("v" + std::to_string(v));
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t k = min_arity + rng() % (max_arity - min_arity + 1);
    std::vector<std::string> lits;
    std::vector<std::size_t> pool(n);
    for (std::size_t v = 0; v < n; ++v) pool[v] = v;
    std::shuffle(pool.begin(), pool.end(), rng);
    for (std::size_t q = 0; q < std::min(k, n); ++q) lits.push_back((rng() % 2 ? "-" : "") + std::string("v") + std::to_string(pool[q]));
    b.add_clause(lits);
  }
  return b;
}

/// Every clause over n variables with arity in [1, max_arity], distinct
/// variables, in a fixed order.
inline std::vector<std::vector<std::string>> all_clauses(std::size_t n, std::size_t max_arity) {
  std::vector<std::vector<std::string>> out;
  for (std::uint32_t subset = 1; subset < (1U << n); ++subset) {
    const auto k = static_cast<std::size_t>(std::popcount(subset));
    if (k > max_arity) continue;
    std::vector<std::size_t> vars;
    for (std::size_t v = 0; v < n; ++v) {
      if ((subset >> v) & 1U) vars.push_back(v);
    }
    for (std::uint32_t signs = 0; signs < (1U << k); ++signs) {
      std::vector<std::string> lits;
      for (std::size_t j = 0; j < k; ++j) lits.push_back(((signs >> j) & 1U ? "-" : "") + std::string("v") + std::to_string(vars[j]));
      out.push_back(lits);
    }
  }
  return out;
}

inline Bcs cnf(std::size_t n, const std::vector<std::vector<std::string>> &clauses) {
  Bcs b;
  for (std::size_t v = 0; v < n; ++v) b.add_variable("v" + std::to_string(v));
  for (const auto &c : clauses) b.add_clause(c);
  return b;
}

} // namespace oracle
