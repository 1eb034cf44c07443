#pragma once

#include "bcslab/bcs.hpp"
#include "bcslab/dense.hpp"
#include "bcslab/pauli.hpp"

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace bcslab {

struct SymbolicOps {
  std::size_t num_qubits = 0;
  std::map<std::string, PauliWord> ops;
};

struct DenseOps {
  Eigen::Index dim = 1;
  std::map<std::string, Matrix> ops;
};

/// Operators keyed by variable name, either as Hermitian Pauli words on a
/// fixed number of qubits or as dense dim x dim matrices.
class OperatorAssignment {
public:
  OperatorAssignment() : rep_(DenseOps{}) {}

  static OperatorAssignment symbolic(std::size_t num_qubits, std::map<std::string, PauliWord> ops) {
    for (const auto &[name, w] : ops) {
      if (w.num_qubits() != num_qubits) {
        throw Error("operator for '" + name + "' acts on " + std::to_string(w.num_qubits()) + " qubits, expected " +
                    std::to_string(num_qubits));
      }
      if (!w.is_hermitian()) throw Error("operator for '" + name + "' (" + w.str() + ") is not self-adjoint");
    }
    OperatorAssignment a;
    a.rep_ = SymbolicOps{num_qubits, std::move(ops)};
    return a;
  }

  static OperatorAssignment dense(Eigen::Index dim, std::map<std::string, Matrix> ops) {
    if (dim < 1) throw Error("dense assignment needs a positive dimension");
    for (const auto &[name, m] : ops) {
      if (m.rows() != dim || m.cols() != dim) {
        throw Error("operator for '" + name + "' is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                    ", expected " + std::to_string(dim) + "x" + std::to_string(dim));
      }
    }
    OperatorAssignment a;
    a.rep_ = DenseOps{dim, std::move(ops)};
    return a;
  }

  [[nodiscard]] bool is_symbolic() const { return std::holds_alternative<SymbolicOps>(rep_); }
  [[nodiscard]] const SymbolicOps &as_symbolic() const { return std::get<SymbolicOps>(rep_); }
  [[nodiscard]] const DenseOps &as_dense() const { return std::get<DenseOps>(rep_); }

  [[nodiscard]] Eigen::Index dimension() const {
    if (is_symbolic()) return Eigen::Index{1} << as_symbolic().num_qubits;
    return as_dense().dim;
  }

  /// Dense copy; symbolic words are expanded to 2^n x 2^n matrices.
  [[nodiscard]] OperatorAssignment to_dense() const {
    if (!is_symbolic()) return *this;
    std::map<std::string, Matrix> ops;
    for (const auto &[name, w] : as_symbolic().ops) ops.emplace(name, bcslab::to_dense(w));
    return dense(dimension(), std::move(ops));
  }

private:
  std::variant<SymbolicOps, DenseOps> rep_;
};

/// Residuals of the three operator-assignment conditions, in operator norm.
struct VerificationReport {
  std::vector<std::pair<std::uint32_t, double>> condA;           // constraint id
  std::vector<std::pair<VarId, double>> condB;                   // variable id
  std::vector<std::pair<std::pair<VarId, VarId>, double>> condC; // commutation pair
  bool pass = false;
  bool exact = false; // symbolic check: residuals are exact and must be 0
  double tolerance = 0.0;

  [[nodiscard]] double max_residual() const {
    double m = 0.0;
    for (const auto &r : condA) m = std::max(m, r.second);
    for (const auto &r : condB) m = std::max(m, r.second);
    for (const auto &r : condC) m = std::max(m, r.second);
    return m;
  }
};

inline constexpr Eigen::Index kMaxVerifyDim = 512;

namespace detail {

/// Operator norm of (w - target * I) for a Pauli word w and target in {+1,-1}.
inline double pauli_residual(const PauliWord &w, int target) {
  static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const auto lam = ipow[w.letter_phase()];
  const std::complex<double> t(target, 0);
  if (w.is_identity_up_to_phase()) return std::abs(lam - t);
  return std::max(std::abs(lam - t), std::abs(-lam - t));
}

inline Matrix constraint_operator(const Bcs &b, const Constraint &c, const std::vector<const Matrix *> &ops,
                                  Eigen::Index dim) {
  const Matrix id = dense::identity(dim);
  auto vars = c.scope();
  if (b.domain() == Domain::BoolPM) {
    Matrix prod = id;
    for (VarId v : vars) prod = prod * *ops[v];
    return prod - (std::get<Parity>(c.kind).parity ? -1.0 : 1.0) * id;
  }
  if (std::holds_alternative<ExactlyOne>(c.kind)) {
    Matrix sum = -id;
    for (VarId v : vars) sum += *ops[v];
    return sum;
  }
  if (vars.size() > kMaxExpandArity) throw GuardError("constraint arity too large to evaluate");
  // sum over violating tuples of prod_j (a_j X_j + (1-a_j)(I - X_j))
  Matrix out = Matrix::Zero(dim, dim);
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << vars.size()); ++a) {
    if (c.satisfied_by_local(a)) continue;
    Matrix prod = id;
    for (std::size_t j = 0; j < vars.size(); ++j) {
      prod = prod * (((a >> j) & 1U) ? *ops[vars[j]] : Matrix(id - *ops[vars[j]]));
    }
    out += prod;
  }
  return out;
}

} // namespace detail

/// Checks conditions (a) constraint polynomials vanish, (b) each operator is
/// self-adjoint with X^2 = X (or X^2 = 1 over +-1), (c) operators sharing a
/// constraint commute. Symbolic assignments over the +-1 domain are checked
/// exactly in the Pauli group; everything else is densified.
inline VerificationReport verify_assignment(const Bcs &b, const OperatorAssignment &a, double tol = 1e-9) {
  auto lookup_missing = [&](const auto &ops) {
    for (const auto &n : b.names()) {
      if (!ops.count(n)) throw Error("assignment has no operator for variable '" + n + "'");
    }
  };
  VerificationReport rep;
  rep.tolerance = tol;
  const auto pairs = commutation_pairs(b);

  if (a.is_symbolic() && b.domain() == Domain::BoolPM) {
    const auto &sym = a.as_symbolic();
    lookup_missing(sym.ops);
    std::vector<const PauliWord *> ops;
    for (const auto &n : b.names()) ops.push_back(&sym.ops.at(n));
    for (VarId v = 0; v < b.num_vars(); ++v) {
      const PauliWord &w = *ops[v];
      rep.condB.emplace_back(v, w.is_hermitian() ? 0.0 : 2.0);
    }
    for (auto pr : pairs) {
      rep.condC.emplace_back(pr, commutation_sign(*ops[pr.first], *ops[pr.second]) == 1 ? 0.0 : 2.0);
    }
    for (const auto &c : b.constraints()) {
      const auto &p = std::get<Parity>(c.kind);
      PauliWord prod = PauliWord::identity(sym.num_qubits);
      for (VarId v : p.vars) prod = prod * *ops[v];
      rep.condA.emplace_back(c.id, detail::pauli_residual(prod, p.parity ? -1 : 1));
    }
    rep.exact = true;
    rep.pass = rep.max_residual() == 0.0;
    return rep;
  }

  const OperatorAssignment d = a.to_dense();
  const auto &den = d.as_dense();
  if (den.dim > kMaxVerifyDim) throw GuardError("dense verification limited to dimension " + std::to_string(kMaxVerifyDim));
  lookup_missing(den.ops);
  std::vector<const Matrix *> ops;
  for (const auto &n : b.names()) ops.push_back(&den.ops.at(n));
  const Matrix id = dense::identity(den.dim);
  for (VarId v = 0; v < b.num_vars(); ++v) {
    const Matrix &x = *ops[v];
    const double herm = dense::operator_norm(x - x.adjoint());
    const Matrix sq = x * x;
    const double spectral = dense::operator_norm(b.domain() == Domain::BoolPM ? Matrix(sq - id) : Matrix(sq - x));
    rep.condB.emplace_back(v, std::max(herm, spectral));
  }
  for (auto pr : pairs) {
    const Matrix &x = *ops[pr.first];
    const Matrix &y = *ops[pr.second];
    rep.condC.emplace_back(pr, dense::operator_norm(x * y - y * x));
  }
  for (const auto &c : b.constraints()) {
    rep.condA.emplace_back(c.id, dense::operator_norm(detail::constraint_operator(b, c, ops, den.dim)));
  }
  rep.pass = rep.max_residual() <= tol;
  return rep;
}

/// Lifts a classical bit assignment to 1x1 operators: the bit itself over
/// {0,1}, (-1)^bit over +-1.
inline OperatorAssignment classical_assignment(const Bcs &b, const std::vector<std::uint8_t> &bits) {
  std::map<std::string, Matrix> ops;
  for (VarId v = 0; v < b.num_vars(); ++v) {
    Matrix m(1, 1);
    const double val = b.domain() == Domain::BoolPM ? (bits.at(v) ? -1.0 : 1.0) : (bits.at(v) ? 1.0 : 0.0);
    m(0, 0) = val;
    ops.emplace(b.name(v), m);
  }
  return OperatorAssignment::dense(1, std::move(ops));
}

/// Two-qubit Pauli solution of magic_square(): grid positions 1..9 get
///   X.I  I.Z  X.Z
///   I.X  Z.I  Z.X
///   X.X  Z.Z -Y.Y
inline OperatorAssignment mermin_peres_assignment() {
  const char *grid[9] = {"XI", "IZ", "XZ", "IX", "ZI", "ZX", "XX", "ZZ", "-YY"};
  std::map<std::string, PauliWord> ops;
  for (int k = 0; k < 9; ++k) ops.emplace("x" + std::to_string(k + 1), PauliWord::parse(grid[k]));
  return OperatorAssignment::symbolic(2, std::move(ops));
}

inline constexpr std::size_t kMaxCliffordRank = 24;

/// N pairwise anticommuting Hermitian involutions on floor(N/2) qubits
/// (Jordan-Wigner strings). For odd N the last generator is
/// i^{floor(N/2)} e_1 e_2 ... e_{N-1}.
inline std::vector<PauliWord> clifford_generators(std::size_t N) {
  if (N == 0) throw Error("clifford_generators needs N >= 1");
  if (N > kMaxCliffordRank) throw GuardError("clifford_generators limited to N <= " + std::to_string(kMaxCliffordRank));
  const std::size_t m = N / 2;
  std::vector<PauliWord> gens;
  for (std::size_t k = 0; k < m; ++k) {
    std::string xs(m, 'I'), ys(m, 'I');
    for (std::size_t j = 0; j < k; ++j) xs[j] = ys[j] = 'Z';
    xs[k] = 'X';
    ys[k] = 'Y';
    gens.push_back(PauliWord::from_letters(xs));
    gens.push_back(PauliWord::from_letters(ys));
  }
  if (N % 2 == 1) {
    PauliWord prod = PauliWord::identity(m);
    for (const auto &g : gens) prod = prod * g;
    prod = prod.times_phase(static_cast<int>(m % 4));
    if (!prod.is_hermitian()) prod = prod.times_phase(1);
    gens.push_back(prod);
  }
  return gens;
}

/// Extends an anticommuting pair of Hermitian involutions A, B on n qubits to
/// a magic-square solution on 1 + n qubits (new qubit first):
///   X.I  I.A  X.A
///   I.B  Z.I  Z.B
///   X.B  Z.A  Y.C      with C = iAB.
inline std::vector<PauliWord> extend_anticommuting_pair(const PauliWord &A, const PauliWord &B) {
  if (A.num_qubits() != B.num_qubits()) throw Error("extend_anticommuting_pair: size mismatch");
  if (!A.is_hermitian() || !B.is_hermitian()) throw Error("extend_anticommuting_pair: A and B must be self-adjoint");
  if (commutation_sign(A, B) != -1) throw Error("extend_anticommuting_pair: A and B must anticommute");
  const std::size_t n = A.num_qubits();
  const PauliWord I = PauliWord::identity(n);
  const PauliWord C = (A * B).times_phase(1);
  auto q = [](const char *letter) { return PauliWord::from_letters(letter); };
  return {tensor(q("X"), I), tensor(q("I"), A), tensor(q("X"), A), tensor(q("I"), B), tensor(q("Z"), I),
          tensor(q("Z"), B), tensor(q("X"), B), tensor(q("Z"), A), tensor(q("Y"), C)};
}

inline constexpr std::size_t kMaxCliffordBcsRank = 12;

inline std::string clifford_edge_var(std::size_t j, std::size_t k, int slot) {
  return "y" + std::to_string(j) + "_" + std::to_string(k) + "_" + std::to_string(slot);
}

/// Magic squares glued along the complete graph K_N: vertex variables x1..xN
/// and, per edge j<k, seven edge variables filling the grid positions other
/// than 2 (x_j) and 4 (x_k). Returns the system and its Pauli assignment on
/// floor(N/2) + 1 qubits.
inline std::pair<Bcs, OperatorAssignment> clifford_bcs(std::size_t N) {
  if (N < 2 || N > kMaxCliffordBcsRank) {
    throw GuardError("clifford_bcs needs 2 <= N <= " + std::to_string(kMaxCliffordBcsRank));
  }
  Bcs b(Domain::BoolPM);
  for (std::size_t j = 1; j <= N; ++j) b.add_variable("x" + std::to_string(j));
  const auto gens = clifford_generators(N);
  std::map<std::string, PauliWord> ops;
  const PauliWord I1 = PauliWord::identity(1);
  for (std::size_t j = 1; j <= N; ++j) ops.emplace("x" + std::to_string(j), tensor(I1, gens[j - 1]));

  static constexpr int rows[6][3] = {{1, 2, 3}, {1, 4, 7}, {4, 5, 6}, {2, 5, 8}, {7, 8, 9}, {3, 6, 9}};
  for (std::size_t j = 1; j <= N; ++j) {
    for (std::size_t k = j + 1; k <= N; ++k) {
      std::string pos[10];
      pos[2] = "x" + std::to_string(j);
      pos[4] = "x" + std::to_string(k);
      int slot = 1;
      for (int p : {1, 3, 5, 6, 7, 8, 9}) {
        pos[p] = clifford_edge_var(j, k, slot++);
        b.add_variable(pos[p]);
      }
      for (int r = 0; r < 6; ++r) b.add_parity({pos[rows[r][0]], pos[rows[r][1]], pos[rows[r][2]]}, r == 5);
      const auto square = extend_anticommuting_pair(gens[j - 1], gens[k - 1]);
      for (int p : {1, 3, 5, 6, 7, 8, 9}) ops.emplace(pos[p], square[static_cast<std::size_t>(p - 1)]);
    }
  }
  return {std::move(b), OperatorAssignment::symbolic(N / 2 + 1, std::move(ops))};
}

} // namespace bcslab
