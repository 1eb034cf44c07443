#pragma once

#include "bcslab/ncpoly.hpp"
#include "bcslab/pauli.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <complex>
#include <vector>

namespace bcslab::dense {

using Complex = std::complex<double>;

inline Matrix identity(Eigen::Index d) { return Matrix::Identity(d, d); }

/// Largest singular value.
inline double operator_norm(const Matrix &m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

inline Matrix kron(const Matrix &a, const Matrix &b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

inline Complex to_complex(const GaussianRational &c) { return {c.re.get_d(), c.im.get_d()}; }

/// Evaluates a free-algebra polynomial at matrices (variable v -> ops[v]).
inline Matrix evaluate(const NcPoly &p, const std::vector<Matrix> &ops, Eigen::Index dim) {
  Matrix out = Matrix::Zero(dim, dim);
  for (const auto &[w, c] : p.terms()) {
    Matrix term = identity(dim);
    for (auto v : w) term = term * ops.at(v);
    out += to_complex(c) * term;
  }
  return out;
}

/// Eigen-decomposition of a Hermitian matrix, grouping eigenvalues that agree
/// within `tol` into one spectral projector. Projectors come back in
/// increasing eigenvalue order.
struct SpectralProjector {
  double eigenvalue;
  Matrix projector;
};

inline std::vector<SpectralProjector> spectral_projectors(const Matrix &h, double tol = 1e-8) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const auto &vals = es.eigenvalues();
  const auto &vecs = es.eigenvectors();
  std::vector<SpectralProjector> out;
  Eigen::Index k = 0;
  while (k < vals.size()) {
    Eigen::Index end = k + 1;
    while (end < vals.size() && vals(end) - vals(k) <= tol) ++end;
    Matrix basis = vecs.middleCols(k, end - k);
    out.push_back({vals.segment(k, end - k).mean(), basis * basis.adjoint()});
    k = end;
  }
  return out;
}

} // namespace bcslab::dense
