#pragma once

#include "bcslab/error.hpp"

#include <Eigen/Dense>

#include <bit>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bcslab {

using Matrix = Eigen::MatrixXcd;

/// n-qubit Pauli operator i^phase * prod_k X_k^{x_k} Z_k^{z_k}.
///
/// The stored phase is relative to the X^x Z^z product, so a Y letter
/// contributes an implicit factor: XZ = -iY. letter_phase() gives the exponent
/// relative to the letter form used by str()/parse().
class PauliWord {
public:
  PauliWord() = default;
  explicit PauliWord(std::size_t n) : n_(n), x_(blocks(n), 0), z_(blocks(n), 0) {}

  static PauliWord identity(std::size_t n) { return PauliWord(n); }

  /// Builds from letters over {I,X,Y,Z} times i^letter_phase.
  static PauliWord from_letters(std::string_view letters, int letter_phase = 0) {
    PauliWord p(letters.size());
    int ys = 0;
    for (std::size_t k = 0; k < letters.size(); ++k) {
      switch (letters[k]) {
      case 'I': break;
      case 'X': p.set_bits(k, true, false); break;
      case 'Z': p.set_bits(k, false, true); break;
      case 'Y':
        p.set_bits(k, true, true);
        ++ys;
        break;
      default: throw Error(std::string("invalid Pauli letter '") + letters[k] + "'");
      }
    }
    p.phase_ = mod4(letter_phase + ys);
    return p;
  }

  /// Parses `[-][i][*]LETTERS`, e.g. `-i * XZ.IY`, `-XX`, `i*Z`. Dots and
  /// spaces inside the letter block are ignored.
  static PauliWord parse(std::string_view text) {
    std::string t;
    for (char c : text) {
      if (c != ' ' && c != '\t') t.push_back(c);
    }
    std::size_t pos = 0;
    int ph = 0;
    if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) {
      if (t[pos] == '-') ph += 2;
      ++pos;
    }
    if (pos < t.size() && t[pos] == 'i') {
      ph += 1;
      ++pos;
    }
    if (pos < t.size() && t[pos] == '*') ++pos;
    std::string letters;
    for (; pos < t.size(); ++pos) {
      if (t[pos] == '.') continue;
      letters.push_back(t[pos]);
    }
    if (letters == "1") letters.clear();
    return from_letters(letters, ph);
  }

  [[nodiscard]] std::size_t num_qubits() const { return n_; }
  [[nodiscard]] int phase() const { return phase_; }
  [[nodiscard]] bool x(std::size_t k) const { return (x_[k / 64] >> (k % 64)) & 1U; }
  [[nodiscard]] bool z(std::size_t k) const { return (z_[k / 64] >> (k % 64)) & 1U; }
  [[nodiscard]] const std::vector<std::uint64_t> &xbits() const { return x_; }
  [[nodiscard]] const std::vector<std::uint64_t> &zbits() const { return z_; }

  [[nodiscard]] std::size_t num_y() const {
    std::size_t c = 0;
    for (std::size_t b = 0; b < x_.size(); ++b) c += std::popcount(x_[b] & z_[b]);
    return c;
  }

  [[nodiscard]] int letter_phase() const { return mod4(phase_ - static_cast<int>(num_y() % 4)); }

  [[nodiscard]] char letter(std::size_t k) const {
    static constexpr char table[4] = {'I', 'X', 'Z', 'Y'};
    return table[(x(k) ? 1 : 0) | (z(k) ? 2 : 0)];
  }

  [[nodiscard]] bool is_identity_up_to_phase() const {
    for (std::size_t b = 0; b < x_.size(); ++b) {
      if (x_[b] || z_[b]) return false;
    }
    return true;
  }
  [[nodiscard]] bool is_identity() const { return phase_ == 0 && is_identity_up_to_phase(); }

  /// Self-adjoint iff the letter phase is real.
  [[nodiscard]] bool is_hermitian() const { return (phase_ + num_y()) % 2 == 0; }

  [[nodiscard]] PauliWord times_phase(int k) const {
    PauliWord p = *this;
    p.phase_ = mod4(p.phase_ + k);
    return p;
  }
  [[nodiscard]] PauliWord negated() const { return times_phase(2); }

  /// Hermitian conjugate.
  [[nodiscard]] PauliWord adjoint() const {
    // (i^p X^x Z^z)^dag = i^-p Z^z X^x = i^-p (-1)^{x.z} X^x Z^z
    PauliWord q = *this;
    q.phase_ = mod4(-phase_ + 2 * static_cast<int>(num_y() % 2));
    return q;
  }

  /// `-i*XZIY` style text; phase prefix omitted when it is +1.
  [[nodiscard]] std::string str() const {
    static constexpr const char *prefix[4] = {"", "i*", "-", "-i*"};
    std::string out = prefix[letter_phase()];
    for (std::size_t k = 0; k < n_; ++k) out.push_back(letter(k));
    if (n_ == 0) out += "1";
    return out;
  }

  friend bool operator==(const PauliWord &a, const PauliWord &b) {
    return a.n_ == b.n_ && a.phase_ == b.phase_ && a.x_ == b.x_ && a.z_ == b.z_;
  }
  friend bool operator!=(const PauliWord &a, const PauliWord &b) { return !(a == b); }

  void set_bits(std::size_t k, bool xb, bool zb) {
    const std::uint64_t m = std::uint64_t{1} << (k % 64);
    x_[k / 64] = xb ? (x_[k / 64] | m) : (x_[k / 64] & ~m);
    z_[k / 64] = zb ? (z_[k / 64] | m) : (z_[k / 64] & ~m);
  }

  static int mod4(int v) { return ((v % 4) + 4) % 4; }

private:
  static std::size_t blocks(std::size_t n) { return (n + 63) / 64; }

  std::size_t n_ = 0;
  int phase_ = 0;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;

  friend PauliWord mul(const PauliWord &p, const PauliWord &q);
  friend PauliWord tensor(const PauliWord &p, const PauliWord &q);
};

/// Group product p*q.
inline PauliWord mul(const PauliWord &p, const PauliWord &q) {
  if (p.n_ != q.n_) {
    throw Error("Pauli size mismatch: " + std::to_string(p.n_) + " vs " + std::to_string(q.n_) + " qubits");
  }
  PauliWord r(p.n_);
  // Z^{z_p} X^{x_q} = (-1)^{z_p . x_q} X^{x_q} Z^{z_p}
  std::size_t swaps = 0;
  for (std::size_t b = 0; b < p.x_.size(); ++b) {
    swaps += std::popcount(p.z_[b] & q.x_[b]);
    r.x_[b] = p.x_[b] ^ q.x_[b];
    r.z_[b] = p.z_[b] ^ q.z_[b];
  }
  r.phase_ = PauliWord::mod4(p.phase_ + q.phase_ + 2 * static_cast<int>(swaps % 2));
  return r;
}

inline PauliWord operator*(const PauliWord &p, const PauliWord &q) { return mul(p, q); }

/// +1 if p and q commute, -1 if they anticommute.
inline int commutation_sign(const PauliWord &p, const PauliWord &q) {
  if (p.num_qubits() != q.num_qubits()) throw Error("Pauli size mismatch in commutation_sign");
  std::size_t s = 0;
  const auto &px = p.xbits(), &pz = p.zbits(), &qx = q.xbits(), &qz = q.zbits();
  for (std::size_t b = 0; b < px.size(); ++b) s += std::popcount((px[b] & qz[b]) ^ (qx[b] & pz[b]));
  return (s % 2) ? -1 : 1;
}

/// p on the first qubits, q on the following ones.
inline PauliWord tensor(const PauliWord &p, const PauliWord &q) {
  PauliWord r(p.n_ + q.n_);
  for (std::size_t k = 0; k < p.n_; ++k) r.set_bits(k, p.x(k), p.z(k));
  for (std::size_t k = 0; k < q.n_; ++k) r.set_bits(p.n_ + k, q.x(k), q.z(k));
  r.phase_ = PauliWord::mod4(p.phase_ + q.phase_);
  return r;
}

inline constexpr std::size_t kMaxDenseQubits = 12;

/// Dense 2^n x 2^n matrix; qubit 0 is the most significant index bit, so
/// to_dense(tensor(p, q)) = kron(to_dense(p), to_dense(q)).
inline Matrix to_dense(const PauliWord &p) {
  const std::size_t n = p.num_qubits();
  if (n > kMaxDenseQubits) throw GuardError("to_dense limited to " + std::to_string(kMaxDenseQubits) + " qubits");
  const std::size_t dim = std::size_t{1} << n;
  std::size_t xmask = 0, zmask = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (p.x(k)) xmask |= std::size_t{1} << (n - 1 - k);
    if (p.z(k)) zmask |= std::size_t{1} << (n - 1 - k);
  }
  static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t c = 0; c < dim; ++c) {
    int sign = (std::popcount(zmask & c) % 2) ? 2 : 0;
    m(static_cast<Eigen::Index>(c ^ xmask), static_cast<Eigen::Index>(c)) = ipow[(p.phase() + sign) % 4];
  }
  return m;
}

} // namespace bcslab
