#pragma once

#include <gmpxx.h>

#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace bcslab {

using Rational = mpq_class;

inline Rational parse_rational(const std::string &text) {
  Rational q;
  const std::string body = (!text.empty() && text.front() == '+') ? text.substr(1) : text;
  if (body.empty() || q.set_str(body, 10) != 0) {
    throw std::invalid_argument("not a rational number: '" + text + "'");
  }
  if (sgn(q.get_den()) == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational &q) { return q.get_str(); }

/// Exact complex number a + bi with rational parts.
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(long v) : re(v), im(0) {} // NOLINT: implicit scalar lift
  GaussianRational(int v) : re(v), im(0) {}  // NOLINT
  GaussianRational(Rational r) : re(std::move(r)), im(0) { re.canonicalize(); } // NOLINT
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }

  static GaussianRational imag_unit() { return {Rational(0), Rational(1)}; }

  [[nodiscard]] bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  [[nodiscard]] bool is_real() const { return sgn(im) == 0; }
  [[nodiscard]] GaussianRational conj() const { return {re, -im}; }

  GaussianRational &operator+=(const GaussianRational &o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational &operator-=(const GaussianRational &o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussianRational &operator*=(const GaussianRational &o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  GaussianRational &operator/=(const GaussianRational &o) {
    Rational den = o.re * o.re + o.im * o.im;
    if (sgn(den) == 0) {
      throw std::domain_error("division by zero Gaussian rational");
    }
    Rational r = (re * o.re + im * o.im) / den;
    Rational i = (im * o.re - re * o.im) / den;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational &b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational &b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational &b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational &b) { return a /= b; }
  friend GaussianRational operator-(const GaussianRational &a) { return {-a.re, -a.im}; }
  friend bool operator==(const GaussianRational &a, const GaussianRational &b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational &a, const GaussianRational &b) { return !(a == b); }

  /// Canonical text `(a+bi)`, e.g. `(1+0i)`, `(-1/2-3i)`.
  [[nodiscard]] std::string str() const {
    std::string out = "(" + re.get_str();
    if (sgn(im) < 0) {
      out += "-" + Rational(-im).get_str();
    } else {
      out += "+" + im.get_str();
    }
    return out + "i)";
  }

  /// Inverse of str(); also accepts a bare rational.
  static GaussianRational parse(std::string text) {
    std::string t;
    for (char c : text) {
      if (c != ' ') t.push_back(c);
    }
    if (!t.empty() && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
    if (t.empty()) throw std::invalid_argument("empty coefficient");
    if (t.back() != 'i') return {parse_rational(t), Rational(0)};
    t.pop_back();
    // split at the last sign that is not the leading one
    std::size_t cut = std::string::npos;
    for (std::size_t k = t.size(); k-- > 1;) {
      if (t[k] == '+' || t[k] == '-') {
        cut = k;
        break;
      }
    }
    if (cut == std::string::npos) {
      if (t.empty() || t == "+") return {Rational(0), Rational(1)};
      if (t == "-") return {Rational(0), Rational(-1)};
      return {Rational(0), parse_rational(t)};
    }
    std::string re_part = t.substr(0, cut);
    std::string im_part = t.substr(t[cut] == '+' ? cut + 1 : cut);
    if (im_part.empty()) im_part = "1";
    if (im_part == "-") im_part = "-1";
    return {parse_rational(re_part), parse_rational(im_part)};
  }
};

inline std::ostream &operator<<(std::ostream &os, const GaussianRational &c) { return os << c.str(); }

} // namespace bcslab
