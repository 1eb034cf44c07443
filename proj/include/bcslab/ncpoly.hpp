#pragma once

#include "bcslab/rational.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bcslab {

/// A word in the free monoid: a sequence of variable indices. Empty word = 1.
using Word = std::vector<std::uint32_t>;

/// Degree-lexicographic order. Among words of equal length the first
/// differing letter decides, and a lower variable index is the larger letter
/// (the first declared variable is the largest).
inline bool deglex_less(const Word &a, const Word &b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] != b[k]) return a[k] > b[k];
  }
  return false;
}

struct DeglexGreater {
  bool operator()(const Word &a, const Word &b) const { return deglex_less(b, a); }
};

inline Word concat(const Word &a, const Word &b) {
  Word w;
  w.reserve(a.size() + b.size());
  w.insert(w.end(), a.begin(), a.end());
  w.insert(w.end(), b.begin(), b.end());
  return w;
}

inline Word concat(const Word &a, const Word &b, const Word &c) {
  Word w;
  w.reserve(a.size() + b.size() + c.size());
  w.insert(w.end(), a.begin(), a.end());
  w.insert(w.end(), b.begin(), b.end());
  w.insert(w.end(), c.begin(), c.end());
  return w;
}

/// Polynomial in the free algebra over the Gaussian rationals.
/// Terms are kept sorted from the leading (deglex-largest) word down.
class NcPoly {
public:
  using Terms = std::map<Word, GaussianRational, DeglexGreater>;

  NcPoly() = default;

  static NcPoly constant(const GaussianRational &c) { return monomial({}, c); }
  static NcPoly variable(std::uint32_t v) { return monomial({v}, GaussianRational(1)); }
  static NcPoly monomial(Word w, const GaussianRational &c = GaussianRational(1)) {
    NcPoly p;
    p.add_term(w, c);
    return p;
  }

  [[nodiscard]] const Terms &terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] std::size_t degree() const { return terms_.empty() ? 0 : terms_.begin()->first.size(); }

  [[nodiscard]] const Word &leading_word() const {
    if (terms_.empty()) throw std::logic_error("leading word of zero polynomial");
    return terms_.begin()->first;
  }
  [[nodiscard]] const GaussianRational &leading_coeff() const {
    if (terms_.empty()) throw std::logic_error("leading coefficient of zero polynomial");
    return terms_.begin()->second;
  }

  [[nodiscard]] GaussianRational coefficient(const Word &w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? GaussianRational() : it->second;
  }

  void add_term(const Word &w, const GaussianRational &c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  NcPoly &operator+=(const NcPoly &o) {
    for (const auto &[w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  NcPoly &operator-=(const NcPoly &o) {
    for (const auto &[w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  NcPoly &operator*=(const GaussianRational &s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto &[w, c] : terms_) c *= s;
    return *this;
  }

  friend NcPoly operator+(NcPoly a, const NcPoly &b) { return a += b; }
  friend NcPoly operator-(NcPoly a, const NcPoly &b) { return a -= b; }
  friend NcPoly operator-(NcPoly a) { return a *= GaussianRational(-1); }
  friend NcPoly operator*(NcPoly a, const GaussianRational &s) { return a *= s; }
  friend NcPoly operator*(const GaussianRational &s, NcPoly a) { return a *= s; }
  friend NcPoly operator*(const NcPoly &a, const NcPoly &b) {
    NcPoly out;
    for (const auto &[wa, ca] : a.terms_) {
      for (const auto &[wb, cb] : b.terms_) out.add_term(concat(wa, wb), ca * cb);
    }
    return out;
  }
  friend bool operator==(const NcPoly &a, const NcPoly &b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const NcPoly &a, const NcPoly &b) { return !(a == b); }

  /// left * this * right
  [[nodiscard]] NcPoly sandwich(const Word &left, const Word &right) const {
    NcPoly out;
    for (const auto &[w, c] : terms_) out.terms_.emplace(concat(left, w, right), c);
    return out;
  }

  /// Reverses every word and conjugates every coefficient.
  [[nodiscard]] NcPoly involution() const {
    NcPoly out;
    for (const auto &[w, c] : terms_) out.add_term(Word(w.rbegin(), w.rend()), c.conj());
    return out;
  }

  [[nodiscard]] bool is_self_adjoint() const { return involution() == *this; }

  /// Canonical text form: `(a+bi) w1.w2.w3 + ...`, leading term first;
  /// the empty word prints as `1` and the zero polynomial as `0`.
  [[nodiscard]] std::string to_text(const std::vector<std::string> &names) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto &[w, c] : terms_) {
      if (!first) out += " + ";
      first = false;
      out += c.str();
      out += ' ';
      out += word_text(w, names);
    }
    return out;
  }

  static std::string word_text(const Word &w, const std::vector<std::string> &names) {
    if (w.empty()) return "1";
    std::string out;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (k) out += '.';
      out += w[k] < names.size() ? names[w[k]] : ("v" + std::to_string(w[k]));
    }
    return out;
  }

  /// Parses the canonical text form back. Variable names must not contain
  /// '.', '(' or whitespace.
  static NcPoly parse_text(std::string_view text, const std::vector<std::string> &names) {
    std::unordered_map<std::string, std::uint32_t> index;
    for (std::uint32_t k = 0; k < names.size(); ++k) index.emplace(names[k], k);
    NcPoly out;
    std::size_t pos = 0;
    auto skip_ws = [&] {
      while (pos < text.size() && text[pos] == ' ') ++pos;
    };
    skip_ws();
    if (text.substr(pos) == "0") return out;
    while (pos < text.size()) {
      skip_ws();
      if (pos >= text.size() || text[pos] != '(') throw std::invalid_argument("expected '(' in polynomial text");
      auto close = text.find(')', pos);
      if (close == std::string_view::npos) throw std::invalid_argument("unterminated coefficient");
      GaussianRational c = GaussianRational::parse(std::string(text.substr(pos, close - pos + 1)));
      pos = close + 1;
      skip_ws();
      auto end = text.find(' ', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view wtext = text.substr(pos, end - pos);
      pos = end;
      Word w;
      if (wtext != "1") {
        std::size_t start = 0;
        while (start <= wtext.size()) {
          auto dot = wtext.find('.', start);
          if (dot == std::string_view::npos) dot = wtext.size();
          std::string name(wtext.substr(start, dot - start));
          auto it = index.find(name);
          if (it == index.end()) throw std::invalid_argument("unknown variable '" + name + "' in polynomial text");
          w.push_back(it->second);
          start = dot + 1;
        }
      }
      out.add_term(w, c);
      skip_ws();
      if (pos < text.size()) {
        if (text[pos] != '+') throw std::invalid_argument("expected '+' between terms");
        ++pos;
      }
    }
    return out;
  }

private:
  Terms terms_;
};

inline NcPoly commutator(const NcPoly &a, const NcPoly &b) { return a * b - b * a; }
inline NcPoly anticommutator(const NcPoly &a, const NcPoly &b) { return a * b + b * a; }

} // namespace bcslab
