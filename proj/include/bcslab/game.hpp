#pragma once

#include "bcslab/error.hpp"
#include "bcslab/rational.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace bcslab {

/// A finite two-player one-round game. Questions and answers are addressed by
/// index; labels are only for display and file I/O.
struct GameSpec {
  /// One question pair (s, t) with positive probability and its verifier table.
  struct QuestionPair {
    std::size_t s = 0;
    std::size_t t = 0;
    Rational prob;
    /// win[a][b] = V(a, b | s, t), sized |A_s| x |B_t|.
    std::vector<std::vector<std::uint8_t>> win;
  };

  std::vector<std::string> questionsA;
  std::vector<std::string> questionsB;
  std::vector<std::vector<std::string>> answersA;
  std::vector<std::vector<std::string>> answersB;
  /// Supported question pairs, sorted by (s, t).
  std::vector<QuestionPair> pairs;

  [[nodiscard]] const QuestionPair *find(std::size_t s, std::size_t t) const {
    for (const auto &qp : pairs) {
      if (qp.s == s && qp.t == t) return &qp;
    }
    return nullptr;
  }

  /// Throws Error unless the distribution sums to exactly 1 and every
  /// verifier table matches the answer-set sizes.
  void validate() const {
    if (questionsA.size() != answersA.size() || questionsB.size() != answersB.size()) {
      throw Error("game: question and answer lists differ in length");
    }
    for (const auto &as : answersA) {
      if (as.empty()) throw Error("game: empty answer set for Alice");
    }
    for (const auto &bs : answersB) {
      if (bs.empty()) throw Error("game: empty answer set for Bob");
    }
    Rational total(0);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto &qp : pairs) {
      if (qp.s >= questionsA.size() || qp.t >= questionsB.size()) {
        throw Error("game: question pair out of range");
      }
      if (!seen.emplace(qp.s, qp.t).second) throw Error("game: duplicate question pair");
      if (sgn(qp.prob) <= 0) throw Error("game: non-positive probability on a listed pair");
      if (qp.win.size() != answersA[qp.s].size()) throw Error("game: verifier rows != |A_s|");
      for (const auto &row : qp.win) {
        if (row.size() != answersB[qp.t].size()) throw Error("game: verifier columns != |B_t|");
        for (auto v : row) {
          if (v > 1) throw Error("game: verifier entries must be 0 or 1");
        }
      }
      total += qp.prob;
    }
    if (total != 1) throw Error("game: probabilities sum to " + total.get_str() + ", not 1");
  }
};

/// S = T = {0,1}, A = B = {0,1}, uniform questions, win iff a xor b = s and t.
inline GameSpec chsh_game() {
  GameSpec g;
  g.questionsA = {"0", "1"};
  g.questionsB = {"0", "1"};
  g.answersA = {{"0", "1"}, {"0", "1"}};
  g.answersB = {{"0", "1"}, {"0", "1"}};
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::size_t t = 0; t < 2; ++t) {
      GameSpec::QuestionPair qp;
      qp.s = s;
      qp.t = t;
      qp.prob = Rational(1, 4);
      qp.win.assign(2, std::vector<std::uint8_t>(2, 0));
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) qp.win[a][b] = ((a ^ b) == static_cast<int>(s & t)) ? 1 : 0;
      }
      g.pairs.push_back(std::move(qp));
    }
  }
  return g;
}

} // namespace bcslab
