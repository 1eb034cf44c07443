#pragma once

#include "bcslab/error.hpp"
#include "bcslab/game.hpp"
#include "bcslab/ncpoly.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace bcslab {

using VarId = std::uint32_t;

/// Arithmetization domain: bits {0,1} or signs {+1,-1} (bit b <-> (-1)^b).
enum class Domain { Bool01, BoolPM };

struct Literal {
  VarId var = 0;
  bool negated = false;
  friend bool operator==(const Literal &, const Literal &) = default;
};

/// XOR of the scope bits equals `parity`.
struct Parity {
  std::vector<VarId> vars;
  bool parity = false;
  friend bool operator==(const Parity &, const Parity &) = default;
};

struct Clause {
  std::vector<Literal> literals;
  friend bool operator==(const Clause &, const Clause &) = default;
};

/// Exactly one scope bit is 1.
struct ExactlyOne {
  std::vector<VarId> vars;
  friend bool operator==(const ExactlyOne &, const ExactlyOne &) = default;
};

/// Explicit satisfying set. A tuple is a bitmask: bit j is the value of vars[j].
struct Table {
  std::vector<VarId> vars;
  std::set<std::uint64_t> satisfying;
  friend bool operator==(const Table &, const Table &) = default;
};

using ConstraintKind = std::variant<Parity, Clause, ExactlyOne, Table>;

struct Constraint {
  ConstraintKind kind;
  std::uint32_t id = 0;

  /// Scope variables in declaration order.
  [[nodiscard]] std::vector<VarId> scope() const {
    return std::visit(
        [](const auto &k) -> std::vector<VarId> {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Clause>) {
            std::vector<VarId> out;
            for (const auto &l : k.literals) out.push_back(l.var);
            return out;
          } else {
            return k.vars;
          }
        },
        kind);
  }

  [[nodiscard]] std::size_t arity() const { return scope().size(); }

  /// `local` holds the scope values as a bitmask (bit j = value of scope()[j]).
  [[nodiscard]] bool satisfied_by_local(std::uint64_t local) const {
    return std::visit(
        [local](const auto &k) -> bool {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Parity>) {
            return (std::popcount(local) & 1) == static_cast<int>(k.parity);
          } else if constexpr (std::is_same_v<K, Clause>) {
            for (std::size_t j = 0; j < k.literals.size(); ++j) {
              bool bit = (local >> j) & 1U;
              if (bit != k.literals[j].negated) return true;
            }
            return false;
          } else if constexpr (std::is_same_v<K, ExactlyOne>) {
            return std::popcount(local) == 1;
          } else {
            return k.satisfying.count(local) > 0;
          }
        },
        kind);
  }

  [[nodiscard]] bool satisfied_by(const std::vector<std::uint8_t> &bits) const {
    auto vars = scope();
    std::uint64_t local = 0;
    for (std::size_t j = 0; j < vars.size(); ++j) {
      if (bits.at(vars[j])) local |= (std::uint64_t{1} << j);
    }
    return satisfied_by_local(local);
  }

  [[nodiscard]] bool is_parity() const { return std::holds_alternative<Parity>(kind); }

  friend bool operator==(const Constraint &, const Constraint &) = default;
};

inline constexpr std::size_t kMaxArity = 63;

/// Returns true when `name` can be used as a variable token in the text formats.
inline bool valid_name(std::string_view name) {
  if (name.empty()) return false;
  if (name.front() == '-' || name.front() == '+') return false;
  for (unsigned char c : name) {
    if (c <= ' ' || c >= 127) return false;
    if (c == '#' || c == '=' || c == ':' || c == ',' || c == '.' || c == '(' || c == ')' || c == '"') return false;
  }
  return true;
}

/// A binary constraint system: named variables with dense indices plus a
/// list of constraints whose ids are their positions.
class Bcs {
public:
  Bcs() = default;
  explicit Bcs(Domain d) : domain_(d) {}

  [[nodiscard]] Domain domain() const { return domain_; }
  void set_domain(Domain d) {
    if (d == Domain::BoolPM) {
      for (const auto &c : constraints_) {
        if (!c.is_parity()) throw Error("the +-1 domain only admits parity constraints");
      }
    }
    domain_ = d;
  }

  [[nodiscard]] std::size_t num_vars() const { return names_.size(); }
  [[nodiscard]] const std::vector<std::string> &names() const { return names_; }
  [[nodiscard]] const std::string &name(VarId v) const { return names_.at(v); }
  [[nodiscard]] const std::vector<Constraint> &constraints() const { return constraints_; }

  [[nodiscard]] std::optional<VarId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  [[nodiscard]] VarId id(std::string_view name) const {
    auto v = find(name);
    if (!v) throw Error("unknown variable '" + std::string(name) + "'");
    return *v;
  }

  VarId add_variable(const std::string &name) {
    if (!valid_name(name)) throw Error("invalid variable name '" + name + "'");
    if (index_.count(name)) throw Error("duplicate variable '" + name + "'");
    auto v = static_cast<VarId>(names_.size());
    names_.push_back(name);
    index_.emplace(name, v);
    return v;
  }

  /// Returns the id of `name`, declaring it first when new.
  VarId ensure_variable(const std::string &name) {
    if (auto v = find(name)) return *v;
    return add_variable(name);
  }

  std::uint32_t add_constraint(ConstraintKind kind) {
    Constraint c{std::move(kind), static_cast<std::uint32_t>(constraints_.size())};
    auto vars = c.scope();
    if (vars.size() > kMaxArity) throw Error("constraint arity exceeds " + std::to_string(kMaxArity));
    std::set<VarId> seen;
    for (VarId v : vars) {
      if (v >= names_.size()) throw Error("constraint references undeclared variable index " + std::to_string(v));
      if (!seen.insert(v).second) throw Error("duplicate variable '" + names_[v] + "' in constraint scope");
    }
    if (const auto *t = std::get_if<Table>(&c.kind)) {
      for (auto tuple : t->satisfying) {
        if (vars.size() < 64 && (tuple >> vars.size()) != 0) throw Error("table tuple wider than its scope");
      }
    }
    if (domain_ == Domain::BoolPM && !c.is_parity()) {
      throw Error("the +-1 domain only admits parity constraints");
    }
    constraints_.push_back(std::move(c));
    return constraints_.back().id;
  }

  std::uint32_t add_parity(const std::vector<std::string> &vars, bool parity) {
    return add_constraint(Parity{ids(vars), parity});
  }
  std::uint32_t add_exactly_one(const std::vector<std::string> &vars) { return add_constraint(ExactlyOne{ids(vars)}); }
  /// Literals are names with an optional leading '-' for negation.
  std::uint32_t add_clause(const std::vector<std::string> &literals) {
    Clause c;
    for (const auto &l : literals) {
      bool neg = !l.empty() && l.front() == '-';
      c.literals.push_back({id(neg ? l.substr(1) : l), neg});
    }
    return add_constraint(std::move(c));
  }

  [[nodiscard]] bool satisfied_by(const std::vector<std::uint8_t> &bits) const {
    return std::all_of(constraints_.begin(), constraints_.end(), [&](const Constraint &c) { return c.satisfied_by(bits); });
  }

  /// Number of constraints each variable occurs in.
  [[nodiscard]] std::vector<std::size_t> occurrences() const {
    std::vector<std::size_t> occ(num_vars(), 0);
    for (const auto &c : constraints_) {
      for (VarId v : c.scope()) ++occ[v];
    }
    return occ;
  }

  friend bool operator==(const Bcs &a, const Bcs &b) {
    return a.domain_ == b.domain_ && a.names_ == b.names_ && a.constraints_ == b.constraints_;
  }

private:
  std::vector<VarId> ids(const std::vector<std::string> &vars) const {
    std::vector<VarId> out;
    out.reserve(vars.size());
    for (const auto &v : vars) out.push_back(id(v));
    return out;
  }

  Domain domain_ = Domain::Bool01;
  std::vector<std::string> names_;
  std::unordered_map<std::string, VarId> index_;
  std::vector<Constraint> constraints_;
};

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

namespace detail {

struct Token {
  std::string text;
  std::size_t column;
};

inline std::vector<Token> tokenize_line(std::string_view line) {
  std::vector<Token> out;
  std::size_t k = 0;
  while (k < line.size()) {
    if (line[k] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[k]))) {
      ++k;
      continue;
    }
    std::size_t start = k;
    while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k])) && line[k] != '#') ++k;
    out.push_back({std::string(line.substr(start, k - start)), start + 1});
  }
  return out;
}

} // namespace detail

/// Parses the line-oriented BCS format:
///
///     domain 01|pm
///     var <name>+
///     parity <name>* = 0|1
///     clause <[+-]name>*
///     one <name>*
///     table <name>* : <bits>(,<bits>)*
///
/// `#` starts a comment. Variables must be declared before use.
inline Bcs parse_bcs(std::istream &in) {
  Bcs b;
  bool domain_seen = false;
  bool constraint_seen = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::tokenize_line(line);
    if (toks.empty()) continue;
    const std::string &kw = toks[0].text;
    auto fail = [&](const detail::Token &t, const std::string &msg) -> ParseError { return {lineno, t.column, msg}; };
    auto lookup = [&](const detail::Token &t, std::string_view name) -> VarId {
      auto v = b.find(name);
      if (!v) throw fail(t, "unknown variable '" + std::string(name) + "'");
      return *v;
    };
    auto check_distinct = [&](const std::vector<VarId> &vars, const std::vector<detail::Token> &src) {
      std::set<VarId> seen;
      for (std::size_t j = 0; j < vars.size(); ++j) {
        if (!seen.insert(vars[j]).second) throw fail(src[j], "duplicate variable '" + b.name(vars[j]) + "' in scope");
      }
    };
    auto add = [&](ConstraintKind kind) {
      if (b.domain() == Domain::BoolPM && !std::holds_alternative<Parity>(kind)) {
        throw fail(toks[0], "'" + kw + "' constraint not allowed in the pm domain");
      }
      constraint_seen = true;
      b.add_constraint(std::move(kind));
    };

    if (kw == "domain") {
      if (toks.size() != 2) throw fail(toks[0], "expected 'domain 01' or 'domain pm'");
      if (domain_seen) throw fail(toks[0], "domain declared twice");
      if (constraint_seen) throw fail(toks[0], "domain must precede all constraints");
      domain_seen = true;
      if (toks[1].text == "01") {
        b.set_domain(Domain::Bool01);
      } else if (toks[1].text == "pm") {
        b.set_domain(Domain::BoolPM);
      } else {
        throw fail(toks[1], "unknown domain '" + toks[1].text + "'");
      }
    } else if (kw == "var") {
      if (toks.size() < 2) throw fail(toks[0], "'var' needs at least one name");
      for (std::size_t k = 1; k < toks.size(); ++k) {
        if (!valid_name(toks[k].text)) throw fail(toks[k], "invalid variable name '" + toks[k].text + "'");
        if (b.find(toks[k].text)) throw fail(toks[k], "variable '" + toks[k].text + "' declared twice");
        b.add_variable(toks[k].text);
      }
    } else if (kw == "parity") {
      std::size_t eq = 1;
      while (eq < toks.size() && toks[eq].text != "=") ++eq;
      if (eq == toks.size()) throw fail(toks[0], "parity constraint needs '= 0' or '= 1'");
      if (eq + 2 != toks.size()) throw fail(toks[eq], "expected a single 0 or 1 after '='");
      const auto &rhs = toks[eq + 1];
      if (rhs.text != "0" && rhs.text != "1") throw fail(rhs, "parity must be 0 or 1");
      Parity p;
      std::vector<detail::Token> src(toks.begin() + 1, toks.begin() + static_cast<std::ptrdiff_t>(eq));
      for (const auto &t : src) p.vars.push_back(lookup(t, t.text));
      check_distinct(p.vars, src);
      p.parity = rhs.text == "1";
      add(std::move(p));
    } else if (kw == "clause") {
      Clause c;
      std::vector<detail::Token> src(toks.begin() + 1, toks.end());
      std::vector<VarId> vars;
      for (const auto &t : src) {
        bool neg = t.text.front() == '-';
        bool pos = t.text.front() == '+';
        std::string_view name(t.text);
        if (neg || pos) name.remove_prefix(1);
        if (name.empty()) throw fail(t, "empty literal");
        VarId v = lookup(t, name);
        c.literals.push_back({v, neg});
        vars.push_back(v);
      }
      check_distinct(vars, src);
      add(std::move(c));
    } else if (kw == "one") {
      ExactlyOne e;
      std::vector<detail::Token> src(toks.begin() + 1, toks.end());
      for (const auto &t : src) e.vars.push_back(lookup(t, t.text));
      check_distinct(e.vars, src);
      add(std::move(e));
    } else if (kw == "table") {
      std::size_t colon = 1;
      while (colon < toks.size() && toks[colon].text != ":") ++colon;
      if (colon == toks.size()) throw fail(toks[0], "table constraint needs ':' before its tuples");
      Table t;
      std::vector<detail::Token> src(toks.begin() + 1, toks.begin() + static_cast<std::ptrdiff_t>(colon));
      for (const auto &tok : src) t.vars.push_back(lookup(tok, tok.text));
      check_distinct(t.vars, src);
      if (t.vars.size() > kMaxArity) throw fail(toks[0], "table arity too large");
      std::string joined;
      std::size_t col = colon + 1 < toks.size() ? toks[colon + 1].column : toks[colon].column;
      for (std::size_t k = colon + 1; k < toks.size(); ++k) joined += toks[k].text;
      if (!joined.empty()) {
        std::size_t start = 0;
        while (start <= joined.size()) {
          auto comma = joined.find(',', start);
          if (comma == std::string::npos) comma = joined.size();
          std::string bits = joined.substr(start, comma - start);
          if (bits.size() != t.vars.size()) {
            throw ParseError(lineno, col, "tuple '" + bits + "' has length " + std::to_string(bits.size()) +
                                              ", expected " + std::to_string(t.vars.size()));
          }
          std::uint64_t mask = 0;
          for (std::size_t j = 0; j < bits.size(); ++j) {
            if (bits[j] == '1') {
              mask |= std::uint64_t{1} << j;
            } else if (bits[j] != '0') {
              throw ParseError(lineno, col, "tuple '" + bits + "' must use only 0 and 1");
            }
          }
          t.satisfying.insert(mask);
          start = comma + 1;
        }
      }
      add(std::move(t));
    } else {
      throw fail(toks[0], "unknown directive '" + kw + "'");
    }
  }
  return b;
}

inline Bcs parse_bcs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_bcs(in);
}

/// Canonical text: domain line, one `var` line in index order, then the
/// constraints in id order.
inline std::string serialize_bcs(const Bcs &b) {
  std::ostringstream out;
  out << "domain " << (b.domain() == Domain::BoolPM ? "pm" : "01") << '\n';
  if (b.num_vars() > 0) {
    out << "var";
    for (const auto &n : b.names()) out << ' ' << n;
    out << '\n';
  }
  for (const auto &c : b.constraints()) {
    std::visit(
        [&](const auto &k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Parity>) {
            out << "parity";
            for (VarId v : k.vars) out << ' ' << b.name(v);
            out << " = " << (k.parity ? 1 : 0);
          } else if constexpr (std::is_same_v<K, Clause>) {
            out << "clause";
            for (const auto &l : k.literals) out << ' ' << (l.negated ? "-" : "") << b.name(l.var);
          } else if constexpr (std::is_same_v<K, ExactlyOne>) {
            out << "one";
            for (VarId v : k.vars) out << ' ' << b.name(v);
          } else {
            out << "table";
            for (VarId v : k.vars) out << ' ' << b.name(v);
            out << " :";
            bool first = true;
            for (auto mask : k.satisfying) {
              out << (first ? " " : ",");
              first = false;
              for (std::size_t j = 0; j < k.vars.size(); ++j) out << (((mask >> j) & 1U) ? '1' : '0');
            }
          }
        },
        c.kind);
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Builders and structural queries
// ---------------------------------------------------------------------------

/// The 3x3 magic square over {+1,-1}: rows and the first two columns have
/// even parity, the last column odd. Position p of the grid is variable x<p>.
inline Bcs magic_square() {
  Bcs b(Domain::BoolPM);
  for (int k = 1; k <= 9; ++k) b.add_variable("x" + std::to_string(k));
  b.add_parity({"x1", "x2", "x3"}, false);
  b.add_parity({"x1", "x4", "x7"}, false);
  b.add_parity({"x4", "x5", "x6"}, false);
  b.add_parity({"x2", "x5", "x8"}, false);
  b.add_parity({"x7", "x8", "x9"}, false);
  b.add_parity({"x3", "x6", "x9"}, true);
  return b;
}

/// Unordered pairs (smaller id first) of distinct variables sharing a scope.
inline std::set<std::pair<VarId, VarId>> commutation_pairs(const Bcs &b) {
  std::set<std::pair<VarId, VarId>> out;
  for (const auto &c : b.constraints()) {
    auto vars = c.scope();
    for (std::size_t i = 0; i < vars.size(); ++i) {
      for (std::size_t j = i + 1; j < vars.size(); ++j) out.emplace(std::min(vars[i], vars[j]), std::max(vars[i], vars[j]));
    }
  }
  return out;
}

enum class RelationKind { Constraint, Spectrum, Commutation };

struct Relation {
  RelationKind kind;
  NcPoly poly;
};

inline constexpr std::size_t kMaxExpandArity = 16;

/// Operator-form polynomial of one constraint; it vanishes exactly on
/// satisfying operator tuples.
///
/// Over {0,1}: ExactlyOne gives sum(x) - 1. Every other kind gives the
/// projector onto its violating assignments,
///     sum_{a unsat} prod_j (a_j x_j + (1 - a_j)(1 - x_j)),
/// which equals 1 - sum_{a sat} prod_j (...) term for term because the full
/// sum over all tuples telescopes to 1. Over {+1,-1}: x_1...x_k - (-1)^parity.
inline NcPoly constraint_polynomial(const Bcs &b, const Constraint &c) {
  auto vars = c.scope();
  if (b.domain() == Domain::BoolPM) {
    const auto &p = std::get<Parity>(c.kind);
    Word w(p.vars.begin(), p.vars.end());
    NcPoly out = NcPoly::monomial(w);
    out.add_term({}, GaussianRational(p.parity ? 1 : -1));
    return out;
  }
  if (const auto *e = std::get_if<ExactlyOne>(&c.kind)) {
    NcPoly out = NcPoly::constant(GaussianRational(-1));
    for (VarId v : e->vars) out.add_term({v}, GaussianRational(1));
    return out;
  }
  if (vars.size() > kMaxExpandArity) {
    throw GuardError("constraint arity " + std::to_string(vars.size()) + " too large to expand");
  }
  const std::uint64_t total = std::uint64_t{1} << vars.size();
  std::vector<std::uint64_t> sat, unsat;
  for (std::uint64_t a = 0; a < total; ++a) (c.satisfied_by_local(a) ? sat : unsat).push_back(a);
  auto projector = [&](std::uint64_t a) {
    NcPoly prod = NcPoly::constant(GaussianRational(1));
    for (std::size_t j = 0; j < vars.size(); ++j) {
      NcPoly factor = ((a >> j) & 1U) ? NcPoly::variable(vars[j])
                                       : NcPoly::constant(GaussianRational(1)) - NcPoly::variable(vars[j]);
      prod = prod * factor;
    }
    return prod;
  };
  NcPoly out;
  if (sat.size() < unsat.size()) {
    out = NcPoly::constant(GaussianRational(1));
    for (auto a : sat) out -= projector(a);
  } else {
    for (auto a : unsat) out += projector(a);
  }
  return out;
}

/// Generators of the ideal of `b`, tagged by origin: constraint polynomials
/// (in constraint order), then x^2 - x (or x^2 - 1) per variable, then
/// x_k x_j - x_j x_k for every commutation pair j < k.
inline std::vector<Relation> polynomial_relations(const Bcs &b) {
  std::vector<Relation> out;
  for (const auto &c : b.constraints()) out.push_back({RelationKind::Constraint, constraint_polynomial(b, c)});
  for (VarId v = 0; v < b.num_vars(); ++v) {
    NcPoly p = NcPoly::monomial({v, v});
    if (b.domain() == Domain::BoolPM) {
      p.add_term({}, GaussianRational(-1));
    } else {
      p.add_term({v}, GaussianRational(-1));
    }
    out.push_back({RelationKind::Spectrum, std::move(p)});
  }
  for (auto [j, k] : commutation_pairs(b)) {
    out.push_back({RelationKind::Commutation, NcPoly::monomial({k, j}) - NcPoly::monomial({j, k})});
  }
  return out;
}

inline std::vector<NcPoly> to_polynomial_relations(const Bcs &b) {
  std::vector<NcPoly> out;
  for (auto &r : polynomial_relations(b)) out.push_back(std::move(r.poly));
  return out;
}

/// The BCS game: Alice gets a constraint and answers its scope bits (answer
/// index = bitmask over scope positions), Bob gets a variable and answers a
/// bit. Question pairs are uniform over (constraint, variable in its scope).
inline GameSpec derive_game(const Bcs &b) {
  GameSpec g;
  std::size_t support = 0;
  for (const auto &c : b.constraints()) {
    if (c.arity() == 0) throw Error("constraint " + std::to_string(c.id) + " has an empty scope");
    if (c.arity() > 20) throw GuardError("constraint " + std::to_string(c.id) + " too wide for a game");
    support += c.arity();
  }
  for (const auto &c : b.constraints()) {
    g.questionsA.push_back("c" + std::to_string(c.id));
    std::vector<std::string> answers;
    const auto k = c.arity();
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << k); ++a) {
      std::string bits;
      for (std::size_t j = 0; j < k; ++j) bits.push_back(((a >> j) & 1U) ? '1' : '0');
      answers.push_back(bits);
    }
    g.answersA.push_back(std::move(answers));
  }
  for (const auto &n : b.names()) {
    g.questionsB.push_back(n);
    g.answersB.push_back({"0", "1"});
  }
  for (const auto &c : b.constraints()) {
    auto vars = c.scope();
    std::vector<std::pair<VarId, std::size_t>> order;
    for (std::size_t j = 0; j < vars.size(); ++j) order.emplace_back(vars[j], j);
    std::sort(order.begin(), order.end());
    for (auto [t, pos] : order) {
      GameSpec::QuestionPair qp;
      qp.s = c.id;
      qp.t = t;
      qp.prob = Rational(1, static_cast<long>(support));
      const std::uint64_t na = std::uint64_t{1} << vars.size();
      qp.win.assign(na, std::vector<std::uint8_t>(2, 0));
      for (std::uint64_t a = 0; a < na; ++a) {
        if (!c.satisfied_by_local(a)) continue;
        qp.win[a][(a >> pos) & 1U] = 1;
      }
      g.pairs.push_back(std::move(qp));
    }
  }
  return g;
}

inline constexpr std::size_t kMaxBruteForceVars = 30;

/// Lexicographically first satisfying assignment (x_1 most significant), or
/// nullopt when unsatisfiable.
inline std::optional<std::vector<std::uint8_t>> classical_solve_bruteforce(const Bcs &b) {
  const std::size_t n = b.num_vars();
  if (n > kMaxBruteForceVars) {
    throw GuardError("brute force limited to " + std::to_string(kMaxBruteForceVars) + " variables, got " + std::to_string(n));
  }
  struct Compiled {
    const Constraint *c;
    std::vector<std::size_t> shifts;
  };
  std::vector<Compiled> compiled;
  for (const auto &c : b.constraints()) {
    Compiled cc{&c, {}};
    for (VarId v : c.scope()) cc.shifts.push_back(n - 1 - v);
    compiled.push_back(std::move(cc));
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t m = 0; m < total; ++m) {
    bool ok = true;
    for (const auto &cc : compiled) {
      std::uint64_t local = 0;
      for (std::size_t j = 0; j < cc.shifts.size(); ++j) local |= ((m >> cc.shifts[j]) & 1U) << j;
      if (!cc.c->satisfied_by_local(local)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      std::vector<std::uint8_t> bits(n);
      for (std::size_t v = 0; v < n; ++v) bits[v] = (m >> (n - 1 - v)) & 1U;
      return bits;
    }
  }
  return std::nullopt;
}

} // namespace bcslab
