#pragma once

#include "bcslab/bcs.hpp"
#include "bcslab/game.hpp"

#include <algorithm>
#include <cstdint>
#include <bit>
#include <optional>
#include <type_traits>
#include <string>
#include <vector>

namespace bcslab {

using Bits = std::vector<std::uint8_t>;

namespace detail {

inline const Clause &expect_clause(const Constraint &c, const char *solver) {
  const auto *cl = std::get_if<Clause>(&c.kind);
  if (!cl) throw Error(std::string(solver) + ": constraint " + std::to_string(c.id) + " is not a clause");
  return *cl;
}

} // namespace detail

// ---------------------------------------------------------------------------
// 2-SAT
// ---------------------------------------------------------------------------

/// Literal vertex of variable v: 2v is v, 2v+1 is its negation.
inline std::size_t literal_vertex(const Literal &l) { return 2 * static_cast<std::size_t>(l.var) + (l.negated ? 1 : 0); }

struct ImplicationGraph {
  std::size_t num_vars = 0;
  std::vector<std::vector<std::size_t>> out; // indexed by literal vertex
  std::vector<std::size_t> scc;              // component index per vertex, reverse topological
  std::size_t edge_visits = 0;               // edges scanned by the SCC pass

  [[nodiscard]] std::size_t num_edges() const {
    std::size_t e = 0;
    for (const auto &o : out) e += o.size();
    return e;
  }
};

/// Clause l1 or l2 becomes not l1 -> l2 and not l2 -> l1. A unit clause l is
/// treated as l or l.
inline ImplicationGraph implication_graph(const Bcs &b) {
  ImplicationGraph g;
  g.num_vars = b.num_vars();
  g.out.assign(2 * g.num_vars, {});
  for (const auto &c : b.constraints()) {
    const auto &cl = detail::expect_clause(c, "2-SAT");
    if (cl.literals.size() > 2) throw Error("2-SAT: clause " + std::to_string(c.id) + " has more than two literals");
    if (cl.literals.empty()) continue;
    const Literal x = cl.literals.front();
    const Literal y = cl.literals.back();
    g.out[literal_vertex(x) ^ 1U].push_back(literal_vertex(y));
    g.out[literal_vertex(y) ^ 1U].push_back(literal_vertex(x));
  }
  return g;
}

/// Iterative Tarjan. Components are numbered in the order they complete,
/// which is a reverse topological order of the condensation.
inline void tarjan_scc(ImplicationGraph &g) {
  const std::size_t n = g.out.size();
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unset), low(n, 0), next_edge(n, 0);
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<std::size_t> stack, call;
  g.scc.assign(n, unset);
  g.edge_visits = 0;
  std::size_t counter = 0, comp = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unset) continue;
    call.push_back(root);
    while (!call.empty()) {
      const std::size_t v = call.back();
      if (index[v] == unset) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      if (next_edge[v] < g.out[v].size()) {
        const std::size_t w = g.out[v][next_edge[v]++];
        ++g.edge_visits;
        if (index[w] == unset) {
          call.push_back(w);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      call.pop_back();
      if (!call.empty()) low[call.back()] = std::min(low[call.back()], low[v]);
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          g.scc[w] = comp;
        } while (w != v);
        ++comp;
      }
    }
  }
}

struct TwoSatResult {
  std::optional<Bits> assignment;
  ImplicationGraph graph;
};

/// Satisfying assignment, or none when some x and not x share a component.
/// A variable is true when its positive literal's component comes first in
/// the reverse topological numbering.
inline TwoSatResult solve_2sat_detailed(const Bcs &b) {
  TwoSatResult r{std::nullopt, implication_graph(b)};
  // An empty clause is unsatisfiable by itself.
  for (const auto &c : b.constraints()) {
    if (detail::expect_clause(c, "2-SAT").literals.empty()) return r;
  }
  tarjan_scc(r.graph);
  Bits bits(b.num_vars(), 0);
  for (std::size_t v = 0; v < b.num_vars(); ++v) {
    const std::size_t pos = r.graph.scc[2 * v], neg = r.graph.scc[2 * v + 1];
    if (pos == neg) return r;
    bits[v] = pos < neg ? 1 : 0;
  }
  r.assignment = std::move(bits);
  return r;
}

inline std::optional<Bits> solve_2sat(const Bcs &b) { return solve_2sat_detailed(b).assignment; }

// ---------------------------------------------------------------------------
// Horn-SAT
// ---------------------------------------------------------------------------

/// Pebbling graph. Vertices are the variables plus TRUE and FALSE; each
/// clause j contributes edges labelled j from its sources to its target, and
/// the target is pebbled once every source of some label is pebbled.
struct HornGraph {
  struct Edge {
    std::size_t source;
    std::size_t target;
    std::size_t label;
  };
  std::size_t num_vars = 0;
  std::vector<Edge> edges;

  [[nodiscard]] std::size_t true_vertex() const { return num_vars; }
  [[nodiscard]] std::size_t false_vertex() const { return num_vars + 1; }
};

/// Positive unit x: TRUE -> x. Clause (not x1 or .. or not xk or y): xi -> y.
/// All-negative clause: xi -> FALSE. The empty clause is TRUE -> FALSE.
inline HornGraph horn_graph(const Bcs &b) {
  HornGraph g;
  g.num_vars = b.num_vars();
  for (const auto &c : b.constraints()) {
    const auto &cl = detail::expect_clause(c, "Horn-SAT");
    std::optional<VarId> head;
    std::vector<std::size_t> body;
    for (const auto &l : cl.literals) {
      if (l.negated) {
        body.push_back(l.var);
      } else {
        if (head) throw Error("Horn-SAT: clause " + std::to_string(c.id) + " has two positive literals");
        head = l.var;
      }
    }
    const std::size_t target = head ? *head : g.false_vertex();
    if (body.empty()) body.push_back(g.true_vertex());
    for (auto s : body) g.edges.push_back({s, target, c.id});
  }
  return g;
}

/// Minimal model by forward chaining, or none when FALSE gets pebbled.
inline std::optional<Bits> solve_hornsat(const Bcs &b) {
  const HornGraph g = horn_graph(b);
  const std::size_t nv = g.num_vars + 2;
  const std::size_t nc = b.constraints().size();
  std::vector<std::size_t> missing(nc, 0), target(nc, 0);
  std::vector<std::vector<std::size_t>> labels_from(nv);
  for (const auto &e : g.edges) {
    ++missing[e.label];
    target[e.label] = e.target;
    labels_from[e.source].push_back(e.label);
  }
  std::vector<std::uint8_t> pebbled(nv, 0);
  std::vector<std::size_t> queue{g.true_vertex()};
  pebbled[g.true_vertex()] = 1;
  while (!queue.empty()) {
    const std::size_t v = queue.back();
    queue.pop_back();
    for (auto j : labels_from[v]) {
      if (--missing[j] == 0 && !pebbled[target[j]]) {
        pebbled[target[j]] = 1;
        queue.push_back(target[j]);
      }
    }
  }
  if (pebbled[g.false_vertex()]) return std::nullopt;
  return Bits(pebbled.begin(), pebbled.begin() + static_cast<std::ptrdiff_t>(g.num_vars));
}

// ---------------------------------------------------------------------------
// Parity systems over GF(2)
// ---------------------------------------------------------------------------

struct Gf2Result {
  std::optional<Bits> assignment;
  std::size_t rank = 0;
};

/// Gauss-Jordan elimination; free variables are set to 0. Answers the
/// classical question only.
inline Gf2Result solve_parity_gf2_detailed(const Bcs &b) {
  const std::size_t n = b.num_vars();
  const std::size_t words = n / 64 + 1; // last bit column n is the right-hand side
  std::vector<std::vector<std::uint64_t>> rows;
  for (const auto &c : b.constraints()) {
    const auto *p = std::get_if<Parity>(&c.kind);
    if (!p) throw Error("parity solver: constraint " + std::to_string(c.id) + " is not a parity constraint");
    std::vector<std::uint64_t> row(words, 0);
    for (auto v : p->vars) row[v / 64] ^= std::uint64_t{1} << (v % 64);
    if (p->parity) row[n / 64] ^= std::uint64_t{1} << (n % 64);
    rows.push_back(std::move(row));
  }
  auto bit = [](const std::vector<std::uint64_t> &r, std::size_t k) { return (r[k / 64] >> (k % 64)) & 1U; };
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
    std::size_t sel = rank;
    while (sel < rows.size() && !bit(rows[sel], col)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[rank], rows[sel]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && bit(rows[r], col)) {
        for (std::size_t w = 0; w < words; ++w) rows[r][w] ^= rows[rank][w];
      }
    }
    pivot_col.push_back(col);
    ++rank;
  }
  Gf2Result res;
  res.rank = rank;
  for (std::size_t r = rank; r < rows.size(); ++r) {
    if (bit(rows[r], n)) return res; // 0 = 1
  }
  Bits bits(n, 0);
  for (std::size_t r = 0; r < rank; ++r) bits[pivot_col[r]] = static_cast<std::uint8_t>(bit(rows[r], n));
  res.assignment = std::move(bits);
  return res;
}

inline std::optional<Bits> solve_parity_gf2(const Bcs &b) { return solve_parity_gf2_detailed(b).assignment; }

// ---------------------------------------------------------------------------
// General classical search
// ---------------------------------------------------------------------------

namespace detail {

/// Whether some completion of the partial scope values satisfies `c`.
/// `known` marks assigned scope positions, `values` holds their bits.
inline bool completable(const Constraint &c, std::uint64_t known, std::uint64_t values, std::size_t arity) {
  const std::uint64_t all = arity >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << arity) - 1;
  const bool full = known == all;
  return std::visit(
      [&](const auto &k) -> bool {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Parity>) {
          return !full || (std::popcount(values) & 1) == static_cast<int>(k.parity);
        } else if constexpr (std::is_same_v<K, Clause>) {
          if (!full) return true;
          return c.satisfied_by_local(values);
        } else if constexpr (std::is_same_v<K, ExactlyOne>) {
          const int ones = std::popcount(values);
          return ones == 1 || (ones == 0 && !full);
        } else {
          for (auto t : k.satisfying) {
            if ((t & known) == values) return true;
          }
          return false;
        }
      },
      c.kind);
}

} // namespace detail

/// Depth-first search with unit propagation; variables are branched in order
/// of first appearance in the constraint list. Exponential in the worst case.
inline std::optional<Bits> solve_classical(const Bcs &b, std::uint64_t *nodes = nullptr) {
  const std::size_t n = b.num_vars();
  const auto &cs = b.constraints();
  std::vector<std::vector<VarId>> scopes;
  std::vector<std::vector<std::size_t>> occ(n);
  std::vector<VarId> order;
  std::vector<std::uint8_t> placed(n, 0);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    scopes.push_back(cs[i].scope());
    for (VarId v : scopes.back()) {
      occ[v].push_back(i);
      if (!placed[v]) {
        placed[v] = 1;
        order.push_back(v);
      }
    }
  }
  for (VarId v = 0; v < n; ++v) {
    if (!placed[v]) order.push_back(v);
  }

  std::vector<std::int8_t> val(n, -1);
  std::vector<VarId> trail;
  std::uint64_t count = 0;

  auto masks = [&](std::size_t ci, std::uint64_t &known, std::uint64_t &values, std::size_t &free_pos, std::size_t &nfree) {
    known = values = 0;
    nfree = 0;
    const auto &sc = scopes[ci];
    for (std::size_t j = 0; j < sc.size(); ++j) {
      if (val[sc[j]] < 0) {
        ++nfree;
        free_pos = j;
      } else {
        known |= std::uint64_t{1} << j;
        if (val[sc[j]]) values |= std::uint64_t{1} << j;
      }
    }
  };

  auto assign = [&](VarId v, std::uint8_t bit) {
    val[v] = static_cast<std::int8_t>(bit);
    trail.push_back(v);
  };

  auto propagate = [&](std::size_t from) -> bool {
    for (std::size_t q = from; q < trail.size(); ++q) {
      for (auto ci : occ[trail[q]]) {
        std::uint64_t known, values;
        std::size_t free_pos = 0, nfree;
        masks(ci, known, values, free_pos, nfree);
        const std::size_t arity = scopes[ci].size();
        if (!detail::completable(cs[ci], known, values, arity)) return false;
        if (nfree != 1) continue;
        const std::uint64_t bit = std::uint64_t{1} << free_pos;
        const bool ok0 = detail::completable(cs[ci], known | bit, values, arity);
        const bool ok1 = detail::completable(cs[ci], known | bit, values | bit, arity);
        if (!ok0 && !ok1) return false;
        if (ok0 != ok1) assign(scopes[ci][free_pos], ok1 ? 1 : 0);
      }
    }
    return true;
  };

  auto undo = [&](std::size_t mark) {
    while (trail.size() > mark) {
      val[trail.back()] = -1;
      trail.pop_back();
    }
  };

  // Constraints with an empty scope are decided up front.
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (scopes[i].empty() && !cs[i].satisfied_by_local(0)) return std::nullopt;
  }

  struct Frame {
    std::size_t mark;
    VarId var;
    std::uint8_t next;
  };
  std::vector<Frame> frames;
  std::size_t cursor = 0;
  auto next_free = [&]() -> std::optional<VarId> {
    while (cursor < order.size() && val[order[cursor]] >= 0) ++cursor;
    if (cursor == order.size()) return std::nullopt;
    return order[cursor];
  };

  bool descend = true;
  while (true) {
    if (descend) {
      auto v = next_free();
      if (!v) break;
      frames.push_back({trail.size(), *v, 0});
    }
    if (frames.empty()) {
      if (nodes) *nodes = count;
      return std::nullopt;
    }
    Frame &f = frames.back();
    undo(f.mark);
    if (f.next > 1) {
      frames.pop_back();
      cursor = 0;
      descend = false;
      continue;
    }
    ++count;
    const std::size_t mark = trail.size();
    assign(f.var, f.next++);
    descend = propagate(mark);
    if (descend) cursor = 0;
  }
  if (nodes) *nodes = count;
  Bits bits(n, 0);
  for (VarId v = 0; v < n; ++v) bits[v] = static_cast<std::uint8_t>(val[v]);
  return bits;
}

// ---------------------------------------------------------------------------
// Classical game value
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMaxBobQuestions = 20;
inline constexpr std::uint64_t kMaxBobStrategies = std::uint64_t{1} << 24;

/// Maximum over deterministic Bob functions of the summed best Alice
/// responses. Exact.
inline Rational classical_game_value(const GameSpec &g) {
  g.validate();
  const std::size_t nt = g.questionsB.size();
  if (nt > kMaxBobQuestions) throw GuardError("classical value limited to " + std::to_string(kMaxBobQuestions) + " Bob questions");
  std::uint64_t total = 1;
  for (const auto &bs : g.answersB) {
    if (total > kMaxBobStrategies / bs.size()) throw GuardError("too many deterministic Bob strategies");
    total *= bs.size();
  }
  std::vector<std::vector<const GameSpec::QuestionPair *>> by_s(g.questionsA.size());
  for (const auto &qp : g.pairs) by_s[qp.s].push_back(&qp);

  Rational best(0);
  std::vector<std::size_t> f(nt, 0);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t rest = code;
    for (std::size_t t = 0; t < nt; ++t) {
      f[t] = rest % g.answersB[t].size();
      rest /= g.answersB[t].size();
    }
    Rational value(0);
    for (std::size_t s = 0; s < by_s.size(); ++s) {
      Rational best_a(0);
      for (std::size_t a = 0; a < g.answersA[s].size(); ++a) {
        Rational v(0);
        for (const auto *qp : by_s[s]) {
          if (qp->win[a][f[qp->t]]) v += qp->prob;
        }
        if (v > best_a) best_a = v;
      }
      value += best_a;
    }
    if (value > best) best = value;
  }
  return best;
}

} // namespace bcslab
