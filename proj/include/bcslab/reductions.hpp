#pragma once

#include "bcslab/bcs.hpp"
#include "bcslab/error.hpp"
#include "bcslab/game.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bcslab {

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

/// Simple undirected graph with named vertices; edges are stored once with the
/// smaller index first, in insertion order.
class Graph {
public:
  std::size_t add_vertex(const std::string &name) {
    if (!valid_name(name)) throw Error("invalid vertex name '" + name + "'");
    if (index_.count(name)) throw Error("duplicate vertex '" + name + "'");
    index_.emplace(name, names_.size());
    names_.push_back(name);
    adj_.emplace_back();
    return names_.size() - 1;
  }

  [[nodiscard]] std::optional<std::size_t> find(const std::string &name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  [[nodiscard]] std::size_t id(const std::string &name) const {
    auto v = find(name);
    if (!v) throw Error("unknown vertex '" + name + "'");
    return *v;
  }

  /// Returns false when the edge already exists.
  bool add_edge(std::size_t u, std::size_t v) {
    if (u >= names_.size() || v >= names_.size()) throw Error("edge endpoint out of range");
    if (u == v) throw Error("self-loop on vertex '" + names_[u] + "'");
    if (adj_[u].count(v)) return false;
    adj_[u].insert(v);
    adj_[v].insert(u);
    edges_.emplace_back(std::min(u, v), std::max(u, v));
    return true;
  }
  bool add_edge(const std::string &u, const std::string &v) { return add_edge(id(u), id(v)); }

  [[nodiscard]] bool adjacent(std::size_t u, std::size_t v) const { return adj_.at(u).count(v) > 0; }
  [[nodiscard]] const std::set<std::size_t> &neighbors(std::size_t v) const { return adj_.at(v); }
  [[nodiscard]] std::size_t num_vertices() const { return names_.size(); }
  [[nodiscard]] const std::vector<std::string> &vertices() const { return names_; }
  [[nodiscard]] const std::string &name(std::size_t v) const { return names_.at(v); }
  [[nodiscard]] const std::vector<std::pair<std::size_t, std::size_t>> &edges() const { return edges_; }

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::set<std::size_t>> adj_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

struct ColoringInstance {
  Graph graph;
  std::size_t colors = 3;
};

/// `v <name>` and `e <name> <name>` lines; `#` starts a comment.
inline Graph parse_graph(std::istream &in) {
  Graph g;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    try {
      if (tok[0] == "v" && tok.size() == 2) {
        g.add_vertex(tok[1]);
      } else if (tok[0] == "e" && tok.size() == 3) {
        g.add_edge(tok[1], tok[2]);
      } else {
        throw Error("expected 'v NAME' or 'e NAME NAME'");
      }
    } catch (const ParseError &) {
      throw;
    } catch (const Error &e) {
      throw ParseError(lineno, 1, e.what());
    }
  }
  return g;
}

inline Graph parse_graph(const std::string &text) {
  std::istringstream in(text);
  return parse_graph(in);
}

inline std::string serialize_graph(const Graph &g) {
  std::string out;
  for (const auto &v : g.vertices()) out += "v " + v + "\n";
  for (auto [u, v] : g.edges()) out += "e " + g.name(u) + " " + g.name(v) + "\n";
  return out;
}

/// Backtracking k-coloring with forward checking. Vertices of a lower stage
/// are always colored before any vertex of a higher stage (minimum remaining
/// values within a stage), which keeps always-extendible gadgets from being
/// searched together with the core. `fixed[v] >= 0` pins a color.
inline std::optional<std::vector<std::uint8_t>> color_graph(const Graph &g, std::size_t k,
                                                            const std::vector<int> &fixed = {},
                                                            const std::vector<int> &stage = {}) {
  if (k == 0 || k > 32) throw Error("color count must be in 1..32");
  const std::size_t n = g.num_vertices();
  const std::uint32_t all = k == 32 ? ~std::uint32_t{0} : ((std::uint32_t{1} << k) - 1);
  std::vector<std::uint32_t> domain(n, all);
  std::vector<int> color(n, -1);
  std::vector<std::pair<std::size_t, std::uint32_t>> trail; // (vertex, previous domain)

  auto assign = [&](std::size_t v, int c) -> bool {
    color[v] = c;
    for (auto w : g.neighbors(v)) {
      if (color[w] >= 0) {
        if (color[w] == c) return false;
        continue;
      }
      const std::uint32_t bit = std::uint32_t{1} << c;
      if (domain[w] & bit) {
        trail.emplace_back(w, domain[w]);
        domain[w] &= ~bit;
        if (domain[w] == 0) return false;
      }
    }
    return true;
  };
  auto undo = [&](std::size_t mark, std::size_t v) {
    while (trail.size() > mark) {
      domain[trail.back().first] = trail.back().second;
      trail.pop_back();
    }
    color[v] = -1;
  };

  for (std::size_t v = 0; v < n; ++v) {
    if (v < fixed.size() && fixed[v] >= 0) {
      if (static_cast<std::size_t>(fixed[v]) >= k || !((domain[v] >> fixed[v]) & 1U)) return std::nullopt;
      if (!assign(v, fixed[v])) return std::nullopt;
    }
  }
  trail.clear();

  auto stage_of = [&](std::size_t v) { return v < stage.size() ? stage[v] : 0; };
  auto pick = [&]() -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    for (std::size_t v = 0; v < n; ++v) {
      if (color[v] >= 0) continue;
      if (!best) {
        best = v;
        continue;
      }
      const int sv = stage_of(v), sb = stage_of(*best);
      if (sv < sb || (sv == sb && std::popcount(domain[v]) < std::popcount(domain[*best]))) best = v;
    }
    return best;
  };

  struct Frame {
    std::size_t v;
    std::uint32_t remaining;
    std::size_t mark;
  };
  std::vector<Frame> frames;
  auto open = [&]() -> bool {
    auto v = pick();
    if (!v) return false;
    frames.push_back({*v, domain[*v], trail.size()});
    return true;
  };
  if (!open()) {
    std::vector<std::uint8_t> out(color.begin(), color.end());
    return out;
  }
  while (!frames.empty()) {
    Frame &f = frames.back();
    if (color[f.v] >= 0) undo(f.mark, f.v);
    if (f.remaining == 0) {
      frames.pop_back();
      continue;
    }
    const int c = std::countr_zero(f.remaining);
    f.remaining &= f.remaining - 1;
    if (assign(f.v, c)) {
      if (!open()) {
        std::vector<std::uint8_t> out(n);
        for (std::size_t v = 0; v < n; ++v) out[v] = static_cast<std::uint8_t>(color[v]);
        return out;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Encodings
// ---------------------------------------------------------------------------

inline std::string color_var(const std::string &vertex, std::size_t alpha) { return vertex + "_" + std::to_string(alpha); }

/// Indicator variables <v>_<alpha>, one ExactlyOne per vertex, and per edge and
/// color the clause (not u_alpha or not v_alpha).
inline Bcs coloring_to_bcs(const ColoringInstance &inst) {
  if (inst.colors == 0) throw Error("coloring needs at least one color");
  Bcs b(Domain::Bool01);
  const auto &g = inst.graph;
  for (const auto &v : g.vertices()) {
    for (std::size_t a = 0; a < inst.colors; ++a) b.add_variable(color_var(v, a));
  }
  for (const auto &v : g.vertices()) {
    std::vector<std::string> group;
    for (std::size_t a = 0; a < inst.colors; ++a) group.push_back(color_var(v, a));
    b.add_exactly_one(group);
  }
  for (auto [u, v] : g.edges()) {
    for (std::size_t a = 0; a < inst.colors; ++a) {
      b.add_clause({"-" + color_var(g.name(u), a), "-" + color_var(g.name(v), a)});
    }
  }
  return b;
}

/// Bits of coloring_to_bcs(inst) for a vertex coloring.
inline std::vector<std::uint8_t> coloring_bits(const ColoringInstance &inst, const std::vector<std::uint8_t> &colors) {
  std::vector<std::uint8_t> bits(inst.graph.num_vertices() * inst.colors, 0);
  for (std::size_t v = 0; v < colors.size(); ++v) bits[v * inst.colors + colors[v]] = 1;
  return bits;
}

/// One ExactlyOne per subset over the universe variables.
inline Bcs ks_to_bcs(const std::vector<std::vector<std::string>> &sets, const std::vector<std::string> &universe) {
  Bcs b(Domain::Bool01);
  for (const auto &u : universe) b.add_variable(u);
  for (const auto &s : sets) {
    if (s.empty()) throw Error("Kochen-Specker subsets must be non-empty");
    for (const auto &x : s) {
      if (!b.find(x)) throw Error("subset element '" + x + "' is not in the universe");
    }
    b.add_exactly_one(s);
  }
  return b;
}

inline std::string game_x_var(const GameSpec &g, std::size_t s, std::size_t a) {
  return "x_" + g.questionsA.at(s) + "_" + g.answersA.at(s).at(a);
}
inline std::string game_y_var(const GameSpec &g, std::size_t t, std::size_t b) {
  return "y_" + g.questionsB.at(t) + "_" + g.answersB.at(t).at(b);
}

/// Variables x_<s>_<a> and y_<t>_<b>, ExactlyOne per question, and a
/// zero-product clause for every losing answer pair of a supported (s, t).
inline Bcs game_to_bcs(const GameSpec &g) {
  g.validate();
  Bcs b(Domain::Bool01);
  for (std::size_t s = 0; s < g.questionsA.size(); ++s) {
    for (std::size_t a = 0; a < g.answersA[s].size(); ++a) b.add_variable(game_x_var(g, s, a));
  }
  for (std::size_t t = 0; t < g.questionsB.size(); ++t) {
    for (std::size_t c = 0; c < g.answersB[t].size(); ++c) b.add_variable(game_y_var(g, t, c));
  }
  for (std::size_t s = 0; s < g.questionsA.size(); ++s) {
    std::vector<std::string> group;
    for (std::size_t a = 0; a < g.answersA[s].size(); ++a) group.push_back(game_x_var(g, s, a));
    b.add_exactly_one(group);
  }
  for (std::size_t t = 0; t < g.questionsB.size(); ++t) {
    std::vector<std::string> group;
    for (std::size_t c = 0; c < g.answersB[t].size(); ++c) group.push_back(game_y_var(g, t, c));
    b.add_exactly_one(group);
  }
  for (const auto &qp : g.pairs) {
    for (std::size_t a = 0; a < qp.win.size(); ++a) {
      for (std::size_t c = 0; c < qp.win[a].size(); ++c) {
        if (!qp.win[a][c]) b.add_clause({"-" + game_x_var(g, qp.s, a), "-" + game_y_var(g, qp.t, c)});
      }
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// Reduction traces
// ---------------------------------------------------------------------------

struct GadgetRecord {
  std::string kind;
  std::vector<std::string> attached; // existing objects the gadget is wired to
  std::vector<std::string> fresh;
};

struct ReductionTrace {
  std::string reduction;
  std::map<std::string, std::vector<std::string>> var_map;
  std::vector<GadgetRecord> gadgets;
  std::vector<std::string> fresh; // every fresh name, in allocation order
};

/// Hands out names that avoid everything reserved or handed out before.
class NameAllocator {
public:
  explicit NameAllocator(const std::vector<std::string> &reserved) : taken_(reserved.begin(), reserved.end()) {}

  std::string fresh(const std::string &base) {
    std::string name = base;
    for (std::size_t k = 1; taken_.count(name); ++k) name = base + "~" + std::to_string(k);
    taken_.insert(name);
    issued_.push_back(name);
    return name;
  }

  [[nodiscard]] const std::vector<std::string> &issued() const { return issued_; }

private:
  std::set<std::string> taken_;
  std::vector<std::string> issued_;
};

struct BcsReduction {
  Bcs target;
  ReductionTrace trace;
};

struct ColoringReduction {
  ColoringInstance target;
  ReductionTrace trace;
  /// Vertices [0, core_size) form the classical gadget graph; prism vertices follow.
  std::size_t core_size = 0;
};

namespace detail {

inline std::vector<const Clause *> clauses_of(const Bcs &b, const char *what, std::size_t max_arity) {
  std::vector<const Clause *> out;
  for (const auto &c : b.constraints()) {
    const auto *cl = std::get_if<Clause>(&c.kind);
    if (!cl) throw Error(std::string(what) + ": constraint " + std::to_string(c.id) + " is not a clause");
    if (cl->literals.size() > max_arity) {
      throw Error(std::string(what) + ": clause " + std::to_string(c.id) + " has arity " +
                  std::to_string(cl->literals.size()) + " > " + std::to_string(max_arity));
    }
    out.push_back(cl);
  }
  return out;
}

/// Clause over target names; "-" marks negation.
inline std::vector<std::string> literal_names(const Bcs &b, const Clause &c) {
  std::vector<std::string> out;
  for (const auto &l : c.literals) out.push_back((l.negated ? "-" : "") + b.name(l.var));
  return out;
}

inline Bcs copy_variables(const Bcs &src) {
  Bcs t(src.domain());
  for (const auto &n : src.names()) t.add_variable(n);
  return t;
}

inline ConstraintKind remap(const ConstraintKind &kind, const std::function<VarId(VarId)> &f) {
  return std::visit(
      [&](const auto &k) -> ConstraintKind {
        auto out = k;
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Clause>) {
          for (auto &l : out.literals) l.var = f(l.var);
        } else {
          for (auto &v : out.vars) v = f(v);
        }
        return out;
      },
      kind);
}

} // namespace detail

// ---------------------------------------------------------------------------
// 3-SAT -> 3-coloring
// ---------------------------------------------------------------------------

/// Base triangle F, T, B; literal vertices x and not_x joined to each other
/// and to B; per clause two stacked OR triangles whose output is joined to F
/// and B. Every non-adjacent pair inside a clause gadget (its internal
/// vertices, its literal vertices and F, T, B) then gets a triangular prism
/// a..f with the pair identified with (a, e).
inline ColoringReduction reduce_3sat_to_3coloring(const Bcs &b) {
  const auto clauses = detail::clauses_of(b, "3-SAT to 3-coloring", 3);
  ColoringReduction r;
  r.trace.reduction = "3sat-to-3coloring";
  r.target.colors = 3;
  Graph &g = r.target.graph;
  NameAllocator names(b.names());

  const std::string F = names.fresh("F"), T = names.fresh("T"), B = names.fresh("B");
  for (const auto &v : {F, T, B}) g.add_vertex(v);
  g.add_edge(F, T);
  g.add_edge(T, B);
  g.add_edge(F, B);
  r.trace.gadgets.push_back({"palette", {}, {F, T, B}});

  std::vector<std::string> pos(b.num_vars()), neg(b.num_vars());
  for (VarId v = 0; v < b.num_vars(); ++v) {
    pos[v] = b.name(v);
    neg[v] = names.fresh("not_" + b.name(v));
    g.add_vertex(pos[v]);
    g.add_vertex(neg[v]);
    g.add_edge(pos[v], neg[v]);
    g.add_edge(pos[v], B);
    g.add_edge(neg[v], B);
    r.trace.var_map[b.name(v)] = {pos[v], neg[v]};
    r.trace.gadgets.push_back({"variable", {b.name(v)}, {neg[v]}});
  }

  std::vector<std::vector<std::string>> clause_sets;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const auto &lits = clauses[i]->literals;
    if (lits.empty()) throw Error("3-SAT to 3-coloring: clause " + std::to_string(i) + " is empty");
    std::vector<std::string> l;
    for (const auto &x : lits) l.push_back(x.negated ? neg[x.var] : pos[x.var]);
    while (l.size() < 3) l.insert(l.begin(), l.front());
    const std::string c = "c" + std::to_string(i) + "_";
    std::vector<std::string> in;
    for (const char *s : {"p1", "q1", "r1", "p2", "q2", "o"}) {
      in.push_back(names.fresh(c + s));
      g.add_vertex(in.back());
    }
    const auto &p1 = in[0], &q1 = in[1], &r1 = in[2], &p2 = in[3], &q2 = in[4], &o = in[5];
    for (auto [u, v] : std::vector<std::pair<std::string, std::string>>{{l[0], p1}, {l[1], q1}, {p1, q1}, {p1, r1}, {q1, r1},
                                                                        {r1, p2}, {l[2], q2}, {p2, q2}, {p2, o}, {q2, o},
                                                                        {o, F}, {o, B}}) {
      g.add_edge(u, v);
    }
    std::vector<std::string> attached;
    for (const auto &x : l) {
      if (std::find(attached.begin(), attached.end(), x) == attached.end()) attached.push_back(x);
    }
    r.trace.gadgets.push_back({"or", attached, in});
    std::vector<std::string> members = in;
    members.insert(members.end(), attached.begin(), attached.end());
    members.insert(members.end(), {F, T, B});
    clause_sets.push_back(std::move(members));
  }
  r.core_size = g.num_vertices();

  std::set<std::pair<std::size_t, std::size_t>> done;
  std::size_t prisms = 0;
  for (const auto &members : clause_sets) {
    std::vector<std::size_t> ids;
    for (const auto &m : members) ids.push_back(g.id(m));
    std::sort(ids.begin(), ids.end());
    for (std::size_t x = 0; x < ids.size(); ++x) {
      for (std::size_t y = x + 1; y < ids.size(); ++y) {
        const std::size_t u = ids[x], v = ids[y];
        if (g.adjacent(u, v) || !done.emplace(u, v).second) continue;
        const std::string p = "pz" + std::to_string(prisms++) + "_";
        std::vector<std::string> fresh;
        for (const char *s : {"b", "c", "d", "f"}) {
          fresh.push_back(names.fresh(p + s));
          g.add_vertex(fresh.back());
        }
        const std::string &a = g.name(u), &e = g.name(v);
        const std::string &pb = fresh[0], &pc = fresh[1], &pd = fresh[2], &pf = fresh[3];
        for (auto [s, t] : std::vector<std::pair<std::string, std::string>>{
                 {a, pb}, {pb, pc}, {a, pc}, {pd, e}, {e, pf}, {pd, pf}, {a, pd}, {pb, e}, {pc, pf}}) {
          g.add_edge(s, t);
        }
        r.trace.gadgets.push_back({"prism", {a, e}, fresh});
      }
    }
  }
  r.trace.fresh = names.issued();
  return r;
}

/// The stand-alone prism: triangles abc and def with rungs ad, be, cf.
inline Graph prism_graph() {
  Graph g;
  for (const char *v : {"a", "b", "c", "d", "e", "f"}) g.add_vertex(v);
  for (auto [u, v] : std::vector<std::pair<const char *, const char *>>{
           {"a", "b"}, {"b", "c"}, {"a", "c"}, {"d", "e"}, {"e", "f"}, {"d", "f"}, {"a", "d"}, {"b", "e"}, {"c", "f"}}) {
    g.add_edge(u, v);
  }
  return g;
}

/// Completes a satisfying assignment of the source into a proper 3-coloring
/// of the reduction graph: F=0, T=1, B=2, literal vertices by truth value,
/// gadget vertices by search (core before prisms).
inline std::optional<std::vector<std::uint8_t>> complete_coloring(const Bcs &source, const ColoringReduction &red,
                                                                  const std::vector<std::uint8_t> &bits) {
  if (!source.satisfied_by(bits)) return std::nullopt;
  const Graph &g = red.target.graph;
  std::vector<int> fixed(g.num_vertices(), -1);
  const auto &palette = red.trace.gadgets.front().fresh;
  for (int c = 0; c < 3; ++c) fixed[g.id(palette[c])] = c;
  for (VarId v = 0; v < source.num_vars(); ++v) {
    const auto &m = red.trace.var_map.at(source.name(v));
    fixed[g.id(m[0])] = bits[v] ? 1 : 0;
    fixed[g.id(m[1])] = bits[v] ? 0 : 1;
  }
  std::vector<int> stage(g.num_vertices(), 1);
  for (std::size_t v = 0; v < red.core_size; ++v) stage[v] = 0;
  return color_graph(g, 3, fixed, stage);
}

// ---------------------------------------------------------------------------
// 3-SAT -> 1-in-3-SAT
// ---------------------------------------------------------------------------

/// Three-constraint commutativity gadget for (x, y) with fresh g1..g4:
/// ExactlyOne{x,g1,g4}, {y,g2,g4}, {g1,g2,g3}.
inline std::vector<std::string> attach_one_in_three_gadget(Bcs &t, NameAllocator &names, const std::string &x,
                                                           const std::string &y, const std::string &prefix) {
  std::vector<std::string> gv;
  for (int k = 1; k <= 4; ++k) {
    gv.push_back(names.fresh(prefix + std::to_string(k)));
    t.add_variable(gv.back());
  }
  t.add_exactly_one({x, gv[0], gv[3]});
  t.add_exactly_one({y, gv[1], gv[3]});
  t.add_exactly_one({gv[0], gv[1], gv[2]});
  return gv;
}

/// The gadget on its own, over variables x, y, u1..u4.
inline Bcs one_in_three_gadget() {
  Bcs b(Domain::Bool01);
  for (const char *n : {"x", "y", "u1", "u2", "u3", "u4"}) b.add_variable(n);
  b.add_exactly_one({"x", "u1", "u4"});
  b.add_exactly_one({"y", "u2", "u4"});
  b.add_exactly_one({"u1", "u2", "u3"});
  return b;
}

/// Per clause (x, y, z): fresh u1..u6 and ExactlyOne over {x,u1,u4},
/// {y,u2,u4}, {u1,u2,u3}, {u4,u5,u6}, {z,u5,zero}. `zero` is pinned false by
/// ExactlyOne{zero,one_a,one_b} and ExactlyOne{one_a,one_b}. Negative
/// literals use x' with ExactlyOne{x,x'}. Short clauses repeat their first
/// literal. The gadget above is attached to (x,z) and (y,z).
inline BcsReduction reduce_3sat_to_1in3(const Bcs &b) {
  const auto clauses = detail::clauses_of(b, "3-SAT to 1-in-3-SAT", 3);
  BcsReduction r;
  r.trace.reduction = "3sat-to-1in3";
  Bcs &t = r.target;
  t = detail::copy_variables(b);
  t.set_domain(Domain::Bool01);
  NameAllocator names(b.names());
  for (const auto &n : b.names()) r.trace.var_map[n] = {n};

  std::string zero;
  if (!clauses.empty()) {
    zero = names.fresh("zero");
    const std::string one_a = names.fresh("one_a"), one_b = names.fresh("one_b");
    for (const auto &n : {zero, one_a, one_b}) t.add_variable(n);
    t.add_exactly_one({zero, one_a, one_b});
    t.add_exactly_one({one_a, one_b});
    r.trace.gadgets.push_back({"zero", {}, {zero, one_a, one_b}});
  }
  std::map<VarId, std::string> negation;
  auto literal = [&](const Literal &l) -> std::string {
    if (!l.negated) return b.name(l.var);
    auto it = negation.find(l.var);
    if (it != negation.end()) return it->second;
    const std::string x = b.name(l.var);
    const std::string nx = names.fresh(x + "'");
    t.add_variable(nx);
    t.add_exactly_one({x, nx});
    negation.emplace(l.var, nx);
    r.trace.var_map[x].push_back(nx);
    r.trace.gadgets.push_back({"negation", {x}, {nx}});
    return nx;
  };

  std::set<std::pair<std::string, std::string>> linked;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const auto &lits = clauses[i]->literals;
    if (lits.empty()) {
      t.add_constraint(ExactlyOne{});
      r.trace.gadgets.push_back({"empty-clause", {}, {}});
      continue;
    }
    std::vector<std::string> l;
    for (const auto &x : lits) l.push_back(literal(x));
    while (l.size() < 3) l.insert(l.begin(), l.front());
    const std::string c = "c" + std::to_string(i) + "_u";
    std::vector<std::string> u;
    for (int k = 1; k <= 6; ++k) {
      u.push_back(names.fresh(c + std::to_string(k)));
      t.add_variable(u.back());
    }
    t.add_exactly_one({l[0], u[0], u[3]});
    t.add_exactly_one({l[1], u[1], u[3]});
    t.add_exactly_one({u[0], u[1], u[2]});
    t.add_exactly_one({u[3], u[4], u[5]});
    t.add_exactly_one({l[2], u[4], zero});
    r.trace.gadgets.push_back({"clause", l, u});
    for (std::size_t k = 0; k < 2; ++k) {
      if (l[k] == l[2]) continue;
      auto key = std::minmax(l[k], l[2]);
      if (!linked.insert(key).second) continue;
      auto gv = attach_one_in_three_gadget(t, names, l[k], l[2], "c" + std::to_string(i) + "_g" + std::to_string(k) + "_");
      r.trace.gadgets.push_back({"commutativity", {l[k], l[2]}, gv});
    }
  }
  r.trace.fresh = names.issued();
  return r;
}

// ---------------------------------------------------------------------------
// k-SAT -> 3-SAT, hardening, occurrence reduction
// ---------------------------------------------------------------------------

namespace detail {

class CoOccurrence {
public:
  void add(const std::vector<std::string> &vars) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      for (std::size_t j = i + 1; j < vars.size(); ++j) pairs_.insert(std::minmax(vars[i], vars[j]));
    }
  }
  [[nodiscard]] bool has(const std::string &a, const std::string &b) const { return pairs_.count(std::minmax(a, b)) > 0; }

private:
  std::set<std::pair<std::string, std::string>> pairs_;
};

inline std::string strip(const std::string &lit) { return !lit.empty() && lit.front() == '-' ? lit.substr(1) : lit; }

inline std::vector<std::string> vars_of(const std::vector<std::string> &lits) {
  std::vector<std::string> out;
  for (const auto &l : lits) out.push_back(strip(l));
  return out;
}

} // namespace detail

/// Chain split (l1 l2 y1)(-y1 l3 y2)...(-y_{k-3} l_{k-1} l_k); then for each
/// pair among the clause's variables and the y's that shares no produced
/// clause, a clause (x or y or z) with z fresh.
inline BcsReduction reduce_ksat_to_3sat(const Bcs &b) {
  const auto clauses = detail::clauses_of(b, "k-SAT to 3-SAT", kMaxArity);
  BcsReduction r;
  r.trace.reduction = "ksat-to-3sat";
  Bcs &t = r.target;
  t = detail::copy_variables(b);
  t.set_domain(Domain::Bool01);
  NameAllocator names(b.names());
  for (const auto &n : b.names()) r.trace.var_map[n] = {n};
  detail::CoOccurrence co;
  auto emit = [&](const std::vector<std::string> &lits) {
    t.add_clause(lits);
    co.add(detail::vars_of(lits));
  };
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    auto lits = detail::literal_names(b, *clauses[i]);
    if (lits.size() <= 3) {
      emit(lits);
      continue;
    }
    const std::size_t k = lits.size();
    std::vector<std::string> y;
    for (std::size_t j = 1; j + 3 <= k; ++j) {
      y.push_back(names.fresh("c" + std::to_string(i) + "_y" + std::to_string(j)));
      t.add_variable(y.back());
    }
    emit({lits[0], lits[1], y[0]});
    for (std::size_t j = 1; j + 3 < k; ++j) emit({"-" + y[j - 1], lits[j + 1], y[j]});
    emit({"-" + y.back(), lits[k - 2], lits[k - 1]});
    r.trace.gadgets.push_back({"chain", lits, y});

    auto group = detail::vars_of(lits);
    group.insert(group.end(), y.begin(), y.end());
    std::size_t z = 0;
    for (std::size_t a = 0; a < group.size(); ++a) {
      for (std::size_t c = a + 1; c < group.size(); ++c) {
        if (co.has(group[a], group[c])) continue;
        const std::string zn = names.fresh("c" + std::to_string(i) + "_z" + std::to_string(++z));
        t.add_variable(zn);
        emit({group[a], group[c], zn});
        r.trace.gadgets.push_back({"pair-clause", {group[a], group[c]}, {zn}});
      }
    }
  }
  r.trace.fresh = names.issued();
  return r;
}

/// For every pair of source variables that shares no clause, adds
/// (x_i or x_j or y) with y fresh.
inline BcsReduction harden_3sat(const Bcs &b) {
  const auto clauses = detail::clauses_of(b, "harden", 3);
  BcsReduction r;
  r.trace.reduction = "harden";
  Bcs &t = r.target;
  t = detail::copy_variables(b);
  t.set_domain(Domain::Bool01);
  NameAllocator names(b.names());
  for (const auto &n : b.names()) r.trace.var_map[n] = {n};
  detail::CoOccurrence co;
  for (const auto *c : clauses) {
    auto lits = detail::literal_names(b, *c);
    t.add_clause(lits);
    co.add(detail::vars_of(lits));
  }
  for (VarId i = 0; i < b.num_vars(); ++i) {
    for (VarId j = i + 1; j < b.num_vars(); ++j) {
      if (co.has(b.name(i), b.name(j))) continue;
      const std::string y = names.fresh("h_" + b.name(i) + "_" + b.name(j));
      t.add_variable(y);
      t.add_clause({b.name(i), b.name(j), y});
      r.trace.gadgets.push_back({"pair-clause", {b.name(i), b.name(j)}, {y}});
    }
  }
  r.trace.fresh = names.issued();
  return r;
}

/// Replaces each variable occurring in more than `limit` constraints by the
/// leaves of a full binary tree (heap layout, root keeps the original name)
/// whose edges are equality constraints z_j xor z_k = 0.
inline BcsReduction occurrence_reduce(const Bcs &b, std::size_t limit = 3) {
  if (limit < 3) throw Error("occurrence limit must be at least 3");
  BcsReduction r;
  r.trace.reduction = "occurrence-reduce";
  Bcs &t = r.target;
  t = detail::copy_variables(b);
  NameAllocator names(b.names());
  const auto occ = b.occurrences();

  std::vector<std::vector<VarId>> leaves(b.num_vars());
  std::vector<std::vector<std::pair<VarId, VarId>>> tree_edges(b.num_vars());
  for (VarId v = 0; v < b.num_vars(); ++v) {
    r.trace.var_map[b.name(v)] = {b.name(v)};
    if (occ[v] <= limit) continue;
    const std::size_t L = occ[v];
    std::vector<VarId> node(2 * L - 1);
    node[0] = v;
    std::vector<std::string> fresh;
    for (std::size_t k = 1; k < node.size(); ++k) {
      fresh.push_back(names.fresh(b.name(v) + "_t" + std::to_string(k)));
      node[k] = t.add_variable(fresh.back());
      r.trace.var_map[b.name(v)].push_back(fresh.back());
    }
    for (std::size_t k = 1; k < node.size(); ++k) tree_edges[v].emplace_back(node[(k - 1) / 2], node[k]);
    leaves[v].assign(node.begin() + static_cast<std::ptrdiff_t>(L - 1), node.end());
    r.trace.gadgets.push_back({"tree", {b.name(v)}, fresh});
  }
  std::vector<std::size_t> used(b.num_vars(), 0);
  for (const auto &c : b.constraints()) {
    t.add_constraint(detail::remap(c.kind, [&](VarId v) { return leaves[v].empty() ? v : leaves[v][used[v]++]; }));
  }
  for (VarId v = 0; v < b.num_vars(); ++v) {
    for (auto [p, q] : tree_edges[v]) t.add_constraint(Parity{{p, q}, false});
  }
  r.trace.fresh = names.issued();
  return r;
}

} // namespace bcslab
