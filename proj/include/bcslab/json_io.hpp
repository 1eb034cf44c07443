#pragma once

#include "bcslab/assignments.hpp"
#include "bcslab/game.hpp"
#include "bcslab/game_sim.hpp"
#include "bcslab/reductions.hpp"
#include "bcslab/rewrite.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace bcslab::json_io {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Matrices and assignments
// ---------------------------------------------------------------------------

inline Json matrix_to_json(const Matrix &m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const Json &j, Eigen::Index dim) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim) throw Error("matrix must have " + std::to_string(dim) + " rows");
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto &row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) throw Error("matrix rows must have " + std::to_string(dim) + " entries");
    for (Eigen::Index k = 0; k < dim; ++k) {
      const auto &e = row[static_cast<std::size_t>(k)];
      if (e.is_number()) {
        m(i, k) = {e.get<double>(), 0.0};
      } else if (e.is_array() && e.size() == 2) {
        m(i, k) = {e[0].get<double>(), e[1].get<double>()};
      } else {
        throw Error("matrix entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

inline Json assignment_to_json(const OperatorAssignment &a) {
  Json j;
  if (a.is_symbolic()) {
    const auto &s = a.as_symbolic();
    j["rep"] = "pauli";
    j["n"] = s.num_qubits;
    Json ops = Json::object();
    for (const auto &[name, w] : s.ops) ops[name] = w.str();
    j["ops"] = std::move(ops);
  } else {
    const auto &d = a.as_dense();
    j["rep"] = "dense";
    j["dim"] = d.dim;
    Json ops = Json::object();
    for (const auto &[name, m] : d.ops) ops[name] = matrix_to_json(m);
    j["ops"] = std::move(ops);
  }
  return j;
}

/// Orders `ops` by the variable order of `b` when given.
inline Json assignment_to_json(const OperatorAssignment &a, const Bcs &b) {
  Json j = assignment_to_json(a);
  Json ordered = Json::object();
  for (const auto &n : b.names()) {
    if (j["ops"].contains(n)) ordered[n] = j["ops"][n];
  }
  for (auto it = j["ops"].begin(); it != j["ops"].end(); ++it) {
    if (!ordered.contains(it.key())) ordered[it.key()] = it.value();
  }
  j["ops"] = std::move(ordered);
  return j;
}

inline OperatorAssignment assignment_from_json(const Json &j) {
  if (!j.is_object() || !j.contains("rep") || !j.contains("ops")) throw Error("assignment JSON needs 'rep' and 'ops'");
  const std::string rep = j.at("rep").get<std::string>();
  if (rep == "pauli") {
    const auto n = j.at("n").get<std::size_t>();
    std::map<std::string, PauliWord> ops;
    for (auto it = j.at("ops").begin(); it != j.at("ops").end(); ++it) ops.emplace(it.key(), PauliWord::parse(it.value().get<std::string>()));
    return OperatorAssignment::symbolic(n, std::move(ops));
  }
  if (rep == "dense") {
    const auto dim = j.at("dim").get<Eigen::Index>();
    std::map<std::string, Matrix> ops;
    for (auto it = j.at("ops").begin(); it != j.at("ops").end(); ++it) ops.emplace(it.key(), matrix_from_json(it.value(), dim));
    return OperatorAssignment::dense(dim, std::move(ops));
  }
  throw Error("unknown assignment representation '" + rep + "'");
}

inline Json report_to_json(const Bcs &b, const VerificationReport &r) {
  Json j;
  j["pass"] = r.pass;
  j["exact"] = r.exact;
  j["tolerance"] = r.tolerance;
  j["max_residual"] = r.max_residual();
  Json a = Json::array(), bb = Json::array(), c = Json::array();
  for (const auto &[id, v] : r.condA) a.push_back({{"constraint", id}, {"residual", v}});
  for (const auto &[id, v] : r.condB) bb.push_back({{"variable", b.name(id)}, {"residual", v}});
  for (const auto &[p, v] : r.condC) c.push_back({{"pair", {b.name(p.first), b.name(p.second)}}, {"residual", v}});
  j["constraints"] = std::move(a);
  j["spectra"] = std::move(bb);
  j["commutation"] = std::move(c);
  return j;
}

// ---------------------------------------------------------------------------
// Games and strategies
// ---------------------------------------------------------------------------

inline Json game_to_json(const GameSpec &g) {
  Json j;
  j["questionsA"] = g.questionsA;
  j["questionsB"] = g.questionsB;
  j["answersA"] = g.answersA;
  j["answersB"] = g.answersB;
  Json pairs = Json::array();
  for (const auto &qp : g.pairs) {
    Json win = Json::array();
    for (const auto &row : qp.win) {
      Json r = Json::array();
      for (auto v : row) r.push_back(static_cast<int>(v));
      win.push_back(std::move(r));
    }
    pairs.push_back({{"s", g.questionsA[qp.s]}, {"t", g.questionsB[qp.t]}, {"prob", qp.prob.get_str()}, {"win", std::move(win)}});
  }
  j["pairs"] = std::move(pairs);
  return j;
}

namespace detail {
inline std::size_t label_index(const std::vector<std::string> &labels, const std::string &l, const char *what) {
  auto it = std::find(labels.begin(), labels.end(), l);
  if (it == labels.end()) throw Error(std::string("unknown ") + what + " '" + l + "'");
  return static_cast<std::size_t>(it - labels.begin());
}
} // namespace detail

inline GameSpec game_from_json(const Json &j) {
  GameSpec g;
  g.questionsA = j.at("questionsA").get<std::vector<std::string>>();
  g.questionsB = j.at("questionsB").get<std::vector<std::string>>();
  g.answersA = j.at("answersA").get<std::vector<std::vector<std::string>>>();
  g.answersB = j.at("answersB").get<std::vector<std::vector<std::string>>>();
  for (const auto &p : j.at("pairs")) {
    GameSpec::QuestionPair qp;
    qp.s = detail::label_index(g.questionsA, p.at("s").get<std::string>(), "Alice question");
    qp.t = detail::label_index(g.questionsB, p.at("t").get<std::string>(), "Bob question");
    qp.prob = parse_rational(p.at("prob").get<std::string>());
    for (const auto &row : p.at("win")) {
      std::vector<std::uint8_t> r;
      for (const auto &v : row) r.push_back(static_cast<std::uint8_t>(v.get<int>()));
      qp.win.push_back(std::move(r));
    }
    g.pairs.push_back(std::move(qp));
  }
  std::sort(g.pairs.begin(), g.pairs.end(), [](const auto &a, const auto &b) { return std::tie(a.s, a.t) < std::tie(b.s, b.t); });
  g.validate();
  return g;
}

inline Json strategy_to_json(const GameSpec &g, const Strategy &s) {
  Json j;
  j["dim"] = s.dim;
  j["state"] = matrix_to_json(s.state);
  auto side = [&](const std::vector<Pvm> &pvms, const std::vector<std::string> &qs, const std::vector<std::vector<std::string>> &as) {
    Json out = Json::object();
    for (std::size_t q = 0; q < pvms.size(); ++q) {
      Json list = Json::array();
      for (const auto &[a, p] : pvms[q]) list.push_back({{"answer", as[q][a]}, {"projector", matrix_to_json(p)}});
      out[qs[q]] = std::move(list);
    }
    return out;
  };
  j["alice"] = side(s.alice, g.questionsA, g.answersA);
  j["bob"] = side(s.bob, g.questionsB, g.answersB);
  return j;
}

inline Strategy strategy_from_json(const Json &j, const GameSpec &g) {
  Strategy s;
  s.dim = j.at("dim").get<Eigen::Index>();
  if (s.dim < 1) throw Error("strategy dimension must be positive");
  s.state = j.contains("state") ? matrix_from_json(j.at("state"), s.dim) : maximally_entangled(s.dim);
  auto side = [&](const Json &js, const std::vector<std::string> &qs, const std::vector<std::vector<std::string>> &as,
                  const char *who) {
    std::vector<Pvm> out(qs.size());
    for (auto it = js.begin(); it != js.end(); ++it) {
      const std::size_t q = detail::label_index(qs, it.key(), who);
      for (const auto &e : it.value()) {
        out[q].emplace_back(detail::label_index(as[q], e.at("answer").get<std::string>(), "answer"),
                            matrix_from_json(e.at("projector"), s.dim));
      }
    }
    for (std::size_t q = 0; q < qs.size(); ++q) {
      if (out[q].empty()) throw Error(std::string(who) + " '" + qs[q] + "' has no measurement");
    }
    return out;
  };
  s.alice = side(j.at("alice"), g.questionsA, g.answersA, "Alice question");
  s.bob = side(j.at("bob"), g.questionsB, g.answersB, "Bob question");
  return s;
}

// ---------------------------------------------------------------------------
// Traces and certificates
// ---------------------------------------------------------------------------

inline Json trace_to_json(const ReductionTrace &t) {
  Json j;
  j["reduction"] = t.reduction;
  Json vm = Json::object();
  for (const auto &[k, v] : t.var_map) vm[k] = v;
  j["var_map"] = std::move(vm);
  Json gs = Json::array();
  for (const auto &g : t.gadgets) gs.push_back({{"kind", g.kind}, {"attached", g.attached}, {"fresh", g.fresh}});
  j["gadgets"] = std::move(gs);
  j["fresh"] = t.fresh;
  return j;
}

inline Json combination_to_json(const std::vector<ProofTerm> &c, const std::vector<std::string> &names) {
  Json out = Json::array();
  for (const auto &t : c) {
    out.push_back({{"left", t.left.empty() ? "" : NcPoly::word_text(t.left, names)},
                   {"relation", t.relation},
                   {"right", t.right.empty() ? "" : NcPoly::word_text(t.right, names)},
                   {"coeff", t.coeff.str()}});
  }
  return out;
}

inline Json certificate_to_json(const Certificate &c) {
  Json j;
  j["status"] = "certified";
  j["degree"] = c.degree;
  j["variables"] = c.names;
  Json rel = Json::array();
  for (const auto &r : c.relations) rel.push_back(r.to_text(c.names));
  j["relations"] = std::move(rel);
  Json lem = Json::array();
  for (const auto &l : c.lemmas) lem.push_back({{"poly", l.target.to_text(c.names)}, {"combination", combination_to_json(l.combination, c.names)}});
  j["lemmas"] = std::move(lem);
  Json pr = Json::array();
  for (const auto &p : c.proofs) pr.push_back({{"target", p.target.to_text(c.names)}, {"combination", combination_to_json(p.combination, c.names)}});
  j["proofs"] = std::move(pr);
  return j;
}

namespace detail {
inline Word word_from_text(const std::string &s, const std::vector<std::string> &names) {
  if (s.empty()) return {};
  NcPoly p = NcPoly::parse_text("(1) " + s, names);
  return p.leading_word();
}

inline std::vector<ProofTerm> combination_from_json(const Json &j, const std::vector<std::string> &names) {
  std::vector<ProofTerm> out;
  for (const auto &t : j) {
    out.push_back({word_from_text(t.at("left").get<std::string>(), names), t.at("relation").get<std::size_t>(),
                   word_from_text(t.at("right").get<std::string>(), names),
                   GaussianRational::parse(t.at("coeff").get<std::string>())});
  }
  return out;
}
} // namespace detail

inline Certificate certificate_from_json(const Json &j) {
  Certificate c;
  c.degree = j.at("degree").get<std::size_t>();
  c.names = j.at("variables").get<std::vector<std::string>>();
  for (const auto &r : j.at("relations")) c.relations.push_back(NcPoly::parse_text(r.get<std::string>(), c.names));
  for (const auto &l : j.at("lemmas")) {
    c.lemmas.push_back({NcPoly::parse_text(l.at("poly").get<std::string>(), c.names), detail::combination_from_json(l.at("combination"), c.names)});
  }
  for (const auto &p : j.at("proofs")) {
    c.proofs.push_back({NcPoly::parse_text(p.at("target").get<std::string>(), c.names), detail::combination_from_json(p.at("combination"), c.names)});
  }
  return c;
}

inline Json inconclusive_to_json(const GadgetInconclusive &inc, const std::vector<std::string> &names) {
  Json j;
  j["status"] = "inconclusive";
  j["degree"] = inc.degree;
  Json u = Json::array();
  for (const auto &p : inc.unresolved) u.push_back(p.to_text(names));
  j["unresolved"] = std::move(u);
  return j;
}

} // namespace bcslab::json_io
