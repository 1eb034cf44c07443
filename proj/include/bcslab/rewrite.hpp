#pragma once

#include "bcslab/bcs.hpp"
#include "bcslab/ncpoly.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

namespace bcslab {

/// One summand coeff * left * relations[relation] * right of a certificate.
struct ProofTerm {
  Word left;
  std::size_t relation = 0;
  Word right;
  GaussianRational coeff;
};

/// Ideal-membership certificate: target = sum of coeff * left * r_i * right
/// over the input relations r_i.
struct ProofTrace {
  NcPoly target;
  std::vector<ProofTerm> combination;
};

/// Evaluates a combination against the relations it refers to.
inline NcPoly replay(const std::vector<ProofTerm> &combination, const std::vector<NcPoly> &relations) {
  NcPoly out;
  for (const auto &t : combination) {
    NcPoly part = relations.at(t.relation).sandwich(t.left, t.right);
    part *= t.coeff;
    out += part;
  }
  return out;
}

inline bool replays_to_target(const ProofTrace &trace, const std::vector<NcPoly> &relations) {
  return replay(trace.combination, relations) == trace.target;
}

namespace detail {

/// Linear combination of sandwiched sources (l, id, r) with merged duplicates.
class Combination {
public:
  using Key = std::tuple<Word, std::size_t, Word>;

  static Combination single(std::size_t id) {
    Combination c;
    c.add(Key{Word{}, id, Word{}}, GaussianRational(1));
    return c;
  }

  void add(const Key &k, const GaussianRational &coeff) {
    if (coeff.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(k, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  /// this += coeff * left * other * right
  void add_sandwich(const Combination &other, const Word &left, const Word &right, const GaussianRational &coeff) {
    for (const auto &[k, c] : other.terms_) {
      add(Key{concat(left, std::get<0>(k)), std::get<1>(k), concat(std::get<2>(k), right)}, c * coeff);
    }
  }

  void scale(const GaussianRational &s) {
    for (auto &[k, c] : terms_) c *= s;
  }

  [[nodiscard]] const std::map<Key, GaussianRational> &raw() const { return terms_; }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }

private:
  std::map<Key, GaussianRational> terms_;
};

} // namespace detail

/// Oriented rules lead -> rest over deglex (first declared variable largest).
///
/// Provenance is tracked lazily: sources 0..m-1 are the input relations and
/// every rule (and every rewritten version of a rule) gets a new source id
/// whose derivation refers only to smaller ids. Expansion back to the inputs
/// happens on demand in certificate().
class RewriteSystem {
public:
  struct Rule {
    Word lead;
    NcPoly rest;
    std::size_t source = 0;
    bool alive = true;

    [[nodiscard]] NcPoly poly() const { return NcPoly::monomial(lead) - rest; }
  };

  struct Stats {
    std::size_t obstructions_considered = 0;
    std::size_t obstructions_skipped_by_degree = 0;
    std::size_t reductions_to_zero = 0;
    std::size_t rules_added = 0;
  };

  RewriteSystem() = default;
  RewriteSystem(std::vector<NcPoly> relations, std::size_t degree_bound)
      : relations_(std::move(relations)), degree_bound_(degree_bound), derivations_(relations_.size()),
        source_polys_(relations_) {}

  [[nodiscard]] const std::vector<NcPoly> &relations() const { return relations_; }
  [[nodiscard]] std::size_t degree_bound() const { return degree_bound_; }
  [[nodiscard]] const Stats &stats() const { return stats_; }
  /// True when no obstruction was dropped by the degree cap, i.e. the rules
  /// form a Groebner basis of the full ideal.
  [[nodiscard]] bool is_complete() const { return stats_.obstructions_skipped_by_degree == 0; }

  [[nodiscard]] std::vector<const Rule *> rules() const {
    std::vector<const Rule *> out;
    for (const auto &r : rules_) {
      if (r.alive) out.push_back(&r);
    }
    return out;
  }

  /// Fully reduces `p`. When `steps` is given, accumulates p - nf(p) into it
  /// as a combination of sources.
  NcPoly normal_form(const NcPoly &p, detail::Combination *steps = nullptr) const {
    NcPoly work = p;
    NcPoly done;
    while (!work.is_zero()) {
      auto it = work.terms().begin();
      const Word w = it->first;
      const GaussianRational c = it->second;
      auto hit = find_reducer(w);
      if (!hit) {
        done.add_term(w, c);
        work.add_term(w, -c);
        continue;
      }
      const auto [k, pos] = *hit;
      const Rule &r = rules_[k];
      Word left(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(pos));
      Word right(w.begin() + static_cast<std::ptrdiff_t>(pos + r.lead.size()), w.end());
      work.add_term(w, -c);
      NcPoly repl = r.rest.sandwich(left, right);
      repl *= c;
      work += repl;
      if (steps) steps->add(detail::Combination::Key{std::move(left), r.source, std::move(right)}, c);
    }
    return done;
  }

  /// Rewrites a combination of sources as a combination of input relations.
  [[nodiscard]] std::vector<ProofTerm> certificate(const detail::Combination &c) const;

  /// Compact form of certificate() for several combinations at once: the
  /// derived rules they depend on are returned as shared lemmas instead of
  /// being expanded. Index i < m names input relation i, m + j names lemma j,
  /// and a lemma only refers to inputs and earlier lemmas.
  struct Structured {
    std::vector<ProofTrace> lemmas;
    std::vector<std::vector<ProofTerm>> combinations;
  };

  [[nodiscard]] Structured structured_certificate(const std::vector<detail::Combination> &cs) const {
    const std::size_t m = relations_.size();
    std::set<std::size_t> needed;
    std::vector<std::size_t> stack;
    auto visit = [&](const detail::Combination &comb) {
      for (const auto &[k, v] : comb.raw()) {
        const std::size_t id = std::get<1>(k);
        if (id >= m && needed.insert(id).second) stack.push_back(id);
      }
    };
    for (const auto &c : cs) visit(c);
    while (!stack.empty()) {
      std::size_t id = stack.back();
      stack.pop_back();
      visit(derivations_[id]);
    }
    std::map<std::size_t, std::size_t> renumber;
    for (std::size_t id : needed) renumber.emplace(id, m + renumber.size());
    auto relabel = [&](const detail::Combination &comb) {
      std::vector<ProofTerm> out;
      for (const auto &[k, v] : comb.raw()) {
        const std::size_t id = std::get<1>(k);
        out.push_back({std::get<0>(k), id < m ? id : renumber.at(id), std::get<2>(k), v});
      }
      return out;
    };
    Structured out;
    for (std::size_t id : needed) out.lemmas.push_back({source_polys_[id], relabel(derivations_[id])});
    for (const auto &c : cs) out.combinations.push_back(relabel(c));
    return out;
  }

  /// Runs the capped Buchberger-Mora completion on the stored relations.
  void complete() {
    for (std::size_t i = 0; i < relations_.size(); ++i) {
      if (relations_[i].is_zero()) continue;
      if (relations_[i].degree() > degree_bound_) {
        throw Error("relation degree " + std::to_string(relations_[i].degree()) + " exceeds the degree cap " +
                    std::to_string(degree_bound_));
      }
      pending_.push_back({relations_[i], detail::Combination::single(i)});
    }
    drain_pending();
    while (!obstructions_.empty()) {
      Obstruction ob = obstructions_.top();
      obstructions_.pop();
      if (!rules_[ob.i].alive || !rules_[ob.j].alive) continue;
      ++stats_.obstructions_considered;
      const Rule &ri = rules_[ob.i];
      const Rule &rj = rules_[ob.j];
      // lead_i = a.o, lead_j = o.b:  poly_i * b - a * poly_j = a * rest_j - rest_i * b
      Word a(ri.lead.begin(), ri.lead.end() - static_cast<std::ptrdiff_t>(ob.overlap));
      Word b(rj.lead.begin() + static_cast<std::ptrdiff_t>(ob.overlap), rj.lead.end());
      NcPoly s = rj.rest.sandwich(a, {}) - ri.rest.sandwich({}, b);
      detail::Combination cert;
      cert.add({Word{}, ri.source, b}, GaussianRational(1));
      cert.add({a, rj.source, Word{}}, GaussianRational(-1));
      pending_.push_back({std::move(s), std::move(cert)});
      drain_pending();
    }
    interreduce_tails();
  }

private:
  struct Pending {
    NcPoly poly;
    detail::Combination cert; // poly in terms of sources
  };

  struct Obstruction {
    std::size_t degree;
    std::size_t serial;
    std::size_t i;
    std::size_t j;
    std::size_t overlap;
    bool operator<(const Obstruction &o) const {
      // min-heap on (degree, serial)
      return std::tie(degree, serial) > std::tie(o.degree, o.serial);
    }
  };

  [[nodiscard]] std::optional<std::pair<std::size_t, std::size_t>> find_reducer(const Word &w) const {
    if (unit_rule_) return std::make_pair(*unit_rule_, std::size_t{0});
    for (std::size_t pos = 0; pos < w.size(); ++pos) {
      if (w[pos] >= by_first_.size()) continue;
      for (std::size_t k : by_first_[w[pos]]) {
        const Rule &r = rules_[k];
        if (!r.alive || pos + r.lead.size() > w.size()) continue;
        if (std::equal(r.lead.begin(), r.lead.end(), w.begin() + static_cast<std::ptrdiff_t>(pos))) {
          return std::make_pair(k, pos);
        }
      }
    }
    return std::nullopt;
  }

  static bool contains_factor(const Word &w, const Word &f) {
    if (f.size() > w.size()) return false;
    return std::search(w.begin(), w.end(), f.begin(), f.end()) != w.end();
  }

  std::size_t new_source(detail::Combination derivation, NcPoly poly) {
    derivations_.push_back(std::move(derivation));
    source_polys_.push_back(std::move(poly));
    return derivations_.size() - 1;
  }

  void drain_pending() {
    while (!pending_.empty()) {
      Pending item = std::move(pending_.back());
      pending_.pop_back();
      detail::Combination steps;
      NcPoly h = normal_form(item.poly, &steps);
      if (h.is_zero()) {
        ++stats_.reductions_to_zero;
        continue;
      }
      // h = poly - steps
      detail::Combination cert = std::move(item.cert);
      cert.add_sandwich(steps, {}, {}, GaussianRational(-1));
      const GaussianRational inv = GaussianRational(1) / h.leading_coeff();
      h *= inv;
      cert.scale(inv);
      NcPoly hp = h;
      add_rule(std::move(h), new_source(std::move(cert), std::move(hp)));
    }
  }

  void add_rule(NcPoly h, std::size_t source) {
    Rule r;
    r.lead = h.leading_word();
    h.add_term(r.lead, GaussianRational(-1));
    r.rest = -h;
    r.source = source;
    const std::size_t idx = rules_.size();
    if (r.lead.empty()) {
      // 1 lies in the ideal: the single rule 1 -> 0 reduces everything
      for (auto &old : rules_) old.alive = false;
      pending_.clear();
      obstructions_ = {};
      rules_.push_back(std::move(r));
      unit_rule_ = idx;
      ++stats_.rules_added;
      return;
    }
    // rules whose lead contains the new lead are no longer reduced: requeue them
    for (std::size_t k = 0; k < rules_.size(); ++k) {
      if (rules_[k].alive && contains_factor(rules_[k].lead, r.lead)) {
        rules_[k].alive = false;
        pending_.push_back({rules_[k].poly(), detail::Combination::single(rules_[k].source)});
      }
    }
    const std::uint32_t first = r.lead.front();
    if (by_first_.size() <= first) by_first_.resize(first + 1);
    by_first_[first].push_back(idx);
    rules_.push_back(std::move(r));
    ++stats_.rules_added;
    for (std::size_t k = 0; k <= idx; ++k) {
      if (!rules_[k].alive) continue;
      enqueue_overlaps(idx, k);
      if (k != idx) enqueue_overlaps(k, idx);
    }
  }

  /// Proper overlaps: a proper suffix of lead_i equals a proper prefix of lead_j.
  void enqueue_overlaps(std::size_t i, std::size_t j) {
    const Word &u = rules_[i].lead;
    const Word &v = rules_[j].lead;
    const std::size_t maxo = std::min(u.size(), v.size());
    for (std::size_t o = 1; o < maxo; ++o) {
      if (!std::equal(u.end() - static_cast<std::ptrdiff_t>(o), u.end(), v.begin())) continue;
      const std::size_t deg = u.size() + v.size() - o;
      if (deg > degree_bound_) {
        ++stats_.obstructions_skipped_by_degree;
        continue;
      }
      obstructions_.push({deg, serial_++, i, j, o});
    }
  }

  void interreduce_tails() {
    for (auto &r : rules_) {
      if (!r.alive) continue;
      detail::Combination steps;
      NcPoly nf = normal_form(r.rest, &steps);
      if (steps.size() == 0) continue;
      // lead - nf = (lead - rest) + (rest - nf)
      steps.add({Word{}, r.source, Word{}}, GaussianRational(1));
      r.rest = std::move(nf);
      r.source = new_source(std::move(steps), r.poly());
    }
  }

  std::vector<NcPoly> relations_;
  std::size_t degree_bound_ = 8;
  std::vector<detail::Combination> derivations_;
  std::vector<NcPoly> source_polys_;
  std::vector<Rule> rules_;
  std::vector<std::vector<std::size_t>> by_first_;
  std::vector<Pending> pending_;
  std::priority_queue<Obstruction> obstructions_;
  std::size_t serial_ = 0;
  std::optional<std::size_t> unit_rule_;
  Stats stats_;
};

inline constexpr std::size_t kDefaultDegreeCap = 8;

/// Default degree cap, overridable through BCSLAB_DEGREE_CAP.
inline std::size_t default_degree_cap() {
  if (const char *env = std::getenv("BCSLAB_DEGREE_CAP")) {
    char *end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultDegreeCap;
}

inline RewriteSystem complete(std::vector<NcPoly> relations, std::size_t degree_bound) {
  RewriteSystem s(std::move(relations), degree_bound);
  s.complete();
  return s;
}

inline NcPoly normal_form(const NcPoly &p, const RewriteSystem &s) { return s.normal_form(p); }

/// Membership could not be established within the degree cap. This never
/// claims non-membership.
struct Inconclusive {
  std::size_t degree = 0;
  NcPoly residue; // normal form that failed to vanish
};

using MembershipResult = std::variant<ProofTrace, Inconclusive>;

/// Proves p lies in the two-sided ideal of an already completed system.
inline MembershipResult prove_membership(const NcPoly &p, const RewriteSystem &s) {
  detail::Combination steps;
  NcPoly nf = s.normal_form(p, &steps);
  if (!nf.is_zero()) return Inconclusive{s.degree_bound(), std::move(nf)};
  return ProofTrace{p, s.certificate(steps)};
}

inline MembershipResult prove_membership(const NcPoly &p, const std::vector<NcPoly> &relations, std::size_t degree_bound) {
  if (p.is_zero()) return ProofTrace{p, {}};
  return prove_membership(p, complete(relations, degree_bound));
}

// ---------------------------------------------------------------------------
// Gadget certification
// ---------------------------------------------------------------------------

enum class PairKind { Commute, Anticommute };

/// Resolves a boundary name: a variable of `b`, or otherwise the indicator
/// group `<name>_0, <name>_1, ...` (all variables named `<name>_<digits>`,
/// in index order).
inline std::vector<VarId> resolve_group(const Bcs &b, const std::string &name) {
  if (auto v = b.find(name)) return {*v};
  std::vector<VarId> out;
  const std::string prefix = name + "_";
  for (VarId v = 0; v < b.num_vars(); ++v) {
    const auto &n = b.name(v);
    if (n.size() > prefix.size() && n.compare(0, prefix.size(), prefix) == 0 &&
        std::all_of(n.begin() + static_cast<std::ptrdiff_t>(prefix.size()), n.end(),
                    [](char c) { return c >= '0' && c <= '9'; })) {
      out.push_back(v);
    }
  }
  if (out.empty()) throw Error("unknown variable or indicator group '" + name + "'");
  return out;
}

/// Proofs for a gadget. Combinations index into relations followed by
/// lemmas: index i < relations.size() is an input relation, relations.size()+j
/// is lemma j. Each lemma is itself proved from inputs and earlier lemmas.
struct Certificate {
  std::vector<std::string> names;
  std::vector<NcPoly> relations;
  std::size_t degree = 0;
  std::vector<ProofTrace> lemmas;
  std::vector<ProofTrace> proofs;
};

/// Replays every lemma and proof in exact arithmetic.
inline bool verify_certificate(const Certificate &c) {
  std::vector<NcPoly> known = c.relations;
  for (const auto &l : c.lemmas) {
    for (const auto &t : l.combination) {
      if (t.relation >= known.size()) return false;
    }
    if (!replays_to_target(l, known)) return false;
    known.push_back(l.target);
  }
  for (const auto &p : c.proofs) {
    for (const auto &t : p.combination) {
      if (t.relation >= known.size()) return false;
    }
    if (!replays_to_target(p, known)) return false;
  }
  return true;
}

/// Expands lemma references so the combination mentions input relations only.
inline std::vector<ProofTerm> expand_lemmas(const std::vector<ProofTerm> &combination,
                                            const std::vector<ProofTrace> &lemmas, std::size_t num_relations) {
  using Side = std::pair<Word, Word>;
  std::map<std::size_t, std::map<Side, GaussianRational>> buckets;
  auto put = [&](std::size_t id, Word l, Word r, const GaussianRational &v) {
    if (v.is_zero()) return;
    auto &b = buckets[id];
    auto [it, inserted] = b.try_emplace(Side{std::move(l), std::move(r)}, v);
    if (!inserted) {
      it->second += v;
      if (it->second.is_zero()) b.erase(it);
    }
  };
  for (const auto &t : combination) put(t.relation, t.left, t.right, t.coeff);
  // Largest index first; lemmas only point downwards, so a bucket is final
  // by the time it is expanded.
  while (!buckets.empty() && std::prev(buckets.end())->first >= num_relations) {
    auto top = std::prev(buckets.end());
    const auto &lemma = lemmas.at(top->first - num_relations);
    auto bucket = std::move(top->second);
    buckets.erase(top);
    for (const auto &[side, v] : bucket) {
      for (const auto &t : lemma.combination) put(t.relation, concat(side.first, t.left), concat(t.right, side.second), v * t.coeff);
    }
  }
  std::vector<ProofTerm> out;
  for (const auto &[id, b] : buckets) {
    for (const auto &[side, v] : b) out.push_back({side.first, id, side.second, v});
  }
  return out;
}

inline std::vector<ProofTerm> RewriteSystem::certificate(const detail::Combination &c) const {
  auto st = structured_certificate({c});
  return expand_lemmas(st.combinations.front(), st.lemmas, relations_.size());
}

/// The proofs of `c` as flat traces over the input relations alone. These can
/// be far larger than the lemma form.
inline std::vector<ProofTrace> flat_proofs(const Certificate &c) {
  std::vector<ProofTrace> out;
  for (const auto &p : c.proofs) out.push_back({p.target, expand_lemmas(p.combination, c.lemmas, c.relations.size())});
  return out;
}

struct GadgetInconclusive {
  std::size_t degree = 0;
  std::vector<NcPoly> unresolved;
};

using CertifyResult = std::variant<Certificate, GadgetInconclusive>;

/// Targets u v - v u (or u v + v u) for every pair drawn from the two groups.
inline std::vector<NcPoly> pair_targets(const Bcs &gadget, const std::string &u, const std::string &v, PairKind kind) {
  std::vector<NcPoly> out;
  for (VarId p : resolve_group(gadget, u)) {
    for (VarId q : resolve_group(gadget, v)) {
      NcPoly t = NcPoly::monomial({p, q});
      t.add_term({q, p}, GaussianRational(kind == PairKind::Commute ? -1 : 1));
      out.push_back(std::move(t));
    }
  }
  return out;
}

/// Proves each target belongs to the ideal of `gadget` using one capped
/// completion. The certificate is replayed before it is returned.
inline CertifyResult certify_targets(const Bcs &gadget, const std::vector<NcPoly> &targets, std::size_t degree) {
  auto relations = to_polynomial_relations(gadget);
  const RewriteSystem sys = complete(relations, degree);
  GadgetInconclusive inc{degree, {}};
  std::vector<detail::Combination> steps(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!sys.normal_form(targets[i], &steps[i]).is_zero()) inc.unresolved.push_back(targets[i]);
  }
  if (!inc.unresolved.empty()) return inc;
  auto st = sys.structured_certificate(steps);
  Certificate cert;
  cert.names = gadget.names();
  cert.relations = std::move(relations);
  cert.degree = degree;
  cert.lemmas = std::move(st.lemmas);
  for (std::size_t i = 0; i < targets.size(); ++i) cert.proofs.push_back({targets[i], std::move(st.combinations[i])});
  if (!verify_certificate(cert)) throw std::logic_error("certificate failed to replay");
  return cert;
}

inline CertifyResult certify_gadget(const Bcs &gadget, const std::string &u, const std::string &v, PairKind kind,
                                    std::size_t degree) {
  return certify_targets(gadget, pair_targets(gadget, u, v, kind), degree);
}

// ---------------------------------------------------------------------------
// Classical extendibility
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMaxExtendibilityBits = 24;

struct ExtendibilityReport {
  bool extendible = true;
  std::size_t boundary_assignments = 0;
  /// Boundary assignments (one value per boundary item: a bit, or the index
  /// of the active indicator) that admit no extension.
  std::vector<std::vector<std::size_t>> failures;
};

/// Every classical boundary assignment extends to a satisfying assignment of
/// the whole gadget. A boundary item is a single variable (both bits) or an
/// indicator group (exactly one member set).
inline ExtendibilityReport check_extendibility_report(const Bcs &gadget, const std::vector<std::string> &boundary) {
  const std::size_t n = gadget.num_vars();
  if (n > kMaxExtendibilityBits) {
    throw GuardError("extendibility check limited to " + std::to_string(kMaxExtendibilityBits) + " variables");
  }
  std::vector<std::vector<VarId>> groups;
  std::vector<bool> is_group;
  for (const auto &name : boundary) {
    auto v = gadget.find(name);
    groups.push_back(v ? std::vector<VarId>{*v} : resolve_group(gadget, name));
    is_group.push_back(!v.has_value());
  }
  // Encode a boundary assignment as a mixed-radix index.
  std::vector<std::size_t> radix;
  for (std::size_t g = 0; g < groups.size(); ++g) radix.push_back(is_group[g] ? groups[g].size() : 2);
  std::size_t total = 1;
  for (auto r : radix) total *= r;
  std::vector<bool> reached(total, false);

  std::vector<std::uint8_t> bits(n);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    for (std::size_t v = 0; v < n; ++v) bits[v] = (m >> v) & 1U;
    if (!gadget.satisfied_by(bits)) continue;
    std::size_t code = 0;
    bool valid = true;
    for (std::size_t g = groups.size(); g-- > 0;) {
      std::size_t value = 0;
      if (is_group[g]) {
        std::size_t ones = 0;
        for (std::size_t k = 0; k < groups[g].size(); ++k) {
          if (bits[groups[g][k]]) {
            ++ones;
            value = k;
          }
        }
        if (ones != 1) valid = false;
      } else {
        value = bits[groups[g][0]];
      }
      code = code * radix[g] + value;
    }
    if (valid) reached[code] = true;
  }
  ExtendibilityReport rep;
  rep.boundary_assignments = total;
  for (std::size_t code = 0; code < total; ++code) {
    if (reached[code]) continue;
    rep.extendible = false;
    std::vector<std::size_t> values(groups.size());
    std::size_t rest = code;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      values[g] = rest % radix[g];
      rest /= radix[g];
    }
    rep.failures.push_back(std::move(values));
  }
  return rep;
}

inline bool check_extendibility(const Bcs &gadget, const std::vector<std::string> &boundary) {
  return check_extendibility_report(gadget, boundary).extendible;
}

} // namespace bcslab
