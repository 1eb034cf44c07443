#pragma once

#include "bcslab/json_io.hpp"
#include "bcslab/solvers.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace bcslab::cli {

/// Exit codes: success, negative domain answer, usage or input error.
inline constexpr int kOk = 0;
inline constexpr int kNegative = 1;
inline constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using json_io::Json;

struct Io {
  std::istream &in;
  std::ostream &out;
  bool stdin_used = false;

  std::string read(const std::string &path) {
    if (path == "-") {
      if (stdin_used) throw UsageError("standard input can only be read once");
      stdin_used = true;
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  void write_file(const std::string &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << text;
  }
};

inline bool looks_like_json(const std::string &text) {
  auto k = text.find_first_not_of(" \t\r\n");
  return k != std::string::npos && text[k] == '{';
}

inline Json parse_json(const std::string &text, const std::string &what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw UsageError(what + ": " + e.what());
  }
}

/// A BCS is read from its text form or from the "bcs" field of a bundle.
inline Bcs bcs_from_text(const std::string &text) {
  if (looks_like_json(text)) {
    Json j = parse_json(text, "bundle");
    if (!j.contains("bcs")) throw UsageError("JSON input has no 'bcs' field");
    return parse_bcs(j.at("bcs").get<std::string>());
  }
  return parse_bcs(text);
}

inline Json bits_json(const Bcs &b, const Bits &bits) {
  Json a = Json::object();
  for (VarId v = 0; v < b.num_vars(); ++v) a[b.name(v)] = static_cast<int>(bits[v]);
  return a;
}

inline void emit(std::ostream &out, const Json &j) { out << j.dump(2) << "\n"; }
inline void emit_line(std::ostream &out, const Json &j) { out << j.dump() << "\n"; }

inline std::vector<std::string> split_pair(const std::string &s) {
  auto comma = s.find(',');
  if (comma == std::string::npos || comma == 0 || comma + 1 == s.size() || s.find(',', comma + 1) != std::string::npos) {
    throw UsageError("--pair expects U,V");
  }
  return {s.substr(0, comma), s.substr(comma + 1)};
}

/// One set per line, whitespace separated; the universe is every element in
/// order of first appearance.
inline Bcs ks_from_text(const std::string &text) {
  std::istringstream in(text);
  std::vector<std::vector<std::string>> sets;
  std::vector<std::string> universe;
  std::set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ss(line);
    std::vector<std::string> set;
    for (std::string t; ss >> t;) {
      set.push_back(t);
      if (seen.insert(t).second) universe.push_back(t);
    }
    if (!set.empty()) sets.push_back(std::move(set));
  }
  return ks_to_bcs(sets, universe);
}

inline Bcs triangle_gadget() {
  Graph g;
  for (const char *v : {"u", "v", "w"}) g.add_vertex(v);
  g.add_edge("u", "v");
  g.add_edge("v", "w");
  g.add_edge("u", "w");
  return coloring_to_bcs({g, 3});
}

inline std::string format_value(double v) {
  std::ostringstream ss;
  ss << std::setprecision(12) << v;
  return ss.str();
}

} // namespace detail

/// Runs one command line (without the program name). Output goes to `out`,
/// diagnostics to `err`.
inline int run(const std::vector<std::string> &args, std::istream &in, std::ostream &out, std::ostream &err) {
  using detail::Json;
  detail::Io io{in, out};

  CLI::App app{"Binary constraint systems, operator assignments and their games", "bcslab"};
  app.require_subcommand(1);

  // parse
  std::string parse_file = "-";
  bool parse_graph_flag = false;
  auto *parse = app.add_subcommand("parse", "Parse a BCS (or graph) and print its canonical form");
  parse->add_option("file", parse_file, "Input file, - for standard input");
  parse->add_flag("--graph", parse_graph_flag, "Input is a graph");

  // gen
  auto *gen = app.add_subcommand("gen", "Generate built-in instances");
  gen->require_subcommand(1);
  bool ms_with_assignment = false;
  auto *gen_ms = gen->add_subcommand("magic-square", "Magic square BCS");
  gen_ms->add_flag("--with-assignment", ms_with_assignment, "Emit a JSON bundle with the Pauli solution");
  std::size_t rank = 0;
  auto *gen_cl = gen->add_subcommand("clifford", "Clifford BCS of rank N with its assignment");
  gen_cl->add_option("--rank", rank, "Rank N")->required()->check(CLI::Range(std::size_t{2}, kMaxCliffordBcsRank));
  bool chsh_strategy = false;
  auto *gen_chsh = gen->add_subcommand("chsh", "CHSH game");
  gen_chsh->add_flag("--strategy", chsh_strategy, "Emit the optimal two-qubit strategy instead");
  std::string graph_file;
  std::size_t colors = 3;
  auto *gen_col = gen->add_subcommand("coloring-bcs", "Coloring BCS of a graph");
  gen_col->add_option("--graph", graph_file, "Graph file")->required();
  gen_col->add_option("--colors", colors, "Number of colors")->check(CLI::Range(std::size_t{1}, std::size_t{64}));
  std::string sets_file;
  auto *gen_ks = gen->add_subcommand("ks-bcs", "Kochen-Specker BCS from a list of sets");
  gen_ks->add_option("--sets", sets_file, "One set per line")->required();

  // solve
  std::string solve_file = "-";
  bool s_classical = false, s_2sat = false, s_horn = false, s_parity = false;
  auto *solve = app.add_subcommand("solve", "Classical satisfiability");
  solve->add_option("file", solve_file, "BCS file, - for standard input");
  auto *solver_group = solve->add_option_group("solver");
  solver_group->add_flag("--classical", s_classical, "General search");
  solver_group->add_flag("--2sat", s_2sat, "Implication graph");
  solver_group->add_flag("--horn", s_horn, "Pebbling");
  solver_group->add_flag("--parity", s_parity, "Gaussian elimination over GF(2)");
  solver_group->require_option(1);

  // reduce
  std::string reduce_file = "-", reduce_to, trace_file, emit_kind = "graph";
  bool harden = false;
  std::size_t occ_limit = 0;
  auto *reduce = app.add_subcommand("reduce", "Reductions between BCS families");
  reduce->add_option("file", reduce_file, "Source BCS, - for standard input");
  auto *red_group = reduce->add_option_group("reduction");
  red_group->add_option("--to", reduce_to, "Target family")->check(CLI::IsMember({"3coloring", "1in3", "3sat"}));
  red_group->add_flag("--harden", harden, "Pad a 3-SAT instance");
  red_group->add_option("--occ-limit", occ_limit, "Bound variable occurrences")->check(CLI::Range(std::size_t{3}, std::size_t{1000}));
  red_group->require_option(1);
  reduce->add_option("--trace", trace_file, "Write the reduction trace JSON here");
  reduce->add_option("--emit", emit_kind, "Output for --to 3coloring")->check(CLI::IsMember({"graph", "bcs"}));

  // verify
  std::string assignment_file, bcs_file;
  double tol = 1e-9;
  auto *verify = app.add_subcommand("verify", "Check an operator assignment");
  verify->add_option("--assignment", assignment_file, "Assignment or bundle JSON")->required();
  verify->add_option("--bcs", bcs_file, "BCS file when the assignment is not a bundle");
  verify->add_option("--tol", tol, "Residual tolerance for dense checks")->check(CLI::NonNegativeNumber);

  // certify
  std::string gadget_name, pair_text, gadget_file;
  bool anticommute = false;
  std::size_t degree = default_degree_cap();
  auto *certify = app.add_subcommand("certify", "Certify a commutation gadget by rewriting");
  certify->add_option("--gadget", gadget_name, "Built-in gadget")
      ->check(CLI::IsMember({"prism", "onein3", "magic-square", "triangle"}));
  certify->add_option("--bcs", gadget_file, "Gadget BCS file instead of a built-in one");
  certify->add_option("--pair", pair_text, "Target pair U,V")->required();
  certify->add_flag("--anticommute", anticommute, "Target U V + V U instead of U V - V U");
  certify->add_option("--degree", degree, "Rewriting degree cap")->check(CLI::Range(std::size_t{2}, std::size_t{64}));

  // check-certificate
  std::string cert_file = "-";
  auto *check_cert = app.add_subcommand("check-certificate", "Replay a certificate");
  check_cert->add_option("file", cert_file, "Certificate JSON");

  // derive-game, strategy
  std::string game_src = "-";
  auto *derive = app.add_subcommand("derive-game", "The BCS game of a BCS");
  derive->add_option("file", game_src, "BCS file or bundle");
  std::string strat_assignment, strat_bcs;
  auto *strategy = app.add_subcommand("strategy", "Game strategy from an operator assignment");
  strategy->add_option("--assignment", strat_assignment, "Assignment or bundle JSON")->required();
  strategy->add_option("--bcs", strat_bcs, "BCS file when the assignment is not a bundle");

  // simulate, value
  std::string game_file, strategy_file;
  auto *simulate = app.add_subcommand("simulate", "Value of a fixed strategy");
  simulate->add_option("--game", game_file, "Game JSON")->required();
  simulate->add_option("--strategy", strategy_file, "Strategy JSON")->required();
  bool classical_value = false;
  std::string value_game;
  auto *value = app.add_subcommand("value", "Exact classical value of a game");
  value->add_flag("--classical", classical_value, "Classical value")->required();
  value->add_option("--game", value_game, "Game JSON")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError &e) {
    err << "bcslab: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*parse) {
      const std::string text = io.read(parse_file);
      out << (parse_graph_flag ? serialize_graph(parse_graph(text)) : serialize_bcs(detail::bcs_from_text(text)));
      return kOk;
    }

    if (*gen) {
      if (*gen_ms) {
        if (!ms_with_assignment) {
          out << serialize_bcs(magic_square());
          return kOk;
        }
        const Bcs b = magic_square();
        detail::emit(out, Json{{"bcs", serialize_bcs(b)}, {"assignment", json_io::assignment_to_json(mermin_peres_assignment(), b)}});
        return kOk;
      }
      if (*gen_cl) {
        auto [b, a] = clifford_bcs(rank);
        detail::emit(out, Json{{"bcs", serialize_bcs(b)}, {"assignment", json_io::assignment_to_json(a, b)}});
        return kOk;
      }
      if (*gen_chsh) {
        const GameSpec g = chsh_game();
        detail::emit(out, chsh_strategy ? json_io::strategy_to_json(g, chsh_optimal_strategy()) : json_io::game_to_json(g));
        return kOk;
      }
      if (*gen_col) {
        out << serialize_bcs(coloring_to_bcs({parse_graph(io.read(graph_file)), colors}));
        return kOk;
      }
      if (*gen_ks) {
        out << serialize_bcs(detail::ks_from_text(io.read(sets_file)));
        return kOk;
      }
    }

    if (*solve) {
      const Bcs b = detail::bcs_from_text(io.read(solve_file));
      std::optional<Bits> r;
      if (s_classical) r = solve_classical(b);
      else if (s_2sat) r = solve_2sat(b);
      else if (s_horn) r = solve_hornsat(b);
      else r = solve_parity_gf2(b);
      if (!r) {
        detail::emit_line(out, Json{{"sat", false}});
        return kNegative;
      }
      detail::emit_line(out, Json{{"sat", true}, {"assignment", detail::bits_json(b, *r)}});
      return kOk;
    }

    if (*reduce) {
      const Bcs b = detail::bcs_from_text(io.read(reduce_file));
      ReductionTrace trace;
      if (reduce_to == "3coloring") {
        auto r = reduce_3sat_to_3coloring(b);
        out << (emit_kind == "bcs" ? serialize_bcs(coloring_to_bcs(r.target)) : serialize_graph(r.target.graph));
        trace = std::move(r.trace);
      } else {
        BcsReduction r;
        if (reduce_to == "1in3") r = reduce_3sat_to_1in3(b);
        else if (reduce_to == "3sat") r = reduce_ksat_to_3sat(b);
        else if (harden) r = harden_3sat(b);
        else r = occurrence_reduce(b, occ_limit);
        out << serialize_bcs(r.target);
        trace = std::move(r.trace);
      }
      if (!trace_file.empty()) io.write_file(trace_file, json_io::trace_to_json(trace).dump(2) + "\n");
      return kOk;
    }

    auto load_assignment = [&](const std::string &afile, const std::string &bfile) {
      Json j = detail::parse_json(io.read(afile), "assignment");
      std::optional<Bcs> b;
      if (!bfile.empty()) b = detail::bcs_from_text(io.read(bfile));
      if (j.contains("bcs") && j.contains("assignment")) {
        if (!b) b = parse_bcs(j.at("bcs").get<std::string>());
        j = j.at("assignment");
      }
      if (!b) throw UsageError("no BCS given: pass --bcs or a bundle with a 'bcs' field");
      return std::make_pair(std::move(*b), json_io::assignment_from_json(j));
    };

    if (*verify) {
      auto [b, a] = load_assignment(assignment_file, bcs_file);
      const auto report = verify_assignment(b, a, tol);
      detail::emit(out, json_io::report_to_json(b, report));
      return report.pass ? kOk : kNegative;
    }

    if (*certify) {
      if (gadget_name.empty() == gadget_file.empty()) throw UsageError("give exactly one of --gadget and --bcs");
      Bcs gadget;
      if (!gadget_file.empty()) gadget = detail::bcs_from_text(io.read(gadget_file));
      else if (gadget_name == "prism") gadget = coloring_to_bcs({prism_graph(), 3});
      else if (gadget_name == "onein3") gadget = one_in_three_gadget();
      else if (gadget_name == "magic-square") gadget = magic_square();
      else gadget = detail::triangle_gadget();
      const auto pair = detail::split_pair(pair_text);
      const auto result = certify_gadget(gadget, pair[0], pair[1], anticommute ? PairKind::Anticommute : PairKind::Commute, degree);
      if (const auto *c = std::get_if<Certificate>(&result)) {
        detail::emit(out, json_io::certificate_to_json(*c));
        return kOk;
      }
      detail::emit(out, json_io::inconclusive_to_json(std::get<GadgetInconclusive>(result), gadget.names()));
      return kNegative;
    }

    if (*check_cert) {
      const Certificate c = json_io::certificate_from_json(detail::parse_json(io.read(cert_file), "certificate"));
      const bool ok = verify_certificate(c);
      detail::emit(out, Json{{"valid", ok}, {"lemmas", c.lemmas.size()}, {"proofs", c.proofs.size()}});
      return ok ? kOk : kNegative;
    }

    if (*derive) {
      detail::emit(out, json_io::game_to_json(derive_game(detail::bcs_from_text(io.read(game_src)))));
      return kOk;
    }

    if (*strategy) {
      auto [b, a] = load_assignment(strat_assignment, strat_bcs);
      detail::emit(out, json_io::strategy_to_json(derive_game(b), strategy_from_assignment(b, a)));
      return kOk;
    }

    if (*simulate) {
      const GameSpec g = json_io::game_from_json(detail::parse_json(io.read(game_file), "game"));
      const Strategy s = json_io::strategy_from_json(detail::parse_json(io.read(strategy_file), "strategy"), g);
      validate_strategy(s, 1e-8);
      out << detail::format_value(game_value(g, s)) << "\n";
      return kOk;
    }

    if (*value) {
      const GameSpec g = json_io::game_from_json(detail::parse_json(io.read(value_game), "game"));
      out << classical_game_value(g).get_str() << "\n";
      return kOk;
    }
  } catch (const UsageError &e) {
    err << "bcslab: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception &e) {
    err << "bcslab: malformed JSON input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument &e) {
    err << "bcslab: " << e.what() << "\n";
    return kUsage;
  } catch (const Error &e) {
    err << "bcslab: " << e.what() << "\n";
    return kUsage;
  }
  err << "bcslab: no command\n";
  return kUsage;
}

} // namespace bcslab::cli
