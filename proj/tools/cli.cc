// Copyright 2026 The Fatou Workbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fatou/construction.h"
#include "fatou/convergence.h"
#include "fatou/errors.h"
#include "fatou/families.h"
#include "fatou/game.h"
#include "fatou/psi.h"
#include "fatou/report.h"
#include "fatou/tree.h"

namespace fatou::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 20260101;

constexpr const char* kOrdinalHelp = R"(Ordinals are written in Cantor normal form shorthand:
  sum      := product ('+' product)*
  product  := primary ('*' INT)?
  primary  := INT | ('w' | 'omega') ('^' exponent)? | '(' sum ')'
  exponent := INT | ('w' | 'omega') ('^' exponent)? | '(' sum ')'
e.g. 3, w, w+1, w*2, w^2, w^w, w^(w+1)*2+5.

Exit codes: 0 every checked assertion passed, 1 an assertion failed,
2 some verdict is unknown within the budgets, 3 usage or input error.)";

struct Globals {
  std::uint64_t seed = kDefaultSeed;
  bool json_out = false;
  std::string out_path;
};

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_artifact(const Globals& g, const json& doc) {
  if (g.out_path.empty()) return;
  std::ofstream f(g.out_path);
  if (!f) throw ParseError("cannot write " + g.out_path);
  f << doc.dump(2) << '\n';
}

// Everything after the verb, minus the output-only flags, so that replay
// can run the same command again.
json invocation(const std::vector<std::string>& args) {
  json inv = json::array();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out") {
      ++i;
      continue;
    }
    if (args[i] == "--json" || args[i].rfind("--out=", 0) == 0) continue;
    inv.push_back(args[i]);
  }
  return inv;
}

int emit_report(const Globals& g, Report r, const std::vector<std::string>& args,
                std::ostream& out) {
  r.parameters()["seed"] = g.seed;
  r.parameters()["invocation"] = invocation(args);
  const json doc = r.to_json();
  write_artifact(g, doc);
  if (g.json_out) {
    out << doc.dump(2) << '\n';
  } else {
    out << r.to_text();
  }
  return exit_code(r.overall());
}

Ordinal ordinal_arg(const std::string& s) { return Ordinal::parse(s); }

std::vector<Element> positive_pool(const Space& space, std::size_t size) {
  DiagonalRationalSet dense(space);
  std::vector<Element> pool;
  for (std::uint64_t i = 1; pool.size() < size && i <= 100 * size + 100; ++i) {
    Element e = dense.at(i);
    if (is_strictly_positive(e).is_true()) pool.push_back(std::move(e));
  }
  return pool;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    if (!cur.empty()) parts.push_back(cur);
  }
  return parts;
}

SequenceSpec load_sequence(const std::string& path) { return sequence_from_json(load_json(path)); }

BundlePtr bundle_source(const std::string& alpha, const std::string& path) {
  if (!path.empty()) return bundle_from_json(load_json(path));
  if (alpha.empty()) throw CLI::ValidationError("need --alpha or --bundle");
  return build(ordinal_arg(alpha));
}

// --- verbs --------------------------------------------------------------------

int cmd_build(const Globals& g, const std::string& alpha, std::ostream& out) {
  const BundlePtr b = build(ordinal_arg(alpha));
  json doc;
  to_json(doc, *b);
  doc["seed"] = g.seed;
  write_artifact(g, doc);
  if (g.json_out) {
    out << doc.dump(2) << '\n';
  } else {
    out << "built " << b->space.str() << " (rank certificate "
        << b->witness->rank_cert().str() << ")\n";
    for (const auto& line : b->provenance) out << "  " << line << '\n';
  }
  return 0;
}

int cmd_rank(const Globals& g, const std::string& tree_path, const std::string& alpha,
             std::ostream& out) {
  Ordinal rank;
  std::string how;
  if (!alpha.empty()) {
    rank = structured_rank(*build(ordinal_arg(alpha))->witness);
    how = "structured";
  } else {
    const json j = load_json(tree_path);
    if (j.is_object() && j.value("schema", "") == "fatou.bundle/1") {
      rank = structured_rank(*bundle_from_json(j)->witness);
      how = "structured";
    } else if (j.is_object() && j.contains("kind")) {
      const TreePtr t = structured_tree_from_json(
          j, [](const Ordinal& stage) { return build(stage)->witness; });
      rank = structured_rank(*t);
      how = "structured";
    } else {
      rank = finite_rank(finite_tree_from_json(j));
      how = "finite";
    }
  }
  json rj;
  to_json(rj, rank);
  const json doc = {{"schema", "fatou.rank/1"}, {"rank", rj}, {"rank_str", rank.str()},
                    {"method", how}, {"seed", g.seed}};
  write_artifact(g, doc);
  if (g.json_out) {
    out << doc.dump(2) << '\n';
  } else {
    out << rank.str() << '\n';
  }
  return 0;
}

struct GameOptions {
  std::string alpha = "1";
  std::string strategy_i = "fatou";
  std::string moves;
  std::uint64_t limit_index = 1;
  std::string strategy_ii = "tree";
  std::size_t pool = 200;
  std::string z_path;
  std::uint64_t n_budget = kDefaultNBudget;
  std::string expect;
};

int finish_transcript(const Globals& g, const Transcript& t, const std::string& expect,
                      std::ostream& out) {
  json doc;
  to_json(doc, t);
  doc["seed"] = g.seed;
  write_artifact(g, doc);
  if (g.json_out) {
    out << doc.dump(2) << '\n';
  } else {
    out << "G_" << t.alpha.str() << ": I = " << t.strategy_i << ", II = " << t.strategy_ii
        << '\n';
    for (std::size_t i = 0; i < t.moves.size(); ++i) {
      out << "  round " << i + 1 << ": I plays " << t.moves[i].beta.str();
      if (t.moves[i].y) out << ", II answers " << t.moves[i].y->str();
      out << '\n';
    }
    out << "winner: " << winner_name(t.winner) << " (" << t.reason << ")\n";
  }
  if (t.winner == Winner::kUndecided) return 2;
  if (!expect.empty()) {
    const std::string w = winner_name(t.winner);
    return w == expect ? 0 : 1;
  }
  return 0;
}

int cmd_game(const Globals& g, const GameOptions& o, std::ostream& out) {
  const Ordinal alpha = ordinal_arg(o.alpha);
  const SequenceSpec z =
      o.z_path.empty() ? build(alpha)->z : load_sequence(o.z_path);
  if (!(z.space() == Space(alpha))) {
    throw SpaceMismatch("the sequence lives in " + z.space().str() + ", the game in " +
                        Space(alpha).str());
  }
  std::unique_ptr<StrategyI> si;
  if (o.strategy_i == "fatou") {
    si = fatou_strategy();
  } else if (o.strategy_i == "descending") {
    si = descending_strategy(o.limit_index);
  } else {
    std::vector<Ordinal> moves;
    for (const auto& m : split_list(o.moves)) moves.push_back(ordinal_arg(m));
    si = scripted_strategy(std::move(moves));
  }
  std::unique_ptr<StrategyII> sii;
  if (o.strategy_ii == "tree") {
    sii = tree_strategy(build(alpha)->witness);
  } else {
    sii = pool_strategy(positive_pool(z.space(), o.pool), z, o.n_budget);
  }
  return finish_transcript(g, play(alpha, z, *si, *sii, o.n_budget), o.expect, out);
}

struct ConvOptions {
  std::string mode;
  std::string seq_path;
  std::string x_path;
  std::string witness_path;
  std::string eps = "1/2,1/4,1/8,1/16,1/32,1/64";
  std::uint64_t budget = 64;
  bool sigma_continuous = false;
};

Report cmd_conv(const ConvOptions& o) {
  const SequenceSpec seq = load_sequence(o.seq_path);
  const Element x = o.x_path.empty() ? Element::zero(seq.space())
                                     : element_from_json(load_json(o.x_path));
  const ConvBudgets budgets{o.budget, o.budget};
  if (o.mode == "uniform") {
    std::vector<Rational> eps;
    for (const auto& e : split_list(o.eps)) eps.push_back(Rational::parse(e));
    return uniform_conv_check(seq, x, eps);
  }
  if (o.mode == "sigma") {
    std::optional<SequenceSpec> w;
    if (!o.witness_path.empty()) {
      w = load_sequence(o.witness_path);
    } else {
      w = derived_sigma_witness(seq, x);
      if (!w) throw CLI::ValidationError("--witness is required: no regulator could be derived");
    }
    return sigma_order_witness_check(seq, x, *w, budgets);
  }
  if (o.mode == "down0") return x_down0_check(seq, budgets);
  if (o.mode == "up-unbounded") return x_up_unbounded_check(seq, budgets);
  return down0_by_norm_check(seq, o.sigma_continuous);
}

struct ExportOptions {
  std::string alpha = "1";
  std::string format = "json";
  std::string what = "tree";
  std::size_t depth = 4;
  std::uint64_t components = 3;
};

int cmd_export(const Globals& g, const ExportOptions& o, std::ostream& out) {
  const BundlePtr b = build(ordinal_arg(o.alpha));
  std::string text;
  if (o.format == "dot") {
    text = to_dot(truncate(*b->witness, o.depth, o.components), "T_" + b->stage.str());
  } else {
    json doc;
    if (o.what == "bundle") {
      to_json(doc, *b);
    } else if (o.what == "truncation") {
      to_json(doc, truncate(*b->witness, o.depth, o.components));
    } else {
      to_json(doc, *b->witness);
    }
    text = doc.dump(2) + "\n";
  }
  if (!g.out_path.empty()) {
    std::ofstream f(g.out_path);
    if (!f) throw ParseError("cannot write " + g.out_path);
    f << text;
  } else {
    out << text;
  }
  return 0;
}

int cmd_replay(const Globals& g, const std::string& path, std::ostream& out, std::ostream& err) {
  const json stored = load_json(path);
  const std::string schema = stored.value("schema", "");
  if (schema == "fatou.transcript/1") {
    const Transcript t = transcript_from_json(stored);
    json again;
    to_json(again, rejudge(t));
    json before = stored;
    before.erase("seed");
    const bool same = again.dump() == before.dump();
    out << (same ? "identical" : "DIFFERS") << ": winner " << winner_name(rejudge(t).winner)
        << '\n';
    if (!same && g.json_out) out << again.dump(2) << '\n';
    return same ? 0 : 1;
  }
  if (schema == "fatou.report/1") {
    const json& params = stored.at("parameters");
    std::vector<std::string> args = params.at("invocation").get<std::vector<std::string>>();
    args.push_back("--json");
    std::ostringstream fresh;
    std::ostringstream sink;
    run(args, fresh, sink);
    const json again = json::parse(fresh.str());
    const bool same = again.dump() == stored.dump();
    out << (same ? "identical" : "DIFFERS") << ": overall "
        << verdict_name(Report::from_json(again).overall()) << '\n';
    if (!same) err << sink.str();
    return same ? 0 : 1;
  }
  throw ParseError(path + ": cannot replay schema '" + schema + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact constructions, ranks, games and convergence checks for the Fatou "
               "hierarchy of Banach lattices"};
  app.footer(kOrdinalHelp);
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "seed for randomized sweeps (recorded in every output)");
  app.add_flag("--json", g.json_out, "print JSON instead of text");
  app.add_option("--out", g.out_path, "write the JSON artifact to this file");
  // Allow the global flags after the verb too.
  const auto globals_on = [&g](CLI::App* sub) {
    sub->add_option("--seed", g.seed, "seed for randomized sweeps");
    sub->add_flag("--json", g.json_out, "print JSON instead of text");
    sub->add_option("--out", g.out_path, "write the JSON artifact to this file");
  };

  std::string alpha;
  auto* build_cmd = app.add_subcommand("build", "construct X_alpha, z, phi and the witness tree");
  build_cmd->add_option("--alpha", alpha, "stage (ordinal >= 1)")->required();
  globals_on(build_cmd);

  std::string bundle_path;
  Budgets budgets;
  std::uint64_t sweep = 0;
  auto* verify_cmd = app.add_subcommand("verify", "check every construction property");
  verify_cmd->add_option("--alpha", alpha, "stage to build and verify");
  verify_cmd->add_option("--bundle", bundle_path, "bundle JSON written by build");
  verify_cmd->add_option("--n-budget", budgets.n_budget, "terms checked")->capture_default_str();
  verify_cmd->add_option("--components", budgets.components, "components explored at limits")
      ->capture_default_str();
  verify_cmd->add_option("--depth", budgets.depth, "tree depth explored")->capture_default_str();
  verify_cmd->add_option("--sweep", sweep, "random successor-lemma pairs (base-rooted stages)");
  globals_on(verify_cmd);

  std::string tree_path;
  auto* rank_cmd = app.add_subcommand("rank", "rank of a tree or of a stage's witness tree");
  auto* tree_opt = rank_cmd->add_option("--tree", tree_path, "tree, witness or bundle JSON");
  auto* alpha_opt = rank_cmd->add_option("--alpha", alpha, "rank of the built witness tree");
  tree_opt->excludes(alpha_opt);
  globals_on(rank_cmd);

  GameOptions game;
  auto* game_cmd = app.add_subcommand("game", "play G_alpha[(z_n)]");
  game_cmd->add_option("--alpha", game.alpha, "game clock")->capture_default_str();
  game_cmd->add_option("--strategy-i", game.strategy_i, "fatou | descending | scripted")
      ->check(CLI::IsMember({"fatou", "descending", "scripted"}))
      ->capture_default_str();
  game_cmd->add_option("--moves", game.moves, "comma separated ordinals for scripted");
  game_cmd->add_option("--limit-index", game.limit_index, "fs index used by descending");
  game_cmd->add_option("--strategy-ii", game.strategy_ii, "tree | pool")
      ->check(CLI::IsMember({"tree", "pool"}))
      ->capture_default_str();
  game_cmd->add_option("--pool", game.pool, "pool size for the pool strategy")
      ->capture_default_str();
  game_cmd->add_option("--z", game.z_path, "sequence JSON (default: the constructed z)");
  game_cmd->add_option("--n-budget", game.n_budget, "judge budget")->capture_default_str();
  game_cmd->add_option("--expect", game.expect, "I | II; exit 1 if someone else wins")
      ->check(CLI::IsMember({"I", "II"}));
  globals_on(game_cmd);

  ConvOptions conv;
  auto* conv_cmd = app.add_subcommand("conv", "convergence checks on rule-given sequences");
  conv_cmd->add_option("mode", conv.mode, "uniform | sigma | down0 | up-unbounded | down0-norm")
      ->required()
      ->check(CLI::IsMember({"uniform", "sigma", "down0", "up-unbounded", "down0-norm"}));
  conv_cmd->add_option("--seq", conv.seq_path, "sequence JSON")->required();
  conv_cmd->add_option("--x", conv.x_path, "limit element JSON (default 0)");
  conv_cmd->add_option("--witness", conv.witness_path, "sigma-order witness sequence JSON");
  conv_cmd->add_option("--eps", conv.eps, "comma separated tolerances")->capture_default_str();
  conv_cmd->add_option("--budget", conv.budget, "index budget")->capture_default_str();
  conv_cmd->add_flag("--sigma-continuous", conv.sigma_continuous,
                     "assert the space is sigma-order continuous (down0-norm)");
  globals_on(conv_cmd);

  ExportOptions ex;
  auto* export_cmd = app.add_subcommand("export", "write witness trees as DOT or JSON");
  export_cmd->add_option("--alpha", ex.alpha, "stage")->capture_default_str();
  export_cmd->add_option("--format", ex.format, "dot | json")
      ->check(CLI::IsMember({"dot", "json"}))
      ->capture_default_str();
  export_cmd->add_option("--what", ex.what, "tree | truncation | bundle (json only)")
      ->check(CLI::IsMember({"tree", "truncation", "bundle"}))
      ->capture_default_str();
  export_cmd->add_option("--depth", ex.depth, "truncation depth")->capture_default_str();
  export_cmd->add_option("--components", ex.components, "components kept at limit nodes")
      ->capture_default_str();
  globals_on(export_cmd);

  std::string replay_path;
  auto* replay_cmd = app.add_subcommand("replay", "re-run a stored transcript or report");
  replay_cmd->add_option("file", replay_path, "transcript or report JSON")->required();
  globals_on(replay_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageExitCode;
  }

  try {
    if (*build_cmd) return cmd_build(g, alpha, out);
    if (*verify_cmd) {
      const BundlePtr b = bundle_source(alpha, bundle_path);
      Report r = verify(*b, budgets);
      if (sweep > 0) {
        r.merge(successor_norm_lemma_sweep(b->stage, sweep, g.seed), "lemma.");
      }
      return emit_report(g, r, args, out);
    }
    if (*rank_cmd) {
      if (tree_path.empty() && alpha.empty()) throw CLI::ValidationError("need --tree or --alpha");
      return cmd_rank(g, tree_path, alpha, out);
    }
    if (*game_cmd) return cmd_game(g, game, out);
    if (*conv_cmd) return emit_report(g, cmd_conv(conv), args, out);
    if (*export_cmd) return cmd_export(g, ex, out);
    if (*replay_cmd) return cmd_replay(g, replay_path, out, err);
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageExitCode;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return kUsageExitCode;
  } catch (const SpaceMismatch& e) {
    err << "input error: " << e.what() << '\n';
    return kUsageExitCode;
  } catch (const PreconditionError& e) {
    err << "input error: " << e.what() << '\n';
    return kUsageExitCode;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << '\n';
    return kUsageExitCode;
  } catch (const FatouError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return kUsageExitCode;
}

}  // namespace fatou::cli
