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

#include "fatou/game.h"

#include <functional>
#include <map>

#include <nlohmann/json.hpp>

#include "fatou/errors.h"

namespace fatou {

std::string player_name(Player p) { return p == Player::kI ? "I" : "II"; }

std::string winner_name(Winner w) {
  switch (w) {
    case Winner::kI:
      return "I";
    case Winner::kII:
      return "II";
    case Winner::kUndecided:
      return "undecided";
  }
  return "undecided";
}

const Ordinal& GameState::bound() const {
  return history.empty() ? alpha : history.back().beta;
}

std::vector<Element> GameState::string() const {
  std::vector<Element> out;
  for (const auto& m : history) {
    if (m.y) out.push_back(*m.y);
  }
  return out;
}

namespace {

class FatouStrategy : public StrategyI {
 public:
  std::string name() const override { return "fatou"; }
  Ordinal move(const GameState&) const override { return Ordinal(); }
};

class ScriptedStrategy : public StrategyI {
 public:
  explicit ScriptedStrategy(std::vector<Ordinal> moves) : moves_(std::move(moves)) {}
  std::string name() const override {
    std::string out = "scripted:";
    for (std::size_t i = 0; i < moves_.size(); ++i) out += (i ? "," : "") + moves_[i].str();
    return out;
  }
  Ordinal move(const GameState& state) const override {
    const std::size_t i = state.history.size();
    return i < moves_.size() ? moves_[i] : Ordinal();
  }

 private:
  std::vector<Ordinal> moves_;
};

class DescendingStrategy : public StrategyI {
 public:
  explicit DescendingStrategy(std::uint64_t limit_index) : limit_index_(limit_index) {}
  std::string name() const override { return "descending:" + std::to_string(limit_index_); }
  Ordinal move(const GameState& state) const override {
    const Ordinal& b = state.bound();
    const auto c = classify(b);
    if (c.kind == OrdinalKind::kSuccessor) return *c.predecessor;
    if (c.kind == OrdinalKind::kLimit) return fundamental_sequence(b, limit_index_);
    return Ordinal();
  }

 private:
  std::uint64_t limit_index_;
};

class TreeStrategy : public StrategyII {
 public:
  explicit TreeStrategy(TreePtr tree) : tree_(std::move(tree)) {}
  std::string name() const override { return "tree"; }
  Element move(const GameState& state) const override {
    NodeRef node = tree_->root();
    std::optional<Element> label;
    for (const auto& m : state.history) {
      auto next = tree_->child_with_rank(node, m.beta);
      if (!next) {
        throw CertificateError("tree has no child of rank >= " + m.beta.str() +
                               " at depth " + std::to_string(node.depth));
      }
      label = next->first;
      node = next->second;
    }
    if (!label) throw PreconditionError("tree strategy asked to move before I");
    return *label;
  }

 private:
  TreePtr tree_;
};

class PoolStrategy : public StrategyII {
 public:
  PoolStrategy(std::vector<Element> pool, SequenceSpec z, std::uint64_t n_budget)
      : pool_(std::move(pool)), z_(std::move(z)), n_budget_(n_budget) {
    if (pool_.empty()) throw PreconditionError("pool strategy needs a nonempty pool");
  }
  std::string name() const override { return "pool:" + std::to_string(pool_.size()); }
  Element move(const GameState& state) const override {
    std::vector<Element> s = state.string();
    for (const auto& y : pool_) {
      if (!is_strictly_positive(y).is_true()) continue;
      s.push_back(y);
      const bool ok = judge(z_, s, n_budget_).accepted();
      s.pop_back();
      if (ok) return y;
    }
    return pool_.front();
  }

 private:
  std::vector<Element> pool_;
  SequenceSpec z_;
  std::uint64_t n_budget_;
};

class ScriptedReplies : public StrategyII {
 public:
  explicit ScriptedReplies(std::vector<Element> replies) : replies_(std::move(replies)) {
    if (replies_.empty()) throw PreconditionError("scripted replies must be nonempty");
  }
  std::string name() const override { return "replies:" + std::to_string(replies_.size()); }
  Element move(const GameState& state) const override {
    const std::size_t i = state.history.empty() ? 0 : state.history.size() - 1;
    return replies_[std::min(i, replies_.size() - 1)];
  }

 private:
  std::vector<Element> replies_;
};

// Judges a finished move list. Shared by play and rejudge.
void adjudicate(Transcript& t) {
  t.offender.reset();
  t.verdict.reset();
  Ordinal bound = t.alpha;
  std::vector<Element> string;
  for (std::size_t i = 0; i < t.moves.size(); ++i) {
    const GameMove& m = t.moves[i];
    if (!(m.beta < bound)) {
      t.winner = Winner::kII;
      t.offender = Player::kI;
      t.reason = "illegal move by I: " + m.beta.str() + " is not below " + bound.str();
      return;
    }
    bound = m.beta;
    if (!m.y) {
      t.winner = Winner::kI;
      t.offender = Player::kII;
      t.reason = "illegal move by II: no answer to " + m.beta.str();
      return;
    }
    if (!(m.y->space() == t.z.space())) {
      t.winner = Winner::kI;
      t.offender = Player::kII;
      t.reason = "illegal move by II: answer lives in " + m.y->space().str();
      return;
    }
    if (!is_strictly_positive(*m.y).is_true()) {
      t.winner = Winner::kI;
      t.offender = Player::kII;
      t.reason = "illegal move by II: answer " + std::to_string(i + 1) +
                 " is not strictly positive";
      return;
    }
    string.push_back(*m.y);
    if (m.beta.is_zero() && i + 1 != t.moves.size()) {
      throw ParseError("moves recorded after the game ended");
    }
  }
  if (t.moves.empty() || !t.moves.back().beta.is_zero()) {
    throw ParseError("game did not end with I playing 0");
  }
  const PsiVerdict v = judge(t.z, string, t.n_budget);
  t.verdict = v;
  if (v.accepted()) {
    t.winner = Winner::kII;
    t.reason = "string " + outcome_name(v.outcome);
  } else if (v.refuted()) {
    t.winner = Winner::kI;
    t.reason = "string refuted: " + v.str();
  } else {
    t.winner = Winner::kUndecided;
    t.reason = "judge undetermined";
  }
}

}  // namespace

std::unique_ptr<StrategyI> fatou_strategy() { return std::make_unique<FatouStrategy>(); }

std::unique_ptr<StrategyI> scripted_strategy(std::vector<Ordinal> moves) {
  return std::make_unique<ScriptedStrategy>(std::move(moves));
}

std::unique_ptr<StrategyI> descending_strategy(std::uint64_t limit_index) {
  if (limit_index == 0) throw PreconditionError("limit index must be >= 1");
  return std::make_unique<DescendingStrategy>(limit_index);
}

std::unique_ptr<StrategyII> tree_strategy(TreePtr tree) {
  if (!tree) throw PreconditionError("tree strategy needs a tree");
  return std::make_unique<TreeStrategy>(std::move(tree));
}

std::unique_ptr<StrategyII> pool_strategy(std::vector<Element> pool, SequenceSpec z,
                                          std::uint64_t n_budget) {
  return std::make_unique<PoolStrategy>(std::move(pool), std::move(z), n_budget);
}

std::unique_ptr<StrategyII> scripted_replies(std::vector<Element> replies) {
  return std::make_unique<ScriptedReplies>(std::move(replies));
}

Transcript play(const Ordinal& alpha, const SequenceSpec& z, const StrategyI& player_i,
                const StrategyII& player_ii, std::uint64_t n_budget) {
  if (alpha.is_zero()) throw PreconditionError("the game needs alpha >= 1");
  Transcript t;
  t.alpha = alpha;
  t.z = z;
  t.n_budget = n_budget;
  t.strategy_i = player_i.name();
  t.strategy_ii = player_ii.name();
  GameState state;
  state.alpha = alpha;
  while (!state.finished) {
    state.turn = Player::kI;
    const Ordinal beta = player_i.move(state);
    if (!(beta < state.bound())) {
      t.moves = state.history;
      t.moves.push_back({beta, std::nullopt});
      t.winner = Winner::kII;
      t.offender = Player::kI;
      t.reason = "illegal move by I: " + beta.str() + " is not below " + state.bound().str();
      return t;
    }
    state.history.push_back({beta, std::nullopt});
    state.turn = Player::kII;
    const Element y = player_ii.move(state);
    state.history.back().y = y;
    if (!(y.space() == z.space()) || !is_strictly_positive(y).is_true()) {
      t.moves = state.history;
      t.winner = Winner::kI;
      t.offender = Player::kII;
      t.reason = "illegal move by II: answer " + std::to_string(state.history.size()) +
                 (y.space() == z.space() ? " is not strictly positive"
                                         : " lives in " + y.space().str());
      return t;
    }
    state.finished = beta.is_zero();
  }
  t.moves = state.history;
  adjudicate(t);
  return t;
}

Transcript rejudge(const Transcript& t) {
  Transcript out = t;
  const bool dangling = !out.moves.empty() && !out.moves.back().y;
  if (dangling || (!out.moves.empty() && !out.moves.back().beta.is_zero())) {
    // The game stopped on an illegal move; adjudicate the legality only.
    Ordinal bound = out.alpha;
    out.verdict.reset();
    for (std::size_t i = 0; i < out.moves.size(); ++i) {
      const GameMove& m = out.moves[i];
      if (!(m.beta < bound)) {
        out.winner = Winner::kII;
        out.offender = Player::kI;
        out.reason = "illegal move by I: " + m.beta.str() + " is not below " + bound.str();
        return out;
      }
      bound = m.beta;
      if (m.y && (!(m.y->space() == out.z.space()) || !is_strictly_positive(*m.y).is_true())) {
        out.winner = Winner::kI;
        out.offender = Player::kII;
        out.reason = "illegal move by II: answer " + std::to_string(i + 1) +
                     (m.y->space() == out.z.space() ? " is not strictly positive"
                                                    : " lives in " + m.y->space().str());
        return out;
      }
    }
    throw ParseError("transcript stops before the game ended");
  }
  adjudicate(out);
  return out;
}

void to_json(nlohmann::json& j, const Transcript& t) {
  using nlohmann::json;
  json moves = json::array();
  for (const auto& m : t.moves) {
    json mj;
    json b;
    to_json(b, m.beta);
    mj["beta"] = b;
    if (m.y) {
      json y;
      to_json(y, *m.y);
      mj["y"] = y;
    }
    moves.push_back(mj);
  }
  json alpha, z;
  to_json(alpha, t.alpha);
  to_json(z, t.z);
  j = {{"schema", "fatou.transcript/1"},
       {"alpha", alpha},
       {"z", z},
       {"n_budget", t.n_budget},
       {"strategy_i", t.strategy_i},
       {"strategy_ii", t.strategy_ii},
       {"moves", moves},
       {"winner", winner_name(t.winner)},
       {"reason", t.reason},
       {"illegal", t.offender.has_value()}};
  if (t.offender) j["offender"] = player_name(*t.offender);
  if (t.verdict) {
    json v;
    to_json(v, *t.verdict);
    j["verdict"] = v;
  }
}

Transcript transcript_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema") != "fatou.transcript/1") throw ParseError("not a fatou.transcript/1");
    Transcript t;
    t.alpha = j.at("alpha").get<Ordinal>();
    t.z = sequence_from_json(j.at("z"));
    t.n_budget = j.at("n_budget").get<std::uint64_t>();
    t.strategy_i = j.value("strategy_i", std::string());
    t.strategy_ii = j.value("strategy_ii", std::string());
    for (const auto& m : j.at("moves")) {
      GameMove gm{m.at("beta").get<Ordinal>(), std::nullopt};
      if (m.contains("y")) gm.y = element_from_json(m.at("y"));
      t.moves.push_back(std::move(gm));
    }
    const std::string w = j.at("winner").get<std::string>();
    t.winner = w == "I" ? Winner::kI : (w == "II" ? Winner::kII : Winner::kUndecided);
    t.reason = j.value("reason", std::string());
    if (j.contains("offender")) {
      t.offender = j.at("offender") == "I" ? Player::kI : Player::kII;
    }
    if (j.contains("verdict")) t.verdict = psi_verdict_from_json(j.at("verdict"));
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("transcript: ") + e.what());
  }
}

SolveResult exhaustive_solve(const Ordinal& alpha, const SequenceSpec& z,
                             const std::vector<Element>& pool, std::uint64_t n_budget,
                             std::uint64_t max_positions) {
  if (!alpha.is_finite() || alpha.is_zero()) {
    throw PreconditionError("exhaustive solving needs a finite alpha >= 1");
  }
  if (pool.empty()) throw PreconditionError("pool must be nonempty");
  SolveResult out;
  std::vector<bool> legal(pool.size());
  for (std::size_t p = 0; p < pool.size(); ++p) {
    legal[p] = pool[p].space() == z.space() && is_strictly_positive(pool[p]).is_true();
  }
  // Judge outcomes by string of pool indices: 1 accepted, 0 refuted, -1 open.
  std::map<std::vector<std::size_t>, int> judged;
  auto outcome = [&](const std::vector<std::size_t>& idx) {
    auto it = judged.find(idx);
    if (it != judged.end()) return it->second;
    std::vector<Element> s;
    for (auto p : idx) s.push_back(pool[p]);
    const PsiVerdict v = judge(z, s, n_budget);
    const int r = v.accepted() ? 1 : (v.refuted() ? 0 : -1);
    judged.emplace(idx, r);
    return r;
  };
  const std::uint64_t a = alpha.to_finite();
  std::vector<std::size_t> idx;
  auto count = [&]() {
    if (++out.positions > max_positions) {
      throw BudgetExhausted("game tree exceeds " + std::to_string(max_positions) + " positions");
    }
  };
  // I to move with everything below `bound` available.
  std::function<bool(std::uint64_t)> i_forces = [&](std::uint64_t bound) {
    count();
    for (std::uint64_t beta = 0; beta < bound; ++beta) {
      bool all = true;
      for (std::size_t p = 0; p < pool.size() && all; ++p) {
        if (!legal[p]) continue;  // II loses on the spot
        idx.push_back(p);
        const bool wins = beta == 0 ? outcome(idx) == 0 : i_forces(beta);
        idx.pop_back();
        all = wins;
      }
      if (all) return true;
    }
    return false;
  };
  std::function<bool(std::uint64_t)> ii_forces = [&](std::uint64_t bound) {
    count();
    for (std::uint64_t beta = 0; beta < bound; ++beta) {
      bool any = false;
      for (std::size_t p = 0; p < pool.size() && !any; ++p) {
        if (!legal[p]) continue;
        idx.push_back(p);
        any = beta == 0 ? outcome(idx) == 1 : ii_forces(beta);
        idx.pop_back();
      }
      if (!any) return false;
    }
    return true;
  };
  out.i_can_force = i_forces(a);
  out.ii_can_force = ii_forces(a);
  if (out.i_can_force && out.ii_can_force) {
    throw CertificateError("both players force a win: inconsistent judge");
  }
  out.winner = out.i_can_force ? Winner::kI : (out.ii_can_force ? Winner::kII : Winner::kUndecided);
  return out;
}

}  // namespace fatou
