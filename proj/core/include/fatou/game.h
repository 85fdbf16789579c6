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

#ifndef FATOU_GAME_H_
#define FATOU_GAME_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fatou/element.h"
#include "fatou/ordinal.h"
#include "fatou/psi.h"
#include "fatou/sequence.h"
#include "fatou/tree.h"

namespace fatou {

// The game G_alpha[(z_n)]: I plays alpha > b_1 > b_2 > ... , II answers each
// b_i with a positive y_i, and the game ends once b_k = 0 has been answered.
// II wins iff (y_1, ..., y_k) satisfies the Psi inequalities.

enum class Player { kI, kII };
enum class Winner { kI, kII, kUndecided };

std::string player_name(Player p);
std::string winner_name(Winner w);

struct GameMove {
  Ordinal beta;
  std::optional<Element> y;
};

struct GameState {
  Ordinal alpha;
  std::vector<GameMove> history;
  Player turn = Player::kI;
  bool finished = false;

  // alpha, or the last ordinal played.
  const Ordinal& bound() const;
  // II's answers so far.
  std::vector<Element> string() const;
};

class StrategyI {
 public:
  virtual ~StrategyI() = default;
  virtual std::string name() const = 0;
  virtual Ordinal move(const GameState& state) const = 0;
};

class StrategyII {
 public:
  virtual ~StrategyII() = default;
  virtual std::string name() const = 0;
  virtual Element move(const GameState& state) const = 0;
};

// Plays 0 at once.
std::unique_ptr<StrategyI> fatou_strategy();
// Plays the given ordinals in order, then 0.
std::unique_ptr<StrategyI> scripted_strategy(std::vector<Ordinal> moves);
// Steps down slowly: predecessors of successors, fs(b, limit_index) at limits.
std::unique_ptr<StrategyI> descending_strategy(std::uint64_t limit_index = 1);

// Follows a tree: after b, moves to a child of rank >= b. Throws
// CertificateError when no such child exists.
std::unique_ptr<StrategyII> tree_strategy(TreePtr tree);
// The first pool member that keeps the string accepted by the judge, or the
// first pool member if none does.
std::unique_ptr<StrategyII> pool_strategy(std::vector<Element> pool, SequenceSpec z,
                                          std::uint64_t n_budget = kDefaultNBudget);
// Answers in the given order, repeating the last answer.
std::unique_ptr<StrategyII> scripted_replies(std::vector<Element> replies);

struct Transcript {
  Ordinal alpha;
  SequenceSpec z = SequenceSpec::canonical_z(Space::base());
  std::uint64_t n_budget = kDefaultNBudget;
  std::string strategy_i;
  std::string strategy_ii;
  std::vector<GameMove> moves;
  Winner winner = Winner::kUndecided;
  std::string reason;
  // Set when the game ended on an illegal move.
  std::optional<Player> offender;
  std::optional<PsiVerdict> verdict;
};

// Runs a game to completion. Illegal moves (no strict descent, b >= alpha,
// answers that are not strictly positive or live elsewhere) lose at once
// and are flagged.
Transcript play(const Ordinal& alpha, const SequenceSpec& z, const StrategyI& player_i,
                const StrategyII& player_ii, std::uint64_t n_budget = kDefaultNBudget);

// Re-judges the recorded moves; the result serializes identically to the
// original when nothing was altered.
Transcript rejudge(const Transcript& t);

void to_json(nlohmann::json& j, const Transcript& t);
Transcript transcript_from_json(const nlohmann::json& j);

struct SolveResult {
  Winner winner = Winner::kUndecided;
  bool i_can_force = false;
  bool ii_can_force = false;
  std::uint64_t positions = 0;
};

// Full minimax for finite alpha with II restricted to a finite pool. The two
// players' forcing sets are computed separately.
SolveResult exhaustive_solve(const Ordinal& alpha, const SequenceSpec& z,
                             const std::vector<Element>& pool,
                             std::uint64_t n_budget = kDefaultNBudget,
                             std::uint64_t max_positions = 1000000);

}  // namespace fatou

#endif  // FATOU_GAME_H_
