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

#ifndef FATOU_SPACE_H_
#define FATOU_SPACE_H_

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "fatou/ordinal.h"
#include "fatou/rational.h"

namespace fatou {

enum class SpaceKind { kBase, kSucc, kLimit };

// Describes which constructed lattice X_stage an element lives in. The
// variant mirrors classify(stage): stage 1 is the base sequence space, a
// successor stage renorms its predecessor, and a limit stage is an l-infinity
// sum over the fundamental sequence of the stage.
//
// Successor stages share the vector space of their predecessor, so every
// space has a "root": 1 for finite stages, lambda for lambda + n.
class Space {
 public:
  // stage must be >= 1.
  explicit Space(Ordinal stage);
  static Space base() { return Space(Ordinal::finite(1)); }

  const Ordinal& stage() const { return stage_; }
  SpaceKind kind() const { return kind_; }
  // Predecessor space. Succ only.
  Space inner() const;
  // Space of component m >= 1, i.e. X_{fs(stage, m)}. Limit only.
  Space child(std::uint64_t m) const;
  // Successor space X_{stage+1}.
  Space next() const { return Space(successor(stage_)); }

  const Ordinal& root() const { return root_; }
  // Number of successor renormings between the root and this stage.
  std::uint64_t height() const { return height_; }
  bool base_rooted() const { return root_ == Ordinal::finite(1); }
  // Weight w with ||x|| = max(w * ||x||_inf, |phi(x)|) on base-rooted spaces.
  Rational sup_weight() const;

  std::string str() const { return "X_" + stage_.str(); }

  friend bool operator==(const Space& a, const Space& b) {
    return a.stage_ == b.stage_;
  }

 private:
  Ordinal stage_;
  Ordinal root_;
  std::uint64_t height_ = 0;
  SpaceKind kind_ = SpaceKind::kBase;
};

void to_json(nlohmann::json& j, const Space& s);
Space space_from_json(const nlohmann::json& j);

}  // namespace fatou

#endif  // FATOU_SPACE_H_
