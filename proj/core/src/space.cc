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

#include "fatou/space.h"

#include <nlohmann/json.hpp>

#include "fatou/errors.h"

namespace fatou {

Space::Space(Ordinal stage) : stage_(std::move(stage)) {
  if (stage_.is_zero()) throw PreconditionError("stage must be >= 1");
  auto [lambda, n] = split_finite(stage_);
  if (lambda.is_zero()) {
    root_ = Ordinal::finite(1);
    height_ = n - 1;
  } else {
    root_ = lambda;
    height_ = n;
  }
  if (stage_ == Ordinal::finite(1)) {
    kind_ = SpaceKind::kBase;
  } else if (n > 0) {
    kind_ = SpaceKind::kSucc;
  } else {
    kind_ = SpaceKind::kLimit;
  }
}

Space Space::inner() const {
  if (kind_ != SpaceKind::kSucc) {
    throw PreconditionError(str() + " is not a successor stage");
  }
  return Space(predecessor(stage_));
}

Space Space::child(std::uint64_t m) const {
  if (kind_ != SpaceKind::kLimit) {
    throw PreconditionError(str() + " is not a limit stage");
  }
  return Space(fundamental_sequence(stage_, m));
}

Rational Space::sup_weight() const {
  if (!base_rooted()) throw PreconditionError(str() + " is not base-rooted");
  return Rational(1, 3) / power(Rational(7), static_cast<unsigned>(height_));
}

void to_json(nlohmann::json& j, const Space& s) {
  nlohmann::json stage;
  to_json(stage, s.stage());
  const char* kind = s.kind() == SpaceKind::kBase   ? "base"
                     : s.kind() == SpaceKind::kSucc ? "succ"
                                                    : "limit";
  j = nlohmann::json{{"kind", kind}, {"stage", stage}};
}

Space space_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("stage")) {
    throw ParseError("space descriptor must be an object with 'stage'");
  }
  Ordinal stage;
  from_json(j.at("stage"), stage);
  if (stage.is_zero()) throw ParseError("space stage must be >= 1");
  return Space(stage);
}

}  // namespace fatou
