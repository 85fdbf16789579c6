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

#ifndef FATOU_CONSTRUCTION_H_
#define FATOU_CONSTRUCTION_H_

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fatou/element.h"
#include "fatou/ordinal.h"
#include "fatou/report.h"
#include "fatou/sequence.h"
#include "fatou/space.h"
#include "fatou/tree.h"

namespace fatou {

// Everything the construction produces at one stage: the space (with its
// norm, phi and pi-basis), the canonical sequence z and the witness tree.
struct Bundle {
  Ordinal stage;
  Space space = Space::base();
  SequenceSpec z = SequenceSpec::canonical_z(Space::base());
  TreePtr witness;
  std::vector<std::string> provenance;
};
using BundlePtr = std::shared_ptr<const Bundle>;

// Structural recursion on alpha >= 1; memoized by notation, so limit stages
// build their children only when asked.
BundlePtr build(const Ordinal& alpha);

struct Budgets {
  std::uint64_t n_budget = 64;
  std::uint64_t components = 16;
  std::size_t depth = 8;
};

// Re-checks the inductive properties of a bundle:
//   a  z decreasing, positive, phi(z_n) = ||z_n|| = 1
//   b  infimum zero: every pi-basis element escapes some z_n
//   c  witness nodes inside Psi((z_n))
//   d  witness labels in S
//   e  rank certificate above the stage, corroborated by truncations
//   f  at successor stages, the renorming chain for z_1 and y_1
Report verify(const Bundle& bundle, const Budgets& budgets = {});

// For x, y in S at some stage: phi((x - y)^+) = 0 and both x - y and
// (x - y)^+ shrink by exactly 1/7 at the next stage.
Report successor_norm_lemma_check(const Element& x, const Element& y);

// Random pairs of S at a base-rooted stage.
Report successor_norm_lemma_sweep(const Ordinal& alpha, std::uint64_t pairs,
                                  std::uint64_t seed);

// A random element of S at a base-rooted stage.
Element random_sphere_element(const Space& space, std::mt19937_64& rng);

void to_json(nlohmann::json& j, const Bundle& bundle);
// Explicit and prefixed parts of the witness are read back as stored, so
// tampering is visible to verify; weaves are rebuilt from their stage.
BundlePtr bundle_from_json(const nlohmann::json& j);

}  // namespace fatou

#endif  // FATOU_CONSTRUCTION_H_
