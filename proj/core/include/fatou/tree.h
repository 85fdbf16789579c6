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

#ifndef FATOU_TREE_H_
#define FATOU_TREE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fatou/element.h"
#include "fatou/ordinal.h"
#include "fatou/space.h"

namespace fatou {

using Label = std::string;
using LabelString = std::vector<Label>;

// A finite tree of label strings: prefix closed and containing the empty
// string.
class FiniteTree {
 public:
  // The one-node tree {()}.
  FiniteTree();
  // Throws PreconditionError unless the set is prefix closed and contains ().
  static FiniteTree from_nodes(std::set<LabelString> nodes);

  // Adds s together with all of its prefixes.
  void insert_path(const LabelString& s);

  bool contains(const LabelString& s) const { return nodes_.count(s) > 0; }
  std::size_t size() const { return nodes_.size(); }
  const std::set<LabelString>& nodes() const { return nodes_; }
  std::vector<LabelString> children(const LabelString& s) const;
  // Longest node length.
  std::size_t height() const;

  friend bool operator==(const FiniteTree& a, const FiniteTree& b) = default;

 private:
  std::set<LabelString> nodes_;
};

// rho(T) = rho_T(()) + 1.
Ordinal finite_rank(const FiniteTree& tree);
// rho_T(s): 0 for a leaf, otherwise the max over children of rank + 1.
Ordinal node_rank(const FiniteTree& tree, const LabelString& s);
// Ranks of every node at once.
std::map<LabelString, std::uint64_t> all_node_ranks(const FiniteTree& tree);

// Graphviz rendering; each node shows its last label.
std::string to_dot(const FiniteTree& tree, const std::string& name = "T");

void to_json(nlohmann::json& j, const FiniteTree& tree);
FiniteTree finite_tree_from_json(const nlohmann::json& j);

enum class TreeKind { kExplicit, kPrefixed, kWeave };

class StructuredTree;
using TreePtr = std::shared_ptr<const StructuredTree>;
// Component m >= 1 of a weave, i.e. the witness tree of the m-th child stage.
using ComponentProvider = std::function<TreePtr(std::uint64_t)>;

// A position inside a StructuredTree.
struct NodeRef {
  LabelString path;                       // explicit trees
  bool at_root = true;                    // prefixed trees
  std::shared_ptr<const NodeRef> inner;   // prefixed trees, below the root
  std::vector<Ordinal> address;           // weaves
  std::size_t depth = 0;
};

// A countable tree described finitely, with a stored rank certificate and the
// derivation that produced it.
//   Explicit: a finite tree whose labels are element digests.
//   Prefixed: {()} u {(x) ^ s : s in inner}.
//   Weave:    the limit-stage tree whose nodes are strictly decreasing
//             ordinal addresses below the stage; components are the witness
//             trees of the child stages, materialized on demand.
class StructuredTree {
 public:
  static TreePtr explicit_tree(FiniteTree tree, std::map<Label, Element> labels = {});
  static TreePtr prefixed(Element root_label, TreePtr inner);
  static TreePtr weave(Ordinal stage, ComponentProvider components);
  // Same tree with a different stored certificate. Used when loading trees
  // whose certificate is claimed by a file rather than derived here.
  static TreePtr with_claimed_cert(const TreePtr& tree, Ordinal cert,
                                   std::vector<std::string> trace);

  TreeKind kind() const { return kind_; }
  const Ordinal& rank_cert() const { return cert_; }
  const std::vector<std::string>& trace() const { return trace_; }

  // Explicit.
  const FiniteTree& finite() const;
  const std::map<Label, Element>& labels() const { return labels_; }
  // Prefixed.
  const Element& root_label() const;
  const TreePtr& inner() const;
  // Weave.
  const Ordinal& stage() const { return stage_; }
  // Memoized; throws CertificateError if the provider has nothing.
  TreePtr component(std::uint64_t m) const;

  NodeRef root() const;
  // Certified lower bound on the rank of a node.
  Ordinal rank_floor(const NodeRef& node) const;
  // A child whose rank is at least beta, with its label, or nothing.
  std::optional<std::pair<Element, NodeRef>> child_with_rank(const NodeRef& node,
                                                             const Ordinal& beta) const;
  // Children kept by a truncation with the given component budget: all
  // children of explicit nodes, and at weave nodes the children named by
  // truncation_set.
  std::vector<std::pair<Element, NodeRef>> children(const NodeRef& node,
                                                    std::uint64_t components) const;

 private:
  StructuredTree() = default;

  TreeKind kind_ = TreeKind::kExplicit;
  Ordinal cert_;
  std::vector<std::string> trace_;

  std::shared_ptr<const FiniteTree> finite_;
  std::map<Label, Element> labels_;
  std::shared_ptr<const Element> root_label_;
  TreePtr inner_;
  Ordinal stage_;
  ComponentProvider provider_;
  struct Memo {
    std::mutex mu;
    std::map<std::uint64_t, TreePtr> components;
    std::optional<std::map<LabelString, std::uint64_t>> ranks;
  };
  std::shared_ptr<Memo> memo_;
};

// Ordinals below beta used as children of a node of rank beta when a weave is
// truncated: none for 0, the predecessor for successors, and the first
// `components` terms of the fundamental sequence for limits.
std::vector<Ordinal> truncation_set(const Ordinal& beta, std::uint64_t components);

// Recomputes the certificate: finite_rank for explicit trees, inner + 1 for
// prefixed trees, and the min rule over components for weaves. Throws
// CertificateError if a stored certificate disagrees or a component is
// missing.
Ordinal structured_rank(const StructuredTree& tree);
std::vector<std::string> rank_trace(const StructuredTree& tree);

// Explicit finite subtree of depth <= depth (labels are element digests).
FiniteTree truncate(const StructuredTree& tree, std::size_t depth, std::uint64_t components);

// Visits every node of the truncation with its full label string.
void for_each_node(const StructuredTree& tree, std::size_t depth, std::uint64_t components,
                   const std::function<void(const std::vector<Element>&)>& visit);

// A finitely described subtree with certificate >= target. The canonical
// choice keeps every stored witness branch.
TreePtr countable_refinement(const TreePtr& tree, const Ordinal& target);

// Skeleton: certificates, traces, explicit nodes and labels, and for weaves
// the stage plus the certificates of the first few components.
void to_json(nlohmann::json& j, const StructuredTree& tree);
// Weaves are rebuilt from their stage by `rebuild_weave`.
TreePtr structured_tree_from_json(const nlohmann::json& j,
                                  const std::function<TreePtr(const Ordinal&)>& rebuild_weave);

}  // namespace fatou

#endif  // FATOU_TREE_H_
