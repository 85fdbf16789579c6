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

#include "fatou/tree.h"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fatou/digest.h"
#include "fatou/errors.h"
#include "fatou/families.h"

namespace fatou {

namespace {

// Components whose certificates are re-derived when checking a weave.
constexpr std::uint64_t kWeaveCheckedComponents = 3;

bool is_prefix(const LabelString& p, const LabelString& s) {
  return p.size() <= s.size() && std::equal(p.begin(), p.end(), s.begin());
}

}  // namespace

// --- FiniteTree -------------------------------------------------------------

FiniteTree::FiniteTree() { nodes_.insert(LabelString{}); }

FiniteTree FiniteTree::from_nodes(std::set<LabelString> nodes) {
  if (nodes.count(LabelString{}) == 0) {
    throw PreconditionError("tree must contain the empty string");
  }
  for (const auto& s : nodes) {
    if (s.empty()) continue;
    LabelString parent(s.begin(), s.end() - 1);
    if (nodes.count(parent) == 0) {
      std::string shown;
      for (const auto& l : s) shown += (shown.empty() ? "" : ",") + l;
      throw PreconditionError("tree is not prefix closed at (" + shown + ")");
    }
  }
  FiniteTree t;
  t.nodes_ = std::move(nodes);
  return t;
}

void FiniteTree::insert_path(const LabelString& s) {
  for (std::size_t i = 0; i <= s.size(); ++i) {
    nodes_.insert(LabelString(s.begin(), s.begin() + i));
  }
}

std::vector<LabelString> FiniteTree::children(const LabelString& s) const {
  std::vector<LabelString> out;
  for (auto it = nodes_.upper_bound(s); it != nodes_.end() && is_prefix(s, *it); ++it) {
    if (it->size() == s.size() + 1) out.push_back(*it);
  }
  return out;
}

std::size_t FiniteTree::height() const {
  std::size_t h = 0;
  for (const auto& s : nodes_) h = std::max(h, s.size());
  return h;
}

std::map<LabelString, std::uint64_t> all_node_ranks(const FiniteTree& tree) {
  std::map<LabelString, std::uint64_t> rank;
  // Extensions sort after their prefixes, so a reverse sweep sees every
  // child before its parent.
  for (auto it = tree.nodes().rbegin(); it != tree.nodes().rend(); ++it) {
    const std::uint64_t r = rank[*it];  // 0 if no child was seen
    if (!it->empty()) {
      LabelString parent(it->begin(), it->end() - 1);
      auto& p = rank[parent];
      p = std::max(p, r + 1);
    }
  }
  return rank;
}

Ordinal finite_rank(const FiniteTree& tree) {
  return Ordinal::finite(all_node_ranks(tree).at(LabelString{}) + 1);
}

Ordinal node_rank(const FiniteTree& tree, const LabelString& s) {
  if (!tree.contains(s)) throw PreconditionError("node is not in the tree");
  return Ordinal::finite(all_node_ranks(tree).at(s));
}

std::string to_dot(const FiniteTree& tree, const std::string& name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n  node [shape=box, fontname=\"monospace\"];\n";
  std::map<LabelString, std::size_t> id;
  for (const auto& s : tree.nodes()) {
    const std::size_t n = id.size();
    id[s] = n;
    os << "  n" << n << " [label=\"" << (s.empty() ? std::string("()") : s.back())
       << "\"];\n";
  }
  for (const auto& s : tree.nodes()) {
    if (s.empty()) continue;
    os << "  n" << id.at(LabelString(s.begin(), s.end() - 1)) << " -> n" << id.at(s)
       << ";\n";
  }
  os << "}\n";
  return os.str();
}

void to_json(nlohmann::json& j, const FiniteTree& tree) {
  j = {{"schema", "fatou.tree/1"}, {"nodes", tree.nodes()}};
}

FiniteTree finite_tree_from_json(const nlohmann::json& j) {
  try {
    const nlohmann::json& nodes = j.is_object() ? j.at("nodes") : j;
    if (j.is_object() && j.contains("schema") && j.at("schema") != "fatou.tree/1") {
      throw ParseError("unsupported tree schema " + j.at("schema").dump());
    }
    std::set<LabelString> set;
    for (const auto& n : nodes) set.insert(n.get<LabelString>());
    return FiniteTree::from_nodes(std::move(set));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("tree: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("tree: ") + e.what());
  }
}

// --- StructuredTree ---------------------------------------------------------

TreePtr StructuredTree::explicit_tree(FiniteTree tree, std::map<Label, Element> labels) {
  auto t = std::shared_ptr<StructuredTree>(new StructuredTree());
  t->kind_ = TreeKind::kExplicit;
  t->cert_ = finite_rank(tree);
  t->trace_ = {"explicit: rho = rho(()) + 1 = " + t->cert_.str() + " over " +
               std::to_string(tree.size()) + " nodes"};
  t->finite_ = std::make_shared<FiniteTree>(std::move(tree));
  t->labels_ = std::move(labels);
  t->memo_ = std::make_shared<Memo>();
  return t;
}

TreePtr StructuredTree::prefixed(Element root_label, TreePtr inner) {
  if (!inner) throw PreconditionError("prefixed tree needs an inner tree");
  auto t = std::shared_ptr<StructuredTree>(new StructuredTree());
  t->kind_ = TreeKind::kPrefixed;
  t->cert_ = successor(inner->rank_cert());
  t->trace_ = {"prefixed: rho = rho(inner) + 1 = " + inner->rank_cert().str() + " + 1 = " +
               t->cert_.str()};
  t->root_label_ = std::make_shared<Element>(std::move(root_label));
  t->inner_ = std::move(inner);
  t->memo_ = std::make_shared<Memo>();
  return t;
}

TreePtr StructuredTree::weave(Ordinal stage, ComponentProvider components) {
  if (!is_limit(stage)) throw PreconditionError("weave stage must be a limit ordinal");
  auto t = std::shared_ptr<StructuredTree>(new StructuredTree());
  t->kind_ = TreeKind::kWeave;
  t->stage_ = std::move(stage);
  t->provider_ = std::move(components);
  t->cert_ = successor(t->stage_);
  t->trace_ = {
      "weave: node (g_1,...,g_r) sits in every component m >= start(g_1) with rank >= g_r",
      "weave: root rank = sup_m fs(" + t->stage_.str() + ", m) = " + t->stage_.str(),
      "weave: rho = " + t->stage_.str() + " + 1 = " + t->cert_.str()};
  t->memo_ = std::make_shared<Memo>();
  return t;
}

TreePtr StructuredTree::with_claimed_cert(const TreePtr& tree, Ordinal cert,
                                          std::vector<std::string> trace) {
  auto t = std::shared_ptr<StructuredTree>(new StructuredTree(*tree));
  t->cert_ = std::move(cert);
  t->trace_ = std::move(trace);
  t->memo_ = std::make_shared<Memo>();
  return t;
}

const FiniteTree& StructuredTree::finite() const {
  if (kind_ != TreeKind::kExplicit) throw PreconditionError("not an explicit tree");
  return *finite_;
}

const Element& StructuredTree::root_label() const {
  if (kind_ != TreeKind::kPrefixed) throw PreconditionError("not a prefixed tree");
  return *root_label_;
}

const TreePtr& StructuredTree::inner() const {
  if (kind_ != TreeKind::kPrefixed) throw PreconditionError("not a prefixed tree");
  return inner_;
}

TreePtr StructuredTree::component(std::uint64_t m) const {
  if (kind_ != TreeKind::kWeave) throw PreconditionError("not a weave");
  if (m == 0) throw PreconditionError("component index must be >= 1");
  {
    std::lock_guard<std::mutex> lock(memo_->mu);
    if (auto it = memo_->components.find(m); it != memo_->components.end()) return it->second;
  }
  TreePtr c = provider_ ? provider_(m) : nullptr;
  if (!c) {
    throw CertificateError("missing component " + std::to_string(m) + " of the weave at " +
                           stage_.str());
  }
  std::lock_guard<std::mutex> lock(memo_->mu);
  return memo_->components.emplace(m, c).first->second;
}

NodeRef StructuredTree::root() const { return NodeRef{}; }

Ordinal StructuredTree::rank_floor(const NodeRef& node) const {
  switch (kind_) {
    case TreeKind::kExplicit: {
      std::lock_guard<std::mutex> lock(memo_->mu);
      if (!memo_->ranks) memo_->ranks = all_node_ranks(*finite_);
      auto it = memo_->ranks->find(node.path);
      if (it == memo_->ranks->end()) throw PreconditionError("node is not in the tree");
      return Ordinal::finite(it->second);
    }
    case TreeKind::kPrefixed:
      if (node.at_root) {
        return classify(cert_).kind == OrdinalKind::kSuccessor ? predecessor(cert_) : cert_;
      }
      return inner_->rank_floor(*node.inner);
    case TreeKind::kWeave:
      return node.address.empty() ? stage_ : node.address.back();
  }
  return Ordinal();
}

namespace {

const Element& stored_label(const std::map<Label, Element>& labels, const Label& l) {
  auto it = labels.find(l);
  if (it == labels.end()) throw CertificateError("no element stored for label " + l);
  return it->second;
}

}  // namespace

std::optional<std::pair<Element, NodeRef>> StructuredTree::child_with_rank(
    const NodeRef& node, const Ordinal& beta) const {
  switch (kind_) {
    case TreeKind::kExplicit: {
      for (const auto& c : finite_->children(node.path)) {
        NodeRef next{c, true, nullptr, {}, node.depth + 1};
        if (rank_floor(next) >= beta) {
          return std::make_pair(stored_label(labels_, c.back()), next);
        }
      }
      return std::nullopt;
    }
    case TreeKind::kPrefixed: {
      if (node.at_root) {
        NodeRef next;
        next.at_root = false;
        next.inner = std::make_shared<NodeRef>(inner_->root());
        next.depth = 1;
        if (!(rank_floor(next) >= beta)) return std::nullopt;
        return std::make_pair(*root_label_, next);
      }
      auto sub = inner_->child_with_rank(*node.inner, beta);
      if (!sub) return std::nullopt;
      NodeRef next;
      next.at_root = false;
      next.inner = std::make_shared<NodeRef>(sub->second);
      next.depth = node.depth + 1;
      return std::make_pair(sub->first.restaged(root_label_->space()), next);
    }
    case TreeKind::kWeave: {
      if (!(beta < rank_floor(node))) return std::nullopt;
      NodeRef next;
      next.address = node.address;
      next.address.push_back(beta);
      next.depth = node.depth + 1;
      return std::make_pair(witness_label(stage_, next.address), next);
    }
  }
  return std::nullopt;
}

std::vector<Ordinal> truncation_set(const Ordinal& beta, std::uint64_t components) {
  const auto c = classify(beta);
  switch (c.kind) {
    case OrdinalKind::kZero:
      return {};
    case OrdinalKind::kSuccessor:
      return {*c.predecessor};
    case OrdinalKind::kLimit: {
      std::vector<Ordinal> out;
      for (std::uint64_t j = 1; j <= components; ++j) {
        out.push_back(fundamental_sequence(beta, j));
      }
      return out;
    }
  }
  return {};
}

std::vector<std::pair<Element, NodeRef>> StructuredTree::children(
    const NodeRef& node, std::uint64_t components) const {
  std::vector<std::pair<Element, NodeRef>> out;
  switch (kind_) {
    case TreeKind::kExplicit:
      for (const auto& c : finite_->children(node.path)) {
        out.emplace_back(stored_label(labels_, c.back()),
                         NodeRef{c, true, nullptr, {}, node.depth + 1});
      }
      break;
    case TreeKind::kPrefixed:
      if (node.at_root) {
        NodeRef next;
        next.at_root = false;
        next.inner = std::make_shared<NodeRef>(inner_->root());
        next.depth = 1;
        out.emplace_back(*root_label_, next);
      } else {
        for (auto& [label, sub] : inner_->children(*node.inner, components)) {
          NodeRef next;
          next.at_root = false;
          next.inner = std::make_shared<NodeRef>(sub);
          next.depth = node.depth + 1;
          out.emplace_back(label.restaged(root_label_->space()), next);
        }
      }
      break;
    case TreeKind::kWeave:
      for (const auto& g : truncation_set(rank_floor(node), components)) {
        NodeRef next;
        next.address = node.address;
        next.address.push_back(g);
        next.depth = node.depth + 1;
        out.emplace_back(witness_label(stage_, next.address), next);
      }
      break;
  }
  return out;
}

// --- ranks ------------------------------------------------------------------

namespace {

Ordinal derive_rank(const StructuredTree& tree, std::vector<std::string>* trace) {
  auto note = [trace](std::string s) {
    if (trace != nullptr) trace->push_back(std::move(s));
  };
  switch (tree.kind()) {
    case TreeKind::kExplicit: {
      const Ordinal r = finite_rank(tree.finite());
      note("explicit: brute-force rank " + r.str() + " over " +
           std::to_string(tree.finite().size()) + " nodes");
      return r;
    }
    case TreeKind::kPrefixed: {
      const Ordinal inner = derive_rank(*tree.inner(), trace);
      const Ordinal r = successor(inner);
      note("prefixed: " + inner.str() + " + 1 = " + r.str());
      return r;
    }
    case TreeKind::kWeave: {
      const Ordinal& stage = tree.stage();
      for (std::uint64_t m = 1; m <= kWeaveCheckedComponents; ++m) {
        const Ordinal am = fundamental_sequence(stage, m);
        const TreePtr c = tree.component(m);
        const Ordinal cr = derive_rank(*c, nullptr);
        if (!(cr > am)) {
          throw CertificateError("component " + std::to_string(m) + " has rank " + cr.str() +
                                 ", not above " + am.str());
        }
        note("weave: component " + std::to_string(m) + " certified " + cr.str() + " > " +
             am.str());
      }
      note("weave: node (fs(" + stage.str() + ", m)) lies in components m' > m with rank >= "
           "fs(" + stage.str() + ", m)");
      note("weave: root rank = sup_m fs(" + stage.str() + ", m) = " + stage.str());
      const Ordinal r = successor(stage);
      note("weave: rho = " + r.str());
      return r;
    }
  }
  return Ordinal();
}

}  // namespace

Ordinal structured_rank(const StructuredTree& tree) {
  const Ordinal r = derive_rank(tree, nullptr);
  if (!(r == tree.rank_cert())) {
    throw CertificateError("stored certificate " + tree.rank_cert().str() +
                           " disagrees with derived rank " + r.str());
  }
  return r;
}

std::vector<std::string> rank_trace(const StructuredTree& tree) {
  std::vector<std::string> trace;
  derive_rank(tree, &trace);
  return trace;
}

void for_each_node(const StructuredTree& tree, std::size_t depth, std::uint64_t components,
                   const std::function<void(const std::vector<Element>&)>& visit) {
  std::vector<Element> labels;
  std::function<void(const NodeRef&)> walk = [&](const NodeRef& node) {
    visit(labels);
    if (node.depth >= depth) return;
    for (const auto& [label, child] : tree.children(node, components)) {
      labels.push_back(label);
      walk(child);
      labels.pop_back();
    }
  };
  walk(tree.root());
}

FiniteTree truncate(const StructuredTree& tree, std::size_t depth, std::uint64_t components) {
  if (tree.kind() == TreeKind::kExplicit && tree.labels().empty()) {
    // Bare label trees: cut by depth only.
    std::set<LabelString> kept;
    for (const auto& s : tree.finite().nodes()) {
      if (s.size() <= depth) kept.insert(s);
    }
    return FiniteTree::from_nodes(std::move(kept));
  }
  FiniteTree out;
  for_each_node(tree, depth, components, [&out](const std::vector<Element>& labels) {
    LabelString s;
    s.reserve(labels.size());
    for (const auto& l : labels) s.push_back(element_digest(l));
    out.insert_path(s);
  });
  return out;
}

TreePtr countable_refinement(const TreePtr& tree, const Ordinal& target) {
  if (tree->rank_cert() < target) {
    throw CertificateError("certificate " + tree->rank_cert().str() + " is below target " +
                           target.str());
  }
  if (tree->kind() == TreeKind::kPrefixed) {
    const auto c = classify(target);
    if (c.kind == OrdinalKind::kSuccessor) {
      return StructuredTree::prefixed(tree->root_label(),
                                      countable_refinement(tree->inner(), *c.predecessor));
    }
  }
  // Explicit trees are already finite, and the canonical weave keeps every
  // stored witness branch.
  return tree;
}

// --- JSON -------------------------------------------------------------------

void to_json(nlohmann::json& j, const StructuredTree& tree) {
  using nlohmann::json;
  json cert;
  to_json(cert, tree.rank_cert());
  j = {{"rank_cert", cert}, {"trace", tree.trace()}};
  switch (tree.kind()) {
    case TreeKind::kExplicit: {
      j["kind"] = "explicit";
      j["nodes"] = tree.finite().nodes();
      json labels = json::object();
      for (const auto& [k, v] : tree.labels()) {
        json e;
        to_json(e, v);
        labels[k] = e;
      }
      j["labels"] = labels;
      break;
    }
    case TreeKind::kPrefixed: {
      j["kind"] = "prefixed";
      json root;
      to_json(root, tree.root_label());
      j["root_label"] = root;
      json inner;
      to_json(inner, *tree.inner());
      j["inner"] = inner;
      break;
    }
    case TreeKind::kWeave: {
      j["kind"] = "weave";
      json stage;
      to_json(stage, tree.stage());
      j["stage"] = stage;
      json comps = json::array();
      for (std::uint64_t m = 1; m <= kWeaveCheckedComponents; ++m) {
        json c;
        to_json(c, fundamental_sequence(tree.stage(), m));
        json r;
        to_json(r, tree.component(m)->rank_cert());
        comps.push_back({{"index", m}, {"stage", c}, {"rank_cert", r}});
      }
      j["components"] = comps;
      break;
    }
  }
}

TreePtr structured_tree_from_json(const nlohmann::json& j,
                                  const std::function<TreePtr(const Ordinal&)>& rebuild_weave) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    TreePtr t;
    if (kind == "explicit") {
      std::set<LabelString> nodes;
      for (const auto& n : j.at("nodes")) nodes.insert(n.get<LabelString>());
      std::map<Label, Element> labels;
      if (j.contains("labels")) {
        for (const auto& [k, v] : j.at("labels").items()) labels.emplace(k, element_from_json(v));
      }
      t = StructuredTree::explicit_tree(FiniteTree::from_nodes(std::move(nodes)),
                                        std::move(labels));
    } else if (kind == "prefixed") {
      t = StructuredTree::prefixed(element_from_json(j.at("root_label")),
                                   structured_tree_from_json(j.at("inner"), rebuild_weave));
    } else if (kind == "weave") {
      t = rebuild_weave(j.at("stage").get<Ordinal>());
    } else {
      throw ParseError("unknown tree kind '" + kind + "'");
    }
    if (j.contains("rank_cert")) {
      const Ordinal claimed = j.at("rank_cert").get<Ordinal>();
      if (!(claimed == t->rank_cert())) {
        return StructuredTree::with_claimed_cert(
            t, claimed, j.value("trace", std::vector<std::string>{}));
      }
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("structured tree: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("structured tree: ") + e.what());
  }
}

}  // namespace fatou
