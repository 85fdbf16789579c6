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

#include "fatou/psi.h"

#include <functional>
#include <map>
#include <mutex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fatou/errors.h"

namespace fatou {

namespace {

Rational third_power(std::size_t i) { return power(Rational(1, 3), static_cast<unsigned>(i)); }

std::string ord_list(const std::vector<Ordinal>& a) {
  std::string out = "(";
  for (std::size_t i = 0; i < a.size(); ++i) out += (i ? "," : "") + a[i].str();
  return out + ")";
}

PsiVerdict refuted(std::size_t position, std::optional<std::uint64_t> n, Rational lhs,
                   Rational rhs, bool exact, std::uint64_t n_budget,
                   std::vector<std::string> trace) {
  PsiVerdict v;
  v.outcome = PsiVerdict::Outcome::kRefuted;
  v.position = position;
  v.n = n;
  v.lhs = std::move(lhs);
  v.rhs = std::move(rhs);
  v.exact = exact;
  v.n_budget = n_budget;
  v.trace = std::move(trace);
  std::ostringstream os;
  if (n) {
    os << "violated: ||(y_" << position << " - z_" << *n << ")^+|| ";
  } else {
    os << "violated: ||y_" << position + 1 << " - y_" << position << "|| ";
  }
  os << (exact ? "= " : ">= ") << v.lhs << " > " << v.rhs << (exact ? " = " : " >= ")
     << "||y_" << position << "||/3^" << position;
  v.trace.push_back(os.str());
  return v;
}

void check_labels(const SequenceSpec& z, const std::vector<Element>& string,
                  std::vector<std::string>& trace) {
  for (std::size_t i = 0; i < string.size(); ++i) {
    if (!(string[i].space() == z.space())) {
      throw SpaceMismatch("label " + std::to_string(i + 1) + " lives in " +
                          string[i].space().str() + ", z in " + z.space().str());
    }
    const OrderVerdict p = is_strictly_positive(string[i]);
    if (p.is_false()) {
      throw PreconditionError("label " + std::to_string(i + 1) + " is not strictly positive");
    }
    if (p.is_unknown()) {
      trace.push_back("positivity of y_" + std::to_string(i + 1) + " checked up to component " +
                      std::to_string(p.decided_up_to));
    }
  }
}

PsiVerdict check_exact(const SequenceSpec& z, const std::vector<Element>& string,
                       std::uint64_t n_budget, std::vector<std::string> trace) {
  const std::size_t k = string.size();
  std::vector<Rational> norms;
  for (const auto& y : string) norms.push_back(norm(y));
  for (std::size_t i = 1; i < k; ++i) {
    const Rational lhs = norm(sub(string[i], string[i - 1]));
    const Rational rhs = norms[i - 1] * third_power(i);
    if (lhs > rhs) return refuted(i, std::nullopt, lhs, rhs, true, n_budget, std::move(trace));
  }
  trace.push_back("links: all " + std::to_string(k ? k - 1 : 0) + " checked exactly");
  for (std::size_t i = 1; i <= k; ++i) {
    const Rational rhs = norms[i - 1] * third_power(i);
    const TermFunctional f = fn_pos_excess(string[i - 1]);
    for (std::uint64_t n = 1; n <= n_budget; ++n) {
      const Rational lhs = f.value(z.term(n));
      if (lhs > rhs) return refuted(i, n, lhs, rhs, true, n_budget, std::move(trace));
    }
    const ExtRational sup = sup_from(z, f, n_budget + 1);
    if (ExtRational::finite(rhs) < sup) {
      // The excess grows with n and tends to its supremum, so a violating n
      // exists; find it.
      for (std::uint64_t n = n_budget + 1;; ++n) {
        if (n > n_budget + 2'000'000) {
          throw BudgetExhausted("refuting index for position " + std::to_string(i) +
                                " lies beyond the scan limit");
        }
        const Rational lhs = f.value(z.term(n));
        if (lhs > rhs) {
          trace.push_back("refuting n found past the budget from the exact supremum " +
                          sup.str());
          return refuted(i, n, lhs, rhs, true, n_budget, std::move(trace));
        }
      }
    }
    trace.push_back("position " + std::to_string(i) + ": sup_n ||(y_i - z_n)^+|| = " +
                    max(sup, ExtRational::finite(Rational(0))).str() + " <= " + rhs.str() +
                    " exactly, via the tail rule of z");
  }
  PsiVerdict v;
  v.outcome = PsiVerdict::Outcome::kCertified;
  v.n_budget = n_budget;
  v.trace = std::move(trace);
  return v;
}

PsiVerdict check_bounds(const SequenceSpec& z, const std::vector<Element>& string,
                        std::uint64_t n_budget, std::vector<std::string> trace) {
  const std::size_t k = string.size();
  std::vector<NormBound> norms;
  for (const auto& y : string) norms.push_back(norm_bounds(y));
  bool undetermined = false;
  std::vector<std::string> open;
  for (std::size_t i = 1; i < k; ++i) {
    const NormBound lhs = norm_bounds(sub(string[i], string[i - 1]));
    const Rational rhs_hi = norms[i - 1].upper * third_power(i);
    const Rational rhs_lo = norms[i - 1].lower * third_power(i);
    if (lhs.lower > rhs_hi) {
      return refuted(i, std::nullopt, lhs.lower, rhs_hi, false, n_budget, std::move(trace));
    }
    if (lhs.upper > rhs_lo) {
      undetermined = true;
      open.push_back("link " + std::to_string(i));
    }
  }
  for (std::size_t i = 1; i <= k; ++i) {
    const Rational rhs_hi = norms[i - 1].upper * third_power(i);
    const Rational rhs_lo = norms[i - 1].lower * third_power(i);
    for (std::uint64_t n = 1; n <= n_budget; ++n) {
      const NormBound lhs = norm_bounds(pos_part(sub(string[i - 1], z.term(n))));
      if (lhs.lower > rhs_hi) {
        return refuted(i, n, lhs.lower, rhs_hi, false, n_budget, std::move(trace));
      }
      if (lhs.upper > rhs_lo) {
        undetermined = true;
        open.push_back("position " + std::to_string(i) + ", n = " + std::to_string(n));
      }
    }
  }
  PsiVerdict v;
  v.n_budget = n_budget;
  v.exact = false;
  v.trace = std::move(trace);
  if (undetermined) {
    v.outcome = PsiVerdict::Outcome::kUndetermined;
    std::string shown;
    for (std::size_t j = 0; j < open.size() && j < 4; ++j) shown += (j ? "; " : "") + open[j];
    v.trace.push_back("norm bounds inconclusive at " + shown +
                      (open.size() > 4 ? " and more" : ""));
  } else {
    v.outcome = PsiVerdict::Outcome::kPassedUpTo;
    v.trace.push_back("bounds: every inequality holds for n <= " + std::to_string(n_budget));
  }
  return v;
}

}  // namespace

std::string outcome_name(PsiVerdict::Outcome o) {
  switch (o) {
    case PsiVerdict::Outcome::kRefuted:
      return "refuted";
    case PsiVerdict::Outcome::kPassedUpTo:
      return "passed_up_to";
    case PsiVerdict::Outcome::kCertified:
      return "certified";
    case PsiVerdict::Outcome::kUndetermined:
      return "undetermined";
  }
  return "undetermined";
}

std::string PsiVerdict::str() const {
  std::ostringstream os;
  os << outcome_name(outcome);
  if (outcome == Outcome::kRefuted) {
    os << " at position " << position;
    if (n) {
      os << ", n = " << *n;
    } else {
      os << ", link";
    }
    os << ": " << lhs << " > " << rhs;
  } else if (outcome == Outcome::kPassedUpTo) {
    os << " n <= " << n_budget;
  }
  return os.str();
}

void to_json(nlohmann::json& j, const PsiVerdict& v) {
  j = {{"outcome", outcome_name(v.outcome)},
       {"exact", v.exact},
       {"n_budget", v.n_budget},
       {"trace", v.trace}};
  if (v.refuted()) {
    j["position"] = v.position;
    if (v.n) {
      j["n"] = *v.n;
    } else {
      j["n"] = "link";
    }
    j["lhs"] = v.lhs.str();
    j["rhs"] = v.rhs.str();
  }
}

PsiVerdict psi_verdict_from_json(const nlohmann::json& j) {
  try {
    PsiVerdict v;
    const std::string o = j.at("outcome").get<std::string>();
    if (o == "refuted") {
      v.outcome = PsiVerdict::Outcome::kRefuted;
    } else if (o == "passed_up_to") {
      v.outcome = PsiVerdict::Outcome::kPassedUpTo;
    } else if (o == "certified") {
      v.outcome = PsiVerdict::Outcome::kCertified;
    } else if (o == "undetermined") {
      v.outcome = PsiVerdict::Outcome::kUndetermined;
    } else {
      throw ParseError("unknown psi outcome '" + o + "'");
    }
    v.exact = j.value("exact", true);
    v.n_budget = j.value("n_budget", std::uint64_t{0});
    v.trace = j.value("trace", std::vector<std::string>{});
    if (v.refuted()) {
      v.position = j.at("position").get<std::size_t>();
      if (j.at("n").is_number()) v.n = j.at("n").get<std::uint64_t>();
      v.lhs = Rational::parse(j.at("lhs").get<std::string>());
      v.rhs = Rational::parse(j.at("rhs").get<std::string>());
    }
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("psi verdict: ") + e.what());
  }
}

PsiVerdict psi_check(const SequenceSpec& z, const std::vector<Element>& string,
                     std::uint64_t n_budget) {
  std::vector<std::string> trace;
  check_labels(z, string, trace);
  if (string.empty()) {
    PsiVerdict v;
    v.n_budget = n_budget;
    v.trace = {"empty string: nothing to check"};
    return v;
  }
  if (z.decidable()) return check_exact(z, string, n_budget, std::move(trace));
  return check_bounds(z, string, n_budget, std::move(trace));
}

std::optional<std::vector<Ordinal>> recognize_witness_string(
    const Ordinal& stage, const std::vector<Element>& string) {
  if (string.empty()) return std::vector<Ordinal>{};
  const Space space(stage);
  std::vector<Ordinal> candidate;
  Ordinal s = stage;
  // Successor levels: each one contributes its predecessor.
  while (candidate.size() < string.size() &&
         classify(s).kind == OrdinalKind::kSuccessor) {
    s = predecessor(s);
    candidate.push_back(s);
  }
  if (candidate.size() < string.size()) {
    // The rest of the address is written on the last label's tail.
    const Element& last = string.back();
    if (last.base_rooted() || last.tail()->op() != TailOp::kBranch) return std::nullopt;
    const auto& a = last.tail()->address();
    if (a.size() + candidate.size() != string.size()) return std::nullopt;
    candidate.insert(candidate.end(), a.begin(), a.end());
  }
  try {
    if (witness_string(stage, candidate) != string) return std::nullopt;
  } catch (const PreconditionError&) {
    return std::nullopt;
  }
  return candidate;
}

namespace {

struct CertifyMemo {
  std::mutex mu;
  std::map<std::string, PsiVerdict> verdicts;
};

CertifyMemo& certify_memo() {
  static CertifyMemo memo;
  return memo;
}

// Interval cross-check of a chain on a few n; only a refutation matters.
std::optional<PsiVerdict> cross_check(const Ordinal& stage, const std::vector<Ordinal>& address,
                                      std::vector<std::string>& trace) {
  const Space space(stage);
  const PsiVerdict v =
      psi_check(SequenceSpec::canonical_z(space), witness_string(stage, address), 3);
  if (v.refuted()) {
    PsiVerdict out = v;
    out.trace.insert(out.trace.begin(), "interval cross-check contradicts the chain (defect)");
    return out;
  }
  trace.push_back("interval cross-check for n <= 3: " + outcome_name(v.outcome));
  return std::nullopt;
}

PsiVerdict derive_certificate(const Ordinal& stage, const std::vector<Ordinal>& address,
                              std::uint64_t component_budget) {
  const Space space(stage);
  const std::string at = "T_" + stage.str() + " node " + ord_list(address);
  if (space.base_rooted()) {
    PsiVerdict v = check_exact(SequenceSpec::canonical_z(space), witness_string(stage, address),
                               0, {at + ": exact evaluation in a base-rooted space"});
    return v;
  }
  std::vector<std::string> trace{at};
  if (space.kind() == SpaceKind::kSucc) {
    const Ordinal beta = predecessor(stage);
    const std::string s = stage.str();
    trace.push_back("phi(z_1 - z_n) = 0, so ||(z_1 - z_n)^+||_" + s + " = ||z_1 - z_n||_" +
                    beta.str() + "/7 <= ||z_1||_" + beta.str() + "/7 = 1/7 < 1/3 = ||z_1||_" +
                    s + "/3");
    if (address.size() > 1) {
      const std::vector<Ordinal> rest(address.begin() + 1, address.end());
      PsiVerdict sub = certify_witness_node(beta, rest, component_budget);
      if (!sub.certified()) {
        sub.trace.insert(sub.trace.begin(), at + ": inner string not certified");
        return sub;
      }
      trace.push_back("inner string " + ord_list(rest) + " certified in T_" + beta.str());
      trace.push_back("labels of S_" + beta.str() + " stay in S_" + s + ": ||y_i||_" + s + " = 1");
      trace.push_back("||y_1 - z_1||_" + s + " = ||y_1 - z_1||_" + beta.str() +
                      "/7 <= (1 + 1)/7 = 2/7 < 1/3");
      trace.push_back("phi((y_i - z_n)^+) = 0, so ||(y_i - z_n)^+||_" + s +
                      " = ||(y_i - z_n)^+||_" + beta.str() + "/7 <= 3^-i/7 < 3^-(i+1)");
      trace.push_back("||y_{i+1} - y_i||_" + s + " = ||y_{i+1} - y_i||_" + beta.str() +
                      "/7 <= 3^-i/7 < 3^-(i+1)");
    }
  } else {
    const std::uint64_t k = start_index(stage, address.front());
    trace.push_back("components m < " + std::to_string(k) +
                    " of every label are 0 and contribute 0");
    for (std::uint64_t m = k; m < k + component_budget; ++m) {
      const Ordinal am = fundamental_sequence(stage, m);
      PsiVerdict sub = certify_witness_node(am, address, component_budget);
      if (!sub.certified()) {
        sub.trace.insert(sub.trace.begin(),
                         at + ": component " + std::to_string(m) + " not certified");
        return sub;
      }
      trace.push_back("component " + std::to_string(m) + ": string certified in T_" + am.str());
    }
    trace.push_back("components m >= " + std::to_string(k + component_budget) +
                    ": strings of T_{fs(" + stage.str() + ", m)}, inside Psi by construction");
    trace.push_back("||y_i|| = sup_m ||y_i^m|| = 1");
    trace.push_back("||(y_i - z_n)^+|| = sup_{m>=" + std::to_string(k) +
                    "} ||(y_i^m - z_n^m)^+|| <= sup_m 3^-i ||y_i^m|| = 3^-i");
    trace.push_back("||y_{i+1} - y_i|| = sup_{m>=" + std::to_string(k) +
                    "} ||y_{i+1}^m - y_i^m|| <= 3^-i");
  }
  if (auto bad = cross_check(stage, address, trace)) return *bad;
  PsiVerdict v;
  v.outcome = PsiVerdict::Outcome::kCertified;
  v.exact = false;
  v.trace = std::move(trace);
  return v;
}

}  // namespace

PsiVerdict certify_witness_node(const Ordinal& stage, const std::vector<Ordinal>& address,
                                std::uint64_t component_budget) {
  if (address.empty()) {
    PsiVerdict v;
    v.trace = {"empty string: nothing to check"};
    return v;
  }
  const auto normal = normalize_address(stage, address);
  std::string key = stage.str() + "#" + std::to_string(component_budget);
  for (const auto& g : normal) key += "|" + g.str();
  {
    std::lock_guard<std::mutex> lock(certify_memo().mu);
    if (auto it = certify_memo().verdicts.find(key); it != certify_memo().verdicts.end()) {
      return it->second;
    }
  }
  PsiVerdict v = derive_certificate(stage, normal, component_budget);
  std::lock_guard<std::mutex> lock(certify_memo().mu);
  return certify_memo().verdicts.emplace(key, v).first->second;
}

PsiVerdict psi_certify(const SequenceSpec& z, const std::vector<Element>& string,
                       std::uint64_t component_budget) {
  if (string.empty()) return psi_check(z, string, 0);
  if (z.is_canonical_z()) {
    if (auto address = recognize_witness_string(z.space().stage(), string)) {
      return certify_witness_node(z.space().stage(), *address, component_budget);
    }
  }
  PsiVerdict v = psi_check(z, string, kDefaultNBudget);
  v.trace.insert(v.trace.begin(), "not a canonical witness string: checked directly");
  return v;
}

PsiVerdict judge(const SequenceSpec& z, const std::vector<Element>& string,
                 std::uint64_t n_budget) {
  if (!string.empty() && z.is_canonical_z()) {
    std::vector<std::string> trace;
    check_labels(z, string, trace);
    if (auto address = recognize_witness_string(z.space().stage(), string)) {
      return certify_witness_node(z.space().stage(), *address);
    }
  }
  return psi_check(z, string, n_budget);
}

bool z_inequality_holds(const SequenceSpec& z, const Element& y, std::size_t position) {
  if (!z.decidable()) throw PreconditionError("exact z-inequalities need a base-rooted space");
  const ExtRational sup = sup_from(z, fn_pos_excess(y), 1);
  return !(ExtRational::finite(norm(y) * third_power(position)) < sup);
}

bool link_holds(const Element& prev, const Element& next, std::size_t position) {
  return norm(sub(next, prev)) <= norm(prev) * third_power(position);
}

LowerBoundEstimate branch_to_lower_bound(const std::vector<Element>& branch, std::size_t k,
                                         std::optional<Rational> tail_norm_bound) {
  if (k == 0 || k > branch.size()) {
    throw PreconditionError("k must lie in 1.." + std::to_string(branch.size()));
  }
  for (std::size_t i = 1; i < k; ++i) {
    if (!link_holds(branch[i - 1], branch[i], i)) {
      throw PreconditionError("link inequality violated at position " + std::to_string(i));
    }
  }
  LowerBoundEstimate out;
  bool constant = true;
  for (const auto& y : branch) constant = constant && y == branch.front();
  if (constant) {
    out.y = branch.front();
    out.error = Rational(0);
    out.exact = true;
    out.trace = {"constant branch: the limit is its term"};
    return out;
  }
  out.y = branch[k - 1];
  const Rational s = power(Rational(1, 3), static_cast<unsigned>(k - 1)) / Rational(2);
  if (tail_norm_bound) {
    out.error = *tail_norm_bound * s;
    out.trace = {"sum_{i>=" + std::to_string(k) + "} ||y_i||/3^i <= " +
                 tail_norm_bound->str() + " * " + s.str()};
  } else {
    const Rational yk = norm(out.y);
    out.error = yk * s / (Rational(1) - s);
    out.trace = {"e_k <= (||y_k|| + e_k) * " + s.str() + ", so e_k <= " + out.error.str()};
  }
  return out;
}

std::vector<Element> lower_bound_to_branch(const Element& y, const DenseSet& dense,
                                           std::size_t k, std::uint64_t budget) {
  if (!(y.space() == dense.space())) throw SpaceMismatch("dense set lives in another space");
  if (!is_strictly_positive(y).is_true()) {
    throw PreconditionError("lower bound must be strictly positive");
  }
  const Rational ny = norm(y);
  std::vector<Element> out;
  Rational seven(1);
  for (std::size_t i = 1; i <= k; ++i) {
    seven = seven * Rational(7);
    const Rational radius = ny / seven;
    auto found = dense.find_in_ball(y, radius, budget);
    if (!found) {
      throw BudgetExhausted("no member of " + dense.name() + " within ||y||/7^" +
                            std::to_string(i) + " after " + std::to_string(budget) + " tries");
    }
    if (!(norm(sub(*found, y)) < radius)) {
      throw CertificateError("dense set returned a point outside the ball");
    }
    out.push_back(std::move(*found));
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (!(norm(sub(out[i], out[i - 1])) < norm(out[i - 1]) * third_power(i))) {
      throw CertificateError("approximants violate the strict link inequality at " +
                             std::to_string(i));
    }
  }
  return out;
}

FiniteTree pool_psi_tree(const SequenceSpec& z, const std::vector<Element>& pool,
                         std::size_t max_depth, std::uint64_t n_budget) {
  FiniteTree tree;
  std::vector<Element> string;
  LabelString labels;
  std::function<void()> grow = [&]() {
    if (string.size() >= max_depth) return;
    for (std::size_t p = 0; p < pool.size(); ++p) {
      string.push_back(pool[p]);
      if (judge(z, string, n_budget).accepted()) {
        labels.push_back("p" + std::to_string(p + 1));
        tree.insert_path(labels);
        grow();
        labels.pop_back();
      }
      string.pop_back();
    }
  };
  grow();
  return tree;
}

PoolSearchResult pool_psi_search(const SequenceSpec& z, const std::vector<Element>& pool,
                                 std::size_t max_depth, std::uint64_t node_budget) {
  if (!z.decidable()) throw PreconditionError("pool search needs a base-rooted space");
  PoolSearchResult out;
  for (const auto& y : pool) {
    if (is_strictly_positive(y).is_true() && holds_for_all(z, pred_geq(y))) {
      out.certificate = y;
      break;
    }
  }
  const std::size_t p = pool.size();
  // zok[e][i], link[(e * p + f) * depth + i], computed lazily.
  std::vector<std::vector<int>> zok(p, std::vector<int>(max_depth + 1, -1));
  std::vector<int> link(p * p * (max_depth + 1), -1);
  auto z_ok = [&](std::size_t e, std::size_t i) {
    int& c = zok[e][i];
    if (c < 0) c = z_inequality_holds(z, pool[e], i) ? 1 : 0;
    return c == 1;
  };
  auto link_ok = [&](std::size_t e, std::size_t f, std::size_t i) {
    int& c = link[(e * p + f) * (max_depth + 1) + i];
    if (c < 0) c = link_holds(pool[e], pool[f], i) ? 1 : 0;
    return c == 1;
  };
  std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t last, std::size_t depth) {
    out.deepest = std::max(out.deepest, depth);
    if (depth >= max_depth) {
      out.reached_max_depth = true;
      return;
    }
    for (std::size_t f = 0; f < p; ++f) {
      if (out.nodes >= node_budget) {
        out.terminated = false;
        return;
      }
      if (!z_ok(f, depth + 1)) continue;
      if (depth > 0 && !link_ok(last, f, depth)) continue;
      ++out.nodes;
      dfs(f, depth + 1);
    }
  };
  dfs(0, 0);
  return out;
}

}  // namespace fatou
