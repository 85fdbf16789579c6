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

#include "fatou/convergence.h"

#include <variant>

#include <nlohmann/json.hpp>

#include "fatou/families.h"

namespace fatou {

namespace {

// Scans for a counterexample past the budget once the exact decision says
// one exists.
constexpr std::uint64_t kDeepScan = 1u << 16;

nlohmann::json elem_json(const Element& x) {
  nlohmann::json j;
  to_json(j, x);
  return j;
}

std::string ext_str(const ExtRational& v) { return v.str(); }

bool undecidable(const SequenceSpec& seq, Report& r) {
  if (seq.decidable()) return false;
  r.add("decidable", Verdict::kUnknown,
        "tail comparisons in " + seq.space().str() + " are only bounded, not exact");
  return true;
}

ExtRational weighted(const Rational& w, const ExtRational& v) {
  return v.is_finite() ? ExtRational::finite(w * v.value) : v;
}

// Limit of the terms under the tail rule, when it is a single element.
std::optional<Element> limit_element(const SequenceSpec& seq) {
  if (const auto* c = std::get_if<ConstantTail>(&seq.rule())) return c->value;
  if (std::holds_alternative<ZTail>(seq.rule())) return Element::zero(seq.space());
  const auto& f = std::get<FormulaTail>(seq.rule());
  const ExtRational l = RationalSequence(f.numerator, f.denominator).limit();
  if (!l.is_finite()) return std::nullopt;
  return add(f.base, scale(l.value, f.direction));
}

}  // namespace

ExtRational join_norm_tail(const SequenceSpec& seq, const Element& x, std::uint64_t k) {
  const Rational w = seq.space().sup_weight();
  return max(weighted(w, sup_from(seq, fn_sup_norm_of_diff(x), k)),
             sup_from(seq, fn_abs_phi_of_diff(x), k));
}

Report uniform_conv_check(const SequenceSpec& seq, const Element& x,
                          const std::vector<Rational>& eps_list) {
  Report r("uniform convergence of " + seq.str() + " to " + x.str());
  nlohmann::json eps = nlohmann::json::array();
  for (const Rational& e : eps_list) eps.push_back(e.str());
  r.parameters() = {{"eps", eps}};
  if (undecidable(seq, r)) return r;

  const Rational w = seq.space().sup_weight();
  const ExtRational sup_part = weighted(w, limit_value(seq, fn_sup_norm_of_diff(x)));
  const ExtRational phi_part = limit_value(seq, fn_abs_phi_of_diff(x));
  const ExtRational tail = max(sup_part, phi_part);
  const auto below = [](const ExtRational& s, const Rational& e) {
    return s < ExtRational::finite(e);
  };

  for (const Rational& e : eps_list) {
    const std::string name = "eps=" + e.str();
    if (e.sign() <= 0) {
      r.add(name, Verdict::kFail, "eps must be positive");
      continue;
    }
    if (!below(tail, e)) {
      r.add(name, Verdict::kFail, "stuck: sup over every tail stays at " + ext_str(tail),
            {{"obstruction", ext_str(tail)}});
      continue;
    }
    std::uint64_t hi = 1;
    while (!below(join_norm_tail(seq, x, hi), e)) hi *= 2;
    std::uint64_t lo = hi / 2;  // S(lo) >= e, or lo == 0
    while (hi - lo > 1) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      (below(join_norm_tail(seq, x, mid), e) ? hi : lo) = mid;
    }
    r.add(name, Verdict::kPass,
          "k = " + std::to_string(hi) + ", sup_{m >= k} = " + ext_str(join_norm_tail(seq, x, hi)),
          {{"k", hi}, {"sup", ext_str(join_norm_tail(seq, x, hi))}});
  }

  nlohmann::json ev = {{"limit", ext_str(tail)},
                       {"weighted_sup_part", ext_str(sup_part)},
                       {"phi_part", ext_str(phi_part)}};
  if (const auto u = uniform_regulator(seq, x)) {
    ev["regulator"] = elem_json(*u);
  }
  const bool zero = tail == ExtRational::finite(Rational());
  r.add("tail", zero ? Verdict::kPass : Verdict::kFail,
        zero ? "S(k) -> 0: uniform"
             : "S(k) >= " + ext_str(tail) + " for every k: not uniform",
        ev);
  return r;
}

std::optional<Element> uniform_regulator(const SequenceSpec& seq, const Element& x) {
  const Space& s = seq.space();
  if (!(x.space() == s)) return std::nullopt;
  if (const auto* c = std::get_if<ConstantTail>(&seq.rule())) {
    if (c->value == x) return one(s);
    return std::nullopt;
  }
  if (const auto* z = std::get_if<ZTail>(&seq.rule())) {
    if (z->scale.is_zero() && is_zero(x)) return one(s);
    return std::nullopt;
  }
  const auto& f = std::get<FormulaTail>(seq.rule());
  const RationalSequence c(f.numerator, f.denominator);
  if (!(f.base == x)) return std::nullopt;
  if (is_zero(f.direction)) return one(s);
  if (!(c.limit() == ExtRational::finite(Rational()))) return std::nullopt;
  return abs(f.direction);
}

std::optional<SequenceSpec> derived_sigma_witness(const SequenceSpec& seq, const Element& x) {
  const auto u = uniform_regulator(seq, x);
  if (!u) return std::nullopt;
  return SequenceSpec::scaled(*u, Polynomial::constant(Rational(1)), Polynomial::identity());
}

Report sigma_order_witness_check(const SequenceSpec& seq, const Element& x,
                                 const SequenceSpec& witness, const ConvBudgets& budgets) {
  Report r("sigma-order convergence of " + seq.str() + " to " + x.str());
  r.parameters() = {{"witness", witness.str()}, {"m_budget", budgets.m_budget},
                    {"n_budget", budgets.n_budget}};
  if (undecidable(seq, r) || undecidable(witness, r)) return r;
  if (!is_decreasing(witness)) {
    r.add("witness-decreasing", Verdict::kFail, "rejected: the witness is not decreasing");
    return r;
  }
  r.add("witness-decreasing", Verdict::kPass, "w_{m+1} <= w_m for all m");
  bool dominated = true;
  for (std::uint64_t m = 1; m <= budgets.m_budget; ++m) {
    const Element wm = witness.term(m);
    if (!holds_eventually(seq, pred_abs_diff_leq(x, wm))) {
      r.add("domination", Verdict::kFail,
            "|x_n - x| <= w_" + std::to_string(m) + " fails for infinitely many n",
            {{"m", m}, {"w_m", elem_json(wm)}});
      dominated = false;
      break;
    }
  }
  if (dominated) {
    r.add("domination", Verdict::kPass,
          "for m <= " + std::to_string(budgets.m_budget) +
              ", |x_n - x| <= w_m for all but finitely many n",
          {{"checked", budgets.m_budget}});
  }
  r.merge(x_down0_check(witness, budgets), "witness.");
  return r;
}

Report x_down0_check(const SequenceSpec& seq, const ConvBudgets& budgets) {
  Report r("infimum zero of " + seq.str());
  r.parameters() = {{"m_budget", budgets.m_budget}, {"n_budget", budgets.n_budget}};
  if (undecidable(seq, r)) return r;
  if (!is_decreasing(seq)) {
    r.add("decreasing", Verdict::kFail, "rejected: the sequence is not decreasing");
    return r;
  }
  if (!all_strictly_positive(seq)) {
    r.add("positive", Verdict::kFail, "rejected: some term is not strictly positive");
    return r;
  }
  nlohmann::json witnesses = nlohmann::json::array();
  for (std::uint64_t m = 1; m <= budgets.m_budget; ++m) {
    const Element bm = pi_basis(seq.space(), m);
    const TermPredicate above = pred_geq(bm);
    std::optional<std::uint64_t> n = first_failure(seq, above, 1, budgets.n_budget);
    bool beyond = false;
    if (!n) {
      if (holds_for_all(seq, above)) {
        r.add("basis", Verdict::kFail,
              "b_" + std::to_string(m) + " <= x_n for every n, so inf x_n > 0",
              {{"m", m}, {"b_m", elem_json(bm)}});
        return r;
      }
      n = first_failure(seq, above, budgets.n_budget + 1, kDeepScan);
      beyond = true;
      if (!n) {
        r.add("basis", Verdict::kUnknown,
              "budget exhausted at m = " + std::to_string(m), {{"m", m}});
        return r;
      }
    }
    witnesses.push_back({{"m", m}, {"n", *n}, {"beyond_budget", beyond}});
  }
  // A nonzero limit bounds the sequence below; some later b_m sits under it.
  if (const auto lim = limit_element(seq); lim && !is_zero(*lim)) {
    for (std::uint64_t m = budgets.m_budget + 1; m <= kDeepScan; ++m) {
      const Element bm = pi_basis(seq.space(), m);
      if (leq(bm, *lim).is_true() && holds_for_all(seq, pred_geq(bm))) {
        r.add("basis", Verdict::kFail,
              "b_" + std::to_string(m) + " <= x_n for every n, so inf x_n > 0",
              {{"m", m}, {"b_m", elem_json(bm)}, {"beyond_budget", true}});
        return r;
      }
    }
    r.add("basis", Verdict::kUnknown,
          "the limit " + lim->str() + " is nonzero but no b_m below it was found",
          {{"m", kDeepScan}});
    return r;
  }
  r.add("basis", Verdict::kPass,
        "every b_m, m <= " + std::to_string(budgets.m_budget) + ", is not below some x_n",
        {{"witnesses", witnesses}});
  return r;
}

Report x_up_unbounded_check(const SequenceSpec& seq, const ConvBudgets& budgets) {
  Report r("order-unboundedness of " + seq.str());
  r.parameters() = {{"m_budget", budgets.m_budget}, {"n_budget", budgets.n_budget},
                    {"dominating", "d_m = m * one"}};
  if (undecidable(seq, r)) return r;
  if (!is_increasing(seq)) {
    r.add("increasing", Verdict::kFail, "rejected: the sequence is not increasing");
    return r;
  }
  if (!all_strictly_positive(seq)) {
    r.add("positive", Verdict::kFail, "rejected: some term is not strictly positive");
    return r;
  }
  nlohmann::json witnesses = nlohmann::json::array();
  for (std::uint64_t m = 1; m <= budgets.m_budget; ++m) {
    const Element dm = dominating_element(seq.space(), m);
    const TermPredicate below = pred_leq(dm);
    std::optional<std::uint64_t> n = first_failure(seq, below, 1, budgets.n_budget);
    if (!n) {
      if (holds_for_all(seq, below)) {
        r.add("dominating", Verdict::kFail,
              "bounded: x_n <= d_" + std::to_string(m) + " for every n",
              {{"m", m}, {"d_m", elem_json(dm)}});
        return r;
      }
      n = first_failure(seq, below, budgets.n_budget + 1, kDeepScan);
      if (!n) {
        r.add("dominating", Verdict::kUnknown, "budget exhausted at m = " + std::to_string(m),
              {{"m", m}});
        return r;
      }
    }
    witnesses.push_back({{"m", m}, {"n", *n}});
  }
  r.add("dominating", Verdict::kPass,
        "every d_m, m <= " + std::to_string(budgets.m_budget) +
            ", is exceeded by some x_n (evidence within the budget, not a proof)",
        {{"witnesses", witnesses}});
  return r;
}

Report down0_by_norm_check(const SequenceSpec& seq, bool sigma_order_continuous) {
  Report r("norm criterion for " + seq.str());
  r.parameters() = {{"sigma_order_continuous", sigma_order_continuous}};
  if (undecidable(seq, r)) return r;
  if (!is_decreasing(seq) || !holds_for_all(seq, pred_nonnegative(seq.space()))) {
    r.add("monotone", Verdict::kFail, "rejected: need x_1 >= x_2 >= ... >= 0");
    return r;
  }
  const Element zero = Element::zero(seq.space());
  const ExtRational lim = limit_value(seq, fn_norm_of_diff(zero));
  if (!(lim == ExtRational::finite(Rational()))) {
    r.add("norm-limit", Verdict::kFail, "norm does not vanish: lim ||x_n|| = " + ext_str(lim),
          {{"limit", ext_str(lim)}});
    return r;
  }
  // A decreasing positive sequence that reaches 0 has infimum 0 in any lattice.
  if (const auto n = first_failure(seq, {[](const Element& t) { return !is_zero(t); }, {}, {}},
                                   1, seq.num_explicit() + 2)) {
    r.add("norm-limit", Verdict::kPass, "x_n = 0 from n = " + std::to_string(*n),
          {{"limit", "0"}, {"n", *n}});
    return r;
  }
  r.add("norm-limit", sigma_order_continuous ? Verdict::kPass : Verdict::kUnknown,
        sigma_order_continuous
            ? "lim ||x_n|| = 0 under the asserted sigma-order continuity"
            : "lim ||x_n|| = 0, but without sigma-order continuity this says nothing about inf",
        {{"limit", "0"}});
  return r;
}

}  // namespace fatou
