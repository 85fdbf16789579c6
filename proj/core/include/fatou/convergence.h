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

#ifndef FATOU_CONVERGENCE_H_
#define FATOU_CONVERGENCE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "fatou/element.h"
#include "fatou/rational.h"
#include "fatou/report.h"
#include "fatou/sequence.h"

namespace fatou {

struct ConvBudgets {
  std::uint64_t n_budget = 64;  // terms searched per basis index
  std::uint64_t m_budget = 64;  // basis / dominating indices checked
};

// S(k) = sup_{m >= k} || join_{n=k..m} |x_n - x| ||, exact in base-rooted spaces.
ExtRational join_norm_tail(const SequenceSpec& seq, const Element& x, std::uint64_t k);

// Items "eps=<e>" carry the least k; item "tail" records the limit of S(k).
// Uniform iff that limit is 0. Unknown outside base-rooted spaces.
Report uniform_conv_check(const SequenceSpec& seq, const Element& x,
                          const std::vector<Rational>& eps_list);

// A regulator u with |x_n - x| <= c_n u, c_n -> 0, read off the tail rule.
// The sequence (u/m)_m is then a sigma-order witness.
std::optional<Element> uniform_regulator(const SequenceSpec& seq, const Element& x);
std::optional<SequenceSpec> derived_sigma_witness(const SequenceSpec& seq, const Element& x);

Report sigma_order_witness_check(const SequenceSpec& seq, const Element& x,
                                 const SequenceSpec& witness, const ConvBudgets& budgets = {});

// For each basis element b_m, m <= m_budget, look for n <= n_budget with
// b_m not below x_n.
Report x_down0_check(const SequenceSpec& seq, const ConvBudgets& budgets = {});

// Dominating family d_m = m * one.
Report x_up_unbounded_check(const SequenceSpec& seq, const ConvBudgets& budgets = {});

// lim ||x_n|| = 0 read as x_n decreasing to 0 only under the caller's flag.
Report down0_by_norm_check(const SequenceSpec& seq, bool sigma_order_continuous);

}  // namespace fatou

#endif  // FATOU_CONVERGENCE_H_
