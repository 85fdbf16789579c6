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

#include "fatou/construction.h"

#include <map>
#include <mutex>

#include <nlohmann/json.hpp>

#include "fatou/digest.h"
#include "fatou/errors.h"
#include "fatou/families.h"
#include "fatou/psi.h"

namespace fatou {

namespace {

struct BuildMemo {
  std::mutex mu;
  std::map<std::string, BundlePtr> bundles;
};

BuildMemo& build_memo() {
  static BuildMemo memo;
  return memo;
}

BundlePtr make_bundle(const Ordinal& alpha) {
  auto b = std::make_shared<Bundle>();
  b->stage = alpha;
  b->space = Space(alpha);
  b->z = SequenceSpec::canonical_z(b->space);
  switch (b->space.kind()) {
    case SpaceKind::kBase: {
      const Element y1 = one(b->space);
      FiniteTree t;
      t.insert_path({element_digest(y1)});
      b->witness = StructuredTree::explicit_tree(std::move(t), {{element_digest(y1), y1}});
      b->provenance = {
          "X_1: eventually constant rational sequences, ||t|| = max(||t||_inf / 3, |lim t|)",
          "phi_1(t) = lim t; B_1 = positive rational spikes",
          "z_n = (0 x n, 1, 1, ...)",
          "T_1 = {(), ((1, 1, ...))}"};
      break;
    }
    case SpaceKind::kSucc: {
      const BundlePtr inner = build(predecessor(alpha));
      const Element root = z_seq(inner->space, 1).restaged(b->space);
      b->witness = StructuredTree::prefixed(root, inner->witness);
      b->provenance = {"X_" + alpha.str() + " = X_" + inner->stage.str() +
                           " with ||x|| = max(||x||_" + inner->stage.str() + " / 7, |phi(x)|)",
                       "phi, B and z_n carried over unchanged",
                       "T_" + alpha.str() + " = {()} u {(z_1, s) : s in T_" +
                           inner->stage.str() + "}"};
      break;
    }
    case SpaceKind::kLimit: {
      const Ordinal stage = alpha;
      b->witness = StructuredTree::weave(stage, [stage](std::uint64_t m) {
        return build(fundamental_sequence(stage, m))->witness;
      });
      b->provenance = {
          "X_" + alpha.str() + ": sequences (x^m) with x^m in X_{fs(" + alpha.str() +
              ", m)}, ||x|| = sup_m ||x^m||",
          "phi(x) = lim_m phi(x^m); B = child bases placed in one component",
          "z_n = (z_n^{fs(" + alpha.str() + ", m)})_m",
          "T_" + alpha.str() + ": weave of the child witness trees by ordinal address"};
      break;
    }
  }
  return b;
}

}  // namespace

BundlePtr build(const Ordinal& alpha) {
  if (alpha.is_zero()) throw PreconditionError("construction starts at stage 1");
  const std::string key = alpha.str();
  {
    std::lock_guard<std::mutex> lock(build_memo().mu);
    if (auto it = build_memo().bundles.find(key); it != build_memo().bundles.end()) {
      return it->second;
    }
  }
  BundlePtr b = make_bundle(alpha);
  std::lock_guard<std::mutex> lock(build_memo().mu);
  return build_memo().bundles.emplace(key, b).first->second;
}

// --- verify -----------------------------------------------------------------

namespace {

nlohmann::json ord_json(const Ordinal& a) {
  nlohmann::json j;
  to_json(j, a);
  return j;
}

nlohmann::json elem_json(const Element& x) {
  nlohmann::json j;
  to_json(j, x);
  return j;
}

void check_z(const Bundle& b, const Budgets& budgets, Report& r) {
  for (std::uint64_t n = 1; n <= budgets.n_budget; ++n) {
    const Element zn = b.z.term(n);
    const Element next = b.z.term(n + 1);
    const Rational ph = phi(zn);
    const NormBound nb = norm_bounds(zn);
    const OrderVerdict dec = leq(next, zn);
    const OrderVerdict pos = is_strictly_positive(zn);
    std::string bad;
    if (ph != Rational(1)) bad = "phi(z_n) = " + ph.str();
    if (!(nb.lower == Rational(1) && nb.upper == Rational(1))) {
      bad = "||z_n|| in [" + nb.lower.str() + ", " + nb.upper.str() + "]";
    }
    if (!dec.is_true()) bad = "z_{n+1} <= z_n is " + dec.str();
    if (!pos.is_true()) bad = "z_n > 0 is " + pos.str();
    if (!bad.empty()) {
      r.add("a.z-sequence", Verdict::kFail, bad + " at n = " + std::to_string(n),
            {{"n", n}, {"z_n", elem_json(zn)}});
      return;
    }
  }
  r.add("a.z-sequence", Verdict::kPass,
        "z_{n+1} <= z_n, z_n > 0, phi(z_n) = ||z_n|| = 1 for n <= " +
            std::to_string(budgets.n_budget),
        {{"checked", budgets.n_budget}});
}

void check_infimum(const Bundle& b, const Budgets& budgets, Report& r) {
  nlohmann::json witnesses = nlohmann::json::array();
  for (std::uint64_t m = 1; m <= budgets.components; ++m) {
    const Element bm = pi_basis(b.space, m);
    std::optional<std::uint64_t> found;
    bool unknown = false;
    for (std::uint64_t n = 1; n <= budgets.n_budget && !found; ++n) {
      const OrderVerdict v = leq(bm, b.z.term(n));
      if (v.is_false()) found = n;
      if (v.is_unknown()) unknown = true;
    }
    if (!found) {
      r.add("b.infimum-zero", unknown ? Verdict::kUnknown : Verdict::kFail,
            "no n <= " + std::to_string(budgets.n_budget) + " with b_" + std::to_string(m) +
                " not below z_n",
            {{"m", m}, {"b_m", elem_json(bm)}});
      return;
    }
    witnesses.push_back({{"m", m}, {"n", *found}});
  }
  r.add("b.infimum-zero", Verdict::kPass,
        "every b_m, m <= " + std::to_string(budgets.components) + ", escapes some z_n",
        {{"witnesses", witnesses}});
}

void check_nodes(const Bundle& b, const Budgets& budgets, Report& r) {
  std::uint64_t nodes = 0, certified = 0, passed = 0;
  std::optional<ReportItem> psi_bad;
  std::optional<ReportItem> sphere_bad;
  bool psi_unknown = false;
  std::map<std::string, bool> sphere_seen;
  try {
    for_each_node(*b.witness, budgets.depth, budgets.components,
                  [&](const std::vector<Element>& s) {
                    if (s.empty() || psi_bad) return;
                    ++nodes;
                    const std::string d = element_digest(s.back());
                    if (!sphere_seen.count(d)) {
                      const bool in = in_sphere_S(s.back());
                      sphere_seen[d] = in;
                      if (!in && !sphere_bad) {
                        sphere_bad = ReportItem{
                            "d.labels-in-S", Verdict::kFail,
                            "label at depth " + std::to_string(s.size()) +
                                " is not in S: phi = " + phi(s.back()).str(),
                            {{"label", elem_json(s.back())}}};
                      }
                    }
                    PsiVerdict v;
                    try {
                      v = psi_certify(b.z, s, 2);
                    } catch (const PreconditionError& e) {
                      psi_bad = ReportItem{"c.witness-in-psi", Verdict::kFail,
                                           std::string("string rejected: ") + e.what(), {}};
                      return;
                    }
                    if (v.certified()) {
                      ++certified;
                    } else if (v.accepted()) {
                      ++passed;
                    } else if (v.refuted()) {
                      nlohmann::json vj;
                      to_json(vj, v);
                      psi_bad = ReportItem{"c.witness-in-psi", Verdict::kFail,
                                           "node at depth " + std::to_string(s.size()) + " " +
                                               v.str(),
                                           {{"verdict", vj}}};
                    } else {
                      psi_unknown = true;
                    }
                  });
  } catch (const CertificateError& e) {
    r.add("c.witness-in-psi", Verdict::kFail, std::string("defective tree: ") + e.what());
    return;
  }
  if (psi_bad) {
    r.add(psi_bad->name, psi_bad->status, psi_bad->detail, psi_bad->evidence);
  } else {
    const Verdict v = psi_unknown ? Verdict::kUnknown
                                  : (passed > 0 ? Verdict::kUnknown : Verdict::kPass);
    r.add("c.witness-in-psi", v,
          std::to_string(certified) + " of " + std::to_string(nodes) + " nodes certified" +
              (passed ? ", " + std::to_string(passed) + " only passed the budget" : ""),
          {{"nodes", nodes}, {"certified", certified}, {"passed_only", passed}});
  }
  if (sphere_bad) {
    r.add(sphere_bad->name, sphere_bad->status, sphere_bad->detail, sphere_bad->evidence);
  } else {
    r.add("d.labels-in-S", Verdict::kPass,
          std::to_string(sphere_seen.size()) + " distinct labels with x >= 0, phi = 1, norm [1, 1]",
          {{"labels", sphere_seen.size()}});
  }
}

std::uint64_t prefix_height(const StructuredTree& t) {
  return t.kind() == TreeKind::kPrefixed ? 1 + prefix_height(*t.inner()) : 0;
}

void check_rank(const Bundle& b, const Budgets& budgets, Report& r) {
  Ordinal cert;
  try {
    cert = structured_rank(*b.witness);
  } catch (const CertificateError& e) {
    r.add("e.rank", Verdict::kFail, e.what());
    return;
  }
  if (!(cert > b.stage)) {
    r.add("e.rank", Verdict::kFail,
          "certificate " + cert.str() + " is not above " + b.stage.str());
    return;
  }
  nlohmann::json corroboration = nlohmann::json::array();
  if (b.stage.is_finite()) {
    const std::uint64_t a = b.stage.to_finite();
    const Ordinal full = finite_rank(truncate(*b.witness, a + 1, 1));
    corroboration.push_back({{"depth", a + 1}, {"rank", ord_json(full)}});
    if (!(full == cert)) {
      r.add("e.rank", Verdict::kFail,
            "explicit tree has rank " + full.str() + ", certificate says " + cert.str(),
            {{"corroboration", corroboration}});
      return;
    }
  } else {
    const std::uint64_t h = prefix_height(*b.witness);
    const std::uint64_t top = std::min<std::uint64_t>(8, budgets.components);
    for (std::uint64_t c = 1; c <= top; ++c) {
      const Ordinal tr = finite_rank(truncate(*b.witness, c + 2 + h, c));
      corroboration.push_back({{"components", c}, {"depth", c + 2 + h}, {"rank", ord_json(tr)}});
      if (tr > cert || tr < Ordinal::finite(c)) {
        r.add("e.rank", Verdict::kFail,
              "truncation with " + std::to_string(c) + " components has rank " + tr.str(),
              {{"corroboration", corroboration}});
        return;
      }
    }
  }
  r.add("e.rank", Verdict::kPass, "rho(T) = " + cert.str() + " > " + b.stage.str(),
        {{"rank_cert", ord_json(cert)}, {"trace", rank_trace(*b.witness)},
         {"corroboration", corroboration}});
}

void check_successor_chain(const Bundle& b, const Budgets& budgets, Report& r) {
  if (b.space.kind() != SpaceKind::kSucc) return;
  const Space inner = b.space.inner();
  const Element z1_in = z_seq(inner, 1);
  const Element z1 = z1_in.restaged(b.space);
  const Rational seventh(1, 7);
  const Rational third(1, 3);
  const bool exact = b.space.base_rooted();
  nlohmann::json values = nlohmann::json::array();
  Rational worst;
  for (std::uint64_t n = 1; n <= budgets.n_budget; ++n) {
    const Element d_out = pos_part(sub(z1, z_seq(b.space, n)));
    const Element d_in = pos_part(sub(z1_in, z_seq(inner, n)));
    if (exact) {
      const Rational lhs = norm(d_out);
      const Rational rhs = norm(d_in) / Rational(7);
      values.push_back({{"n", n}, {"outer", lhs.str()}, {"inner_over_7", rhs.str()}});
      if (lhs != rhs || lhs > seventh) {
        r.add("f.successor-chain", Verdict::kFail,
              "||(z_1 - z_n)^+|| = " + lhs.str() + " vs inner/7 = " + rhs.str() + " at n = " +
                  std::to_string(n),
              {{"values", values}});
        return;
      }
      worst = max(worst, lhs);
    } else {
      const NormBound nb = norm_bounds(d_out);
      if (nb.upper > seventh) {
        r.add("f.successor-chain", Verdict::kUnknown,
              "bound " + nb.upper.str() + " on ||(z_1 - z_n)^+|| exceeds 1/7",
              {{"n", n}});
        return;
      }
      worst = max(worst, nb.upper);
    }
  }
  const Rational z1_norm = exact ? norm(z1) : norm_bounds(z1).lower;
  if (!(worst <= seventh && seventh < z1_norm * third)) {
    r.add("f.successor-chain", Verdict::kFail, "1/7 < ||z_1||/3 fails");
    return;
  }
  // First label of the inner witness tree.
  const Element y1_in = witness_label(inner.stage(), {Ordinal()});
  const Element diff_out = sub(witness_label(inner.stage(), {Ordinal()}).restaged(b.space), z1);
  const Element diff_in = sub(y1_in, z1_in);
  Rational link;
  if (exact) {
    link = norm(diff_out);
    const Rational inner_link = norm(diff_in);
    if (link != inner_link / Rational(7)) {
      r.add("f.successor-chain", Verdict::kFail,
            "||y_1 - z_1|| = " + link.str() + " is not inner/7 = " + (inner_link / Rational(7)).str());
      return;
    }
  } else {
    link = norm_bounds(diff_out).upper;
  }
  const Rational two_sevenths(2, 7);
  if (!(link <= two_sevenths && two_sevenths < z1_norm * third)) {
    r.add("f.successor-chain", Verdict::kFail,
          "||y_1 - z_1|| = " + link.str() + " breaks the 2/7 < 1/3 chain");
    return;
  }
  r.add("f.successor-chain", Verdict::kPass,
        (exact ? "exact: ||(z_1 - z_n)^+|| = ||(z_1 - z_n)^+||_" + inner.stage().str() +
                     "/7 <= " + worst.str()
               : "bounded: ||(z_1 - z_n)^+|| <= " + worst.str()) +
            " <= 1/7 < 1/3 for n <= " +
            std::to_string(budgets.n_budget) + "; ||y_1 - z_1|| " + (exact ? "= " : "<= ") +
            link.str() + " <= 2/7 < 1/3",
        {{"values", values},
         {"max_excess", worst.str()},
         {"link", link.str()},
         {"z1_norm", z1_norm.str()},
         {"exact", exact}});
}

}  // namespace

Report verify(const Bundle& bundle, const Budgets& budgets) {
  Report r("verify " + bundle.space.str());
  r.parameters() = {{"stage", ord_json(bundle.stage)},
                    {"n_budget", budgets.n_budget},
                    {"components", budgets.components},
                    {"depth", budgets.depth}};
  check_z(bundle, budgets, r);
  check_infimum(bundle, budgets, r);
  check_nodes(bundle, budgets, r);
  check_rank(bundle, budgets, r);
  check_successor_chain(bundle, budgets, r);
  return r;
}

Report successor_norm_lemma_check(const Element& x, const Element& y) {
  if (!(x.space() == y.space())) throw SpaceMismatch("x and y live in different spaces");
  if (!in_sphere_S(x) || !in_sphere_S(y)) throw PreconditionError("inputs must lie in S");
  Report r("successor norm lemma in " + x.space().str());
  const Space next = x.space().next();
  const Element d = sub(x, y);
  const Element dp = pos_part(d);
  const Rational ph = phi(dp);
  r.add("phi-of-positive-part", ph.is_zero() ? Verdict::kPass : Verdict::kFail,
        "phi((x - y)^+) = " + ph.str());
  const auto rescale = [&](const std::string& name, const Element& v) {
    if (v.base_rooted()) {
      const Rational inner = norm(v);
      const Rational outer = norm(v.restaged(next));
      r.add(name, outer * Rational(7) == inner ? Verdict::kPass : Verdict::kFail,
            "next-stage norm " + outer.str() + ", this stage " + inner.str(),
            {{"inner", inner.str()}, {"outer", outer.str()}});
    } else {
      const NormBound inner = norm_bounds(v);
      const NormBound outer = norm_bounds(v.restaged(next));
      const bool ok = outer.lower * Rational(7) == inner.lower &&
                      outer.upper * Rational(7) == inner.upper;
      r.add(name, ok ? Verdict::kPass : Verdict::kFail,
            "next-stage bounds [" + outer.lower.str() + ", " + outer.upper.str() +
                "], this stage [" + inner.lower.str() + ", " + inner.upper.str() + "]");
    }
  };
  rescale("rescale-positive-part", dp);
  rescale("rescale-difference", d);
  return r;
}

Element random_sphere_element(const Space& space, std::mt19937_64& rng) {
  if (!space.base_rooted()) throw PreconditionError("random S elements need a base-rooted space");
  // Entries in [0, 1/w] keep w * sup <= 1 = phi.
  const Rational cap = Rational(1) / space.sup_weight();
  std::uniform_int_distribution<int> len(0, 5);
  std::uniform_int_distribution<unsigned long> den(1, 12);
  const int l = len(rng);
  std::vector<Rational> prefix;
  for (int i = 0; i < l; ++i) {
    const unsigned long q = den(rng);
    const mpz_class top = (cap * Rational(q)).floor();
    std::uniform_int_distribution<unsigned long> num(0, top.get_ui());
    prefix.push_back(Rational(mpq_class(num(rng), q)));
  }
  return Element::base(space, std::move(prefix), Rational(1));
}

Report successor_norm_lemma_sweep(const Ordinal& alpha, std::uint64_t pairs, std::uint64_t seed) {
  const Space space(alpha);
  std::mt19937_64 rng(seed);
  Report r("successor norm lemma sweep in " + space.str());
  r.parameters() = {{"pairs", pairs}, {"seed", seed}};
  std::uint64_t failures = 0;
  nlohmann::json first;
  for (std::uint64_t i = 0; i < pairs; ++i) {
    const Element x = random_sphere_element(space, rng);
    const Element y = random_sphere_element(space, rng);
    const Report one = successor_norm_lemma_check(x, y);
    if (one.overall() != Verdict::kPass) {
      if (failures++ == 0) first = {{"x", elem_json(x)}, {"y", elem_json(y)}};
    }
  }
  r.add("sweep", failures ? Verdict::kFail : Verdict::kPass,
        std::to_string(pairs - failures) + " of " + std::to_string(pairs) + " pairs pass",
        failures ? nlohmann::json{{"first_failure", first}} : nlohmann::json::object());
  return r;
}

// --- JSON -------------------------------------------------------------------

void to_json(nlohmann::json& j, const Bundle& b) {
  using nlohmann::json;
  json space, z, witness;
  to_json(space, b.space);
  to_json(z, b.z);
  to_json(witness, *b.witness);
  json basis = json::array();
  for (std::uint64_t m = 1; m <= 4; ++m) basis.push_back(elem_json(pi_basis(b.space, m)));
  j = {{"schema", "fatou.bundle/1"},
       {"stage", ord_json(b.stage)},
       {"space", space},
       {"phi", b.space.base_rooted() ? "eventual value of the sequence"
                                     : "eventual value of the component phis"},
       {"pi_basis", {{"rule", "spike t*e_j, (j-1, t) from Cantor unpairing and Calkin-Wilf; "
                              "successors reuse it; limits place a child element in one "
                              "component"},
                     {"first", basis}}},
       {"z", z},
       {"witness", witness},
       {"provenance", b.provenance}};
}

BundlePtr bundle_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema") != "fatou.bundle/1") throw ParseError("not a fatou.bundle/1 document");
    auto b = std::make_shared<Bundle>();
    b->stage = j.at("stage").get<Ordinal>();
    if (b->stage.is_zero()) throw ParseError("bundle stage must be >= 1");
    b->space = Space(b->stage);
    if (!(space_from_json(j.at("space")) == b->space)) {
      throw ParseError("bundle space does not match its stage");
    }
    b->z = sequence_from_json(j.at("z"));
    if (!(b->z.space() == b->space)) throw ParseError("z lives outside the bundle space");
    b->witness = structured_tree_from_json(
        j.at("witness"), [](const Ordinal& stage) { return build(stage)->witness; });
    b->provenance = j.value("provenance", std::vector<std::string>{});
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bundle: ") + e.what());
  }
}

}  // namespace fatou
