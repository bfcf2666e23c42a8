// SPDX-License-Identifier: Apache-2.0
#include "hypo/classify.hpp"

#include "hypo/conjugation.hpp"

#include <algorithm>
#include <cmath>

namespace hypo {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::GH: return "GH";
    case Outcome::NotGH: return "NotGH";
    case Outcome::UndeterminedAtBounds: return "UndeterminedAtBounds";
  }
  return "?";
}

const char* to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::None: return "None";
    case CertificateKind::ConditionI: return "ConditionI";
    case CertificateKind::ConditionII: return "ConditionII";
    case CertificateKind::InfiniteZeroSet: return "InfiniteZeroSet";
    case CertificateKind::DiophantineFailure: return "DiophantineFailure";
    case CertificateKind::SingularWitness: return "SingularWitness";
  }
  return "?";
}

namespace {

constexpr long kPairTauLimit = 1L << 40;

bool one_signed(SignClass c) { return c == SignClass::NonNegativeNotZero || c == SignClass::NonPositiveNotZero; }

// Condition (II) scans of a_{J,0} over the sigma grid.
std::vector<SigmaCheck> condition_ii(const SystemSpec& spec, const std::vector<int>& J, const ClassifyBounds& bounds,
                                     std::size_t L_max) {
  const auto om = mode_constants(spec);
  DiophantineQuery q;
  bool exact = true;
  std::vector<Rational> ex;
  for (int r : J) {
    const auto& c = om[static_cast<std::size_t>(r)];
    q.alpha.push_back(c.value.real());
    if (c.re)
      ex.push_back(*c.re);
    else
      exact = false;
  }
  if (exact) q.alpha_exact = ex;
  q.mu = spec.mu();
  q.n = spec.op().meta().n;
  q.L_max = L_max;
  GapScan scan = scan_gaps(spec.op(), q.alpha, q.alpha_exact, L_max);
  std::vector<SigmaCheck> out;
  for (double s : condition_sigma_grid(spec, bounds)) {
    q.sigma = s;
    out.push_back({s, evaluate_condition(scan, q, bounds.eps_grid)});
  }
  return out;
}

Outcome condition_ii_outcome(const std::vector<SigmaCheck>& checks, const SigmaCheck** failing) {
  bool all_hold = true;
  for (const auto& c : checks) {
    if (c.report.verdict == DiophantineVerdict::FailsWithWitness) {
      if (failing && !*failing) *failing = &c;
    }
    all_hold = all_hold && c.report.verdict == DiophantineVerdict::HoldsUpToBounds;
  }
  if (failing && *failing) return Outcome::NotGH;
  return all_hold ? Outcome::GH : Outcome::UndeterminedAtBounds;
}

// Pairs (tau, j) with small symbol built from the Diophantine witnesses.
WitnessPairs pairs_from(const DiophantineReport& rep, const EigenvalueProvider& op, double lambda_cap) {
  WitnessPairs pairs;
  std::vector<double> lam;
  std::size_t jmax = 0;
  for (const auto& w : rep.witnesses) jmax = std::max(jmax, w.ell);
  if (jmax) lam = op.enumerate(jmax);
  for (const auto& w : rep.witnesses) {
    if (std::abs(lam[w.ell - 1]) > lambda_cap) continue;
    std::vector<long> tau;
    bool fits = true;
    for (const auto& t : w.tau) {
      if (boost::multiprecision::abs(t) > kPairTauLimit) fits = false;
      if (fits) tau.push_back(-t.convert_to<long>());
    }
    if (fits) pairs.emplace_back(std::move(tau), w.ell);
  }
  return pairs;
}

// Builds the witness on the normal form and carries it back with Psi.
SingularWitness through_normal_form(const SystemSpec& spec, const std::function<SingularWitness(const SystemSpec&)>& make) {
  NormalFormData nf = build_normal_form(spec);
  if (nf.trivial()) return make(spec);
  SingularWitness w = make(nf.normalized);
  w.u = apply_psi(nf, w.u, PsiDirection::Forward);
  for (auto& f : w.f) f = apply_psi(nf, f, PsiDirection::Forward);
  w.verification = verify_witness(spec, w);
  return w;
}

void attach_diophantine_witness(const SystemSpec& spec, Verdict& v, const SigmaCheck& failing) {
  const int m = spec.m();
  const int ell = static_cast<int>(v.J_set.size());
  WitnessOptions opt;
  opt.eps = failing.report.reported_eps;
  opt.sigma = failing.sigma;
  if (ell == m) {
    WitnessPairs pairs = pairs_from(failing.report, spec.op(), std::numeric_limits<double>::infinity());
    v.witness = through_normal_form(spec, [&](const SystemSpec& s) { return witness_symbol_decay(s, pairs, opt); });
    return;
  }
  // J first, then the sign-changing equations; the localized factor must resolve on the grid
  std::vector<int> order = v.J_set;
  for (int r = 0; r < m; ++r)
    if (std::find(order.begin(), order.end(), r) == order.end()) order.push_back(r);
  std::vector<int> inverse(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) inverse[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = k;
  WitnessPairs pairs = pairs_from(failing.report, spec.op(), static_cast<double>(opt.grid) / 4.0);
  const SystemSpec perm = spec.permuted(order);
  SingularWitness w = through_normal_form(perm, [&](const SystemSpec& s) { return witness_mixed(s, ell, pairs, opt); });
  w = permute_axes(w, inverse);
  w.verification = verify_witness(spec, w);
  v.witness = std::move(w);
}

}  // namespace

std::vector<double> condition_sigma_grid(const SystemSpec& spec, const ClassifyBounds& bounds) {
  if (!bounds.sigma_grid.empty()) return bounds.sigma_grid;
  const double s = spec.op().meta().M * spec.mu();
  return {s, 2 * s, 4 * s};
}

Verdict classify(const SystemSpec& spec, const ClassifyBounds& bounds) {
  Verdict v;
  v.bounds = bounds;
  const int m = spec.m();
  for (int r = 0; r < m; ++r) {
    v.profiles.push_back(sign_profile(spec.equation(r).b));
    if (v.profiles.back().cls == SignClass::IdenticallyZero) v.J_set.push_back(r);
  }

  // (0) a certified infinite zero set settles the question before condition
  // (II); when every b changes sign the sign-change witness is preferred
  ZeroSetReport zs = scan_zero_set(spec, bounds.tau_max, bounds.j_max);
  const bool zero_set_infinite = zs.growth == ZeroSetGrowth::InfiniteCertified;
  if (zero_set_infinite && !v.J_set.empty()) {
    v.outcome = Outcome::NotGH;
    v.certificate = CertificateKind::InfiniteZeroSet;
    v.zero_set = std::move(zs);
    v.notes.push_back("infinite zero set takes precedence over condition (II) on the nonzero gaps");
    if (bounds.build_witness) {
      try {
        v.witness = witness_infinite_zero_set(spec, bounds.j_max);
      } catch (const std::exception& e) {
        v.notes.push_back(std::string("witness construction failed: ") + e.what());
      }
    }
    return v;
  }
  v.zero_set = std::move(zs);

  // (1) condition (I)
  for (int r = 0; r < m; ++r)
    if (one_signed(v.profiles[static_cast<std::size_t>(r)].cls)) {
      v.outcome = Outcome::GH;
      v.certificate = CertificateKind::ConditionI;
      v.condition_i_index = r;
      return v;
    }

  // (2) condition (II) on the equations with b == 0
  if (!v.J_set.empty()) {
    v.diophantine = condition_ii(spec, v.J_set, bounds, bounds.L_max);
    const SigmaCheck* failing = nullptr;
    v.outcome = condition_ii_outcome(v.diophantine, &failing);
    if (v.outcome == Outcome::GH) {
      v.certificate = CertificateKind::ConditionII;
    } else if (v.outcome == Outcome::NotGH) {
      v.certificate = CertificateKind::DiophantineFailure;
      if (bounds.build_witness) {
        try {
          attach_diophantine_witness(spec, v, *failing);
        } catch (const std::exception& e) {
          v.notes.push_back(std::string("witness construction failed: ") + e.what());
        }
      }
    } else {
      v.notes.push_back("condition (II) is inconclusive on the scanned box");
    }
    return v;
  }

  // (3) every b changes sign
  v.outcome = Outcome::NotGH;
  v.certificate = CertificateKind::SingularWitness;
  if (zero_set_infinite) v.notes.push_back("the zero set is also certified infinite");
  if (bounds.build_witness) {
    try {
      v.witness = witness_sign_change(spec, bounds.j_max);
    } catch (const std::exception& e) {
      v.notes.push_back(std::string("witness construction failed: ") + e.what());
    }
  }
  return v;
}

std::optional<Verdict> single_equation_rule(const SystemSpec& spec, int r, const ClassifyBounds& bounds) {
  if (r < 0 || r >= spec.m()) throw InputError("equation index out of range");
  Verdict v;
  v.bounds = bounds;
  SignProfile p = sign_profile(spec.equation(r).b);
  v.profiles.push_back(p);
  if (one_signed(p.cls)) {
    v.outcome = Outcome::GH;
    v.certificate = CertificateKind::ConditionI;
    v.condition_i_index = r;
    return v;
  }
  if (p.cls == SignClass::IdenticallyZero) {
    v.J_set = {r};
    v.diophantine = condition_ii(spec, v.J_set, bounds, bounds.L_max);
    if (condition_ii_outcome(v.diophantine, nullptr) == Outcome::GH) {
      v.outcome = Outcome::GH;
      v.certificate = CertificateKind::ConditionII;
      return v;
    }
  }
  return std::nullopt;
}

Verdict reduce_and_classify(const SystemSpec& spec, const ClassifyBounds& bounds) {
  Verdict v = classify(spec, bounds);
  NormalFormData nf = build_normal_form(spec);
  Verdict w = classify(nf.normalized, bounds);
  if (v.outcome != w.outcome)
    throw ConsistencyError(std::string("verdict ") + to_string(v.outcome) + " differs from the normal-form verdict " +
                           to_string(w.outcome));
  v.notes.push_back(std::string("normal form agrees: ") + to_string(w.outcome));
  return v;
}

RecheckReport recheck(const SystemSpec& spec, const Verdict& v) {
  RecheckReport rep;
  auto fail = [&](std::string s) {
    rep.ok = false;
    rep.failures.push_back(std::move(s));
  };
  switch (v.certificate) {
    case CertificateKind::ConditionI: {
      SignClass c = sign_profile(spec.equation(v.condition_i_index).b).cls;
      if (!one_signed(c)) fail("condition (I) profile does not recheck");
      break;
    }
    case CertificateKind::ConditionII: {
      auto checks = condition_ii(spec, v.J_set, v.bounds, 2 * v.bounds.L_max);
      if (condition_ii_outcome(checks, nullptr) != Outcome::GH) fail("condition (II) does not persist on the doubled box");
      break;
    }
    case CertificateKind::InfiniteZeroSet: {
      ZeroSetReport zs = scan_zero_set(spec, v.bounds.tau_max, v.bounds.j_max);
      if (zs.growth != ZeroSetGrowth::InfiniteCertified) fail("zero-set certificate does not recheck");
      break;
    }
    case CertificateKind::DiophantineFailure: {
      auto checks = condition_ii(spec, v.J_set, v.bounds, v.bounds.L_max);
      const SigmaCheck* failing = nullptr;
      if (condition_ii_outcome(checks, &failing) != Outcome::NotGH) fail("Diophantine failure does not recheck");
      break;
    }
    case CertificateKind::SingularWitness:
    case CertificateKind::None: break;
  }
  if (v.outcome == Outcome::NotGH) {
    if (!v.witness) {
      fail("no witness attached");
    } else {
      WitnessVerification wv = verify_witness(spec, *v.witness);
      if (!wv.passed)
        for (const auto& f : wv.failures) fail("witness: " + f);
    }
  }
  return rep;
}

}  // namespace hypo
