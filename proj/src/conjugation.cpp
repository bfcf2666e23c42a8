// SPDX-License-Identifier: Apache-2.0
#include "hypo/conjugation.hpp"

#include <algorithm>
#include <cmath>

namespace hypo {

bool NormalFormData::trivial() const {
  return std::all_of(A.begin(), A.end(), [](const PeriodicFunction& f) { return f.series().max_abs_coeff() == 0; });
}

NormalFormData build_normal_form(const SystemSpec& spec) {
  std::vector<double> avg;
  std::vector<std::optional<Rational>> ex;
  std::vector<PeriodicFunction> A;
  std::vector<Equation> eqs;
  for (const auto& e : spec.equations()) {
    avg.push_back(average(e.a));
    ex.push_back(e.a.exact_average());
    A.push_back(antiderivative_centered(e.a));
    PeriodicFunction a0 = ex.back() ? PeriodicFunction::constant(*ex.back()) : PeriodicFunction::constant(avg.back());
    eqs.push_back({a0, e.b});
  }
  return NormalFormData{std::move(avg), std::move(ex), std::move(A), spec.with_equations(std::move(eqs))};
}

TrigSeries psi_multiplier(const PeriodicFunction& A, double lambda, PsiDirection dir, const PsiOptions& opt) {
  const double sgn = dir == PsiDirection::Forward ? -1.0 : 1.0;
  if (A.series().max_abs_coeff() == 0 || lambda == 0) return TrigSeries::constant(1.0);
  std::size_t N = 32;
  while (N < 8 * static_cast<std::size_t>(A.degree())) N *= 2;
  const std::size_t N_max = 16 * static_cast<std::size_t>(opt.degree_cap);
  while (true) {
    std::vector<double> a = A.sample(N);
    std::vector<cplx> v(N);
    for (std::size_t k = 0; k < N; ++k) v[k] = std::exp(cplx(0, sgn * lambda * a[k]));
    TrigSeries s = TrigSeries::from_samples(v);
    const double top = s.max_abs_coeff();
    double tail = 0;
    for (long tau = static_cast<long>(N / 4); tau <= s.degree(); ++tau)
      tail = std::max({tail, std::abs(s.coeff(tau)), std::abs(s.coeff(-tau))});
    if (tail <= opt.drop_rel * top) {
      TrigSeries t = s.trimmed(opt.drop_rel * top);
      if (t.degree() > opt.degree_cap)
        throw PreconditionError("multiplier degree " + std::to_string(t.degree()) + " exceeds the cap " +
                                std::to_string(opt.degree_cap) + " (lambda ||A|| too large)");
      return t;
    }
    if (N >= N_max)
      throw PreconditionError("multiplier does not resolve within degree cap " + std::to_string(opt.degree_cap) +
                              " (lambda ||A|| too large)");
    N *= 2;
  }
}

CoefficientField apply_psi(const NormalFormData& nf, const CoefficientField& field, PsiDirection dir,
                           const PsiOptions& opt) {
  if (field.dim() != static_cast<int>(nf.A.size())) throw InputError("field dimension does not match the normal form");
  if (nf.trivial()) return field;
  const std::vector<double> lam = eigenvalues_for(nf.normalized, field);
  std::vector<std::pair<std::size_t, const ModeBlock*>> items;
  for (const auto& [j, b] : field.blocks()) items.emplace_back(j, &b);
  std::vector<ModeBlock> out(items.size());
  std::vector<std::string> errors(items.size());
  parallel_for(items.size(), [&](std::size_t i) {
    try {
      ModeBlock b = *items[i].second;
      for (std::size_t k = 0; k < nf.A.size(); ++k) {
        if (nf.A[k].series().max_abs_coeff() == 0) continue;
        b = convolve_axis(b, static_cast<int>(k), psi_multiplier(nf.A[k], lam[items[i].first - 1], dir, opt));
      }
      out[i] = b.trimmed(0.0);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (const auto& e : errors)
    if (!e.empty()) throw PreconditionError(e);
  CoefficientField res(field.dim(), field.context(), 1L << 40, field.mode_bound());
  for (std::size_t i = 0; i < items.size(); ++i) res.set_block(items[i].first, std::move(out[i]));
  return res;
}

double max_entry_difference(const CoefficientField& a, const CoefficientField& b) {
  double d = 0;
  a.for_each_nonzero([&](const std::vector<long>& tau, std::size_t j, cplx v) { d = std::max(d, std::abs(v - b.get(tau, j))); });
  b.for_each_nonzero([&](const std::vector<long>& tau, std::size_t j, cplx v) { d = std::max(d, std::abs(v - a.get(tau, j))); });
  return d;
}

double verify_conjugation(const NormalFormData& nf, const SystemSpec& spec, const CoefficientField& field,
                          const PsiOptions& opt) {
  CoefficientField v = apply_psi(nf, field, PsiDirection::Forward, opt);
  double worst = 0;
  for (int r = 0; r < spec.m(); ++r) {
    CoefficientField lhs = apply_psi(nf, apply_equation(spec, r, v), PsiDirection::Inverse, opt);
    CoefficientField rhs = apply_equation(nf.normalized, r, field);
    worst = std::max(worst, max_entry_difference(lhs, rhs));
  }
  return worst;
}

}  // namespace hypo
