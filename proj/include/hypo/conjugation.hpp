// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hypo/coeffs.hpp"
#include "hypo/system.hpp"

#include <optional>
#include <vector>

namespace hypo {

struct NormalFormData {
  std::vector<double> averages;                    // a_{k,0}
  std::vector<std::optional<Rational>> exact_averages;
  std::vector<PeriodicFunction> A;                 // A_k(t_k), A_k(0) = 0
  SystemSpec normalized;

  bool trivial() const;  // every A_k vanishes
};

NormalFormData build_normal_form(const SystemSpec& spec);

enum class PsiDirection { Forward, Inverse };

struct PsiOptions {
  double drop_rel = 1e-14;
  int degree_cap = 512;
};

// Coefficients of exp(sign * i * lambda * A(t)), sign = -1 for Forward.
TrigSeries psi_multiplier(const PeriodicFunction& A, double lambda, PsiDirection dir, const PsiOptions& opt = {});

CoefficientField apply_psi(const NormalFormData& nf, const CoefficientField& field, PsiDirection dir,
                           const PsiOptions& opt = {});

// max over r and entries of |(Psi^{-1} L_r Psi - L_{r,0}) u|.
double verify_conjugation(const NormalFormData& nf, const SystemSpec& spec, const CoefficientField& field,
                          const PsiOptions& opt = {});

// max |a - b| over the union of supports.
double max_entry_difference(const CoefficientField& a, const CoefficientField& b);

}  // namespace hypo
