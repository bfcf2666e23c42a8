// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hypo/rational.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace hypo {

struct OperatorMeta {
  int M = 2;  // operator order
  int n = 1;  // space dimension
  std::optional<double> rho;

  double weyl_exponent() const { return static_cast<double>(M) / (2.0 * n); }
  void validate() const;
};

enum class SpectrumSource { HarmonicOscillator, Table, Formula };

// Supported closed-form sequences for the Formula source.
enum class FormulaKind {
  Power,             // coef * j^power
  DoubleExponential  // 2^(2^j), finite length
};

struct WeylFit {
  double exponent = 0;
  double rho_hat = 0;
};

// An immutable eigenvalue sequence lambda_1, lambda_2, ... of a globally
// elliptic operator. Indices are 1-based throughout the library.
class EigenvalueProvider {
 public:
  static EigenvalueProvider harmonic_oscillator(int n);
  static EigenvalueProvider table(std::vector<double> values, OperatorMeta meta);
  static EigenvalueProvider power_law(double coef, double power, OperatorMeta meta);
  static EigenvalueProvider double_exponential(std::size_t length, OperatorMeta meta);

  const OperatorMeta& meta() const { return meta_; }
  SpectrumSource source() const { return source_; }
  std::optional<FormulaKind> formula() const { return formula_; }
  double formula_coef() const { return coef_; }
  double formula_power() const { return power_; }
  const std::vector<double>& table_values() const { return table_; }

  // Largest admissible index, or max() when unbounded.
  std::size_t max_index() const;

  std::vector<double> enumerate(std::size_t J) const;

  // Exact values when every lambda_j, j <= J, is known as a rational.
  std::optional<std::vector<Rational>> enumerate_exact(std::size_t J) const;

  // True if the Weyl law with the declared exponent is plausible on the
  // prefix; custom sequences are accepted either way.
  bool weyl_consistent(std::size_t J, double rel_tol = 0.25) const;

  std::string describe() const;

 private:
  EigenvalueProvider() = default;

  OperatorMeta meta_;
  SpectrumSource source_ = SpectrumSource::HarmonicOscillator;
  std::optional<FormulaKind> formula_;
  std::vector<double> table_;
  double coef_ = 1.0;
  double power_ = 1.0;
  std::size_t length_ = std::numeric_limits<std::size_t>::max();
};

// sum_j (2 k_j + 1)
long long ho_eigenvalue(const std::vector<int>& k);
long long ho_eigenvalue(const EigenvalueProvider& provider, const std::vector<int>& k);

// First J multi-indices of the n-dimensional oscillator in enumeration order.
std::vector<std::vector<int>> ho_multi_indices(int n, std::size_t J);

WeylFit fit_weyl_exponent(const EigenvalueProvider& provider, std::size_t J);

// One-column CSV with header "lambda".
std::vector<double> load_eigenvalue_csv(const std::string& path);

}  // namespace hypo
