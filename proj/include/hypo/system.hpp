// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hypo/coeffs.hpp"
#include "hypo/rational.hpp"
#include "hypo/spectrum.hpp"
#include "hypo/torus.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hypo {

// One equation D_{t_r} + (a_r + i b_r)(t_r) P.
struct Equation {
  PeriodicFunction a;
  PeriodicFunction b;
};

class SystemSpec {
 public:
  SystemSpec(std::vector<Equation> equations, EigenvalueProvider op, double mu);

  int m() const { return static_cast<int>(eq_.size()); }
  const std::vector<Equation>& equations() const { return eq_; }
  const Equation& equation(int r) const { return eq_.at(static_cast<std::size_t>(r)); }
  const EigenvalueProvider& op() const { return op_; }
  double mu() const { return mu_; }
  FieldContext field_context() const { return {mu_, op_.meta().n}; }

  SystemSpec with_equations(std::vector<Equation> eqs) const { return SystemSpec(std::move(eqs), op_, mu_); }
  SystemSpec permuted(const std::vector<int>& order) const;

 private:
  std::vector<Equation> eq_;
  EigenvalueProvider op_;
  double mu_;
};

// omega_r = a_{r,0} + i b_{r,0}, with exact parts when known.
struct ModeConstant {
  cplx value;
  std::optional<Rational> re;
  std::optional<Rational> im;
  bool exact() const { return re.has_value() && im.has_value(); }
};

std::vector<ModeConstant> mode_constants(const SystemSpec& spec);

struct SymbolValue {
  std::vector<cplx> entries;
  double norm = 0;
  // exact real and imaginary parts when every input was exact
  std::optional<std::vector<std::pair<Rational, Rational>>> exact;
};

SymbolValue symbol(const SystemSpec& spec, const std::vector<long>& tau, std::size_t j);

enum class ZeroSetGrowth { FiniteLikely, InfiniteCertified, InfiniteLikely };
const char* to_string(ZeroSetGrowth g);

// Closed-form family of indices on which every omega_r lambda_j is an integer.
struct ZeroSetCertificate {
  std::string family;         // "oscillator-progression" or "power-law-progression"
  BigInt modulus;             // common denominator Q of the omega_r
  BigInt first;               // first eigenvalue (oscillator) or index (power law) in the family
  BigInt step;                // progression step in the same units
  std::vector<std::size_t> verified_indices;  // members checked exactly
};

struct ZeroSetReport {
  std::vector<std::pair<std::vector<long>, std::size_t>> zeros;
  ZeroSetGrowth growth = ZeroSetGrowth::FiniteLikely;
  std::optional<ZeroSetCertificate> certificate;
  long T = 0;
  std::size_t J = 0;
  bool exact = false;
};

ZeroSetReport scan_zero_set(const SystemSpec& spec, long T, std::size_t J);

struct ResonanceSets {
  std::vector<std::vector<std::size_t>> per_equation;
  std::vector<std::size_t> joint;
  std::size_t J = 0;
  bool exact = false;
};

ResonanceSets resonance_sets(const SystemSpec& spec, std::size_t J);

// Per j: lambda_j and, per equation, the distance of omega_r lambda_j to the
// integers (combined with the imaginary part as a hypotenuse).
struct ResonanceRow {
  std::size_t j;
  double lambda;
  std::vector<double> gaps;
};

std::vector<ResonanceRow> resonance_table(const SystemSpec& spec, std::size_t J);

// Coefficients of c_r = a_r + i b_r as a function of t_r.
TrigSeries symbol_coefficient(const Equation& e);

// Mode-wise action of L_r: tau_r u(tau) + lambda_j (c_r * u)(tau), the
// convolution acting along axis r.
CoefficientField apply_equation(const SystemSpec& spec, int r, const CoefficientField& u);

// lambda_1..lambda_J as doubles, J = largest mode present.
std::vector<double> eigenvalues_for(const SystemSpec& spec, const CoefficientField& field);

}  // namespace hypo
