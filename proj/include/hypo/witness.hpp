// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hypo/coeffs.hpp"
#include "hypo/system.hpp"

#include <string>
#include <utility>
#include <vector>

namespace hypo {

enum class WitnessKind { InfiniteZeroSet, SymbolDecaySequence, SignChangeCase1, MixedCase2 };
const char* to_string(WitnessKind k);

struct WitnessVerification {
  double u_nondecay = 0;    // min over the witness modes of |u_j(t*)|
  double u_sup = 0;         // max over the witness modes of sup |u_j| on the grid
  double f_decay_eps = 0;   // min over r of the fitted eps of f_r; +inf when every f_r vanishes
  double residual = 0;      // max |L_r u - f_r|
  double projection_error = 0;
  DecayProfile u_profile;
  std::vector<DecayProfile> f_profiles;
  bool passed = false;
  std::vector<std::string> failures;
};

struct SingularWitness {
  WitnessKind kind = WitnessKind::InfiniteZeroSet;
  CoefficientField u{1};
  std::vector<CoefficientField> f;
  std::vector<std::size_t> modes;               // the mode subsequence carrying the certificate
  std::vector<std::vector<double>> t_star;      // per mode: the point where |u_j| = 1
  double eps = 0;                   // smallness level of the pairs (symbol-decay kinds)
  double sigma = 0;
  WitnessVerification verification;
};

// Pairs (tau_k, j_k) on which the symbol is small.
using WitnessPairs = std::vector<std::pair<std::vector<long>, std::size_t>>;

struct WitnessOptions {
  std::size_t grid = 1024;        // per torus variable
  double bump_order = 2.0;        // Gevrey order of the cutoffs
  double drop_rel = 1e-14;        // projection threshold
  double margin_min = 1e-3;       // required flank margin
  std::size_t base_grid = 256;    // base points scanned for the window
  double eps = 0.1;               // smallness level checked on the pairs
  double sigma = 0;               // 0: M mu
  std::vector<double> sigma_grid; // classify_field grid; empty: default
};

// Window and distinguished point for one sign-changing b (sign = sign of lambda).
struct SignChangeGeometry {
  double t0 = 0;
  double alpha = 0;
  double beta = 0;
  double flank = 0;
  double t_star = 0;
  double B_star = 0;  // int_{t0}^{t*} b
  double margin = 0;  // -max over the flanks of sign (B - B*)
  int sign = 1;
};

SignChangeGeometry sign_change_geometry(const PeriodicFunction& b, int sign, const WitnessOptions& opt = {});

SingularWitness witness_infinite_zero_set(const SystemSpec& spec, std::size_t J, const WitnessOptions& opt = {});
SingularWitness witness_symbol_decay(const SystemSpec& spec, const WitnessPairs& pairs, const WitnessOptions& opt = {});
SingularWitness witness_sign_change(const SystemSpec& spec, std::size_t J, const WitnessOptions& opt = {});
// Equations 1..ell carry b == 0 and constant a; the others change sign. Pairs
// hold tau in Z^ell.
SingularWitness witness_mixed(const SystemSpec& spec, int ell, const WitnessPairs& pairs,
                              const WitnessOptions& opt = {});

// Recomputes the verification numbers from scratch.
WitnessVerification verify_witness(const SystemSpec& spec, const SingularWitness& w, const WitnessOptions& opt = {});

// Relabels the torus variables: new axis k is old axis order[k].
CoefficientField permute_axes(const CoefficientField& field, const std::vector<int>& order);
SingularWitness permute_axes(const SingularWitness& w, const std::vector<int>& order);

}  // namespace hypo
