// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hypo/rational.hpp"
#include "hypo/spectrum.hpp"

#include <optional>
#include <vector>

namespace hypo {

struct DiophantineQuery {
  std::vector<double> alpha;
  std::optional<std::vector<Rational>> alpha_exact;  // enables the exact path
  double sigma = 1.0;
  double mu = 0.5;
  int n = 1;
  double T_max = 1e300;  // pairs with |tau| above this are outside the box
  std::size_t L_max = 1000;
};

enum class DiophantineVerdict { HoldsUpToBounds, FailsWithWitness, Inconclusive };
const char* to_string(DiophantineVerdict v);

struct DiophantineWitness {
  std::vector<BigInt> tau;
  std::size_t ell = 0;
  double gap = 0;
  double log_gap = 0;  // exact even when gap underflows
  double budget = 0;   // exp(-eps W) at the reported eps
  double eps_ell = 0;  // -log(gap) / W
};

struct DiophantineReport {
  DiophantineVerdict verdict = DiophantineVerdict::Inconclusive;
  std::vector<DiophantineWitness> witnesses;
  double fitted_eps = 0;    // max over the box of -log(gap)/W, i.e. the least eps with C = 1
  double reported_eps = 0;  // grid eps at which the witnesses violate the bound
  double eps_head = 0;
  double eps_tail = 0;
  double sigma = 0;
  std::size_t L_scanned = 0;
  std::size_t zero_gaps = 0;
  std::size_t outside_box = 0;
  double min_gap = 1;
  bool exact = false;
};

// Nearest-integer gap data per ell, shared across sigma values.
struct GapScan {
  struct Entry {
    std::vector<BigInt> tau;
    double tau_norm = 0;
    double gap = 0;
    double log_gap = 0;
    bool zero = false;
  };
  std::vector<Entry> entries;  // index ell - 1
  bool exact = false;
};

GapScan scan_gaps(const EigenvalueProvider& eigenvalues, const std::vector<double>& alpha,
                  const std::optional<std::vector<Rational>>& alpha_exact, std::size_t L_max);

DiophantineReport evaluate_condition(const GapScan& scan, const DiophantineQuery& q,
                                     const std::vector<double>& eps_grid);

// Default eps grid {1e-3, 1e-2, 1e-1}.
DiophantineReport check_condition(const EigenvalueProvider& eigenvalues, const DiophantineQuery& q,
                                  const std::vector<double>& eps_grid = {});

struct TorusScanReport {
  DiophantineVerdict verdict = DiophantineVerdict::Inconclusive;
  double fitted_delta = 0;
  double delta_head = 0;
  double delta_tail = 0;
  std::size_t L_scanned = 0;
  std::size_t zero_points = 0;
  bool all_zero = false;
  std::vector<double> m;  // m_j, j = 1..L
};

// m_j = max_r |1 - exp(-2 pi i omega_r lambda_j)|. omega may be complex.
TorusScanReport torus_distance_scan(const std::vector<std::complex<double>>& omega,
                                    const std::optional<std::vector<Rational>>& omega_exact_real,
                                    const EigenvalueProvider& eigenvalues, std::size_t L_max, double mu,
                                    const std::vector<double>& delta_grid = {});

bool verdicts_agree(const TorusScanReport& t, const DiophantineReport& d);

struct Convergent {
  long long p = 0;
  long long q = 1;
  double error = 0;  // |alpha - p/q|
};

std::vector<Convergent> continued_fraction_oracle(double alpha, long long Q_max);
std::vector<Convergent> continued_fraction_oracle(const Rational& alpha, long long Q_max);

}  // namespace hypo
