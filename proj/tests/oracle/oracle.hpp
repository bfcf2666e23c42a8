// SPDX-License-Identifier: Apache-2.0
// Brute-force reference computations for the test suite.
#pragma once

#include "hypo/torus.hpp"

#include <gmpxx.h>

#include <complex>
#include <string>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

struct RationalScanConfig {
  std::vector<mpq_class> alpha;
  std::vector<mpz_class> eigenvalues;
};

struct ExactGap {
  mpq_class gap;  // max over r of dist(alpha_r lambda_l, Z)
  bool zero = false;
};

std::vector<ExactGap> exact_gap_scan(const RationalScanConfig& cfg);
mpq_class parse_mpq(const std::string& text);

struct OdeSolution {
  bool singular = false;
  std::vector<cplx> u;  // u(2 pi k / steps)
};

// -i u' + lambda (a + i b)(t) u = f(t), u periodic; RK4 and shooting.
OdeSolution ode_timestep_check(double lambda, const hypo::PeriodicFunction& a, const hypo::PeriodicFunction& b,
                               const hypo::TrigSeries& f, std::size_t steps);

// (2 pi)^-1 int exp(-i lambda A(t)) e^{-i tau t} dt, trapezoid on `grid` points.
cplx multiplier_quadrature(const hypo::PeriodicFunction& A, double lambda, long tau, std::size_t grid = 4096);

}  // namespace oracle
