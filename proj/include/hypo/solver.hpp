// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hypo/coeffs.hpp"
#include "hypo/system.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypo {

// A mode that cannot be solved uniquely; carries the offending (tau, j).
struct ResonanceError : std::runtime_error {
  ResonanceError(const std::string& what, std::vector<std::pair<std::vector<long>, std::size_t>> where)
      : std::runtime_error(what), offending(std::move(where)) {}
  std::vector<std::pair<std::vector<long>, std::size_t>> offending;
};

enum class Formula { Minus, Plus, Auto };
const char* to_string(Formula f);

// D_{t_r} u + lambda (a + i b)(t_r) u = f on one mode; rhs is an m-variable block.
struct ModeProblem {
  int r = 0;
  std::size_t j = 1;
  double lambda = 1;
  PeriodicFunction a;
  PeriodicFunction b;
  ModeBlock rhs;
};

struct ThetaFactors {
  double theta_minus = 0;
  double theta_plus = 0;
  bool finite = true;
};

ThetaFactors theta_factors(double lambda, cplx c0);

struct KernelOptions {
  std::size_t quad_nodes = 512;  // per t-point, doubled while the result moves
  double tol = 1e-12;
  std::size_t max_grid = 4096;
};

// Picks the formula whose kernel stays bounded (Plus for lambda b >= 0,
// Minus for lambda b <= 0, otherwise the smaller kernel bound).
Formula auto_formula(double lambda, const PeriodicFunction& b);

// log of sup |H^-+| over the integration range.
double kernel_log_bound(double lambda, const PeriodicFunction& b, Formula f);

ModeBlock solve_mode(const ModeProblem& p, Formula formula = Formula::Auto, const KernelOptions& opt = {});
TrigSeries solve_line(double lambda, const TrigSeries& c, const TrigSeries& f, Formula formula,
                      const KernelOptions& opt = {});

struct SolveOptions {
  Formula formula = Formula::Auto;
  std::optional<int> r_star;        // variable-coefficient equation index
  bool direct_variable_a = false;   // solve variable a without the normal form
  KernelOptions kernel;
  double compat_tol = 1e-6;
};

struct SolveResult {
  CoefficientField u;
  double residual = 0;
  int r_star = -1;  // -1 for symbol division
  std::string method;
  std::map<std::size_t, double> mode_residual;
};

SolveResult solve_system(const SystemSpec& spec, const std::vector<CoefficientField>& rhs,
                         const SolveOptions& opt = {});

// max over r and modes of |L_r u - f_r| coefficientwise.
double residual(const SystemSpec& spec, const CoefficientField& u, const std::vector<CoefficientField>& rhs);
std::map<std::size_t, double> mode_residuals(const SystemSpec& spec, const CoefficientField& u,
                                             const std::vector<CoefficientField>& rhs);

}  // namespace hypo
