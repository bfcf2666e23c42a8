// SPDX-License-Identifier: Apache-2.0
// Library results against the independent reference computations.
#include "oracle.hpp"

#include "hypo/conjugation.hpp"
#include "hypo/diophantine.hpp"
#include "hypo/solver.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace hypo;

namespace {

PeriodicFunction trig(std::vector<TrigTerm> t) { return PeriodicFunction::from_terms(t); }

std::vector<mpz_class> odd_numbers(std::size_t L) {
  std::vector<mpz_class> v;
  for (std::size_t j = 1; j <= L; ++j) v.emplace_back(static_cast<unsigned long>(2 * j - 1));
  return v;
}

}  // namespace

TEST_CASE("exact gap scan examples") {
  auto half = oracle::exact_gap_scan({{oracle::parse_mpq("1/2")}, odd_numbers(50)});
  for (const auto& g : half) CHECK(g.gap == mpq_class(1, 2));
  std::vector<mpz_class> ints;
  for (unsigned long j = 1; j <= 20; ++j) ints.emplace_back(j);
  for (const auto& g : oracle::exact_gap_scan({{mpq_class(1)}, ints})) CHECK(g.zero);
  auto third = oracle::exact_gap_scan({{oracle::parse_mpq("1/3")}, odd_numbers(3)});
  CHECK(third[0].gap == mpq_class(1, 3));
  CHECK(third[1].zero);
  CHECK(third[2].gap == mpq_class(1, 3));
}

TEST_CASE("float gap scan matches exact arithmetic") {
  const std::size_t L = 2000;
  auto HO = EigenvalueProvider::harmonic_oscillator(1);
  for (const char* a : {"1/2", "1/3", "2/7", "355/113", "22/7", "13/64"}) {
    auto ex = oracle::exact_gap_scan({{oracle::parse_mpq(a)}, odd_numbers(L)});
    const double alpha = to_double(parse_rational(a));
    auto scan = scan_gaps(HO, {alpha}, std::nullopt, L);
    REQUIRE(scan.entries.size() == L);
    for (std::size_t l = 0; l < L; ++l) {
      CHECK(scan.entries[l].zero == ex[l].zero);
      if (!ex[l].zero) CHECK(std::abs(scan.entries[l].gap - ex[l].gap.get_d()) <= 1e-12);
    }
  }
}

TEST_CASE("time-stepping oracle examples") {
  auto half = oracle::ode_timestep_check(1.0, PeriodicFunction::constant(0.5), PeriodicFunction::zero(),
                                         TrigSeries({0.0, 0.0, 1.0}), 4096);
  REQUIRE_FALSE(half.singular);
  for (std::size_t k = 0; k < half.u.size(); k += 256) {
    const double t = kTwoPi * double(k) / 4096.0;
    CHECK(std::abs(half.u[k] - 2.0 / 3.0 * std::exp(cplx(0, t))) <= 1e-6);
  }
  auto zero = oracle::ode_timestep_check(1.0, PeriodicFunction::constant(0.5), PeriodicFunction::zero(), TrigSeries(),
                                         1024);
  for (auto v : zero.u) CHECK(std::abs(v) == 0.0);
  CHECK(oracle::ode_timestep_check(1.0, PeriodicFunction::constant(1.0), PeriodicFunction::zero(),
                                   TrigSeries({0.0, 0.0, 1.0}), 1024)
            .singular);
}

TEST_CASE("kernel solutions match time stepping") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> U(-1, 1);
  int checked = 0;
  while (checked < 20) {
    auto a = trig({{0, U(rng), 0}, {1, 0.5 * U(rng), 0.5 * U(rng)}});
    auto b = trig({{0, 0.2 * U(rng), 0}, {1, 0.3 * U(rng), 0.3 * U(rng)}});
    const double lambda = 1.0 + 2.0 * (U(rng) + 1.0);
    const cplx kappa = lambda * cplx(average(a), average(b));
    if (std::abs(std::sin(kPi * kappa)) < 0.1) continue;
    std::vector<cplx> f(5);
    for (auto& x : f) x = cplx(U(rng), U(rng));
    TrigSeries rhs(f);
    auto c = symbol_coefficient({a, b});
    auto ode = oracle::ode_timestep_check(lambda, a, b, rhs, 8192);
    REQUIRE_FALSE(ode.singular);
    for (Formula form : {Formula::Minus, Formula::Plus}) {
      auto u = solve_line(lambda, c, rhs, form);
      double err = 0, top = 0;
      for (std::size_t k = 0; k < ode.u.size(); k += 64) {
        const double t = kTwoPi * double(k) / 8192.0;
        err = std::max(err, std::abs(u(t) - ode.u[k]));
        top = std::max(top, std::abs(ode.u[k]));
      }
      CHECK(err <= 1e-6 * std::max(1.0, top));
    }
    ++checked;
  }
}

TEST_CASE("multiplier quadrature examples") {
  CHECK(std::abs(oracle::multiplier_quadrature(PeriodicFunction::zero(), 1.0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(oracle::multiplier_quadrature(PeriodicFunction::zero(), 1.0, 3)) < 1e-14);
  auto A = trig({{1, 0, 1}});
  auto s = psi_multiplier(A, 1.0, PsiDirection::Forward);
  CHECK(std::abs(oracle::multiplier_quadrature(A, 1.0, 1) - s.coeff(1)) <= 1e-8);
}

TEST_CASE("Psi multipliers match direct quadrature") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<TrigTerm> terms;
    for (int k = 1; k <= 3; ++k) terms.push_back({k, U(rng), U(rng)});
    auto A = trig(terms);
    for (double lambda : {1.0, 3.0, 9.0}) {
      auto s = psi_multiplier(A, lambda, PsiDirection::Forward);
      for (long tau = -12; tau <= 12; ++tau)
        CHECK(std::abs(oracle::multiplier_quadrature(A, lambda, tau) - s.coeff(tau)) <= 1e-8);
    }
  }
}
