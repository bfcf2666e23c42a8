// SPDX-License-Identifier: Apache-2.0
#include "hypo/torus.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace hypo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

PeriodicFunction trig(std::vector<TrigTerm> t) { return PeriodicFunction::from_terms(t); }

}  // namespace

TEST_CASE("averages") {
  CHECK_THAT(average(trig({{1, 0, 1}})), WithinAbs(0.0, 1e-15));
  CHECK(average(PeriodicFunction::constant(3.5)) == 3.5);
  CHECK_THAT(average(trig({{0, 1, 0}, {1, 1, 0}})), WithinAbs(1.0, 1e-15));
}

TEST_CASE("centered antiderivative") {
  auto A = antiderivative_centered(trig({{1, 1, 0}}));
  auto c = antiderivative_centered(PeriodicFunction::constant(2.0));
  auto B = antiderivative_centered(trig({{0, 1, 0}, {1, 1, 0}}));
  for (int k = 0; k < 64; ++k) {
    double t = kTwoPi * k / 64;
    CHECK_THAT(A(t), WithinAbs(std::sin(t), 1e-14));
    CHECK_THAT(c(t), WithinAbs(0.0, 1e-15));
    CHECK_THAT(B(t), WithinAbs(std::sin(t), 1e-14));
  }
}

TEST_CASE("antiderivative differentiates back to the mean-free part") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<TrigTerm> terms{{0, U(rng), 0}};
  for (int k = 1; k <= 5; ++k) terms.push_back({k, U(rng), U(rng)});
  auto f = trig(terms);
  auto d = antiderivative_centered(f).derivative();
  for (int k = 0; k < 50; ++k) {
    double t = 0.1 * k;
    CHECK_THAT(d(t), WithinAbs(f(t) - average(f), 1e-13));
  }
}

TEST_CASE("sign profiles") {
  auto s = sign_profile(trig({{1, 0, 1}}));
  CHECK(s.cls == SignClass::ChangesSign);
  REQUIRE(s.witnesses.size() == 2);
  for (const auto& w : s.witnesses) {
    if (w.value > 0)
      CHECK_THAT(w.t, WithinAbs(kPi / 2, 0.05));
    else
      CHECK_THAT(w.t, WithinAbs(3 * kPi / 2, 0.05));
  }
  CHECK(sign_profile(trig({{0, 1, 0}, {1, 1, 0}})).cls == SignClass::NonNegativeNotZero);
  CHECK(sign_profile(trig({{0, -1, 0}, {1, 1, 0}})).cls == SignClass::NonPositiveNotZero);
  CHECK(sign_profile(PeriodicFunction::zero()).cls == SignClass::IdenticallyZero);
}

TEST_CASE("sign class flips with the function") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<TrigTerm> terms{{0, 2 * U(rng), 0}};
    for (int k = 1; k <= 3; ++k) terms.push_back({k, U(rng), U(rng)});
    auto f = trig(terms);
    auto a = sign_profile(f).cls;
    auto b = sign_profile(-f).cls;
    if (a == SignClass::NonNegativeNotZero) CHECK(b == SignClass::NonPositiveNotZero);
    if (a == SignClass::NonPositiveNotZero) CHECK(b == SignClass::NonNegativeNotZero);
    if (a == SignClass::ChangesSign) CHECK(b == SignClass::ChangesSign);
  }
}

TEST_CASE("running integral extrema") {
  auto c = running_extremum(trig({{1, 1, 0}}), Extremum::Max);
  CHECK_THAT(c.t_star, WithinAbs(kPi / 2, 1e-6));
  CHECK_THAT(c.value, WithinAbs(1.0, 1e-9));
  auto m = running_extremum(trig({{1, 1, 0}}), Extremum::Min);
  CHECK_THAT(m.t_star, WithinAbs(3 * kPi / 2, 1e-6));
  CHECK_THAT(m.value, WithinAbs(-1.0, 1e-9));
  auto s = running_extremum(trig({{1, 0, 1}}), Extremum::Max);
  CHECK_THAT(s.t_star, WithinAbs(kPi, 1e-6));
  CHECK_THAT(s.value, WithinAbs(2.0, 1e-9));
}

TEST_CASE("Gevrey bumps") {
  auto b = make_bump(1, 2, 2.0);
  CHECK_THAT(b(1.5), WithinAbs(1.0, 1e-12));
  CHECK(b(0.5) == 0.0);
  CHECK(b(2.5) == 0.0);
  CHECK(b(1.2) < 1.0);
  auto u = make_bump(1, 2, 2.0, BumpNormalization::UnitIntegral);
  CHECK_THAT(trapezoid([&](double t) { return u(t); }, 1 << 15), WithinAbs(1.0, 1e-8));
  auto p = make_bump(1, 4, 2.0, BumpNormalization::UnitSup, std::make_pair(2.0, 3.0));
  for (double t = 2.0; t <= 3.0; t += 0.05) CHECK_THAT(p(t), WithinAbs(1.0, 1e-14));
  CHECK(p(1.0) == 0.0);
  CHECK(p(1.5) > 0.0);
  CHECK_THROWS_AS(make_bump(2, 1, 2.0), InputError);
}

TEST_CASE("periodic bump wraps around zero") {
  auto b = make_periodic_bump(-0.5, 0.5, 2.0);
  CHECK_THAT(b(0.0), WithinAbs(1.0, 1e-12));
  CHECK_THAT(b(kTwoPi), WithinAbs(1.0, 1e-12));
  CHECK(b(kPi) == 0.0);
}

TEST_CASE("Gevrey decay fits") {
  std::map<long, cplx> e1, e2, flat;
  for (long t = -60; t <= 60; ++t) {
    e1[t] = std::exp(-std::abs(double(t)));
    e2[t] = std::exp(-std::sqrt(std::abs(double(t))));
    flat[t] = 1.0;
  }
  auto f1 = fit_gevrey_decay(e1);
  CHECK(f1.cls == GevreyClass::GevreyFunction);
  CHECK_THAT(f1.sigma_hat, WithinRel(1.0, 0.10));
  CHECK_THAT(f1.eps_hat, WithinRel(1.0, 0.10));
  auto f2 = fit_gevrey_decay(e2);
  CHECK(f2.cls == GevreyClass::GevreyFunction);
  CHECK_THAT(f2.sigma_hat, WithinRel(2.0, 0.15));
  CHECK(fit_gevrey_decay(flat).cls == GevreyClass::UltradistributionOnly);
}

TEST_CASE("series from samples round-trips") {
  std::vector<cplx> c{cplx(0.1, 0.2), cplx(-1, 0.5), cplx(2, 0), cplx(0.3, -0.3), cplx(0, 1)};
  TrigSeries s(c);
  auto back = TrigSeries::from_samples(s.sample(16));
  for (long k = -2; k <= 2; ++k) CHECK(std::abs(back.coeff(k) - s.coeff(k)) < 1e-14);
  auto prod = convolve(s, s);
  for (double t : {0.0, 0.7, 2.1}) CHECK(std::abs(prod(t) - s(t) * s(t)) < 1e-12);
}

TEST_CASE("rational constants keep their exact average") {
  auto f = PeriodicFunction::constant(parse_rational("1/3"));
  REQUIRE(f.exact_average());
  CHECK(*f.exact_average() == Rational(1, 3));
  CHECK(!PeriodicFunction::constant(0.1).exact_average());
}
