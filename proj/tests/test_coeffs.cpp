// SPDX-License-Identifier: Apache-2.0
#include "hypo/coeffs.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

using namespace hypo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// a(tau, j) = exp(-eps (|tau|^{1/sigma} + j^{1/(2 n mu)}))
CoefficientField envelope(int m, long T, std::size_t J, double eps, double sigma, FieldContext ctx) {
  CoefficientField f(m, ctx);
  std::vector<long> tau(static_cast<std::size_t>(m), -T);
  while (true) {
    long norm = 0;
    for (long t : tau) norm = std::max(norm, std::labs(t));
    for (std::size_t j = 1; j <= J; ++j)
      f.set(tau, j, std::exp(-eps * (std::pow(double(norm), 1.0 / sigma) + ctx.mode_weight(j))));
    int d = 0;
    while (d < m && ++tau[static_cast<std::size_t>(d)] > T) tau[static_cast<std::size_t>(d++)] = -T;
    if (d == m) break;
  }
  return f;
}

}  // namespace

TEST_CASE("field entries and blocks") {
  CoefficientField f(2);
  f.set({3, -1}, 5, 2.0);
  f.add({3, -1}, 5, cplx(0, 1));
  CHECK(f.get({3, -1}, 5) == cplx(2, 1));
  CHECK(f.get({0, 0}, 5) == cplx(0));
  CHECK(f.get({3, -1}, 4) == cplx(0));
  CHECK(f.nonzero_count() == 1);
  CHECK(f.modes() == std::vector<std::size_t>{5});
  CHECK_THROWS_AS(f.set({1}, 1, 1.0), InputError);
  CHECK_THROWS_AS(f.set({0, 0}, 0, 1.0), InputError);
  CoefficientField small(1, {}, 4, 3);
  CHECK_THROWS_AS(small.set({5}, 1, 1.0), InputError);
  CHECK_THROWS_AS(small.set({0}, 4, 1.0), InputError);
}

TEST_CASE("exact envelope is recovered") {
  FieldContext ctx{0.5, 1};
  auto f = envelope(1, 64, 256, 1.0, 2.0, ctx);
  auto p = classify_field(f, default_sigma_grid(2, 0.5));
  CHECK(p.cls == DecayClass::FmuMember);
  CHECK_THAT(p.eps_hat, WithinRel(1.0, 0.10));
  CHECK_THAT(p.sigma_used, WithinRel(2.0, 0.15));
}

TEST_CASE("non-decaying diagonal sequence is dual only") {
  CoefficientField f(1, {1.0, 1});
  for (long k = 1; k <= 64; ++k) f.set({-(2 * k - 1)}, static_cast<std::size_t>(k), 1.0);
  CHECK(classify_field(f, {}).cls == DecayClass::DualOnly);
}

TEST_CASE("finite support is a member") {
  CoefficientField f(1);
  f.set({0}, 1, 1.0);
  auto p = classify_field(f, {});
  CHECK(p.cls == DecayClass::FmuMember);
  CHECK(p.finite_support);
  CHECK_THROWS_AS(classify_field(CoefficientField(1), {}), InputError);
}

TEST_CASE("growing the truncation keeps membership") {
  FieldContext ctx{1.0, 1};
  for (double sigma : {1.0, 2.0}) {
    for (long T : {16L, 32L, 64L})
      for (std::size_t J : {64u, 128u, 256u}) {
        auto p = classify_field(envelope(1, T, J, 0.5, sigma, ctx), default_sigma_grid(2, 1.0));
        CHECK(p.cls == DecayClass::FmuMember);
      }
  }
}

TEST_CASE("partial Fourier slices") {
  CoefficientField f(2);
  f.set({3, -1}, 5, 2.0);
  auto pf = to_partial(f, 1);
  REQUIRE(pf.slices.size() == 1);
  const auto& [key, block] = *pf.slices.begin();
  CHECK(key.first == 5);
  CHECK(key.second == std::vector<long>{-1});
  CHECK(block.at({3}) == cplx(2));
  auto s = to_series(block);
  CHECK(std::abs(s(0.4) - 2.0 * std::exp(cplx(0, 1.2))) < 1e-14);
  CHECK(to_partial(CoefficientField(2), 1).slices.empty());
}

TEST_CASE("partial transform round-trips exactly") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-1, 1);
  std::uniform_int_distribution<long> T(-6, 6);
  CoefficientField f(3);
  for (int k = 0; k < 200; ++k) f.set({T(rng), T(rng), T(rng)}, 1 + std::size_t(k % 9), cplx(U(rng), U(rng)));
  for (int p = 0; p <= 3; ++p) CHECK(from_partial(to_partial(f, p)) == f);
}

TEST_CASE("partial decay check") {
  CoefficientField dec(2), flat(2);
  for (long eta = -10; eta <= 10; ++eta)
    for (std::size_t j = 1; j <= 40; ++j) {
      dec.set({0, eta}, j, std::exp(-(std::labs(eta) + double(j))));
      flat.set({0, eta}, j, std::exp(-double(std::labs(eta))));
    }
  CHECK(check_partial_decay(to_partial(dec, 1), {0, 1, 2}).pass);
  CHECK_FALSE(check_partial_decay(to_partial(flat, 1), {0, 1, 2}).pass);
  CHECK(check_partial_decay(to_partial(CoefficientField(2), 1), {0, 1}).pass);
}

TEST_CASE("field CSV round-trip") {
  CoefficientField f(2);
  f.set({1, -2}, 3, cplx(0.1, -1.0 / 3.0));
  f.set({0, 0}, 1, cplx(1e-300, 5));
  std::ostringstream os;
  write_field_csv(os, f);
  CHECK(os.str().rfind("tau_1,tau_2,j,re,im\n", 0) == 0);
  std::istringstream is(os.str());
  CHECK(read_field_csv(is) == f);
  std::istringstream bad("tau_1,j,re,im\n1,x,0,0\n");
  CHECK_THROWS_AS(read_field_csv(bad), InputError);
}

TEST_CASE("block sup and oversampling") {
  ModeBlock b({-1}, {3});
  b.data = {cplx(1), cplx(0), cplx(1)};
  CHECK_THAT(block_sup(b), WithinAbs(2.0, 1e-12));
  auto d = differentiate_axis(b, 0);
  CHECK(d.at({1}) == cplx(0, 1));
  CHECK(d.at({-1}) == cplx(0, -1));
}
