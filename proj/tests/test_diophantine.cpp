// SPDX-License-Identifier: Apache-2.0
#include "hypo/diophantine.hpp"
#include "hypo/numeric.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace hypo;
using Catch::Matchers::WithinAbs;

namespace {

DiophantineQuery query(const std::string& alpha, double sigma, std::size_t L, double mu = 1.0) {
  DiophantineQuery q;
  Rational a = parse_rational(alpha);
  q.alpha = {to_double(a)};
  q.alpha_exact = std::vector<Rational>{a};
  q.sigma = sigma;
  q.mu = mu;
  q.L_max = L;
  return q;
}

Rational liouville_alpha(int K) {
  Rational a = 0;
  for (int k = 1; k <= K; ++k) a += Rational(1, BigInt(1) << (1 << k));
  return a;
}

}  // namespace

TEST_CASE("half-integer multiples of odd numbers keep gap one half") {
  auto HO = EigenvalueProvider::harmonic_oscillator(1);
  for (double sigma : {1.0, 2.0, 4.0}) {
    auto rep = check_condition(HO, query("1/2", sigma, 1000));
    CHECK(rep.verdict == DiophantineVerdict::HoldsUpToBounds);
    CHECK(rep.min_gap == 0.5);
    CHECK(rep.zero_gaps == 0);
    CHECK(rep.exact);
  }
}

TEST_CASE("integer alpha has only zero gaps") {
  auto rep = check_condition(EigenvalueProvider::harmonic_oscillator(1), query("1", 2.0, 500));
  CHECK(rep.verdict == DiophantineVerdict::HoldsUpToBounds);
  CHECK(rep.zero_gaps == 500);
  CHECK(rep.witnesses.empty());
}

TEST_CASE("Liouville-type alpha against a doubly exponential spectrum fails") {
  OperatorMeta meta;
  auto op = EigenvalueProvider::double_exponential(5, meta);
  DiophantineQuery q;
  Rational a = liouville_alpha(6);
  q.alpha = {to_double(a)};
  q.alpha_exact = std::vector<Rational>{a};
  q.sigma = 2.0;
  q.mu = 0.5;
  q.L_max = 5;
  auto rep = check_condition(op, q);
  REQUIRE(rep.verdict == DiophantineVerdict::FailsWithWitness);
  REQUIRE_FALSE(rep.witnesses.empty());
  auto lam = op.enumerate_exact(5);
  for (const auto& w : rep.witnesses) {
    CHECK(w.gap < w.budget);
    // the gap is lambda times the tail of the series, computed exactly
    Rational x = a * (*lam)[w.ell - 1];
    Rational d = dist_to_integer(x);
    CHECK(std::abs(to_double(d) - w.gap) <= 1e-12 * std::max(1.0, w.gap));
    CHECK(w.gap < std::exp(-double(w.ell)));
  }
}

TEST_CASE("a short spectrum with gaps bounded below holds") {
  OperatorMeta meta;
  auto op = EigenvalueProvider::table({1, 3, 5, 7, 9, 11, 13, 15}, meta);
  for (double sigma : {1.0, 2.0, 4.0, 8.0})
    CHECK(check_condition(op, query("1/2", sigma, 8)).verdict == DiophantineVerdict::HoldsUpToBounds);
}

TEST_CASE("torus distance scan") {
  auto HO = EigenvalueProvider::harmonic_oscillator(1);
  auto half = torus_distance_scan({cplx(0.5)}, std::vector<Rational>{Rational(1, 2)}, HO, 200, 1.0);
  CHECK(half.verdict == DiophantineVerdict::HoldsUpToBounds);
  for (double m : half.m) CHECK_THAT(m, WithinAbs(2.0, 1e-12));
  auto one = torus_distance_scan({cplx(1.0)}, std::vector<Rational>{Rational(1)}, HO, 200, 1.0);
  CHECK(one.all_zero);
  CHECK(one.zero_points == 200);
  auto r2 = torus_distance_scan({cplx(std::sqrt(2.0))}, std::nullopt, HO, 10000, 0.5);
  CHECK(r2.verdict == DiophantineVerdict::HoldsUpToBounds);
  CHECK(r2.delta_tail < 1e-2);
}

TEST_CASE("continued fraction oracle") {
  auto c = continued_fraction_oracle(std::sqrt(2.0), 100);
  std::vector<std::pair<long long, long long>> want{{1, 1}, {3, 2}, {7, 5}, {17, 12}, {41, 29}, {99, 70}};
  REQUIRE(c.size() == want.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(c[i].p == want[i].first);
    CHECK(c[i].q == want[i].second);
  }
  auto t = continued_fraction_oracle(Rational(1, 3), 1000);
  REQUIRE_FALSE(t.empty());
  CHECK(t.back().p == 1);
  CHECK(t.back().q == 3);
  CHECK(t.back().error == 0);
  auto g = continued_fraction_oracle((1 + std::sqrt(5.0)) / 2, 50);
  long long f0 = 1, f1 = 1;
  for (const auto& x : g) {
    CHECK(x.p == f1);
    CHECK(x.q == f0);
    long long f2 = f0 + f1;
    f0 = f1;
    f1 = f2;
  }
}

TEST_CASE("gap lower bound implies holds and the two scans agree") {
  auto HO = EigenvalueProvider::harmonic_oscillator(1);
  for (const char* a : {"1/2", "1/3", "2/5", "3/7", "1/4"}) {
    auto q = query(a, 2.0, 2000);
    auto rep = check_condition(HO, q);
    auto tor = torus_distance_scan({cplx(q.alpha[0])}, q.alpha_exact, HO, 2000, q.mu);
    if (rep.zero_gaps == 0 && rep.min_gap > 0.1) CHECK(rep.verdict == DiophantineVerdict::HoldsUpToBounds);
    CHECK(verdicts_agree(tor, rep));
  }
}

TEST_CASE("invalid queries") {
  auto HO = EigenvalueProvider::harmonic_oscillator(1);
  auto q = query("1/2", 0.5, 10);
  CHECK_THROWS_AS(check_condition(HO, q), InputError);
  CHECK_THROWS_AS(continued_fraction_oracle(1.5, 0), InputError);
}
