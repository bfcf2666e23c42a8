// SPDX-License-Identifier: Apache-2.0
#include "hypo/numeric.hpp"
#include "hypo/spectrum.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace hypo;
using Catch::Matchers::WithinAbs;

TEST_CASE("oscillator eigenvalue of a multi-index") {
  CHECK(ho_eigenvalue({0}) == 1);
  CHECK(ho_eigenvalue({5}) == 11);
  CHECK(ho_eigenvalue({1, 2}) == 8);
}

TEST_CASE("oscillator enumeration") {
  CHECK(EigenvalueProvider::harmonic_oscillator(1).enumerate(4) == std::vector<double>{1, 3, 5, 7});
  CHECK(EigenvalueProvider::harmonic_oscillator(2).enumerate(4) == std::vector<double>{2, 4, 4, 6});
}

TEST_CASE("oscillator enumeration matches brute force in two and three dimensions") {
  for (int n : {2, 3}) {
    std::vector<double> brute;
    const int K = 24;
    std::vector<int> k(static_cast<std::size_t>(n), 0);
    while (true) {
      brute.push_back(static_cast<double>(ho_eigenvalue(k)));
      int d = 0;
      while (d < n && ++k[static_cast<std::size_t>(d)] > K) k[static_cast<std::size_t>(d++)] = 0;
      if (d == n) break;
    }
    std::sort(brute.begin(), brute.end());
    const std::size_t J = 200;
    auto got = EigenvalueProvider::harmonic_oscillator(n).enumerate(J);
    REQUIRE(got.size() == J);
    for (std::size_t j = 0; j < J; ++j) CHECK(got[j] == brute[j]);
  }
}

TEST_CASE("oscillator eigenvalues are positive, odd-sum and unbounded") {
  for (int n : {1, 2, 3}) {
    auto op = EigenvalueProvider::harmonic_oscillator(n);
    auto lam = op.enumerate(300);
    auto idx = ho_multi_indices(n, 300);
    for (std::size_t j = 0; j < lam.size(); ++j) {
      CHECK(lam[j] > 0);
      CHECK(lam[j] == static_cast<double>(ho_eigenvalue(idx[j])));
      CHECK(static_cast<long long>(lam[j]) % 2 == n % 2);
      if (j) CHECK(lam[j] >= lam[j - 1]);
    }
    CHECK(lam.back() > lam.front());
  }
}

TEST_CASE("custom table is returned as given") {
  OperatorMeta meta;
  auto op = EigenvalueProvider::table({1.5, -2.5, 9.0}, meta);
  CHECK(op.enumerate(3) == std::vector<double>{1.5, -2.5, 9.0});
  CHECK(op.max_index() == 3);
  CHECK_THROWS_AS(op.enumerate(4), InputError);
}

TEST_CASE("Weyl exponent fits") {
  CHECK_THAT(fit_weyl_exponent(EigenvalueProvider::harmonic_oscillator(1), 256).exponent, WithinAbs(1.0, 0.02));
  CHECK_THAT(fit_weyl_exponent(EigenvalueProvider::harmonic_oscillator(2), 1024).exponent, WithinAbs(0.5, 0.05));
  std::vector<double> sq;
  for (int j = 1; j <= 128; ++j) sq.push_back(double(j) * j);
  OperatorMeta meta;
  meta.M = 4;
  CHECK_THAT(fit_weyl_exponent(EigenvalueProvider::table(sq, meta), 128).exponent, WithinAbs(2.0, 0.02));
}

TEST_CASE("operator metadata is validated") {
  OperatorMeta meta;
  meta.M = 1;
  CHECK_THROWS_AS(EigenvalueProvider::table({1, 2}, meta), InputError);
  meta.M = 2;
  meta.n = 0;
  CHECK_THROWS_AS(EigenvalueProvider::table({1, 2}, meta), InputError);
  CHECK_THROWS_AS(EigenvalueProvider::harmonic_oscillator(0), InputError);
}

TEST_CASE("exact enumeration for integer spectra") {
  auto ex = EigenvalueProvider::harmonic_oscillator(1).enumerate_exact(5);
  REQUIRE(ex);
  CHECK((*ex)[4] == Rational(9));
  OperatorMeta meta;
  auto de = EigenvalueProvider::double_exponential(4, meta).enumerate_exact(4);
  REQUIRE(de);
  CHECK((*de)[3] == Rational(65536));
}

TEST_CASE("eigenvalue CSV loading") {
  auto dir = std::filesystem::temp_directory_path();
  auto good = (dir / "hypo_lambda_good.csv").string();
  auto bad = (dir / "hypo_lambda_bad.csv").string();
  std::ofstream(good) << "lambda\n1\n2.5\n4e1\n";
  std::ofstream(bad) << "lambda\n1\nabc\n";
  CHECK(load_eigenvalue_csv(good) == std::vector<double>{1, 2.5, 40});
  CHECK_THROWS_AS(load_eigenvalue_csv(bad), InputError);
  CHECK_THROWS_AS(load_eigenvalue_csv((dir / "hypo_missing.csv").string()), InputError);
  std::remove(good.c_str());
  std::remove(bad.c_str());
}
