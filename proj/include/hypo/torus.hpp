// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hypo/numeric.hpp"
#include "hypo/rational.hpp"

#include <map>
#include <optional>
#include <vector>

namespace hypo {

// Complex trigonometric polynomial sum_{|tau| <= K} c_tau e^{i tau t}.
class TrigSeries {
 public:
  TrigSeries() : c_(1, cplx(0)) {}
  explicit TrigSeries(std::vector<cplx> centered);  // length 2K+1

  static TrigSeries from_samples(const std::vector<cplx>& samples, double drop_rel = 0.0);
  static TrigSeries constant(cplx v) { return TrigSeries(std::vector<cplx>{v}); }

  int degree() const { return static_cast<int>(c_.size() / 2); }
  cplx coeff(long tau) const {
    long K = degree();
    return (tau < -K || tau > K) ? cplx(0) : c_[static_cast<std::size_t>(tau + K)];
  }
  const std::vector<cplx>& centered() const { return c_; }

  cplx operator()(double t) const;
  std::vector<cplx> sample(std::size_t N) const;
  TrigSeries derivative(int order = 1) const;
  TrigSeries conj_reflect() const;  // t -> conj(f(t))
  TrigSeries trimmed(double abs_tol) const;
  double l1_norm() const;
  double max_abs_coeff() const;

  TrigSeries& operator+=(const TrigSeries& o);
  TrigSeries& operator*=(cplx s);
  friend TrigSeries operator+(TrigSeries a, const TrigSeries& b) { return a += b; }
  friend TrigSeries operator*(TrigSeries a, cplx s) { return a *= s; }
  friend TrigSeries operator*(cplx s, TrigSeries a) { return a *= s; }

 private:
  std::vector<cplx> c_;
};

// Exact product of trig polynomials.
TrigSeries convolve(const TrigSeries& a, const TrigSeries& b);

struct TrigTerm {
  int freq = 0;
  double cos_amp = 0;
  double sin_amp = 0;
};

// Real-valued 2 pi-periodic coefficient function held as a trig polynomial.
class PeriodicFunction {
 public:
  PeriodicFunction() = default;
  static PeriodicFunction zero() { return {}; }
  static PeriodicFunction constant(double v);
  static PeriodicFunction constant(const Rational& v);
  // f(t) = sum c cos(k t) + s sin(k t); a term with freq 0 adds c.
  static PeriodicFunction from_terms(const std::vector<TrigTerm>& terms);
  static PeriodicFunction from_terms(const Rational& constant_term, const std::vector<TrigTerm>& terms);
  // Projects real samples on the uniform grid; K < N/2.
  static PeriodicFunction from_samples(const std::vector<double>& samples, int K);
  static PeriodicFunction from_series(const TrigSeries& s);  // enforces symmetry

  int degree() const { return series_.degree(); }
  cplx coeff(long tau) const { return series_.coeff(tau); }
  const TrigSeries& series() const { return series_; }
  double operator()(double t) const { return series_(t).real(); }
  std::vector<double> sample(std::size_t N) const;
  PeriodicFunction derivative() const;
  bool is_constant() const;

  // Exact zero-mode value when it was entered exactly (rational literal or
  // dyadic double); nullopt otherwise.
  std::optional<Rational> exact_average() const;

  PeriodicFunction operator-() const;
  friend PeriodicFunction operator+(const PeriodicFunction& a, const PeriodicFunction& b);
  friend PeriodicFunction operator*(double s, const PeriodicFunction& a);

 private:
  TrigSeries series_;
  std::optional<Rational> exact_mean_ = Rational(0);
};

double average(const PeriodicFunction& f);
PeriodicFunction antiderivative_centered(const PeriodicFunction& f);

// B(t) = int_0^t f, closed form from the coefficients (not periodic if the mean is nonzero).
double running_integral(const PeriodicFunction& f, double t);
cplx running_integral(const TrigSeries& f, double t);

enum class SignClass { IdenticallyZero, NonNegativeNotZero, NonPositiveNotZero, ChangesSign };

struct SignSample {
  double t = 0;
  double value = 0;
};

struct SignProfile {
  SignClass cls = SignClass::IdenticallyZero;
  std::vector<SignSample> witnesses;  // at most two
};

struct SignOptions {
  double zero_tol = kZeroTol;
  double sign_tol = kSignTol;
  std::size_t grid = 512;
  std::size_t max_grid = std::size_t(1) << 20;
};

SignProfile sign_profile(const PeriodicFunction& f, const SignOptions& opt = {});
const char* to_string(SignClass c);

enum class Extremum { Max, Min };

struct RunningIntegralExtremum {
  double t_star = 0;
  double value = 0;
};

RunningIntegralExtremum running_extremum(const PeriodicFunction& b, Extremum which, std::size_t grid = 4096);

enum class BumpNormalization { UnitSup, UnitIntegral };

// Flat Gevrey cutoff exp(-[(t-a)(b-t)]^{-1/(2(sigma-1))}), or with a plateau
// [c, d] glued from two Gevrey ramps. Evaluated 2 pi-periodically with
// support [a, b], b - a < 2 pi.
class GevreyBump {
 public:
  double operator()(double t) const;
  double derivative(double t) const;
  double lo() const { return a_; }
  double hi() const { return b_; }
  double order() const { return sigma_; }
  std::optional<std::pair<double, double>> plateau() const { return plateau_; }
  double scale() const { return scale_; }
  double integral(std::size_t N = 1 << 14) const;

  friend GevreyBump make_bump(double a, double b, double sigma, BumpNormalization norm,
                              std::optional<std::pair<double, double>> plateau);
  friend GevreyBump make_periodic_bump(double a, double b, double sigma,
                                       std::optional<std::pair<double, double>> plateau);

 private:
  double local(double t) const;  // offset into [0, 2 pi) from a
  double raw(double x) const;
  double raw_derivative(double x) const;

  double a_ = 0, b_ = 0, sigma_ = 2;
  std::optional<std::pair<double, double>> plateau_;
  double scale_ = 1;
};

// Support must lie strictly inside (0, 2 pi).
GevreyBump make_bump(double a, double b, double sigma, BumpNormalization norm = BumpNormalization::UnitSup,
                     std::optional<std::pair<double, double>> plateau = std::nullopt);
// Unit-sup bump whose support may straddle 0; needs b - a < 2 pi.
GevreyBump make_periodic_bump(double a, double b, double sigma,
                              std::optional<std::pair<double, double>> plateau = std::nullopt);

enum class GevreyClass { GevreyFunction, UltradistributionOnly };

struct GevreyFit {
  double eps_hat = 0;
  double sigma_hat = 0;
  double C_hat = 0;
  double residual = 0;
  GevreyClass cls = GevreyClass::UltradistributionOnly;
};

GevreyFit fit_gevrey_decay(const std::map<long, cplx>& coeffs, const std::vector<double>& sigma_grid = {});

// Uniform-grid trapezoid rule over one period.
double trapezoid(const std::function<double(double)>& f, std::size_t N = 512);

}  // namespace hypo
