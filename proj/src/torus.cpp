// SPDX-License-Identifier: Apache-2.0
#include "hypo/torus.hpp"

#include "hypo/fit.hpp"

#include <algorithm>
#include <cmath>

namespace hypo {

// ---------------------------------------------------------------- TrigSeries

TrigSeries::TrigSeries(std::vector<cplx> centered) : c_(std::move(centered)) {
  if (c_.empty()) c_.assign(1, cplx(0));
  if (c_.size() % 2 == 0) throw std::invalid_argument("centered coefficient vector must have odd length");
}

TrigSeries TrigSeries::from_samples(const std::vector<cplx>& samples, double drop_rel) {
  const std::size_t N = samples.size();
  if (N < 2) return TrigSeries(std::vector<cplx>{N ? samples[0] : cplx(0)});
  std::vector<cplx> raw = samples_to_coeffs(samples);  // tau in [-N/2, N/2)
  const long half = static_cast<long>(N / 2);
  // the Nyquist term is dropped so the result stays symmetric in tau
  const long K = (N % 2 == 0) ? half - 1 : half;
  std::vector<cplx> c(static_cast<std::size_t>(2 * K + 1));
  for (long tau = -K; tau <= K; ++tau) c[static_cast<std::size_t>(tau + K)] = raw[static_cast<std::size_t>(tau + half)];
  TrigSeries s(std::move(c));
  if (drop_rel > 0) s = s.trimmed(drop_rel * s.max_abs_coeff());
  return s;
}

cplx TrigSeries::operator()(double t) const {
  const long K = degree();
  cplx acc = c_[static_cast<std::size_t>(K)];
  for (long tau = 1; tau <= K; ++tau) {
    cplx e = std::polar(1.0, static_cast<double>(tau) * t);
    acc += c_[static_cast<std::size_t>(K + tau)] * e + c_[static_cast<std::size_t>(K - tau)] * std::conj(e);
  }
  return acc;
}

std::vector<cplx> TrigSeries::sample(std::size_t N) const {
  const long K = degree();
  std::vector<cplx> out(N);
  if (N > static_cast<std::size_t>(2 * K)) {
    for (long tau = -K; tau <= K; ++tau) {
      long idx = ((tau % static_cast<long>(N)) + static_cast<long>(N)) % static_cast<long>(N);
      out[static_cast<std::size_t>(idx)] += c_[static_cast<std::size_t>(tau + K)];
    }
    fft_inverse(out);
    return out;
  }
  for (std::size_t k = 0; k < N; ++k) out[k] = (*this)(kTwoPi * static_cast<double>(k) / static_cast<double>(N));
  return out;
}

TrigSeries TrigSeries::derivative(int order) const {
  const long K = degree();
  std::vector<cplx> c(c_.size());
  for (long tau = -K; tau <= K; ++tau) {
    cplx f = std::pow(cplx(0, static_cast<double>(tau)), order);
    if (tau == 0 && order > 0) f = 0;
    c[static_cast<std::size_t>(tau + K)] = c_[static_cast<std::size_t>(tau + K)] * f;
  }
  return TrigSeries(std::move(c));
}

TrigSeries TrigSeries::conj_reflect() const {
  const long K = degree();
  std::vector<cplx> c(c_.size());
  for (long tau = -K; tau <= K; ++tau) c[static_cast<std::size_t>(tau + K)] = std::conj(c_[static_cast<std::size_t>(K - tau)]);
  return TrigSeries(std::move(c));
}

TrigSeries TrigSeries::trimmed(double abs_tol) const {
  const long K = degree();
  long keep = 0;
  for (long tau = -K; tau <= K; ++tau)
    if (std::abs(c_[static_cast<std::size_t>(tau + K)]) > abs_tol) keep = std::max(keep, std::labs(tau));
  std::vector<cplx> c(static_cast<std::size_t>(2 * keep + 1));
  for (long tau = -keep; tau <= keep; ++tau) {
    cplx v = c_[static_cast<std::size_t>(tau + K)];
    c[static_cast<std::size_t>(tau + keep)] = std::abs(v) > abs_tol ? v : cplx(0);
  }
  return TrigSeries(std::move(c));
}

double TrigSeries::l1_norm() const {
  double s = 0;
  for (const auto& v : c_) s += std::abs(v);
  return s;
}

double TrigSeries::max_abs_coeff() const {
  double m = 0;
  for (const auto& v : c_) m = std::max(m, std::abs(v));
  return m;
}

TrigSeries& TrigSeries::operator+=(const TrigSeries& o) {
  const long K = std::max(degree(), o.degree());
  std::vector<cplx> c(static_cast<std::size_t>(2 * K + 1));
  for (long tau = -K; tau <= K; ++tau) c[static_cast<std::size_t>(tau + K)] = coeff(tau) + o.coeff(tau);
  c_ = std::move(c);
  return *this;
}

TrigSeries& TrigSeries::operator*=(cplx s) {
  for (auto& v : c_) v *= s;
  return *this;
}

TrigSeries convolve(const TrigSeries& a, const TrigSeries& b) {
  const long Ka = a.degree(), Kb = b.degree();
  const long K = Ka + Kb;
  std::vector<cplx> c(static_cast<std::size_t>(2 * K + 1));
  const auto& ca = a.centered();
  const auto& cb = b.centered();
  for (long i = -Ka; i <= Ka; ++i) {
    cplx x = ca[static_cast<std::size_t>(i + Ka)];
    if (x == cplx(0)) continue;
    for (long k = -Kb; k <= Kb; ++k) c[static_cast<std::size_t>(i + k + K)] += x * cb[static_cast<std::size_t>(k + Kb)];
  }
  return TrigSeries(std::move(c));
}

// ---------------------------------------------------------- PeriodicFunction

PeriodicFunction PeriodicFunction::constant(double v) {
  PeriodicFunction f;
  f.series_ = TrigSeries::constant(v);
  f.exact_mean_ = exact_dyadic(v);
  return f;
}

PeriodicFunction PeriodicFunction::constant(const Rational& v) {
  PeriodicFunction f;
  f.series_ = TrigSeries::constant(to_double(v));
  f.exact_mean_ = v;
  return f;
}

PeriodicFunction PeriodicFunction::from_terms(const std::vector<TrigTerm>& terms) {
  return from_terms(Rational(0), terms);
}

PeriodicFunction PeriodicFunction::from_terms(const Rational& constant_term, const std::vector<TrigTerm>& terms) {
  long K = 0;
  for (const auto& t : terms) K = std::max(K, std::labs(static_cast<long>(t.freq)));
  std::vector<cplx> c(static_cast<std::size_t>(2 * K + 1));
  std::optional<Rational> mean = constant_term;
  double c0 = to_double(constant_term);
  for (const auto& t : terms) {
    if (!std::isfinite(t.cos_amp) || !std::isfinite(t.sin_amp)) throw InputError("non-finite trig amplitude");
    long k = std::labs(static_cast<long>(t.freq));
    double s = t.freq < 0 ? -t.sin_amp : t.sin_amp;
    if (k == 0) {
      c0 += t.cos_amp;
      auto e = exact_dyadic(t.cos_amp);
      if (mean && e)
        *mean += *e;
      else
        mean.reset();
      continue;
    }
    c[static_cast<std::size_t>(K + k)] += cplx(t.cos_amp, -s) * 0.5;
    c[static_cast<std::size_t>(K - k)] += cplx(t.cos_amp, s) * 0.5;
  }
  c[static_cast<std::size_t>(K)] = c0;
  PeriodicFunction f;
  f.series_ = TrigSeries(std::move(c));
  f.exact_mean_ = mean;
  return f;
}

PeriodicFunction PeriodicFunction::from_samples(const std::vector<double>& samples, int K) {
  if (K < 0 || 2 * static_cast<std::size_t>(K) >= samples.size())
    throw InputError("projection degree must satisfy 2K < number of samples");
  std::vector<cplx> z(samples.begin(), samples.end());
  TrigSeries full = TrigSeries::from_samples(z);
  std::vector<cplx> c(static_cast<std::size_t>(2 * K + 1));
  for (long tau = -K; tau <= K; ++tau) c[static_cast<std::size_t>(tau + K)] = full.coeff(tau);
  return from_series(TrigSeries(std::move(c)));
}

PeriodicFunction PeriodicFunction::from_series(const TrigSeries& s) {
  const long K = s.degree();
  std::vector<cplx> c(static_cast<std::size_t>(2 * K + 1));
  for (long tau = -K; tau <= K; ++tau) c[static_cast<std::size_t>(tau + K)] = 0.5 * (s.coeff(tau) + std::conj(s.coeff(-tau)));
  PeriodicFunction f;
  f.series_ = TrigSeries(std::move(c));
  f.exact_mean_ = exact_dyadic(f.series_.coeff(0).real());
  return f;
}

std::vector<double> PeriodicFunction::sample(std::size_t N) const {
  auto z = series_.sample(N);
  std::vector<double> out(N);
  for (std::size_t i = 0; i < N; ++i) out[i] = z[i].real();
  return out;
}

PeriodicFunction PeriodicFunction::derivative() const {
  PeriodicFunction f;
  f.series_ = series_.derivative(1);
  f.exact_mean_ = Rational(0);
  return f;
}

bool PeriodicFunction::is_constant() const {
  for (long tau = 1; tau <= degree(); ++tau)
    if (std::abs(series_.coeff(tau)) > kZeroTol) return false;
  return true;
}

std::optional<Rational> PeriodicFunction::exact_average() const { return exact_mean_; }

PeriodicFunction PeriodicFunction::operator-() const {
  PeriodicFunction f;
  f.series_ = series_ * cplx(-1);
  if (exact_mean_) f.exact_mean_ = -*exact_mean_;
  else f.exact_mean_.reset();
  return f;
}

PeriodicFunction operator+(const PeriodicFunction& a, const PeriodicFunction& b) {
  PeriodicFunction f;
  f.series_ = a.series_ + b.series_;
  if (a.exact_mean_ && b.exact_mean_) f.exact_mean_ = *a.exact_mean_ + *b.exact_mean_;
  else f.exact_mean_.reset();
  return f;
}

PeriodicFunction operator*(double s, const PeriodicFunction& a) {
  PeriodicFunction f;
  f.series_ = a.series_ * cplx(s);
  auto es = exact_dyadic(s);
  if (es && a.exact_mean_) f.exact_mean_ = *es * *a.exact_mean_;
  else f.exact_mean_.reset();
  return f;
}

double average(const PeriodicFunction& f) { return f.coeff(0).real(); }

PeriodicFunction antiderivative_centered(const PeriodicFunction& f) {
  const long K = f.degree();
  std::vector<cplx> c(static_cast<std::size_t>(2 * K + 1));
  cplx at_zero = 0;
  for (long tau = -K; tau <= K; ++tau) {
    if (tau == 0) continue;
    cplx v = f.coeff(tau) / cplx(0, static_cast<double>(tau));
    c[static_cast<std::size_t>(tau + K)] = v;
    at_zero += v;
  }
  c[static_cast<std::size_t>(K)] = -at_zero;
  return PeriodicFunction::from_series(TrigSeries(std::move(c)));
}

cplx running_integral(const TrigSeries& f, double t) {
  const long K = f.degree();
  cplx acc = f.coeff(0) * t;
  for (long tau = -K; tau <= K; ++tau) {
    if (tau == 0) continue;
    // (e^{i tau t} - 1) / (i tau) without cancellation for small tau t
    double x = static_cast<double>(tau) * t;
    cplx e = cplx(std::sin(x), 2.0 * std::sin(0.5 * x) * std::sin(0.5 * x)) / static_cast<double>(tau);
    acc += f.coeff(tau) * e;
  }
  return acc;
}

double running_integral(const PeriodicFunction& f, double t) { return running_integral(f.series(), t).real(); }

// ----------------------------------------------------------------- sign

namespace {

template <class F>
double golden_max(F f, double lo, double hi, int iters = 80) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && hi - lo > 1e-13; ++i) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = f(d);
    }
  }
  return fc > fd ? c : d;
}

}  // namespace

const char* to_string(SignClass c) {
  switch (c) {
    case SignClass::IdenticallyZero: return "IdenticallyZero";
    case SignClass::NonNegativeNotZero: return "NonNegativeNotZero";
    case SignClass::NonPositiveNotZero: return "NonPositiveNotZero";
    case SignClass::ChangesSign: return "ChangesSign";
  }
  return "?";
}

SignProfile sign_profile(const PeriodicFunction& f, const SignOptions& opt) {
  SignProfile out;
  bool zero = true;
  for (long tau = -f.degree(); tau <= f.degree(); ++tau)
    if (std::abs(f.coeff(tau)) > opt.zero_tol) zero = false;
  if (zero) return out;

  std::size_t N = std::max<std::size_t>(opt.grid, 4 * static_cast<std::size_t>(f.degree()) + 8);
  std::vector<double> v;
  double h = 0;
  while (true) {
    v = f.sample(N);
    double big = 0;
    for (double x : v) big = std::max(big, std::abs(x));
    h = kTwoPi / static_cast<double>(N);
    if (big > 10 * opt.sign_tol || N >= opt.max_grid) break;
    N *= 2;
  }

  // refine every discrete local extremum, so narrow dips between nodes are seen
  SignSample hi{0, -1e300}, lo{0, 1e300};
  for (std::size_t i = 0; i < N; ++i) {
    double prev = v[(i + N - 1) % N], next = v[(i + 1) % N];
    double t = h * static_cast<double>(i);
    if (v[i] >= prev && v[i] >= next) {
      double ts = golden_max([&](double s) { return f(s); }, t - h, t + h);
      double fs = std::max(f(ts), v[i]);
      if (fs > hi.value) hi = {f(ts) >= v[i] ? ts : t, fs};
    }
    if (v[i] <= prev && v[i] <= next) {
      double ts = golden_max([&](double s) { return -f(s); }, t - h, t + h);
      double fs = std::min(f(ts), v[i]);
      if (fs < lo.value) lo = {f(ts) <= v[i] ? ts : t, fs};
    }
  }
  auto wrap = [](SignSample s) {
    s.t = std::fmod(s.t, kTwoPi);
    if (s.t < 0) s.t += kTwoPi;
    return s;
  };
  hi = wrap(hi);
  lo = wrap(lo);

  if (hi.value > opt.sign_tol && lo.value < -opt.sign_tol) {
    out.cls = SignClass::ChangesSign;
    out.witnesses = {hi, lo};
  } else if (lo.value >= -opt.sign_tol && hi.value > opt.sign_tol) {
    out.cls = SignClass::NonNegativeNotZero;
    out.witnesses = {hi};
  } else if (hi.value <= opt.sign_tol && lo.value < -opt.sign_tol) {
    out.cls = SignClass::NonPositiveNotZero;
    out.witnesses = {lo};
  } else {
    // below the sign threshold everywhere yet not zero: decide by the dominant side
    if (hi.value >= -lo.value) {
      out.cls = SignClass::NonNegativeNotZero;
      out.witnesses = {hi};
    } else {
      out.cls = SignClass::NonPositiveNotZero;
      out.witnesses = {lo};
    }
  }
  return out;
}

RunningIntegralExtremum running_extremum(const PeriodicFunction& b, Extremum which, std::size_t grid) {
  const double sgn = which == Extremum::Max ? 1.0 : -1.0;
  auto B = [&](double t) { return sgn * running_integral(b, t); };
  std::size_t best = 0;
  double bv = B(0);
  const double h = kTwoPi / static_cast<double>(grid);
  for (std::size_t i = 1; i <= grid; ++i) {
    double v = B(h * static_cast<double>(i));
    if (v > bv) {
      bv = v;
      best = i;
    }
  }
  double lo = std::max(0.0, h * (static_cast<double>(best) - 1));
  double hi = std::min(kTwoPi, h * (static_cast<double>(best) + 1));
  double t = golden_max(B, lo, hi);
  if (B(t) < bv) t = h * static_cast<double>(best);
  return {t, running_integral(b, t)};
}

// ----------------------------------------------------------------- bumps

namespace {

// psi(y) = exp(-y^{-k}); the smooth step psi(y) / (psi(y) + psi(1-y))
double psi(double y, double k) { return y > 0 ? std::exp(-std::pow(y, -k)) : 0.0; }

double dpsi(double y, double k) {
  double p = psi(y, k);
  return p == 0 ? 0.0 : p * k * std::pow(y, -k - 1);
}

double ramp(double y, double k) {
  if (y <= 0) return 0;
  if (y >= 1) return 1;
  double p = psi(y, k), q = psi(1 - y, k);
  return p / (p + q);
}

double dramp(double y, double k) {
  if (y <= 0 || y >= 1) return 0;
  double p = psi(y, k), q = psi(1 - y, k);
  double dp = dpsi(y, k), dq = -dpsi(1 - y, k);
  double s = p + q;
  return (dp * q - p * dq) / (s * s);
}

}  // namespace

double GevreyBump::local(double t) const {
  double x = std::fmod(t - a_, kTwoPi);
  if (x < 0) x += kTwoPi;
  return x;
}

double GevreyBump::raw(double x) const {
  const double L = b_ - a_;
  if (x <= 0 || x >= L) return 0;
  if (!plateau_) {
    double s = 1.0 / (2.0 * (sigma_ - 1.0));
    double q = x * (L - x);
    return std::exp(-std::pow(q, -s));
  }
  const double k = 1.0 / (sigma_ - 1.0);
  double xc = plateau_->first - a_, xd = plateau_->second - a_;
  if (x < xc) return ramp(x / xc, k);
  if (x <= xd) return 1.0;
  return ramp((L - x) / (L - xd), k);
}

double GevreyBump::raw_derivative(double x) const {
  const double L = b_ - a_;
  if (x <= 0 || x >= L) return 0;
  if (!plateau_) {
    double s = 1.0 / (2.0 * (sigma_ - 1.0));
    double q = x * (L - x);
    double h = std::exp(-std::pow(q, -s));
    if (h == 0) return 0;
    return h * s * std::pow(q, -s - 1) * (L - 2 * x);
  }
  const double k = 1.0 / (sigma_ - 1.0);
  double xc = plateau_->first - a_, xd = plateau_->second - a_;
  if (x < xc) return dramp(x / xc, k) / xc;
  if (x <= xd) return 0.0;
  return -dramp((L - x) / (L - xd), k) / (L - xd);
}

double GevreyBump::operator()(double t) const { return scale_ * raw(local(t)); }
double GevreyBump::derivative(double t) const { return scale_ * raw_derivative(local(t)); }

double GevreyBump::integral(std::size_t N) const {
  return trapezoid([this](double t) { return (*this)(t); }, N);
}

namespace {

void check_bump_args(double a, double b, double sigma, const std::optional<std::pair<double, double>>& plateau) {
  if (!(sigma > 1)) throw InputError("bump order must exceed 1");
  if (!(b > a)) throw InputError("bump support is empty or inverted");
  if (!(b - a < kTwoPi)) throw InputError("bump support must be shorter than the period");
  if (plateau && !(plateau->first > a && plateau->first <= plateau->second && plateau->second < b))
    throw InputError("bump plateau must lie strictly inside the support");
}

}  // namespace

GevreyBump make_bump(double a, double b, double sigma, BumpNormalization norm,
                     std::optional<std::pair<double, double>> plateau) {
  check_bump_args(a, b, sigma, plateau);
  if (!(a > 0 && b < kTwoPi)) throw InputError("bump support must lie strictly inside (0, 2 pi)");
  GevreyBump g;
  g.a_ = a;
  g.b_ = b;
  g.sigma_ = sigma;
  g.plateau_ = plateau;
  if (norm == BumpNormalization::UnitSup) {
    g.scale_ = plateau ? 1.0 : 1.0 / g.raw(0.5 * (b - a));
  } else {
    g.scale_ = 1.0;
    g.scale_ = 1.0 / g.integral();
  }
  return g;
}

GevreyBump make_periodic_bump(double a, double b, double sigma, std::optional<std::pair<double, double>> plateau) {
  check_bump_args(a, b, sigma, plateau);
  GevreyBump g;
  g.a_ = a;
  g.b_ = b;
  g.sigma_ = sigma;
  g.plateau_ = plateau;
  g.scale_ = plateau ? 1.0 : 1.0 / g.raw(0.5 * (b - a));
  return g;
}

// ------------------------------------------------------------ decay fit

GevreyFit fit_gevrey_decay(const std::map<long, cplx>& coeffs, const std::vector<double>& sigma_grid) {
  std::map<long, double> shell;
  double top = 0;
  std::size_t nonzero = 0;
  for (const auto& [tau, c] : coeffs) {
    double m = std::abs(c);
    if (m == 0) continue;
    ++nonzero;
    top = std::max(top, m);
    double& s = shell[std::labs(tau)];
    s = std::max(s, m);
  }
  if (nonzero == 0) throw InputError("all-zero coefficient sequence");
  if (nonzero < 16) throw InputError("decay fit needs at least 16 nonzero coefficients");
  std::vector<std::pair<double, double>> pts;
  for (const auto& [k, m] : shell)
    if (m > kZeroTol * top) pts.emplace_back(static_cast<double>(k), std::log(m));
  std::vector<double> grid = sigma_grid.empty() ? std::vector<double>{1.0, 1.1, 1.25, 1.5, 2.0, 3.0, 4.0} : sigma_grid;
  SigmaFit sf = fit_over_sigma(pts, grid);
  GevreyFit out;
  out.sigma_hat = sf.sigma;
  out.eps_hat = sf.line.eps;
  out.C_hat = std::exp(sf.line.log_c);
  out.residual = sf.line.residual;
  out.cls = out.eps_hat >= 1e-3 ? GevreyClass::GevreyFunction : GevreyClass::UltradistributionOnly;
  return out;
}

double trapezoid(const std::function<double(double)>& f, std::size_t N) {
  double s = 0;
  const double h = kTwoPi / static_cast<double>(N);
  for (std::size_t i = 0; i < N; ++i) s += f(h * static_cast<double>(i));
  return s * h;
}

}  // namespace hypo
