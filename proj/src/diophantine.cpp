// SPDX-License-Identifier: Apache-2.0
#include "hypo/diophantine.hpp"

#include "hypo/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hypo {

const char* to_string(DiophantineVerdict v) {
  switch (v) {
    case DiophantineVerdict::HoldsUpToBounds: return "HoldsUpToBounds";
    case DiophantineVerdict::FailsWithWitness: return "FailsWithWitness";
    case DiophantineVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

GapScan scan_gaps(const EigenvalueProvider& eigenvalues, const std::vector<double>& alpha,
                  const std::optional<std::vector<Rational>>& alpha_exact, std::size_t L_max) {
  if (alpha.empty()) throw InputError("alpha must have at least one component");
  if (alpha_exact && alpha_exact->size() != alpha.size()) throw InputError("exact alpha has the wrong length");
  const std::size_t L = std::min(L_max, eigenvalues.max_index());
  if (alpha.size() * L > 100000000) throw InputError("scan exceeds the candidate budget of 1e8");
  GapScan scan;
  scan.entries.resize(L);
  if (L == 0) return scan;
  std::optional<std::vector<Rational>> lam_exact;
  if (alpha_exact) lam_exact = eigenvalues.enumerate_exact(L);
  if (lam_exact) {
    scan.exact = true;
    parallel_for(L, [&](std::size_t i) {
      auto& e = scan.entries[i];
      Rational worst = 0;
      for (const auto& a : *alpha_exact) {
        Rational x = a * (*lam_exact)[i];
        BigInt t = round_half_away(x);
        e.tau.push_back(t);
        e.tau_norm = std::max(e.tau_norm, std::abs(to_double(t)));
        Rational d = dist_to_integer(x);
        if (d > worst) worst = d;
      }
      e.zero = worst == 0;
      e.gap = to_double(worst);
      e.log_gap = e.zero ? -std::numeric_limits<double>::infinity() : log_abs(worst);
    });
    return scan;
  }
  std::vector<double> lam = eigenvalues.enumerate(L);
  parallel_for(L, [&](std::size_t i) {
    auto& e = scan.entries[i];
    double worst = 0;
    for (double a : alpha) {
      // a lambda = x + lo exactly
      const double x = a * lam[i];
      const double lo = std::fma(a, lam[i], -x);
      double t = std::round(x);  // halves away from zero
      double frac = (x - t) + lo;
      if (frac > 0.5) {
        t += 1;
        frac -= 1;
      } else if (frac < -0.5) {
        t -= 1;
        frac += 1;
      }
      e.tau.emplace_back(t);
      e.tau_norm = std::max(e.tau_norm, std::abs(t));
      worst = std::max(worst, std::abs(frac));
    }
    e.zero = worst <= kResonanceTol;
    e.gap = e.zero ? 0.0 : worst;
    e.log_gap = e.zero ? -std::numeric_limits<double>::infinity() : std::log(worst);
  });
  return scan;
}

namespace {

struct TailSplit {
  DiophantineVerdict verdict = DiophantineVerdict::Inconclusive;
  double head = 0;
  double tail = 0;
  double reported = 0;
};

struct Rate {
  std::size_t ell;
  double rate;   // -log(gap) / W
  double depth;  // -log(gap)
};

// Holds when the upper half of the box sets no new smallest gap, when its
// required rate is below the smallest grid value, or when that rate has
// dropped tenfold from the lower half; fails when it stays above the grid
// floor and comparable to the lower half.
TailSplit split_verdict(const std::vector<Rate>& rates, std::size_t L, const std::vector<double>& grid) {
  TailSplit s;
  const double gmin = grid.front();
  bool any_tail = false, any_head = false;
  double head_depth = -std::numeric_limits<double>::infinity();
  double tail_depth = -std::numeric_limits<double>::infinity();
  for (const auto& x : rates) {
    if (2 * x.ell > L) {
      s.tail = any_tail ? std::max(s.tail, x.rate) : x.rate;
      tail_depth = std::max(tail_depth, x.depth);
      any_tail = true;
    } else {
      s.head = any_head ? std::max(s.head, x.rate) : x.rate;
      head_depth = std::max(head_depth, x.depth);
      any_head = true;
    }
  }
  if (!any_tail) {
    s.verdict = DiophantineVerdict::HoldsUpToBounds;  // vacuous on the scanned box
    return s;
  }
  if (s.tail <= gmin || (any_head && (s.tail <= 0.1 * s.head || tail_depth <= head_depth))) {
    s.verdict = DiophantineVerdict::HoldsUpToBounds;
  } else if (any_head && s.tail >= 0.5 * s.head) {
    s.verdict = DiophantineVerdict::FailsWithWitness;
    s.reported = gmin;
    for (double g : grid)
      if (g < s.tail) s.reported = g;
  }
  return s;
}

std::vector<double> sorted_grid(const std::vector<double>& g) {
  std::vector<double> out = g.empty() ? std::vector<double>{1e-3, 1e-2, 1e-1} : g;
  for (double x : out)
    if (!(x > 0)) throw InputError("eps grid entries must be positive");
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

DiophantineReport evaluate_condition(const GapScan& scan, const DiophantineQuery& q,
                                     const std::vector<double>& eps_grid) {
  if (!(q.sigma >= 1)) throw InputError("sigma must be >= 1");
  if (!(q.mu >= 0.5)) throw InputError("mu must be >= 1/2");
  std::vector<double> grid = sorted_grid(eps_grid);
  DiophantineReport rep;
  rep.sigma = q.sigma;
  rep.exact = scan.exact;
  const std::size_t L = std::min(q.L_max, scan.entries.size());
  rep.L_scanned = L;
  std::vector<Rate> rates;
  std::vector<double> weight(L, 0.0);
  for (std::size_t i = 0; i < L; ++i) {
    const auto& e = scan.entries[i];
    if (e.zero) {
      ++rep.zero_gaps;
      continue;
    }
    if (e.tau_norm > q.T_max) {
      ++rep.outside_box;
      continue;
    }
    rep.min_gap = std::min(rep.min_gap, e.gap);
    double W = std::pow(e.tau_norm, 1.0 / q.sigma) + std::pow(static_cast<double>(i + 1), 1.0 / (2.0 * q.n * q.mu));
    weight[i] = W;
    double r = e.log_gap < 0 ? -e.log_gap / W : 0.0;
    rates.push_back({i + 1, r, -e.log_gap});
    rep.fitted_eps = std::max(rep.fitted_eps, r);
  }
  TailSplit s = split_verdict(rates, L, grid);
  rep.verdict = s.verdict;
  rep.eps_head = s.head;
  rep.eps_tail = s.tail;
  if (s.verdict == DiophantineVerdict::FailsWithWitness) {
    rep.reported_eps = s.reported;
    for (const auto& [ell, r, depth] : rates) {
      if (!(r > s.reported)) continue;
      const auto& e = scan.entries[ell - 1];
      DiophantineWitness w;
      w.tau = e.tau;
      w.ell = ell;
      w.gap = e.gap;
      w.log_gap = e.log_gap;
      w.eps_ell = r;
      w.budget = std::exp(-s.reported * weight[ell - 1]);
      rep.witnesses.push_back(std::move(w));
    }
  }
  return rep;
}

DiophantineReport check_condition(const EigenvalueProvider& eigenvalues, const DiophantineQuery& q,
                                  const std::vector<double>& eps_grid) {
  GapScan scan = scan_gaps(eigenvalues, q.alpha, q.alpha_exact, q.L_max);
  return evaluate_condition(scan, q, eps_grid);
}

TorusScanReport torus_distance_scan(const std::vector<std::complex<double>>& omega,
                                    const std::optional<std::vector<Rational>>& omega_exact_real,
                                    const EigenvalueProvider& eigenvalues, std::size_t L_max, double mu,
                                    const std::vector<double>& delta_grid) {
  if (L_max < 1) throw InputError("L_max must be >= 1");
  if (omega.empty()) throw InputError("omega must have at least one component");
  std::vector<double> grid = sorted_grid(delta_grid);
  const std::size_t L = std::min(L_max, eigenvalues.max_index());
  const int n = eigenvalues.meta().n;
  TorusScanReport rep;
  rep.L_scanned = L;
  rep.m.assign(L, 0.0);
  std::optional<std::vector<Rational>> lam_exact;
  if (omega_exact_real) lam_exact = eigenvalues.enumerate_exact(L);
  std::vector<double> lam = eigenvalues.enumerate(L);
  parallel_for(L, [&](std::size_t i) {
    double best = 0;
    for (std::size_t r = 0; r < omega.size(); ++r) {
      double v;
      if (lam_exact) {
        double d = to_double(dist_to_integer((*omega_exact_real)[r] * (*lam_exact)[i]));
        v = 2.0 * std::sin(kPi * d);
      } else {
        cplx x = omega[r] * lam[i];
        double frac = x.real() - std::round(x.real());
        v = std::abs(1.0 - std::exp(cplx(2.0 * kPi * x.imag(), -2.0 * kPi * frac)));
      }
      best = std::max(best, v);
    }
    rep.m[i] = best;
  });
  std::vector<Rate> rates;
  for (std::size_t i = 0; i < L; ++i) {
    if (rep.m[i] <= 1e-12) {
      ++rep.zero_points;
      continue;
    }
    double w = std::pow(static_cast<double>(i + 1), 1.0 / (2.0 * n * mu));
    double d = rep.m[i] < 1 ? -std::log(rep.m[i]) / w : 0.0;
    rates.push_back({i + 1, d, -std::log(rep.m[i])});
    rep.fitted_delta = std::max(rep.fitted_delta, d);
  }
  rep.all_zero = rates.empty();
  TailSplit s = split_verdict(rates, L, grid);
  rep.verdict = s.verdict;
  rep.delta_head = s.head;
  rep.delta_tail = s.tail;
  return rep;
}

bool verdicts_agree(const TorusScanReport& t, const DiophantineReport& d) { return t.verdict == d.verdict; }

std::vector<Convergent> continued_fraction_oracle(double alpha, long long Q_max) {
  if (Q_max < 1) throw InputError("Q_max must be >= 1");
  if (!std::isfinite(alpha)) throw InputError("alpha must be finite");
  std::vector<Convergent> out;
  long double x = alpha;
  long long p0 = 1, q0 = 0, p1 = 0, q1 = 1;  // p_{-1}, q_{-1}, p_{-2}, q_{-2}
  for (int it = 0; it < 64; ++it) {
    long double a = std::floor(x);
    if (std::fabs(a) > 9e15L) break;
    auto ai = static_cast<long long>(a);
    long long p = ai * p0 + p1, q = ai * q0 + q1;
    if (q > Q_max) break;
    out.push_back({p, q, std::abs(alpha - static_cast<double>(p) / static_cast<double>(q))});
    p1 = p0;
    q1 = q0;
    p0 = p;
    q0 = q;
    long double frac = x - a;
    if (frac < 1e-12L) break;
    x = 1.0L / frac;
  }
  return out;
}

std::vector<Convergent> continued_fraction_oracle(const Rational& alpha, long long Q_max) {
  if (Q_max < 1) throw InputError("Q_max must be >= 1");
  std::vector<Convergent> out;
  Rational x = alpha;
  BigInt p0 = 1, q0 = 0, p1 = 0, q1 = 1;
  while (true) {
    BigInt a = floor_of(x);
    BigInt p = a * p0 + p1, q = a * q0 + q1;
    if (q > Q_max) break;
    Rational err = alpha - Rational(p, q);
    if (err < 0) err = -err;
    out.push_back({p.convert_to<long long>(), q.convert_to<long long>(), to_double(err)});
    p1 = p0;
    q1 = q0;
    p0 = p;
    q0 = q;
    Rational frac = x - Rational(a);
    if (frac == 0) break;
    x = 1 / frac;
  }
  return out;
}

}  // namespace hypo
