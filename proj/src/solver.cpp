// SPDX-License-Identifier: Apache-2.0
#include "hypo/solver.hpp"

#include "hypo/conjugation.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

namespace hypo {

const char* to_string(Formula f) {
  switch (f) {
    case Formula::Minus: return "minus";
    case Formula::Plus: return "plus";
    case Formula::Auto: return "auto";
  }
  return "?";
}

namespace {

constexpr cplx kI(0.0, 1.0);
constexpr int kPanelNodes = 20;
constexpr std::size_t kMaxPanels = 2048;
constexpr double kLogOverflow = 690.0;

bool resonant(cplx kappa) {
  return std::abs(kappa.imag()) <= kResonanceTol && std::abs(kappa.real() - std::round(kappa.real())) <= kResonanceTol;
}

// log(1 - e^w) or log(e^w - 1) without overflow.
cplx log_one_minus_exp(cplx w) {
  if (w.real() > 0) return w + std::log(std::exp(-w) - 1.0);
  return std::log(1.0 - std::exp(w));
}

cplx log_exp_minus_one(cplx w) {
  if (w.real() > 0) return w + std::log(1.0 - std::exp(-w));
  return std::log(std::exp(w) - 1.0);
}

// Evaluates sum_{|k| <= K} s_k e^{i k t} by the recurrence on e^{i t}.
cplx eval_series(const std::vector<cplx>& s, double t) {
  const long K = static_cast<long>(s.size() / 2);
  cplx acc = s[static_cast<std::size_t>(K)];
  const cplx z = std::polar(1.0, t);
  cplx zk = z;
  for (long k = 1; k <= K; ++k) {
    acc += s[static_cast<std::size_t>(K + k)] * zk + s[static_cast<std::size_t>(K - k)] * std::conj(zk);
    zk *= z;
  }
  return acc;
}

// C(s) = int_0^s c, as c0 s + P(s) - P(0).
struct Phase {
  cplx c0;
  std::vector<cplx> p;
  cplx p0;

  explicit Phase(const TrigSeries& c) : c0(c.coeff(0)) {
    const long K = c.degree();
    p.assign(static_cast<std::size_t>(2 * K + 1), cplx(0));
    for (long k = -K; k <= K; ++k)
      if (k != 0) p[static_cast<std::size_t>(k + K)] = c.coeff(k) / (kI * static_cast<double>(k));
    p0 = 0;
    for (const auto& v : p) p0 += v;
  }
  cplx operator()(double s) const { return c0 * s + eval_series(p, s) - p0; }
};

PeriodicFunction imaginary_part(const TrigSeries& c) {
  std::vector<cplx> b(c.centered().size());
  const long K = c.degree();
  for (long k = -K; k <= K; ++k) b[static_cast<std::size_t>(k + K)] = (c.coeff(k) - std::conj(c.coeff(-k))) / (2.0 * kI);
  return PeriodicFunction::from_series(TrigSeries(std::move(b)));
}

const std::vector<std::pair<double, double>>& unit_rule() {
  static const std::vector<std::pair<double, double>> rule = [] {
    using G = boost::math::quadrature::gauss<double, kPanelNodes>;
    std::vector<std::pair<double, double>> r;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
      r.emplace_back(-x[i], w[i]);
      if (x[i] != 0) r.emplace_back(x[i], w[i]);
    }
    std::sort(r.begin(), r.end());
    return r;
  }();
  return rule;
}

// Per-mode kernel: prefactor, phase, and the integration rule.
class LineKernel {
 public:
  LineKernel(double lambda, const TrigSeries& c, Formula formula, const KernelOptions& opt)
      : lambda_(lambda), phase_(c), opt_(opt) {
    const cplx kappa = lambda * c.coeff(0);
    if (resonant(kappa)) throw ResonanceError("resonant mode: lambda c0 is an integer", {});
    PeriodicFunction b = imaginary_part(c);
    formula_ = formula == Formula::Auto ? auto_formula(lambda, b) : formula;
    const cplx w = 2.0 * kPi * kI * kappa;
    log_pref_ = std::log(kI) - (formula_ == Formula::Minus ? log_one_minus_exp(-w) : log_exp_minus_one(w));
    double bound = b.series().max_abs_coeff() == 0 ? 0.0 : kernel_log_bound(lambda, b, formula_);
    if (bound + log_pref_.real() > kLogOverflow)
      throw PreconditionError(std::string("kernel of the ") + to_string(formula_) +
                              " formula overflows; use the other formula");
    const double phase_rate = std::abs(lambda) * c.l1_norm();
    min_panels_ = static_cast<std::size_t>(std::ceil(kTwoPi * phase_rate / 8.0)) + 1;
  }

  Formula formula() const { return formula_; }

  TrigSeries solve(const TrigSeries& f) const {
    if (f.max_abs_coeff() == 0) return TrigSeries();
    const std::vector<cplx>& fs = f.centered();
    const double f_rate = static_cast<double>(f.degree());
    std::size_t panels = std::max<std::size_t>({1, (opt_.quad_nodes + kPanelNodes - 1) / kPanelNodes, min_panels_,
                                                static_cast<std::size_t>(std::ceil(kTwoPi * f_rate / 8.0)) + 1});
    panels = settle_panels(fs, panels);
    std::size_t N = 64;
    while (N < 4 * static_cast<std::size_t>(f.degree() + 1)) N *= 2;
    N = std::min(N, std::max<std::size_t>(opt_.max_grid, 64));
    while (true) {
      std::vector<cplx> v(N);
      for (std::size_t k = 0; k < N; ++k) v[k] = value(fs, kTwoPi * static_cast<double>(k) / static_cast<double>(N), panels);
      TrigSeries s = TrigSeries::from_samples(v);
      const double top = s.max_abs_coeff();
      double tail = 0;
      for (long tau = static_cast<long>(N / 4); tau <= s.degree(); ++tau)
        tail = std::max({tail, std::abs(s.coeff(tau)), std::abs(s.coeff(-tau))});
      if (tail <= 1e-13 * top || N >= opt_.max_grid) return s.trimmed(1e-14 * top);
      N *= 2;
    }
  }

 private:
  cplx value(const std::vector<cplx>& fs, double t, std::size_t panels) const {
    const auto& rule = unit_rule();
    const double h = kTwoPi / static_cast<double>(panels);
    const cplx Ct = phase_(t);
    cplx acc = 0;
    for (std::size_t p = 0; p < panels; ++p) {
      const double mid = (static_cast<double>(p) + 0.5) * h;
      for (const auto& [x, w] : rule) {
        const double z = mid + 0.5 * h * x;
        cplx e, fv;
        if (formula_ == Formula::Minus) {
          e = -kI * lambda_ * (Ct - phase_(t - z));
          fv = eval_series(fs, t - z);
        } else {
          e = kI * lambda_ * (phase_(t + z) - Ct);
          fv = eval_series(fs, t + z);
        }
        acc += w * std::exp(e + log_pref_) * fv;
      }
    }
    return 0.5 * h * acc;
  }

  // Doubles the panel count until a handful of probe points stop moving.
  std::size_t settle_panels(const std::vector<cplx>& fs, std::size_t panels) const {
    constexpr int probes = 7;
    auto eval = [&](std::size_t P) {
      std::vector<cplx> v(probes);
      for (int i = 0; i < probes; ++i) v[static_cast<std::size_t>(i)] = value(fs, kTwoPi * (i + 0.37) / probes, P);
      return v;
    };
    std::vector<cplx> cur = eval(panels);
    while (panels < kMaxPanels) {
      std::vector<cplx> next = eval(2 * panels);
      double scale = 0, diff = 0;
      for (int i = 0; i < probes; ++i) {
        scale = std::max(scale, std::abs(next[static_cast<std::size_t>(i)]));
        diff = std::max(diff, std::abs(next[static_cast<std::size_t>(i)] - cur[static_cast<std::size_t>(i)]));
      }
      if (diff <= opt_.tol * std::max(scale, std::numeric_limits<double>::min())) return panels;
      panels *= 2;
      cur = std::move(next);
    }
    return panels;
  }

  double lambda_;
  Phase phase_;
  KernelOptions opt_;
  Formula formula_ = Formula::Minus;
  cplx log_pref_;
  std::size_t min_panels_ = 1;
};

std::vector<long> resonant_tau(int m, int r, cplx kappa) {
  std::vector<long> tau(static_cast<std::size_t>(m), 0);
  tau[static_cast<std::size_t>(r)] = -static_cast<long>(std::llround(kappa.real()));
  return tau;
}

// Union of the bounding boxes of the blocks (all of dimension m).
ModeBlock union_box(const std::vector<const ModeBlock*>& blocks, int m) {
  std::vector<long> lo, hi;
  for (const ModeBlock* b : blocks) {
    if (!b || b->empty()) continue;
    if (lo.empty()) {
      lo.assign(static_cast<std::size_t>(m), std::numeric_limits<long>::max());
      hi.assign(static_cast<std::size_t>(m), std::numeric_limits<long>::min());
    }
    for (std::size_t d = 0; d < static_cast<std::size_t>(m); ++d) {
      lo[d] = std::min(lo[d], b->lo[d]);
      hi[d] = std::max(hi[d], b->lo[d] + b->ext[d] - 1);
    }
  }
  if (lo.empty()) return ModeBlock(std::vector<long>(static_cast<std::size_t>(m), 0),
                                   std::vector<long>(static_cast<std::size_t>(m), 1));
  std::vector<long> ext(static_cast<std::size_t>(m));
  for (std::size_t d = 0; d < ext.size(); ++d) ext[d] = hi[d] - lo[d] + 1;
  return ModeBlock(lo, ext);
}

template <class Body>
void run_modes(std::size_t n, Body body) {
  std::vector<std::exception_ptr> errors(n);
  parallel_for(n, [&](std::size_t i) {
    try {
      body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

SolveResult solve_constant(const SystemSpec& spec, const std::vector<CoefficientField>& rhs,
                           const std::vector<std::size_t>& modes, const std::vector<double>& lam) {
  const int m = spec.m();
  const auto om = mode_constants(spec);
  std::vector<ModeBlock> out(modes.size());
  run_modes(modes.size(), [&](std::size_t i) {
    const std::size_t j = modes[i];
    std::vector<const ModeBlock*> bs;
    for (const auto& f : rhs) bs.push_back(f.block(j));
    ModeBlock u = union_box(bs, m);
    std::vector<std::pair<std::vector<long>, std::size_t>> bad;
    for (std::size_t off = 0; off < u.data.size(); ++off) {
      std::vector<long> tau = u.index(off);
      int best = 0;
      double best_abs = -1;
      for (int r = 0; r < m; ++r) {
        double s = std::abs(static_cast<double>(tau[static_cast<std::size_t>(r)]) + lam[j - 1] * om[static_cast<std::size_t>(r)].value);
        if (s > best_abs) {
          best_abs = s;
          best = r;
        }
      }
      const cplx fv = bs[static_cast<std::size_t>(best)] ? bs[static_cast<std::size_t>(best)]->at(tau) : cplx(0);
      if (best_abs <= kResonanceTol) {
        bool any = false;
        for (const ModeBlock* b : bs) any = any || (b && b->at(tau) != cplx(0));
        if (any) bad.emplace_back(tau, j);
        continue;
      }
      const cplx sigma = static_cast<double>(tau[static_cast<std::size_t>(best)]) + lam[j - 1] * om[static_cast<std::size_t>(best)].value;
      u.data[off] = fv / sigma;
    }
    if (!bad.empty()) throw ResonanceError("resonant mode j = " + std::to_string(j), bad);
    out[i] = u.trimmed(0.0);
  });
  SolveResult res{CoefficientField(m, spec.field_context()), 0, -1, "symbol-division", {}};
  for (std::size_t i = 0; i < modes.size(); ++i)
    if (!out[i].empty()) res.u.set_block(modes[i], std::move(out[i]));
  return res;
}

int default_r_star(const SystemSpec& spec) {
  for (int r = 0; r < spec.m(); ++r) {
    SignClass c = sign_profile(spec.equation(r).b).cls;
    if (c == SignClass::NonNegativeNotZero || c == SignClass::NonPositiveNotZero) return r;
  }
  return 0;
}

SolveResult solve_kernel(const SystemSpec& spec, const std::vector<CoefficientField>& rhs,
                         const std::vector<std::size_t>& modes, const std::vector<double>& lam, int r,
                         const SolveOptions& opt) {
  const int m = spec.m();
  const Equation& e = spec.equation(r);
  const CoefficientField& f = rhs[static_cast<std::size_t>(r)];
  std::vector<ModeBlock> out(modes.size());
  run_modes(modes.size(), [&](std::size_t i) {
    const std::size_t j = modes[i];
    const ModeBlock* b = f.block(j);
    if (!b || b->empty()) return;
    ModeProblem p{r, j, lam[j - 1], e.a, e.b, *b};
    out[i] = solve_mode(p, opt.formula, opt.kernel);
  });
  SolveResult res{CoefficientField(m, spec.field_context()), 0, r, "kernel", {}};
  for (std::size_t i = 0; i < modes.size(); ++i)
    if (!out[i].empty()) res.u.set_block(modes[i], std::move(out[i]));
  return res;
}

}  // namespace

ThetaFactors theta_factors(double lambda, cplx c0) {
  const cplx kappa = lambda * c0;
  ThetaFactors t;
  if (resonant(kappa)) {
    t.finite = false;
    t.theta_minus = t.theta_plus = std::numeric_limits<double>::infinity();
    return t;
  }
  const cplx w = 2.0 * kPi * kI * kappa;
  t.theta_minus = std::exp(-log_one_minus_exp(-w).real());
  t.theta_plus = std::exp(-log_exp_minus_one(w).real());
  return t;
}

double kernel_log_bound(double lambda, const PeriodicFunction& b, Formula f) {
  if (f == Formula::Auto) f = auto_formula(lambda, b);
  constexpr long N = 512;
  const double h = kTwoPi / N;
  const double shift = kTwoPi * average(b);
  std::vector<double> B(N);
  for (long k = 0; k < N; ++k) B[static_cast<std::size_t>(k)] = running_integral(b, h * static_cast<double>(k));
  auto Bx = [&](long k) {  // B at k h for k in [-N, 2N)
    if (k < 0) return B[static_cast<std::size_t>(k + N)] - shift;
    if (k >= N) return B[static_cast<std::size_t>(k - N)] + shift;
    return B[static_cast<std::size_t>(k)];
  };
  double best = 0;
  for (long t = 0; t < N; ++t)
    for (long z = 0; z <= N; ++z) {
      double v = f == Formula::Minus ? lambda * (Bx(t) - Bx(t - z)) : -lambda * (Bx(t + z) - Bx(t));
      best = std::max(best, v);
    }
  return best;
}

Formula auto_formula(double lambda, const PeriodicFunction& b) {
  if (b.series().max_abs_coeff() == 0 || lambda == 0) return Formula::Minus;
  SignClass c = sign_profile(b).cls;
  if (c == SignClass::IdenticallyZero) return Formula::Minus;
  const bool nonneg = c == SignClass::NonNegativeNotZero, nonpos = c == SignClass::NonPositiveNotZero;
  if ((lambda > 0 && nonneg) || (lambda < 0 && nonpos)) return Formula::Plus;
  if ((lambda > 0 && nonpos) || (lambda < 0 && nonneg)) return Formula::Minus;
  return kernel_log_bound(lambda, b, Formula::Plus) < kernel_log_bound(lambda, b, Formula::Minus) ? Formula::Plus
                                                                                                 : Formula::Minus;
}

TrigSeries solve_line(double lambda, const TrigSeries& c, const TrigSeries& f, Formula formula,
                      const KernelOptions& opt) {
  return LineKernel(lambda, c, formula, opt).solve(f);
}

ModeBlock solve_mode(const ModeProblem& p, Formula formula, const KernelOptions& opt) {
  const int m = p.rhs.dim();
  if (p.r < 0 || p.r >= std::max(m, 1)) throw InputError("equation index out of range for the mode block");
  const TrigSeries c = symbol_coefficient({p.a, p.b});
  std::optional<LineKernel> kernel;
  try {
    kernel.emplace(p.lambda, c, formula, opt);
  } catch (const ResonanceError& e) {
    throw ResonanceError("resonant mode j = " + std::to_string(p.j),
                         {{resonant_tau(std::max(m, 1), p.r, p.lambda * c.coeff(0)), p.j}});
  }
  if (m == 0) throw InputError("mode block must have at least one axis");
  const std::size_t axis = static_cast<std::size_t>(p.r);
  const long lo = p.rhs.lo[axis], ext = p.rhs.ext[axis];
  // Lines along the axis: every index with the axis coordinate fixed at lo.
  std::vector<std::size_t> starts;
  for (std::size_t off = 0; off < p.rhs.data.size(); ++off)
    if (p.rhs.index(off)[axis] == lo) starts.push_back(off);
  std::size_t stride = 1;
  for (std::size_t d = axis + 1; d < static_cast<std::size_t>(m); ++d) stride *= static_cast<std::size_t>(p.rhs.ext[d]);
  std::vector<TrigSeries> lines(starts.size());
  long K = 0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    long Kf = std::max(std::abs(lo), std::abs(lo + ext - 1));
    std::vector<cplx> cs(static_cast<std::size_t>(2 * Kf + 1), cplx(0));
    for (long k = 0; k < ext; ++k)
      cs[static_cast<std::size_t>(lo + k + Kf)] = p.rhs.data[starts[i] + static_cast<std::size_t>(k) * stride];
    lines[i] = kernel->solve(TrigSeries(std::move(cs)));
    K = std::max<long>(K, lines[i].degree());
  }
  std::vector<long> olo = p.rhs.lo, oext = p.rhs.ext;
  olo[axis] = -K;
  oext[axis] = 2 * K + 1;
  ModeBlock out(olo, oext);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    std::vector<long> tau = p.rhs.index(starts[i]);
    const long Ki = lines[i].degree();
    for (long k = -Ki; k <= Ki; ++k) {
      tau[axis] = k;
      out.data[out.offset(tau)] = lines[i].coeff(k);
    }
  }
  return out.trimmed(0.0);
}

std::map<std::size_t, double> mode_residuals(const SystemSpec& spec, const CoefficientField& u,
                                             const std::vector<CoefficientField>& rhs) {
  if (static_cast<int>(rhs.size()) != spec.m()) throw InputError("expected one right-hand side per equation");
  std::map<std::size_t, double> out;
  for (int r = 0; r < spec.m(); ++r) {
    const CoefficientField Lu = apply_equation(spec, r, u);
    const CoefficientField& f = rhs[static_cast<std::size_t>(r)];
    if (f.dim() != spec.m()) throw InputError("right-hand side dimension does not match the system");
    std::vector<std::size_t> modes = Lu.modes();
    for (std::size_t j : f.modes()) modes.push_back(j);
    std::sort(modes.begin(), modes.end());
    modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
    for (std::size_t j : modes) {
      const ModeBlock* a = Lu.block(j);
      const ModeBlock* b = f.block(j);
      double d;
      if (a && b)
        d = add_blocks(*a, *b, -1.0).max_abs();
      else
        d = a ? a->max_abs() : b->max_abs();
      out[j] = std::max(out[j], d);
    }
  }
  return out;
}

double residual(const SystemSpec& spec, const CoefficientField& u, const std::vector<CoefficientField>& rhs) {
  double worst = 0;
  for (const auto& [j, d] : mode_residuals(spec, u, rhs)) worst = std::max(worst, d);
  return worst;
}

SolveResult solve_system(const SystemSpec& spec, const std::vector<CoefficientField>& rhs, const SolveOptions& opt) {
  const int m = spec.m();
  if (static_cast<int>(rhs.size()) != m) throw InputError("expected one right-hand side per equation");
  for (const auto& f : rhs)
    if (f.dim() != m) throw InputError("right-hand side dimension does not match the system");
  std::vector<std::size_t> modes;
  for (const auto& f : rhs)
    for (std::size_t j : f.modes()) modes.push_back(j);
  std::sort(modes.begin(), modes.end());
  modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
  if (modes.empty()) return SolveResult{CoefficientField(m, spec.field_context()), 0, -1, "zero", {}};
  const std::size_t J = modes.back();
  if (J > spec.op().max_index()) throw InputError("mode " + std::to_string(J) + " exceeds the eigenvalue sequence");
  const std::vector<double> lam = spec.op().enumerate(J);

  bool constant = true, constant_a = true;
  for (const auto& e : spec.equations()) {
    constant_a = constant_a && e.a.is_constant();
    constant = constant && e.a.is_constant() && e.b.is_constant();
  }

  SolveResult res{CoefficientField(m, spec.field_context()), 0, -1, "", {}};
  if (!constant_a && !opt.direct_variable_a) {
    NormalFormData nf = build_normal_form(spec);
    std::vector<CoefficientField> g;
    for (const auto& f : rhs) g.push_back(apply_psi(nf, f, PsiDirection::Inverse));
    SolveResult inner = solve_system(nf.normalized, g, opt);
    res.u = apply_psi(nf, inner.u, PsiDirection::Forward);
    res.r_star = inner.r_star;
    res.method = "normal-form+" + inner.method;
  } else {
    const ResonanceSets rs = resonance_sets(spec, J);
    auto check = [&](const std::vector<std::size_t>& hits, int r) {
      std::vector<std::pair<std::vector<long>, std::size_t>> bad;
      const auto om = mode_constants(spec);
      for (std::size_t j : hits) {
        if (!std::binary_search(modes.begin(), modes.end(), j)) continue;
        std::vector<long> tau(static_cast<std::size_t>(m), 0);
        for (int s = 0; s < m; ++s)
          if (r < 0 || s == r)
            tau[static_cast<std::size_t>(s)] = -static_cast<long>(std::llround(om[static_cast<std::size_t>(s)].value.real() * lam[j - 1]));
        bad.emplace_back(tau, j);
      }
      if (!bad.empty()) {
        std::string msg = "resonant modes:";
        for (const auto& [tau, j] : bad) msg += " j=" + std::to_string(j);
        throw ResonanceError(msg, bad);
      }
    };
    if (constant) {
      check(rs.joint, -1);
      res = solve_constant(spec, rhs, modes, lam);
    } else {
      const int r = opt.r_star.value_or(default_r_star(spec));
      if (r < 0 || r >= m) throw InputError("r_star out of range");
      check(rs.per_equation[static_cast<std::size_t>(r)], r);
      res = solve_kernel(spec, rhs, modes, lam, r, opt);
    }
  }
  res.mode_residual = mode_residuals(spec, res.u, rhs);
  res.residual = 0;
  for (const auto& [j, d] : res.mode_residual) res.residual = std::max(res.residual, d);
  if (res.residual > opt.compat_tol)
    throw InputError("incompatible right-hand sides: residual " + std::to_string(res.residual) + " exceeds " +
                     std::to_string(opt.compat_tol));
  return res;
}

}  // namespace hypo
