// SPDX-License-Identifier: Apache-2.0
#include "hypo/witness.hpp"

#include "hypo/solver.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <sstream>

namespace hypo {

const char* to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::InfiniteZeroSet: return "InfiniteZeroSet";
    case WitnessKind::SymbolDecaySequence: return "SymbolDecaySequence";
    case WitnessKind::SignChangeCase1: return "SignChangeCase1";
    case WitnessKind::MixedCase2: return "MixedCase2";
  }
  return "?";
}

namespace {

constexpr cplx kI(0.0, 1.0);
constexpr double kEdge = 0.01;
constexpr double kResolved = 1e-8;

struct Projected {
  TrigSeries s;
  double tail = 0;  // largest |coefficient| in the upper half of the band
};

// Projects fn on a uniform grid, doubling from N0 up to N_max while the upper
// half of the band holds more than 1e-13 of the peak. Factors are scaled to
// sup <= 1, so the final tail is judged against max(peak, 1).
Projected project(const std::function<cplx(double)>& fn, std::size_t N0, std::size_t N_max, double drop_rel) {
  std::size_t N = N0;
  while (true) {
    std::vector<cplx> v(N);
    for (std::size_t k = 0; k < N; ++k) v[k] = fn(kTwoPi * static_cast<double>(k) / static_cast<double>(N));
    TrigSeries s = TrigSeries::from_samples(v);
    const double top = s.max_abs_coeff();
    double tail = 0;
    for (long tau = static_cast<long>(N / 4); tau <= s.degree(); ++tau)
      tail = std::max({tail, std::abs(s.coeff(tau)), std::abs(s.coeff(-tau))});
    if (tail <= 1e-13 * top || N >= N_max) {
      if (tail > kResolved * std::max(top, 1.0)) {
        std::ostringstream os;
        os << "grid of " << N << " points does not resolve the factor (tail " << tail << ")";
        throw PreconditionError(os.str());
      }
      return {s.trimmed(drop_rel * top), tail};
    }
    N *= 2;
  }
}

cplx eval_block(const ModeBlock& b, const std::vector<double>& t) {
  cplx acc = 0;
  for (std::size_t off = 0; off < b.data.size(); ++off) {
    if (b.data[off] == cplx(0)) continue;
    std::vector<long> tau = b.index(off);
    double ph = 0;
    for (std::size_t d = 0; d < tau.size(); ++d) ph += static_cast<double>(tau[d]) * t[d];
    acc += b.data[off] * std::polar(1.0, ph);
  }
  return acc;
}

double budget(double eps, double sigma, const std::vector<long>& tau, std::size_t j, const FieldContext& ctx) {
  double tn = 0;
  for (long t : tau) tn = std::max(tn, std::abs(static_cast<double>(t)));
  return std::exp(-eps * (std::pow(tn, 1.0 / sigma) + ctx.mode_weight(j)));
}

std::string describe_pair(const std::vector<long>& tau, std::size_t j) {
  std::ostringstream os;
  os << "(tau = [";
  for (std::size_t i = 0; i < tau.size(); ++i) os << (i ? ", " : "") << tau[i];
  os << "], j = " << j << ")";
  return os.str();
}

// Smallness of the symbol of `sub` on each pair, returning the entries.
std::vector<std::vector<cplx>> check_pairs(const SystemSpec& sub, const WitnessPairs& pairs, double eps,
                                           double sigma) {
  if (pairs.empty()) throw PreconditionError("no witness pairs given");
  std::vector<std::vector<cplx>> out;
  for (const auto& [tau, j] : pairs) {
    if (static_cast<int>(tau.size()) != sub.m())
      throw InputError("witness pair tau has " + std::to_string(tau.size()) + " components, expected " +
                       std::to_string(sub.m()));
    if (j < 1 || j > sub.op().max_index()) throw InputError("witness pair mode out of range");
    SymbolValue sv = symbol(sub, tau, j);
    const double bnd = budget(eps, sigma, tau, j, sub.field_context());
    if (!(sv.norm > 0) || !(sv.norm < bnd)) {
      std::ostringstream os;
      os << "pair " << describe_pair(tau, j) << " violates the smallness condition: |symbol| = " << sv.norm
         << ", budget = " << bnd;
      throw PreconditionError(os.str());
    }
    out.push_back(sv.entries);
  }
  return out;
}

std::vector<double> grid_for(const SystemSpec& spec, const WitnessOptions& opt) {
  return opt.sigma_grid.empty() ? default_sigma_grid(spec.op().meta().M, spec.mu()) : opt.sigma_grid;
}

double sigma_for(const SystemSpec& spec, const WitnessOptions& opt) {
  return opt.sigma > 0 ? opt.sigma : spec.op().meta().M * spec.mu();
}

// One-variable factor of the sign-change construction and its forcing.
struct Case1Factor {
  TrigSeries u;
  TrigSeries h;
  double tail = 0;
};

class Case1Builder {
 public:
  Case1Builder(const Equation& e, const WitnessOptions& opt) : e_(e), opt_(opt) {
    if (sign_profile(e.b).cls != SignClass::ChangesSign) throw PreconditionError("b does not change sign");
  }

  const SignChangeGeometry& geometry(int sign) {
    auto& g = sign > 0 ? pos_ : neg_;
    if (!g) g = sign_change_geometry(e_.b, sign, opt_);
    return *g;
  }

  Case1Factor build(double lambda) {
    const SignChangeGeometry& G = geometry(lambda > 0 ? 1 : -1);
    const GevreyBump g = make_periodic_bump(G.alpha, G.beta, opt_.bump_order,
                                            std::make_pair(G.alpha + G.flank, G.beta - G.flank));
    const double B0 = running_integral(e_.b, G.t0);
    const double t_loc = G.t0 + std::fmod(G.t_star - G.t0 + 2 * kTwoPi, kTwoPi);
    const double A_star = running_integral(e_.a, t_loc);
    auto local = [&](double t) { return G.t0 + std::fmod(t - G.t0 + 2 * kTwoPi, kTwoPi); };
    auto expo = [&](double x) {
      return std::exp(lambda * (running_integral(e_.b, x) - B0 - G.B_star) -
                      kI * lambda * (running_integral(e_.a, x) - A_star));
    };
    Projected u = project(
        [&](double t) {
          double x = local(t);
          if (x <= G.alpha || x >= G.beta) return cplx(0);
          return g(x) * expo(x);
        },
        opt_.grid, opt_.grid, opt_.drop_rel);
    Projected h = project(
        [&](double t) {
          double x = local(t);
          if (x <= G.alpha || x >= G.beta) return cplx(0);
          double d = g.derivative(x);
          return d == 0 ? cplx(0) : -kI * d * expo(x);
        },
        opt_.grid, opt_.grid, opt_.drop_rel);
    return {u.s, h.s, std::max(u.tail, h.tail)};
  }

 private:
  const Equation& e_;
  WitnessOptions opt_;
  std::optional<SignChangeGeometry> pos_, neg_;
};

template <class Body>
void run_all(std::size_t n, Body body) {
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

std::vector<CoefficientField> zero_fields(const SystemSpec& spec) {
  return std::vector<CoefficientField>(static_cast<std::size_t>(spec.m()), CoefficientField(spec.m(), spec.field_context()));
}

}  // namespace

SignChangeGeometry sign_change_geometry(const PeriodicFunction& b, int sign, const WitnessOptions& opt) {
  if (sign_profile(b).cls != SignClass::ChangesSign) throw PreconditionError("b does not change sign");
  const double s = sign >= 0 ? 1.0 : -1.0;
  const std::size_t base = std::max<std::size_t>(opt.base_grid, 1);
  const std::size_t per = base * std::max<std::size_t>(1, (2048 + base - 1) / base);
  const double h = kTwoPi / static_cast<double>(per);
  std::vector<double> B(2 * per + 1);
  for (std::size_t k = 0; k < B.size(); ++k) B[k] = running_integral(b, h * static_cast<double>(k));
  const std::size_t edge = static_cast<std::size_t>(std::ceil(kEdge / h));
  auto scan = [&](double flank) {
    const std::size_t fw = static_cast<std::size_t>(std::floor(flank / h));
    std::optional<SignChangeGeometry> best;
    for (std::size_t i = 0; i < base; ++i) {
      const std::size_t k0 = i * (per / base);
      const double t0 = h * static_cast<double>(k0);
      const std::size_t ka = k0 + edge, kb = k0 + per - edge;
      std::size_t kmax = ka;
      for (std::size_t k = ka; k <= kb; ++k)
        if (s * B[k] > s * B[kmax]) kmax = k;
      const double alpha = t0 + kEdge, beta = t0 + kTwoPi - kEdge;
      double xs = h * static_cast<double>(kmax);
      if (xs < alpha + flank + h || xs > beta - flank - h) continue;
      auto neg = [&](double x) { return -s * running_integral(b, x); };
      auto r = boost::math::tools::brent_find_minima(neg, xs - h, xs + h, 40);
      if (-r.second > s * B[kmax]) xs = r.first;
      const double Bs = running_integral(b, xs) - B[k0];
      double worst = -std::numeric_limits<double>::infinity();
      for (std::size_t k = ka; k <= ka + fw; ++k) worst = std::max(worst, s * (B[k] - B[k0] - Bs));
      for (std::size_t k = kb - fw; k <= kb; ++k) worst = std::max(worst, s * (B[k] - B[k0] - Bs));
      const double margin = -worst;
      if (!best || margin > best->margin) {
        SignChangeGeometry g;
        g.t0 = t0;
        g.alpha = alpha;
        g.beta = beta;
        g.flank = flank;
        g.t_star = std::fmod(xs, kTwoPi);
        g.B_star = Bs;
        g.margin = margin;
        g.sign = s > 0 ? 1 : -1;
        best = g;
      }
    }
    return best;
  };
  // Wide flanks give faster coefficient decay; take the widest one that keeps
  // a quarter of the margin reachable with the narrowest.
  std::optional<SignChangeGeometry> best = scan(kTwoPi / 12.0);
  if (best && best->margin >= opt.margin_min) {
    const double want = std::max(opt.margin_min, 0.25 * best->margin);
    for (double d : {4.0, 5.0, 6.0, 8.0}) {
      auto g = scan(kTwoPi / d);
      if (g && g->margin >= want) {
        best = g;
        break;
      }
    }
  }
  if (!best || best->margin < opt.margin_min) {
    std::ostringstream os;
    os << "flank margin " << (best ? best->margin : 0.0) << " below the required " << opt.margin_min;
    throw PreconditionError(os.str());
  }
  return *best;
}

SingularWitness witness_infinite_zero_set(const SystemSpec& spec, std::size_t J, const WitnessOptions& opt) {
  const int m = spec.m();
  const ResonanceSets rs = resonance_sets(spec, J);
  if (rs.joint.empty()) throw PreconditionError("the joint resonance set is empty up to j = " + std::to_string(J));
  const std::vector<double> lam = spec.op().enumerate(rs.joint.back());
  SingularWitness w;
  w.kind = WitnessKind::InfiniteZeroSet;
  w.u = CoefficientField(m, spec.field_context());
  w.f = zero_fields(spec);
  w.modes = rs.joint;
  w.t_star.assign(w.modes.size(), {});
  std::vector<ModeBlock> blocks(w.modes.size());
  std::vector<double> tails(w.modes.size(), 0.0);
  run_all(w.modes.size(), [&](std::size_t i) {
    const double L = lam[w.modes[i] - 1];
    std::vector<TrigSeries> factors;
    for (int r = 0; r < m; ++r) {
      const Equation& e = spec.equation(r);
      double ts = 0;
      if (e.b.series().max_abs_coeff() != 0 && L != 0)
        ts = running_extremum(e.b, L > 0 ? Extremum::Max : Extremum::Min).t_star;
      const double Bs = running_integral(e.b, ts);
      const double rate = std::abs(L) * symbol_coefficient(e).l1_norm();
      std::size_t N0 = opt.grid;
      while (static_cast<double>(N0) < 4 * (rate + 1)) N0 *= 2;
      Projected p = project(
          [&](double t) {
            return std::exp(L * (running_integral(e.b, t) - Bs) - kI * L * running_integral(e.a, t));
          },
          N0, std::size_t(1) << 18, opt.drop_rel);
      tails[i] = std::max(tails[i], p.tail);
      factors.push_back(p.s);
      w.t_star[i].push_back(ts);
    }
    blocks[i] = outer_product(factors);
  });
  for (std::size_t i = 0; i < w.modes.size(); ++i) {
    w.u.set_block(w.modes[i], std::move(blocks[i]));
    w.verification.projection_error = std::max(w.verification.projection_error, tails[i]);
  }
  w.verification = verify_witness(spec, w, opt);
  return w;
}

SingularWitness witness_symbol_decay(const SystemSpec& spec, const WitnessPairs& pairs, const WitnessOptions& opt) {
  for (const auto& e : spec.equations())
    if (!e.a.is_constant() || !e.b.is_constant())
      throw PreconditionError("the symbol-decay witness needs constant coefficients");
  const double sigma = sigma_for(spec, opt);
  const auto entries = check_pairs(spec, pairs, opt.eps, sigma);
  SingularWitness w;
  w.kind = WitnessKind::SymbolDecaySequence;
  w.eps = opt.eps;
  w.sigma = sigma;
  w.u = CoefficientField(spec.m(), spec.field_context());
  w.f = zero_fields(spec);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [tau, j] = pairs[k];
    w.u.set(tau, j, 1.0);
    for (int r = 0; r < spec.m(); ++r) w.f[static_cast<std::size_t>(r)].set(tau, j, entries[k][static_cast<std::size_t>(r)]);
    if (std::find(w.modes.begin(), w.modes.end(), j) == w.modes.end()) {
      w.modes.push_back(j);
      w.t_star.emplace_back(static_cast<std::size_t>(spec.m()), 0.0);
    }
  }
  w.verification = verify_witness(spec, w, opt);
  return w;
}

SingularWitness witness_sign_change(const SystemSpec& spec, std::size_t J, const WitnessOptions& opt) {
  const int m = spec.m();
  std::vector<Case1Builder> builders;
  for (int r = 0; r < m; ++r) {
    try {
      builders.emplace_back(spec.equation(r), opt);
    } catch (const PreconditionError&) {
      throw PreconditionError("b of equation " + std::to_string(r + 1) + " does not change sign");
    }
  }
  J = std::min(J, spec.op().max_index());
  const std::vector<double> lam = spec.op().enumerate(J);
  SingularWitness w;
  w.kind = WitnessKind::SignChangeCase1;
  w.u = CoefficientField(m, spec.field_context());
  w.f = zero_fields(spec);
  for (std::size_t j = 1; j <= J; ++j)
    if (lam[j - 1] != 0) w.modes.push_back(j);
  if (w.modes.empty()) throw PreconditionError("no nonzero eigenvalue up to j = " + std::to_string(J));
  // geometry first, sequentially, so the parallel builds only read it
  for (auto& b : builders)
    for (std::size_t j : w.modes) b.geometry(lam[j - 1] > 0 ? 1 : -1);
  const std::size_t n = w.modes.size();
  std::vector<ModeBlock> ub(n);
  std::vector<std::vector<ModeBlock>> fb(n);
  std::vector<double> tails(n, 0.0);
  w.t_star.assign(n, {});
  run_all(n, [&](std::size_t i) {
    const double L = lam[w.modes[i] - 1];
    std::vector<Case1Factor> fac;
    for (int r = 0; r < m; ++r) {
      fac.push_back(builders[static_cast<std::size_t>(r)].build(L));
      tails[i] = std::max(tails[i], fac.back().tail);
    }
    std::vector<TrigSeries> us;
    for (const auto& f : fac) us.push_back(f.u);
    ub[i] = outer_product(us);
    for (int r = 0; r < m; ++r) {
      std::vector<TrigSeries> hs = us;
      hs[static_cast<std::size_t>(r)] = fac[static_cast<std::size_t>(r)].h;
      fb[i].push_back(outer_product(hs));
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    const double L = lam[w.modes[i] - 1];
    for (auto& b : builders) w.t_star[i].push_back(b.geometry(L > 0 ? 1 : -1).t_star);
    w.u.set_block(w.modes[i], std::move(ub[i]));
    for (int r = 0; r < m; ++r) w.f[static_cast<std::size_t>(r)].set_block(w.modes[i], std::move(fb[i][static_cast<std::size_t>(r)]));
  }
  w.verification = verify_witness(spec, w, opt);
  for (double t : tails) w.verification.projection_error = std::max(w.verification.projection_error, t);
  return w;
}

SingularWitness witness_mixed(const SystemSpec& spec, int ell, const WitnessPairs& pairs, const WitnessOptions& opt) {
  const int m = spec.m();
  if (ell < 1 || ell > m) throw InputError("split index must lie in 1..m");
  if (ell == m) {
    SingularWitness w = witness_symbol_decay(spec, pairs, opt);
    return w;
  }
  std::vector<Equation> head;
  for (int r = 0; r < ell; ++r) {
    const Equation& e = spec.equation(r);
    if (e.b.series().max_abs_coeff() != 0 || !e.a.is_constant())
      throw PreconditionError("equation " + std::to_string(r + 1) + " must have b == 0 and constant a");
    head.push_back(e);
  }
  std::vector<Case1Builder> builders;
  for (int s = ell; s < m; ++s) {
    try {
      builders.emplace_back(spec.equation(s), opt);
    } catch (const PreconditionError&) {
      throw PreconditionError("b of equation " + std::to_string(s + 1) + " does not change sign");
    }
  }
  const SystemSpec sub = spec.with_equations(head);
  const double sigma = sigma_for(spec, opt);
  const auto entries = check_pairs(sub, pairs, opt.eps, sigma);
  std::size_t jmax = 0;
  for (const auto& p : pairs) jmax = std::max(jmax, p.second);
  const std::vector<double> lam = spec.op().enumerate(jmax);
  for (const auto& [tau, j] : pairs) {
    if (lam[j - 1] == 0) throw PreconditionError("pair " + describe_pair(tau, j) + " has a zero eigenvalue");
    for (auto& b : builders) b.geometry(lam[j - 1] > 0 ? 1 : -1);
  }
  SingularWitness w;
  w.kind = WitnessKind::MixedCase2;
  w.eps = opt.eps;
  w.sigma = sigma;
  w.u = CoefficientField(m, spec.field_context());
  w.f = zero_fields(spec);
  const std::size_t n = pairs.size();
  std::vector<ModeBlock> ub(n);
  std::vector<std::vector<ModeBlock>> fb(n);
  std::vector<double> tails(n, 0.0);
  run_all(n, [&](std::size_t k) {
    const auto& [tau, j] = pairs[k];
    const double L = lam[j - 1];
    std::vector<TrigSeries> us;
    for (int r = 0; r < ell; ++r) {
      const long t = tau[static_cast<std::size_t>(r)];
      const long K = std::labs(t);
      std::vector<cplx> c(static_cast<std::size_t>(2 * K + 1), cplx(0));
      c[static_cast<std::size_t>(t + K)] = 1.0;
      us.emplace_back(std::move(c));
    }
    std::vector<Case1Factor> fac;
    for (auto& b : builders) {
      fac.push_back(b.build(L));
      tails[k] = std::max(tails[k], fac.back().tail);
      us.push_back(fac.back().u);
    }
    ub[k] = outer_product(us);
    for (int r = 0; r < ell; ++r) {
      ModeBlock f = ub[k];
      for (auto& v : f.data) v *= entries[k][static_cast<std::size_t>(r)];
      fb[k].push_back(std::move(f));
    }
    for (int s = ell; s < m; ++s) {
      std::vector<TrigSeries> hs = us;
      hs[static_cast<std::size_t>(s)] = fac[static_cast<std::size_t>(s - ell)].h;
      fb[k].push_back(outer_product(hs));
    }
  });
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = pairs[k].second;
    if (w.u.block(j)) throw InputError("witness pairs must use distinct modes");
    w.modes.push_back(j);
    std::vector<double> ts(static_cast<std::size_t>(ell), 0.0);
    for (auto& b : builders) ts.push_back(b.geometry(lam[j - 1] > 0 ? 1 : -1).t_star);
    w.t_star.push_back(ts);
    w.u.set_block(j, std::move(ub[k]));
    for (int r = 0; r < m; ++r) w.f[static_cast<std::size_t>(r)].set_block(j, std::move(fb[k][static_cast<std::size_t>(r)]));
  }
  w.verification = verify_witness(spec, w, opt);
  for (double t : tails) w.verification.projection_error = std::max(w.verification.projection_error, t);
  return w;
}

WitnessVerification verify_witness(const SystemSpec& spec, const SingularWitness& w, const WitnessOptions& opt) {
  WitnessVerification v;
  v.projection_error = w.verification.projection_error;
  if (static_cast<int>(w.f.size()) != spec.m()) throw InputError("witness has the wrong number of right-hand sides");
  const std::vector<double> grid = grid_for(spec, opt);
  v.u_nondecay = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w.modes.size(); ++i) {
    const ModeBlock* b = w.u.block(w.modes[i]);
    double val = b ? std::abs(eval_block(*b, w.t_star[i])) : 0.0;
    v.u_nondecay = std::min(v.u_nondecay, val);
    if (b) v.u_sup = std::max(v.u_sup, block_sup(*b));
  }
  if (w.modes.empty()) v.u_nondecay = 0;
  v.residual = residual(spec, w.u, w.f);
  v.u_profile = classify_field(w.u, grid);
  v.f_decay_eps = std::numeric_limits<double>::infinity();
  bool f_ok = true;
  for (const auto& f : w.f) {
    if (f.is_zero()) {
      v.f_profiles.emplace_back();
      v.f_profiles.back().cls = DecayClass::FmuMember;
      v.f_profiles.back().eps_hat = std::numeric_limits<double>::infinity();
      continue;
    }
    DecayProfile p = classify_field(f, grid);
    v.f_decay_eps = std::min(v.f_decay_eps, p.eps_hat);
    f_ok = f_ok && p.cls == DecayClass::FmuMember && p.eps_hat >= 1e-3;
    v.f_profiles.push_back(p);
  }
  if (v.u_profile.cls != DecayClass::DualOnly)
    v.failures.push_back(std::string("u is classified ") + to_string(v.u_profile.cls) + ", expected DualOnly");
  if (!f_ok) v.failures.push_back("some right-hand side is not in the smooth class with eps >= 1e-3");
  if (!(v.residual <= 1e-6)) v.failures.push_back("residual above 1e-6");
  if (!(v.u_nondecay >= 0.9)) v.failures.push_back("|u_j(t*)| drops below 0.9");
  v.passed = v.failures.empty();
  return v;
}

CoefficientField permute_axes(const CoefficientField& field, const std::vector<int>& order) {
  const int m = field.dim();
  if (static_cast<int>(order.size()) != m) throw InputError("axis order has the wrong length");
  CoefficientField out(m, field.context(), field.tau_bound(), field.mode_bound());
  for (const auto& [j, b] : field.blocks()) {
    std::vector<long> lo(static_cast<std::size_t>(m)), ext(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      lo[static_cast<std::size_t>(k)] = b.lo[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
      ext[static_cast<std::size_t>(k)] = b.ext[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
    }
    ModeBlock nb(lo, ext);
    for (std::size_t off = 0; off < b.data.size(); ++off) {
      std::vector<long> tau = b.index(off), nt(static_cast<std::size_t>(m));
      for (int k = 0; k < m; ++k) nt[static_cast<std::size_t>(k)] = tau[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
      nb.data[nb.offset(nt)] = b.data[off];
    }
    out.set_block(j, std::move(nb));
  }
  return out;
}

SingularWitness permute_axes(const SingularWitness& w, const std::vector<int>& order) {
  SingularWitness out = w;
  out.u = permute_axes(w.u, order);
  out.f.clear();
  for (int k : order) out.f.push_back(permute_axes(w.f.at(static_cast<std::size_t>(k)), order));
  for (auto& ts : out.t_star) {
    std::vector<double> nt;
    for (int k : order) nt.push_back(ts.at(static_cast<std::size_t>(k)));
    ts = nt;
  }
  return out;
}

}  // namespace hypo
