// SPDX-License-Identifier: Apache-2.0
#include "hypo/system.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hypo {

using boost::multiprecision::denominator;
using boost::multiprecision::numerator;

SystemSpec::SystemSpec(std::vector<Equation> equations, EigenvalueProvider op, double mu)
    : eq_(std::move(equations)), op_(std::move(op)), mu_(mu) {
  if (eq_.empty()) throw InputError("a system needs at least one equation");
  if (!(mu_ >= 0.5)) throw InputError("mu must be >= 1/2");
}

SystemSpec SystemSpec::permuted(const std::vector<int>& order) const {
  if (order.size() != eq_.size()) throw InputError("permutation length does not match m");
  std::vector<bool> seen(eq_.size(), false);
  std::vector<Equation> e;
  for (int r : order) {
    if (r < 0 || r >= m() || seen[static_cast<std::size_t>(r)]) throw InputError("order is not a permutation");
    seen[static_cast<std::size_t>(r)] = true;
    e.push_back(eq_[static_cast<std::size_t>(r)]);
  }
  return with_equations(std::move(e));
}

std::vector<ModeConstant> mode_constants(const SystemSpec& spec) {
  std::vector<ModeConstant> out;
  for (const auto& e : spec.equations())
    out.push_back({cplx(average(e.a), average(e.b)), e.a.exact_average(), e.b.exact_average()});
  return out;
}

SymbolValue symbol(const SystemSpec& spec, const std::vector<long>& tau, std::size_t j) {
  if (static_cast<int>(tau.size()) != spec.m()) throw InputError("tau has the wrong number of components");
  if (j < 1) throw InputError("mode index must be >= 1");
  auto om = mode_constants(spec);
  double lam = spec.op().enumerate(j).back();
  SymbolValue s;
  for (int r = 0; r < spec.m(); ++r) {
    cplx e = static_cast<double>(tau[static_cast<std::size_t>(r)]) + om[static_cast<std::size_t>(r)].value * lam;
    s.entries.push_back(e);
    s.norm = std::max(s.norm, std::abs(e));
  }
  bool all_exact = std::all_of(om.begin(), om.end(), [](const ModeConstant& c) { return c.exact(); });
  if (all_exact) {
    if (auto ex = spec.op().enumerate_exact(j)) {
      const Rational& L = ex->back();
      std::vector<std::pair<Rational, Rational>> v;
      for (int r = 0; r < spec.m(); ++r) {
        const auto& c = om[static_cast<std::size_t>(r)];
        v.emplace_back(Rational(tau[static_cast<std::size_t>(r)]) + *c.re * L, *c.im * L);
      }
      // exact entries are authoritative; refresh the doubles from them
      s.norm = 0;
      for (std::size_t r = 0; r < v.size(); ++r) {
        s.entries[r] = cplx(to_double(v[r].first), to_double(v[r].second));
        s.norm = std::max(s.norm, std::abs(s.entries[r]));
      }
      s.exact = std::move(v);
    }
  }
  return s;
}

const char* to_string(ZeroSetGrowth g) {
  switch (g) {
    case ZeroSetGrowth::FiniteLikely: return "FiniteLikely";
    case ZeroSetGrowth::InfiniteCertified: return "InfiniteCertified";
    case ZeroSetGrowth::InfiniteLikely: return "InfiniteLikely";
  }
  return "?";
}

namespace {

// Per j and r: the integer -omega_r lambda_j when it is one, else nothing.
struct ResonanceData {
  std::vector<std::vector<std::optional<BigInt>>> hit;  // [j-1][r]
  bool exact = false;
};

ResonanceData resonance_data(const SystemSpec& spec, std::size_t J) {
  ResonanceData d;
  const auto om = mode_constants(spec);
  const std::size_t m = om.size();
  J = std::min(J, spec.op().max_index());
  d.hit.assign(J, std::vector<std::optional<BigInt>>(m));
  if (J == 0) return d;
  bool all_exact = std::all_of(om.begin(), om.end(), [](const ModeConstant& c) { return c.exact(); });
  std::optional<std::vector<Rational>> lam_exact;
  if (all_exact) lam_exact = spec.op().enumerate_exact(J);
  if (lam_exact) {
    d.exact = true;
    parallel_for(J, [&](std::size_t i) {
      const Rational& L = (*lam_exact)[i];
      for (std::size_t r = 0; r < m; ++r) {
        if (*om[r].im * L != 0) continue;
        Rational v = *om[r].re * L;
        if (denominator(v) == 1) d.hit[i][r] = BigInt(-numerator(v));
      }
    });
    return d;
  }
  std::vector<double> lam = spec.op().enumerate(J);
  parallel_for(J, [&](std::size_t i) {
    for (std::size_t r = 0; r < m; ++r) {
      cplx v = om[r].value * lam[i];
      if (std::abs(v.imag()) > kResonanceTol) continue;
      double n = std::round(v.real());
      if (std::abs(v.real() - n) <= kResonanceTol && std::abs(n) < 9e15)
        d.hit[i][r] = BigInt(-static_cast<long long>(n));
    }
  });
  return d;
}

BigInt lcm_big(const BigInt& a, const BigInt& b) { return a / boost::multiprecision::gcd(a, b) * b; }

std::optional<ZeroSetCertificate> certify(const SystemSpec& spec, std::size_t J) {
  const auto om = mode_constants(spec);
  BigInt Q = 1;
  for (const auto& c : om) {
    if (!c.exact() || *c.im != 0) return std::nullopt;
    Q = lcm_big(Q, denominator(*c.re));
  }
  const auto& op = spec.op();
  ZeroSetCertificate cert;
  cert.modulus = Q;
  if (op.source() == SpectrumSource::HarmonicOscillator) {
    // lambda = n + 2 s; need Q | lambda, solvable iff gcd(2, Q) | n
    const long n = op.meta().n;
    BigInt g = boost::multiprecision::gcd(BigInt(2), Q);
    if (BigInt(n) % g != 0) return std::nullopt;
    BigInt step = lcm_big(BigInt(2), Q);
    BigInt first = n;
    while (first % Q != 0) first += 2;
    cert.family = "oscillator-progression";
    cert.first = first;
    cert.step = step;
    // exact spot check of members inside the scanned range
    auto lam = op.enumerate_exact(std::min<std::size_t>(J, 4096));
    if (lam) {
      for (std::size_t i = 0; i < lam->size() && cert.verified_indices.size() < 8; ++i) {
        const Rational& L = (*lam)[i];
        bool member = (numerator(L) - first) % step == 0 && numerator(L) >= first;
        if (!member) continue;
        for (const auto& c : om)
          if (denominator(Rational(*c.re * L)) != 1) return std::nullopt;
        cert.verified_indices.push_back(i + 1);
      }
    }
    return cert;
  }
  if (op.source() == SpectrumSource::Formula && op.formula() == FormulaKind::Power) {
    double c = op.formula_coef(), p = op.formula_power();
    if (c != std::floor(c) || std::abs(c) > 9e15 || p != std::floor(p) || p < 1) return std::nullopt;
    if (Q > BigInt(1) << 62) return std::nullopt;
    // j = Q k gives omega_r c (Q k)^p in Z
    cert.family = "power-law-progression";
    cert.first = Q;
    cert.step = Q;
    auto lam = op.enumerate_exact(std::min<std::size_t>(J, 4096));
    if (lam) {
      for (std::size_t j = static_cast<std::size_t>(Q.convert_to<long long>()); j <= lam->size() && cert.verified_indices.size() < 8;
           j += static_cast<std::size_t>(Q.convert_to<long long>())) {
        for (const auto& cc : om)
          if (denominator(Rational(*cc.re * (*lam)[j - 1])) != 1) return std::nullopt;
        cert.verified_indices.push_back(j);
      }
    }
    return cert;
  }
  return std::nullopt;
}

}  // namespace

ZeroSetReport scan_zero_set(const SystemSpec& spec, long T, std::size_t J) {
  if (T < 1 || J < 1) throw InputError("zero-set scan needs T, J >= 1");
  ZeroSetReport rep;
  rep.T = T;
  rep.J = J;
  ResonanceData d = resonance_data(spec, J);
  rep.exact = d.exact;
  const std::size_t Jeff = d.hit.size();
  std::size_t upper_hits = 0;
  for (std::size_t i = 0; i < Jeff; ++i) {
    bool joint = std::all_of(d.hit[i].begin(), d.hit[i].end(), [](const auto& h) { return h.has_value(); });
    if (joint && 2 * (i + 1) > Jeff) ++upper_hits;
    std::vector<long> tau;
    bool ok = joint;
    for (const auto& h : d.hit[i]) {
      if (!ok) break;
      if (!h || boost::multiprecision::abs(*h) > T) {
        ok = false;
        break;
      }
      tau.push_back(h->convert_to<long>());
    }
    if (!ok) continue;
    rep.zeros.emplace_back(std::move(tau), i + 1);
  }
  if (auto cert = certify(spec, J)) {
    rep.growth = ZeroSetGrowth::InfiniteCertified;
    rep.certificate = std::move(cert);
  } else {
    rep.growth = upper_hits > 0 ? ZeroSetGrowth::InfiniteLikely : ZeroSetGrowth::FiniteLikely;
  }
  return rep;
}

ResonanceSets resonance_sets(const SystemSpec& spec, std::size_t J) {
  ResonanceData d = resonance_data(spec, J);
  ResonanceSets out;
  out.J = d.hit.size();
  out.exact = d.exact;
  out.per_equation.assign(static_cast<std::size_t>(spec.m()), {});
  for (std::size_t i = 0; i < d.hit.size(); ++i) {
    bool all = true;
    for (std::size_t r = 0; r < d.hit[i].size(); ++r) {
      if (d.hit[i][r])
        out.per_equation[r].push_back(i + 1);
      else
        all = false;
    }
    if (all) out.joint.push_back(i + 1);
  }
  return out;
}

std::vector<ResonanceRow> resonance_table(const SystemSpec& spec, std::size_t J) {
  J = std::min(J, spec.op().max_index());
  std::vector<ResonanceRow> rows(J);
  if (J == 0) return rows;
  const auto om = mode_constants(spec);
  std::vector<double> lam = spec.op().enumerate(J);
  bool all_exact = std::all_of(om.begin(), om.end(), [](const ModeConstant& c) { return c.exact(); });
  std::optional<std::vector<Rational>> lam_exact;
  if (all_exact) lam_exact = spec.op().enumerate_exact(J);
  parallel_for(J, [&](std::size_t i) {
    ResonanceRow& row = rows[i];
    row.j = i + 1;
    row.lambda = lam[i];
    for (const auto& c : om) {
      double g;
      if (lam_exact) {
        const Rational& L = (*lam_exact)[i];
        g = std::hypot(to_double(dist_to_integer(*c.re * L)), to_double(*c.im * L));
      } else {
        cplx v = c.value * lam[i];
        g = std::hypot(std::abs(v.real() - std::round(v.real())), v.imag());
      }
      row.gaps.push_back(g);
    }
  });
  return rows;
}

TrigSeries symbol_coefficient(const Equation& e) {
  return e.a.series() + e.b.series() * cplx(0, 1);
}

std::vector<double> eigenvalues_for(const SystemSpec& spec, const CoefficientField& field) {
  std::size_t J = field.blocks().empty() ? 0 : field.blocks().rbegin()->first;
  if (J > spec.op().max_index())
    throw InputError("field mode " + std::to_string(J) + " exceeds the eigenvalue sequence");
  return spec.op().enumerate(J);
}

CoefficientField apply_equation(const SystemSpec& spec, int r, const CoefficientField& u) {
  if (u.dim() != spec.m()) throw InputError("field dimension does not match the system");
  if (r < 0 || r >= spec.m()) throw InputError("equation index out of range");
  const TrigSeries c = symbol_coefficient(spec.equation(r));
  const std::vector<double> lam = eigenvalues_for(spec, u);
  std::vector<std::pair<std::size_t, const ModeBlock*>> items;
  for (const auto& [j, b] : u.blocks()) items.emplace_back(j, &b);
  std::vector<ModeBlock> out(items.size());
  parallel_for(items.size(), [&](std::size_t i) {
    const ModeBlock& b = *items[i].second;
    ModeBlock conv = convolve_axis(b, r, c);
    for (auto& v : conv.data) v *= lam[items[i].first - 1];
    ModeBlock shifted = b;
    for (std::size_t off = 0; off < shifted.data.size(); ++off)
      shifted.data[off] *= static_cast<double>(shifted.index(off)[static_cast<std::size_t>(r)]);
    out[i] = add_blocks(conv, shifted);
  });
  CoefficientField res(u.dim(), u.context());
  for (std::size_t i = 0; i < items.size(); ++i) res.set_block(items[i].first, std::move(out[i]));
  return res;
}

}  // namespace hypo
