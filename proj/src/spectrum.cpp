// SPDX-License-Identifier: Apache-2.0
#include "hypo/spectrum.hpp"

#include "hypo/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hypo {

void OperatorMeta::validate() const {
  if (M < 2) throw InputError("operator order M must be >= 2");
  if (n < 1) throw InputError("space dimension n must be >= 1");
  if (rho && !(*rho > 0)) throw InputError("Weyl constant rho must be positive");
}

EigenvalueProvider EigenvalueProvider::harmonic_oscillator(int n) {
  EigenvalueProvider p;
  p.meta_ = OperatorMeta{2, n, 1.0};
  p.meta_.validate();
  p.source_ = SpectrumSource::HarmonicOscillator;
  return p;
}

EigenvalueProvider EigenvalueProvider::table(std::vector<double> values, OperatorMeta meta) {
  meta.validate();
  for (double v : values)
    if (!std::isfinite(v)) throw InputError("eigenvalue table contains a non-finite entry");
  EigenvalueProvider p;
  p.meta_ = meta;
  p.source_ = SpectrumSource::Table;
  p.table_ = std::move(values);
  p.length_ = p.table_.size();
  return p;
}

EigenvalueProvider EigenvalueProvider::power_law(double coef, double power, OperatorMeta meta) {
  meta.validate();
  if (!(coef != 0) || !std::isfinite(coef) || !(power > 0))
    throw InputError("power law needs nonzero coef and positive power");
  EigenvalueProvider p;
  p.meta_ = meta;
  p.source_ = SpectrumSource::Formula;
  p.formula_ = FormulaKind::Power;
  p.coef_ = coef;
  p.power_ = power;
  return p;
}

EigenvalueProvider EigenvalueProvider::double_exponential(std::size_t length, OperatorMeta meta) {
  meta.validate();
  // 2^(2^10) overflows a double
  if (length < 1 || length > 9) throw InputError("double_exponential length must lie in [1, 9]");
  EigenvalueProvider p;
  p.meta_ = meta;
  p.source_ = SpectrumSource::Formula;
  p.formula_ = FormulaKind::DoubleExponential;
  p.length_ = length;
  return p;
}

std::size_t EigenvalueProvider::max_index() const { return length_; }

namespace {

// Compositions of `remaining` into the slots pos..n-1, lexicographic order.
void compositions(std::vector<int>& k, std::size_t pos, int remaining, std::size_t J,
                  std::vector<std::vector<int>>& out) {
  if (out.size() >= J) return;
  if (pos + 1 == k.size()) {
    k[pos] = remaining;
    out.push_back(k);
    return;
  }
  for (int v = 0; v <= remaining && out.size() < J; ++v) {
    k[pos] = v;
    compositions(k, pos + 1, remaining - v, J, out);
  }
}

}  // namespace

std::vector<std::vector<int>> ho_multi_indices(int n, std::size_t J) {
  if (n < 1) throw InputError("dimension must be >= 1");
  std::vector<std::vector<int>> out;
  out.reserve(J);
  std::vector<int> k(static_cast<std::size_t>(n), 0);
  for (int shell = 0; out.size() < J; ++shell) compositions(k, 0, shell, J, out);
  return out;
}

long long ho_eigenvalue(const std::vector<int>& k) {
  long long s = 0;
  for (int v : k) {
    if (v < 0) throw InputError("oscillator multi-index entries must be nonnegative");
    s += 2LL * v + 1;
  }
  return s;
}

long long ho_eigenvalue(const EigenvalueProvider& provider, const std::vector<int>& k) {
  if (provider.source() != SpectrumSource::HarmonicOscillator)
    throw InputError("provider is not a harmonic oscillator");
  if (static_cast<int>(k.size()) != provider.meta().n)
    throw InputError("multi-index length does not match the operator dimension");
  return ho_eigenvalue(k);
}

namespace {

// Shell s of the n-dimensional oscillator has value n + 2s and
// multiplicity binom(s + n - 1, n - 1).
template <class Emit>
void ho_values(int n, std::size_t J, Emit emit) {
  std::size_t count = 0;
  for (long long s = 0; count < J; ++s) {
    double mult = 1;
    for (int q = 1; q < n; ++q) mult = mult * static_cast<double>(s + q) / q;
    auto m = static_cast<std::size_t>(std::llround(mult));
    for (std::size_t i = 0; i < m && count < J; ++i, ++count) emit(n + 2 * s);
  }
}

}  // namespace

std::vector<double> EigenvalueProvider::enumerate(std::size_t J) const {
  if (J > max_index())
    throw InputError("requested " + std::to_string(J) + " eigenvalues but the sequence has " +
                     std::to_string(max_index()));
  std::vector<double> out;
  out.reserve(J);
  switch (source_) {
    case SpectrumSource::HarmonicOscillator:
      ho_values(meta_.n, J, [&](long long v) { out.push_back(static_cast<double>(v)); });
      break;
    case SpectrumSource::Table:
      out.assign(table_.begin(), table_.begin() + static_cast<std::ptrdiff_t>(J));
      break;
    case SpectrumSource::Formula:
      for (std::size_t j = 1; j <= J; ++j) {
        if (*formula_ == FormulaKind::Power)
          out.push_back(coef_ * std::pow(static_cast<double>(j), power_));
        else
          out.push_back(std::ldexp(1.0, 1 << j));
      }
      break;
  }
  return out;
}

std::optional<std::vector<Rational>> EigenvalueProvider::enumerate_exact(std::size_t J) const {
  if (J > max_index()) return std::nullopt;
  std::vector<Rational> out;
  out.reserve(J);
  switch (source_) {
    case SpectrumSource::HarmonicOscillator:
      ho_values(meta_.n, J, [&](long long v) { out.emplace_back(v); });
      return out;
    case SpectrumSource::Table:
      for (std::size_t j = 0; j < J; ++j) {
        auto q = exact_dyadic(table_[j]);
        if (!q) return std::nullopt;
        out.push_back(*q);
      }
      return out;
    case SpectrumSource::Formula:
      if (*formula_ == FormulaKind::DoubleExponential) {
        for (std::size_t j = 1; j <= J; ++j) out.emplace_back(BigInt(1) << (1u << j));
        return out;
      }
      {
        auto c = exact_dyadic(coef_);
        if (!c || power_ != std::floor(power_)) return std::nullopt;
        for (std::size_t j = 1; j <= J; ++j)
          out.push_back(*c * Rational(boost::multiprecision::pow(BigInt(j), static_cast<unsigned>(power_))));
      }
      return out;
  }
  return std::nullopt;
}

bool EigenvalueProvider::weyl_consistent(std::size_t J, double rel_tol) const {
  if (J < 32 || J > max_index()) return false;
  try {
    WeylFit f = fit_weyl_exponent(*this, J);
    double target = meta_.weyl_exponent();
    return std::abs(f.exponent - target) <= rel_tol * target;
  } catch (const InputError&) {
    return false;
  }
}

std::string EigenvalueProvider::describe() const {
  std::ostringstream os;
  switch (source_) {
    case SpectrumSource::HarmonicOscillator:
      os << "harmonic_oscillator(n=" << meta_.n << ")";
      break;
    case SpectrumSource::Table:
      os << "table(" << table_.size() << " values)";
      break;
    case SpectrumSource::Formula:
      if (*formula_ == FormulaKind::Power)
        os << "power(coef=" << coef_ << ", power=" << power_ << ")";
      else
        os << "double_exponential(length=" << length_ << ")";
      break;
  }
  return os.str();
}

WeylFit fit_weyl_exponent(const EigenvalueProvider& provider, std::size_t J) {
  if (J < 32) throw InputError("Weyl fit needs J >= 32");
  std::vector<double> lam = provider.enumerate(J);
  const std::size_t lo = J / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double cnt = 0;
  for (std::size_t j = lo; j <= J; ++j) {
    double v = std::abs(lam[j - 1]);
    if (v == 0) throw InputError("zero eigenvalue at index " + std::to_string(j) + " in the fit window");
    double x = std::log(static_cast<double>(j));
    double y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    cnt += 1;
  }
  double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  double intercept = (sy - slope * sx) / cnt;
  return {slope, std::exp(intercept)};
}

std::vector<double> load_eigenvalue_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open eigenvalue table '" + path + "'");
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> out;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::string trimmed = line.substr(line.find_first_not_of(" \t"));
    trimmed = trimmed.substr(0, trimmed.find_last_not_of(" \t") + 1);
    if (!header) {
      if (trimmed != "lambda")
        throw InputError(path + ":" + std::to_string(lineno) + ": expected header 'lambda'");
      header = true;
      continue;
    }
    std::istringstream is(trimmed);
    is.imbue(std::locale::classic());
    double v;
    if (!(is >> v) || !(is >> std::ws).eof())
      throw InputError(path + ":" + std::to_string(lineno) + ": not a number: '" + trimmed + "'");
    out.push_back(v);
  }
  if (!header) throw InputError(path + ": empty eigenvalue table");
  return out;
}

}  // namespace hypo
