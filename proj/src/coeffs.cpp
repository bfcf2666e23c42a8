// SPDX-License-Identifier: Apache-2.0
#include "hypo/coeffs.hpp"

#include "hypo/fit.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace hypo {

// ---------------------------------------------------------------- ModeBlock

ModeBlock::ModeBlock(std::vector<long> lo_, std::vector<long> ext_) : lo(std::move(lo_)), ext(std::move(ext_)) {
  if (lo.size() != ext.size()) throw std::invalid_argument("block corner and extent differ in rank");
  std::size_t n = 1;
  for (long e : ext) {
    if (e < 1) throw std::invalid_argument("block extent must be positive");
    n *= static_cast<std::size_t>(e);
  }
  data.assign(n, cplx(0));
}

bool ModeBlock::contains(const std::vector<long>& tau) const {
  if (tau.size() != lo.size()) return false;
  for (std::size_t d = 0; d < lo.size(); ++d)
    if (tau[d] < lo[d] || tau[d] >= lo[d] + ext[d]) return false;
  return true;
}

std::size_t ModeBlock::offset(const std::vector<long>& tau) const {
  std::size_t off = 0;
  for (std::size_t d = 0; d < lo.size(); ++d) off = off * static_cast<std::size_t>(ext[d]) + static_cast<std::size_t>(tau[d] - lo[d]);
  return off;
}

std::vector<long> ModeBlock::index(std::size_t off) const {
  std::vector<long> tau(lo.size());
  for (std::size_t d = lo.size(); d-- > 0;) {
    auto e = static_cast<std::size_t>(ext[d]);
    tau[d] = lo[d] + static_cast<long>(off % e);
    off /= e;
  }
  return tau;
}

double ModeBlock::max_abs() const {
  double m = 0;
  for (const auto& v : data) m = std::max(m, std::abs(v));
  return m;
}

double ModeBlock::l1_norm() const {
  double s = 0;
  for (const auto& v : data) s += std::abs(v);
  return s;
}

bool ModeBlock::empty() const {
  return std::all_of(data.begin(), data.end(), [](cplx v) { return v == cplx(0); });
}

ModeBlock ModeBlock::trimmed(double abs_tol) const {
  const std::size_t m = lo.size();
  std::vector<long> mn(m, 0), mx(m, 0);
  bool any = false;
  for (std::size_t off = 0; off < data.size(); ++off) {
    if (!(std::abs(data[off]) > abs_tol)) continue;
    auto t = index(off);
    if (!any) {
      mn = mx = t;
      any = true;
    } else {
      for (std::size_t d = 0; d < m; ++d) {
        mn[d] = std::min(mn[d], t[d]);
        mx[d] = std::max(mx[d], t[d]);
      }
    }
  }
  if (!any) return ModeBlock(std::vector<long>(m, 0), std::vector<long>(m, 1));
  std::vector<long> e(m);
  for (std::size_t d = 0; d < m; ++d) e[d] = mx[d] - mn[d] + 1;
  ModeBlock out(mn, e);
  for (std::size_t off = 0; off < out.data.size(); ++off) {
    cplx v = at(out.index(off));
    out.data[off] = std::abs(v) > abs_tol ? v : cplx(0);
  }
  return out;
}

namespace {

// Applies fn to every 1-D line along `axis` of a row-major array.
template <class Fn>
void for_each_line(std::vector<cplx>& a, const std::vector<std::size_t>& shape, std::size_t axis, Fn fn) {
  std::size_t inner = 1;
  for (std::size_t d = axis + 1; d < shape.size(); ++d) inner *= shape[d];
  const std::size_t len = shape[axis];
  const std::size_t outer = a.size() / (inner * len);
  std::vector<cplx> line(len);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < inner; ++i) {
      std::size_t base = o * len * inner + i;
      for (std::size_t k = 0; k < len; ++k) line[k] = a[base + k * inner];
      fn(line);
      for (std::size_t k = 0; k < len; ++k) a[base + k * inner] = line[k];
    }
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

ModeBlock project_grid(const std::vector<cplx>& values, const std::vector<std::size_t>& N, double drop_rel) {
  std::size_t total = 1;
  for (auto n : N) total *= n;
  if (total != values.size()) throw std::invalid_argument("grid shape does not match the sample count");
  std::vector<cplx> a = values;
  for (std::size_t d = 0; d < N.size(); ++d) for_each_line(a, N, d, [](std::vector<cplx>& l) { fft_forward(l); });
  const double inv = 1.0 / static_cast<double>(total);
  const std::size_t m = N.size();
  std::vector<long> K(m), lo(m), ext(m);
  for (std::size_t d = 0; d < m; ++d) {
    // the Nyquist index is dropped on even grids
    K[d] = N[d] % 2 == 0 ? static_cast<long>(N[d] / 2) - 1 : static_cast<long>(N[d] / 2);
    lo[d] = -K[d];
    ext[d] = 2 * K[d] + 1;
  }
  ModeBlock out(lo, ext);
  for (std::size_t off = 0; off < out.data.size(); ++off) {
    auto tau = out.index(off);
    std::size_t src = 0;
    for (std::size_t d = 0; d < m; ++d) {
      long n = static_cast<long>(N[d]);
      src = src * N[d] + static_cast<std::size_t>(((tau[d] % n) + n) % n);
    }
    out.data[off] = a[src] * inv;
  }
  if (drop_rel > 0) return out.trimmed(drop_rel * out.max_abs());
  return out;
}

std::vector<cplx> sample_block(const ModeBlock& b, const std::vector<std::size_t>& N) {
  const std::size_t m = b.lo.size();
  if (N.size() != m) throw std::invalid_argument("grid rank does not match the block");
  std::size_t total = 1;
  for (std::size_t d = 0; d < m; ++d) {
    if (N[d] < static_cast<std::size_t>(b.ext[d])) throw std::invalid_argument("grid too coarse for the block");
    total *= N[d];
  }
  std::vector<cplx> a(total);
  for (std::size_t off = 0; off < b.data.size(); ++off) {
    if (b.data[off] == cplx(0)) continue;
    auto tau = b.index(off);
    std::size_t dst = 0;
    for (std::size_t d = 0; d < m; ++d) {
      long n = static_cast<long>(N[d]);
      dst = dst * N[d] + static_cast<std::size_t>(((tau[d] % n) + n) % n);
    }
    a[dst] += b.data[off];
  }
  for (std::size_t d = 0; d < m; ++d) for_each_line(a, N, d, [](std::vector<cplx>& l) { fft_inverse(l); });
  return a;
}

double block_sup(const ModeBlock& b) {
  const std::size_t m = b.lo.size();
  if (m == 0) return std::abs(b.data[0]);
  for (std::size_t over : {4, 2, 1}) {
    std::vector<std::size_t> N(m);
    std::size_t total = 1;
    for (std::size_t d = 0; d < m; ++d) {
      N[d] = std::max<std::size_t>(8, next_pow2(over * static_cast<std::size_t>(b.ext[d])));
      total *= N[d];
    }
    if (total > (std::size_t(1) << 22)) continue;
    double s = 0;
    for (const auto& v : sample_block(b, N)) s = std::max(s, std::abs(v));
    return s;
  }
  return b.l1_norm();
}

ModeBlock convolve_axis(const ModeBlock& b, int axis, const TrigSeries& s) {
  const auto ax = static_cast<std::size_t>(axis);
  if (ax >= b.lo.size()) throw std::invalid_argument("convolution axis out of range");
  const long K = s.degree();
  std::vector<long> lo = b.lo, ext = b.ext;
  lo[ax] -= K;
  ext[ax] += 2 * K;
  ModeBlock out(lo, ext);
  std::vector<std::size_t> in_shape(b.ext.begin(), b.ext.end()), out_shape(ext.begin(), ext.end());
  std::size_t inner = 1;
  for (std::size_t d = ax + 1; d < in_shape.size(); ++d) inner *= in_shape[d];
  const std::size_t len_in = in_shape[ax], len_out = out_shape[ax];
  const std::size_t outer = b.data.size() / (inner * len_in);
  const auto& c = s.centered();
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < inner; ++i) {
      std::size_t bin = o * len_in * inner + i, bout = o * len_out * inner + i;
      for (std::size_t k = 0; k < len_in; ++k) {
        cplx x = b.data[bin + k * inner];
        if (x == cplx(0)) continue;
        for (std::size_t q = 0; q < c.size(); ++q)
          if (c[q] != cplx(0)) out.data[bout + (k + q) * inner] += x * c[q];
      }
    }
  return out;
}

ModeBlock outer_product(const std::vector<TrigSeries>& factors) {
  std::vector<long> lo, ext;
  for (const auto& f : factors) {
    lo.push_back(-f.degree());
    ext.push_back(2L * f.degree() + 1);
  }
  ModeBlock out(lo, ext);
  for (std::size_t off = 0; off < out.data.size(); ++off) {
    auto tau = out.index(off);
    cplx v = 1;
    for (std::size_t d = 0; d < factors.size() && v != cplx(0); ++d) v *= factors[d].coeff(tau[d]);
    out.data[off] = v;
  }
  return out;
}

ModeBlock from_series(const TrigSeries& s) { return outer_product({s}); }

TrigSeries to_series(const ModeBlock& b) {
  if (b.lo.size() != 1) throw std::invalid_argument("to_series needs a one-variable block");
  long K = std::max(std::labs(b.lo[0]), std::labs(b.lo[0] + b.ext[0] - 1));
  std::vector<cplx> c(static_cast<std::size_t>(2 * K + 1));
  for (long k = 0; k < b.ext[0]; ++k) c[static_cast<std::size_t>(b.lo[0] + k + K)] = b.data[static_cast<std::size_t>(k)];
  return TrigSeries(std::move(c));
}

ModeBlock add_blocks(const ModeBlock& a, const ModeBlock& b, cplx scale_b) {
  if (a.lo.size() != b.lo.size()) throw std::invalid_argument("block ranks differ");
  const std::size_t m = a.lo.size();
  std::vector<long> lo(m), ext(m);
  for (std::size_t d = 0; d < m; ++d) {
    lo[d] = std::min(a.lo[d], b.lo[d]);
    long hi = std::max(a.lo[d] + a.ext[d], b.lo[d] + b.ext[d]);
    ext[d] = hi - lo[d];
  }
  ModeBlock out(lo, ext);
  for (std::size_t off = 0; off < a.data.size(); ++off) out.data[out.offset(a.index(off))] += a.data[off];
  for (std::size_t off = 0; off < b.data.size(); ++off) out.data[out.offset(b.index(off))] += scale_b * b.data[off];
  return out;
}

ModeBlock differentiate_axis(const ModeBlock& b, int axis, int order) {
  ModeBlock out = b;
  const auto ax = static_cast<std::size_t>(axis);
  for (std::size_t off = 0; off < out.data.size(); ++off) {
    long tau = out.index(off)[ax];
    cplx f = tau == 0 ? cplx(order == 0 ? 1 : 0) : std::pow(cplx(0, static_cast<double>(tau)), order);
    out.data[off] *= f;
  }
  return out;
}

// --------------------------------------------------------- CoefficientField

CoefficientField::CoefficientField(int m, FieldContext ctx, long tau_bound, std::size_t mode_bound)
    : m_(m), ctx_(ctx), T_(tau_bound), J_(mode_bound) {
  if (m < 1) throw InputError("torus dimension must be >= 1");
  if (tau_bound < 0) throw InputError("tau bound must be nonnegative");
  if (!(ctx.mu >= 0.5)) throw InputError("mu must be >= 1/2");
  if (ctx.n < 1) throw InputError("space dimension must be >= 1");
}

void CoefficientField::check_index(const std::vector<long>& tau, std::size_t j) const {
  if (static_cast<int>(tau.size()) != m_) throw InputError("tau has the wrong number of components");
  if (j < 1 || j > J_) throw InputError("mode index " + std::to_string(j) + " out of range");
  for (long t : tau)
    if (std::labs(t) > T_) throw InputError("tau component " + std::to_string(t) + " exceeds the truncation");
}

cplx CoefficientField::get(const std::vector<long>& tau, std::size_t j) const {
  auto it = blocks_.find(j);
  return it == blocks_.end() ? cplx(0) : it->second.at(tau);
}

ModeBlock& CoefficientField::grow_to(std::size_t j, const std::vector<long>& tau) {
  auto it = blocks_.find(j);
  if (it == blocks_.end()) return blocks_.emplace(j, ModeBlock(tau, std::vector<long>(tau.size(), 1))).first->second;
  ModeBlock& b = it->second;
  if (b.contains(tau)) return b;
  std::vector<long> lo = b.lo, ext = b.ext;
  for (std::size_t d = 0; d < tau.size(); ++d) {
    long hi = b.lo[d] + b.ext[d] - 1;
    // grow geometrically so repeated inserts stay amortized linear
    if (tau[d] < lo[d]) lo[d] = std::max(-T_, std::min(tau[d], b.lo[d] - b.ext[d]));
    if (tau[d] > hi) hi = std::min(T_, std::max(tau[d], hi + b.ext[d]));
    ext[d] = hi - lo[d] + 1;
  }
  ModeBlock nb(lo, ext);
  for (std::size_t off = 0; off < b.data.size(); ++off)
    if (b.data[off] != cplx(0)) nb.data[nb.offset(b.index(off))] = b.data[off];
  b = std::move(nb);
  return b;
}

void CoefficientField::set(const std::vector<long>& tau, std::size_t j, cplx v) {
  check_index(tau, j);
  auto it = blocks_.find(j);
  if (v == cplx(0) && (it == blocks_.end() || !it->second.contains(tau))) return;
  ModeBlock& b = grow_to(j, tau);
  b.data[b.offset(tau)] = v;
}

void CoefficientField::add(const std::vector<long>& tau, std::size_t j, cplx v) {
  if (v == cplx(0)) return;
  check_index(tau, j);
  ModeBlock& b = grow_to(j, tau);
  b.data[b.offset(tau)] += v;
}

const ModeBlock* CoefficientField::block(std::size_t j) const {
  auto it = blocks_.find(j);
  return it == blocks_.end() ? nullptr : &it->second;
}

void CoefficientField::set_block(std::size_t j, ModeBlock b) {
  if (b.dim() != m_) throw InputError("block rank does not match the field");
  if (j < 1 || j > J_) throw InputError("mode index " + std::to_string(j) + " out of range");
  if (b.empty()) {
    blocks_.erase(j);
    return;
  }
  for (int d = 0; d < m_; ++d)
    if (b.lo[static_cast<std::size_t>(d)] < -T_ || b.lo[static_cast<std::size_t>(d)] + b.ext[static_cast<std::size_t>(d)] - 1 > T_) {
      b = b.trimmed();
      for (int e = 0; e < m_; ++e)
        if (b.lo[static_cast<std::size_t>(e)] < -T_ || b.lo[static_cast<std::size_t>(e)] + b.ext[static_cast<std::size_t>(e)] - 1 > T_)
          throw InputError("block exceeds the tau truncation");
      break;
    }
  blocks_[j] = std::move(b);
}

std::vector<std::size_t> CoefficientField::modes() const {
  std::vector<std::size_t> out;
  for (const auto& [j, b] : blocks_)
    if (!b.empty()) out.push_back(j);
  return out;
}

std::size_t CoefficientField::nonzero_count() const {
  std::size_t n = 0;
  for (const auto& [j, b] : blocks_)
    n += static_cast<std::size_t>(std::count_if(b.data.begin(), b.data.end(), [](cplx v) { return v != cplx(0); }));
  return n;
}

double CoefficientField::max_abs() const {
  double m = 0;
  for (const auto& [j, b] : blocks_) m = std::max(m, b.max_abs());
  return m;
}

std::map<CoefficientField::Key, cplx> CoefficientField::entries() const {
  std::map<Key, cplx> out;
  for_each_nonzero([&](const std::vector<long>& tau, std::size_t j, cplx v) { out.emplace(Key{j, tau}, v); });
  return out;
}

CoefficientField CoefficientField::scaled(cplx s) const {
  CoefficientField out = *this;
  for (auto& [j, b] : out.blocks_)
    for (auto& v : b.data) v *= s;
  return out;
}

bool operator==(const CoefficientField& a, const CoefficientField& b) {
  return a.dim() == b.dim() && a.entries() == b.entries();
}

// ------------------------------------------------------------ decay fits

const char* to_string(DecayClass c) {
  switch (c) {
    case DecayClass::FmuMember: return "FmuMember";
    case DecayClass::DualOnly: return "DualOnly";
    case DecayClass::Indeterminate: return "Indeterminate";
  }
  return "?";
}

std::vector<double> default_sigma_grid(int M, double mu) {
  std::vector<double> g{1.1, 1.25, 1.5, 2.0, 3.0, 4.0, M * mu, 2.0 * M * mu};
  g.erase(std::remove_if(g.begin(), g.end(), [](double s) { return !(s > 1.0); }), g.end());
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end(), [](double x, double y) { return std::abs(x - y) < 1e-12; }), g.end());
  return g;
}

namespace {

struct DirectionFit {
  bool constrained = false;  // at least three distinct points
  bool decisive = true;
  double eps = 0;
  double residual = 0;
  double sigma = 0;
  std::size_t points = 0;
};

// A fit is indecisive when the scatter is large and the fitted trend does
// not clearly exceed it.
bool decisive_fit(const LineFit& f, double span, const DecayOptions& opt) {
  if (f.residual <= opt.residual_cap) return true;
  return std::abs(f.eps) * span >= 4.0 * f.residual;
}

double span_of(const std::vector<double>& x) {
  if (x.empty()) return 0;
  auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return *hi - *lo;
}

DirectionFit fit_mode_direction(const std::vector<std::pair<double, double>>& pts, const DecayOptions& opt) {
  DirectionFit out;
  out.points = pts.size();
  if (pts.size() < 3) return out;
  std::vector<double> x, y;
  for (auto [a, b] : pts) {
    x.push_back(a);
    y.push_back(b);
  }
  LineFit f = fit_decay_line(x, y);
  out.constrained = true;
  out.eps = f.eps;
  out.residual = f.residual;
  out.decisive = decisive_fit(f, span_of(x), opt);
  return out;
}

DirectionFit fit_shell_direction(const std::map<long, double>& shell_log, const std::vector<double>& grid,
                                 const DecayOptions& opt) {
  DirectionFit out;
  out.points = shell_log.size();
  out.sigma = grid.front();
  if (shell_log.size() < 3) return out;
  std::vector<std::pair<double, double>> pts(shell_log.begin(), shell_log.end());
  SigmaFit sf = fit_over_sigma(pts, grid);
  std::vector<double> x;
  for (auto [k, v] : pts) x.push_back(std::pow(k, 1.0 / sf.sigma));
  out.constrained = true;
  out.eps = sf.line.eps;
  out.residual = sf.line.residual;
  out.sigma = sf.sigma;
  out.decisive = decisive_fit(sf.line, span_of(x), opt);
  return out;
}

struct Combined {
  double eps = 0;
  double residual = 0;
  double sigma = 0;
  DecayClass cls = DecayClass::Indeterminate;
  bool finite = false;
};

Combined combine(const DirectionFit& mode, const DirectionFit& shell, const DecayOptions& opt) {
  Combined c;
  c.sigma = shell.sigma;
  if (!mode.constrained && !shell.constrained) {
    c.finite = true;
    c.eps = 1.0;
    c.cls = DecayClass::FmuMember;
    return c;
  }
  const DirectionFit* bind = nullptr;
  for (const DirectionFit* d : {&mode, &shell})
    if (d->constrained && (!bind || d->eps < bind->eps)) bind = d;
  c.eps = bind->eps;
  c.residual = bind->residual;
  if (!bind->decisive) {
    c.cls = DecayClass::Indeterminate;
  } else if (bind->eps >= opt.eps_min) {
    bool all = (!mode.constrained || mode.decisive) && (!shell.constrained || shell.decisive);
    c.cls = all ? DecayClass::FmuMember : DecayClass::Indeterminate;
  } else if (bind->eps > -opt.eps_min) {
    c.cls = DecayClass::DualOnly;
  } else {
    c.cls = DecayClass::Indeterminate;  // exponential growth
  }
  return c;
}

long shell_of(const std::vector<long>& tau) {
  long k = 0;
  for (long t : tau) k = std::max(k, std::labs(t));
  return k;
}

}  // namespace

DecayProfile classify_field(const CoefficientField& field, const std::vector<double>& sigma_grid,
                            const DecayOptions& opt) {
  const double top = field.max_abs();
  if (top == 0) throw InputError("cannot classify an all-zero field");
  const double floor = opt.floor_rel * top;
  std::vector<double> grid = sigma_grid.empty() ? default_sigma_grid(2, field.context().mu) : sigma_grid;
  std::sort(grid.begin(), grid.end());

  // per-mode sup over t, computed in parallel and merged by mode order
  std::vector<std::pair<std::size_t, const ModeBlock*>> blocks;
  for (const auto& [j, b] : field.blocks()) blocks.emplace_back(j, &b);
  std::vector<double> sup(blocks.size(), 0.0);
  parallel_for(blocks.size(), [&](std::size_t i) {
    ModeBlock b = *blocks[i].second;
    for (auto& v : b.data)
      if (!(std::abs(v) > floor)) v = 0;
    sup[i] = block_sup(b);
  });
  std::vector<std::pair<double, double>> mode_pts;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (sup[i] > floor) mode_pts.emplace_back(field.context().mode_weight(blocks[i].first), std::log(sup[i]));

  std::map<long, double> shell;
  field.for_each_nonzero([&](const std::vector<long>& tau, std::size_t, cplx v) {
    double a = std::abs(v);
    if (!(a > floor)) return;
    auto [it, fresh] = shell.emplace(shell_of(tau), a);
    if (!fresh) it->second = std::max(it->second, a);
  });
  std::map<long, double> shell_log;
  for (auto [k, a] : shell) shell_log[k] = std::log(a);

  DirectionFit mf = fit_mode_direction(mode_pts, opt);
  DirectionFit sf = fit_shell_direction(shell_log, grid, opt);
  Combined c = combine(mf, sf, opt);

  DecayProfile out;
  out.eps_hat = c.eps;
  out.sigma_used = c.sigma;
  out.cls = c.cls;
  out.fit_residual = c.residual;
  out.eps_mode = mf.constrained ? mf.eps : 0.0;
  out.eps_tau = sf.constrained ? sf.eps : 0.0;
  out.points_mode = mf.points;
  out.points_tau = sf.points;
  out.finite_support = c.finite;

  double logC = -1e300;
  field.for_each_nonzero([&](const std::vector<long>& tau, std::size_t j, cplx v) {
    double a = std::abs(v);
    if (!(a > floor)) return;
    double w = std::pow(static_cast<double>(shell_of(tau)), 1.0 / out.sigma_used) + field.context().mode_weight(j);
    logC = std::max(logC, std::log(a) + out.eps_hat * w);
  });
  out.C_hat = std::exp(std::min(logC, 700.0));
  return out;
}

// --------------------------------------------------------- partial fields

PartialField to_partial(const CoefficientField& field, int p) {
  const int m = field.dim();
  if (p < 0 || p > m) throw InputError("split must satisfy 0 <= p <= m");
  PartialField pf;
  pf.p = p;
  pf.q = m - p;
  pf.ctx = field.context();
  std::map<std::pair<std::size_t, std::vector<long>>, std::vector<std::pair<std::vector<long>, cplx>>> groups;
  field.for_each_nonzero([&](const std::vector<long>& tau, std::size_t j, cplx v) {
    std::vector<long> head(tau.begin(), tau.begin() + p), tail(tau.begin() + p, tau.end());
    groups[{j, tail}].emplace_back(std::move(head), v);
  });
  for (auto& [key, items] : groups) {
    std::vector<long> mn(static_cast<std::size_t>(p)), mx(static_cast<std::size_t>(p));
    for (std::size_t d = 0; d < static_cast<std::size_t>(p); ++d) {
      mn[d] = mx[d] = items.front().first[d];
      for (const auto& it : items) {
        mn[d] = std::min(mn[d], it.first[d]);
        mx[d] = std::max(mx[d], it.first[d]);
      }
    }
    std::vector<long> ext(static_cast<std::size_t>(p));
    for (std::size_t d = 0; d < ext.size(); ++d) ext[d] = mx[d] - mn[d] + 1;
    ModeBlock b(mn, ext);
    for (const auto& it : items) b.data[b.offset(it.first)] = it.second;
    pf.slices.emplace(key, std::move(b));
  }
  return pf;
}

CoefficientField from_partial(const PartialField& pf, long tau_bound) {
  CoefficientField out(pf.p + pf.q, pf.ctx, tau_bound);
  for (const auto& [key, b] : pf.slices) {
    const auto& [j, eta] = key;
    if (b.dim() != pf.p || static_cast<int>(eta.size()) != pf.q) throw InputError("slice shape does not match the split");
    for (std::size_t off = 0; off < b.data.size(); ++off) {
      if (b.data[off] == cplx(0)) continue;
      std::vector<long> tau = b.index(off);
      tau.insert(tau.end(), eta.begin(), eta.end());
      out.set(tau, j, b.data[off]);
    }
  }
  return out;
}

PartialDecayReport check_partial_decay(const PartialField& pf, const std::vector<int>& derivative_orders,
                                       const std::vector<double>& sigma_grid, const DecayOptions& opt) {
  for (int a : derivative_orders)
    if (a < 0 || a > 4) throw InputError("derivative orders must lie in [0, 4]");
  PartialDecayReport rep;
  rep.slices = pf.slices.size();
  std::vector<double> grid = sigma_grid.empty() ? default_sigma_grid(2, pf.ctx.mu) : sigma_grid;
  std::sort(grid.begin(), grid.end());
  rep.sigma = grid.front();
  if (pf.slices.empty()) return rep;

  struct SliceSup {
    std::size_t j;
    long shell;
    double s0;
    double cder;
  };
  std::vector<const std::pair<const std::pair<std::size_t, std::vector<long>>, ModeBlock>*> items;
  for (const auto& kv : pf.slices) items.push_back(&kv);
  std::vector<SliceSup> sups(items.size());
  const double sig = grid.front();
  parallel_for(items.size(), [&](std::size_t i) {
    const auto& [key, b] = *items[i];
    SliceSup s{key.first, shell_of(key.second), block_sup(b), 0.0};
    for (int a : derivative_orders) {
      if (a == 0 || s.s0 == 0) continue;
      double fact = std::tgamma(a + 1.0);
      for (int d = 0; d < b.dim(); ++d) {
        double sa = block_sup(differentiate_axis(b, d, a));
        s.cder = std::max(s.cder, std::pow(sa / (s.s0 * std::pow(fact, sig)), 1.0 / a));
      }
    }
    sups[i] = s;
  });

  double top = 0;
  for (const auto& s : sups) top = std::max(top, s.s0);
  if (top == 0) return rep;
  const double floor = opt.floor_rel * top;
  std::map<std::size_t, double> mode_max;
  std::map<long, double> shell_max;
  for (const auto& s : sups) {
    rep.C_derivative = std::max(rep.C_derivative, s.cder);
    if (!(s.s0 > floor)) continue;
    mode_max[s.j] = std::max(mode_max[s.j], s.s0);
    shell_max[s.shell] = std::max(shell_max[s.shell], s.s0);
  }
  std::vector<std::pair<double, double>> mode_pts;
  for (auto [j, v] : mode_max) mode_pts.emplace_back(pf.ctx.mode_weight(j), std::log(v));
  std::map<long, double> shell_log;
  for (auto [k, v] : shell_max) shell_log[k] = std::log(v);
  DirectionFit mf = fit_mode_direction(mode_pts, opt);
  DirectionFit sf = fit_shell_direction(shell_log, grid, opt);
  Combined c = combine(mf, sf, opt);
  rep.eps_mode = mf.eps;
  rep.eps_eta = sf.eps;
  rep.sigma = c.sigma;
  rep.pass = c.cls == DecayClass::FmuMember;
  return rep;
}

// ------------------------------------------------------------------ CSV

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ' && ch != '\t' && ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

template <class T>
T parse_num(const std::string& s, const std::string& where) {
  std::istringstream is(s);
  is.imbue(std::locale::classic());
  T v{};
  if (s.empty() || !(is >> v) || !(is >> std::ws).eof()) throw InputError(where + ": bad number '" + s + "'");
  return v;
}

}  // namespace

void write_field_csv(std::ostream& os, const CoefficientField& field) {
  for (int d = 1; d <= field.dim(); ++d) os << "tau_" << d << ',';
  os << "j,re,im\n";
  field.for_each_nonzero([&](const std::vector<long>& tau, std::size_t j, cplx v) {
    for (long t : tau) os << t << ',';
    os << j << ',' << fmt17(v.real()) << ',' << fmt17(v.imag()) << '\n';
  });
}

void write_field_csv(const std::string& path, const CoefficientField& field) {
  std::ofstream os(path);
  if (!os) throw InputError("cannot write '" + path + "'");
  write_field_csv(os, field);
}

CoefficientField read_field_csv(std::istream& is, FieldContext ctx, const std::string& name) {
  std::string line;
  std::size_t lineno = 0;
  int m = -1;
  std::vector<std::tuple<std::vector<long>, std::size_t, cplx>> rows;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cols = split_csv(line);
    const std::string where = name + ":" + std::to_string(lineno);
    if (m < 0) {
      if (cols.size() < 4) throw InputError(where + ": expected header tau_1..tau_m,j,re,im");
      m = static_cast<int>(cols.size()) - 3;
      for (int d = 0; d < m; ++d)
        if (cols[static_cast<std::size_t>(d)] != "tau_" + std::to_string(d + 1))
          throw InputError(where + ": expected column tau_" + std::to_string(d + 1));
      if (cols[static_cast<std::size_t>(m)] != "j" || cols[static_cast<std::size_t>(m) + 1] != "re" ||
          cols[static_cast<std::size_t>(m) + 2] != "im")
        throw InputError(where + ": expected trailing columns j,re,im");
      continue;
    }
    if (static_cast<int>(cols.size()) != m + 3) throw InputError(where + ": wrong number of columns");
    std::vector<long> tau(static_cast<std::size_t>(m));
    for (int d = 0; d < m; ++d) tau[static_cast<std::size_t>(d)] = parse_num<long>(cols[static_cast<std::size_t>(d)], where);
    long j = parse_num<long>(cols[static_cast<std::size_t>(m)], where);
    if (j < 1) throw InputError(where + ": mode index must be >= 1");
    double re = parse_num<double>(cols[static_cast<std::size_t>(m) + 1], where);
    double im = parse_num<double>(cols[static_cast<std::size_t>(m) + 2], where);
    if (!std::isfinite(re) || !std::isfinite(im)) throw InputError(where + ": non-finite value");
    rows.emplace_back(std::move(tau), static_cast<std::size_t>(j), cplx(re, im));
  }
  if (m < 0) throw InputError(name + ": empty field file");
  CoefficientField out(m, ctx);
  for (auto& [tau, j, v] : rows) out.add(tau, j, v);
  return out;
}

CoefficientField read_field_csv(const std::string& path, FieldContext ctx) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open '" + path + "'");
  return read_field_csv(is, ctx, path);
}

}  // namespace hypo
