// SPDX-License-Identifier: Apache-2.0
#include "hypo/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hypo {

LineFit fit_decay_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit out;
  const std::size_t n = x.size();
  out.points = n;
  if (n == 0) return out;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  double slope = sxx > 0 ? sxy / sxx : 0.0;
  out.eps = -slope;
  out.log_c = my - slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - (out.log_c + slope * x[i]);
    ss += r * r;
  }
  out.residual = std::sqrt(ss / static_cast<double>(n));
  return out;
}

namespace {

LineFit fit_at(const std::vector<std::pair<double, double>>& shells, double sigma) {
  std::vector<double> x, y;
  x.reserve(shells.size());
  y.reserve(shells.size());
  for (auto [k, v] : shells) {
    x.push_back(std::pow(k, 1.0 / sigma));
    y.push_back(v);
  }
  return fit_decay_line(x, y);
}

}  // namespace

SigmaFit fit_over_sigma(const std::vector<std::pair<double, double>>& shells,
                        const std::vector<double>& sigma_grid) {
  if (sigma_grid.empty()) throw std::invalid_argument("empty sigma grid");
  std::vector<double> grid = sigma_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::size_t best = 0;
  std::vector<LineFit> fits;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    fits.push_back(fit_at(shells, grid[i]));
    if (fits[i].residual < fits[best].residual - 1e-15) best = i;
  }
  SigmaFit out{grid[best], fits[best]};
  if (grid.size() < 2 || shells.size() < 3) return out;

  double lo = grid[best > 0 ? best - 1 : 0];
  double hi = grid[best + 1 < grid.size() ? best + 1 : best];
  const double g = (std::sqrt(5.0) - 1) / 2;
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  LineFit fc = fit_at(shells, c), fd = fit_at(shells, d);
  for (int it = 0; it < 60 && hi - lo > 1e-6; ++it) {
    if (fc.residual < fd.residual) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = fit_at(shells, c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = fit_at(shells, d);
    }
  }
  const SigmaFit& refined = fc.residual < fd.residual ? SigmaFit{c, fc} : SigmaFit{d, fd};
  if (refined.line.residual < out.line.residual) out = refined;
  return out;
}

}  // namespace hypo
