// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

namespace hypo {

// Least-squares line y ~ log_c - eps * x.
struct LineFit {
  double eps = 0;
  double log_c = 0;
  double residual = 0;  // RMS, in log units
  std::size_t points = 0;
};

LineFit fit_decay_line(const std::vector<double>& x, const std::vector<double>& y);

struct SigmaFit {
  double sigma = 0;
  LineFit line;
};

// shells: (k >= 0, log|a|) pairs with k a shell radius. Picks sigma from the
// grid, then refines by golden section between the neighbours of the best
// grid point, minimizing the RMS residual of log|a| against -k^{1/sigma}.
SigmaFit fit_over_sigma(const std::vector<std::pair<double, double>>& shells,
                        const std::vector<double>& sigma_grid);

}  // namespace hypo
