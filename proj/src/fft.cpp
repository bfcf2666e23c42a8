// SPDX-License-Identifier: Apache-2.0
#include "hypo/numeric.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace hypo {
namespace {

// Plans are created once per (size, sign) under a lock; execution with the
// new-array interface is thread safe.
fftw_plan plan_for(int n, int sign) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<cplx> scratch(static_cast<std::size_t>(n));
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, plan);
  return plan;
}

void run(std::vector<cplx>& data, int sign) {
  if (data.empty()) return;
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_for(static_cast<int>(data.size()), sign), p, p);
}

}  // namespace

void fft_forward(std::vector<cplx>& data) { run(data, FFTW_FORWARD); }
void fft_inverse(std::vector<cplx>& data) { run(data, FFTW_BACKWARD); }

std::vector<cplx> samples_to_coeffs(std::vector<cplx> samples) {
  const std::size_t n = samples.size();
  fft_forward(samples);
  std::vector<cplx> out(n);
  const std::size_t half = n / 2;
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    // tau = i for i < n - half, else i - n
    long tau = (i < n - half) ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
    out[static_cast<std::size_t>(tau + static_cast<long>(half))] = samples[i] * inv;
  }
  return out;
}

}  // namespace hypo
