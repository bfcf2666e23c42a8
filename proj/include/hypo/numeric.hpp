// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypo {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Shared thresholds; callers may override through option structs.
inline constexpr double kZeroTol = 1e-14;
inline constexpr double kSignTol = 1e-12;
inline constexpr double kResonanceTol = 1e-12;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// In-place unnormalized DFT, forward sign e^{-2 pi i k n / N}.
void fft_forward(std::vector<cplx>& data);
void fft_inverse(std::vector<cplx>& data);

// Samples on the uniform grid t_k = 2 pi k / N mapped to Fourier coefficients
// c_tau for tau in [-N/2, N/2); the returned vector is indexed by tau + N/2.
std::vector<cplx> samples_to_coeffs(std::vector<cplx> samples);

// Worker count honoring HYPO_THREADS.
unsigned worker_count();

// Runs body(i) for i in [0, n); each index runs exactly once.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hypo
