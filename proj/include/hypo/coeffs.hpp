// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hypo/numeric.hpp"
#include "hypo/torus.hpp"

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hypo {

struct FieldContext {
  double mu = 0.5;
  int n = 1;

  // j^{1/(2 n mu)}
  double mode_weight(std::size_t j) const { return std::pow(static_cast<double>(j), 1.0 / (2.0 * n * mu)); }
};

// Dense box of Fourier coefficients for one mode, row-major with the last
// axis fastest. A zero-dimensional block holds a single value.
struct ModeBlock {
  std::vector<long> lo;
  std::vector<long> ext;
  std::vector<cplx> data;

  ModeBlock() : data(1, cplx(0)) {}
  ModeBlock(std::vector<long> lo_, std::vector<long> ext_);

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const std::vector<long>& tau) const;
  std::size_t offset(const std::vector<long>& tau) const;
  std::vector<long> index(std::size_t off) const;
  cplx at(const std::vector<long>& tau) const { return contains(tau) ? data[offset(tau)] : cplx(0); }

  double max_abs() const;
  double l1_norm() const;
  // Shrinks to the bounding box of entries with |v| > abs_tol (others zeroed).
  ModeBlock trimmed(double abs_tol = 0.0) const;
  bool empty() const;
};

// Values on a uniform grid, sizes N[d] per axis (row-major) -> coefficients.
ModeBlock project_grid(const std::vector<cplx>& values, const std::vector<std::size_t>& N, double drop_rel = 0.0);
// Evaluates the block on a uniform grid; each N[d] must be >= ext[d].
std::vector<cplx> sample_block(const ModeBlock& b, const std::vector<std::size_t>& N);
// sup over t on a 4x oversampled grid (less oversampling on big blocks, the l1 bound beyond 2^22 points).
double block_sup(const ModeBlock& b);
// Multiplies by a function of t_axis given by its coefficients (exact convolution).
ModeBlock convolve_axis(const ModeBlock& b, int axis, const TrigSeries& s);
// Outer product of one-variable series.
ModeBlock outer_product(const std::vector<TrigSeries>& factors);
ModeBlock from_series(const TrigSeries& s);
TrigSeries to_series(const ModeBlock& b);  // 1-D blocks only
ModeBlock add_blocks(const ModeBlock& a, const ModeBlock& b, cplx scale_b = 1.0);
// d/dt_axis applied order times: multiply by (i tau_axis)^order.
ModeBlock differentiate_axis(const ModeBlock& b, int axis, int order = 1);

// Truncated double-indexed field a(tau, j), tau in Z^m, j >= 1.
class CoefficientField {
 public:
  explicit CoefficientField(int m, FieldContext ctx = {}, long tau_bound = 1L << 40,
                            std::size_t mode_bound = std::numeric_limits<std::size_t>::max());

  int dim() const { return m_; }
  long tau_bound() const { return T_; }
  std::size_t mode_bound() const { return J_; }
  const FieldContext& context() const { return ctx_; }

  cplx get(const std::vector<long>& tau, std::size_t j) const;
  void set(const std::vector<long>& tau, std::size_t j, cplx v);
  void add(const std::vector<long>& tau, std::size_t j, cplx v);

  const ModeBlock* block(std::size_t j) const;
  void set_block(std::size_t j, ModeBlock b);
  void erase_mode(std::size_t j) { blocks_.erase(j); }
  const std::map<std::size_t, ModeBlock>& blocks() const { return blocks_; }
  std::vector<std::size_t> modes() const;

  std::size_t nonzero_count() const;
  double max_abs() const;
  bool is_zero() const { return nonzero_count() == 0; }

  // Visits nonzero entries in (j, tau-lexicographic) order.
  template <class F>
  void for_each_nonzero(F f) const {
    for (const auto& [j, b] : blocks_)
      for (std::size_t off = 0; off < b.data.size(); ++off)
        if (b.data[off] != cplx(0)) f(b.index(off), j, b.data[off]);
  }

  using Key = std::pair<std::size_t, std::vector<long>>;
  std::map<Key, cplx> entries() const;

  CoefficientField scaled(cplx s) const;

 private:
  void check_index(const std::vector<long>& tau, std::size_t j) const;
  ModeBlock& grow_to(std::size_t j, const std::vector<long>& tau);

  int m_;
  FieldContext ctx_;
  long T_;
  std::size_t J_;
  std::map<std::size_t, ModeBlock> blocks_;
};

bool operator==(const CoefficientField& a, const CoefficientField& b);

enum class DecayClass { FmuMember, DualOnly, Indeterminate };
const char* to_string(DecayClass c);

struct DecayOptions {
  double eps_min = 1e-3;
  double residual_cap = 0.5;
  double floor_rel = 1e-14;
};

struct DecayProfile {
  double eps_hat = 0;
  double C_hat = 0;
  double sigma_used = 0;
  DecayClass cls = DecayClass::Indeterminate;
  double fit_residual = 0;
  // the two directional fits behind eps_hat
  double eps_mode = 0;
  double eps_tau = 0;
  std::size_t points_mode = 0;
  std::size_t points_tau = 0;
  bool finite_support = false;
};

// Default grid {1.1, 1.25, 1.5, 2, 3, 4, M mu, 2 M mu}.
std::vector<double> default_sigma_grid(int M, double mu);

DecayProfile classify_field(const CoefficientField& field, const std::vector<double>& sigma_grid,
                            const DecayOptions& opt = {});

// Partial Fourier data: for each (j, eta in Z^q) a trig polynomial in the
// first p torus variables.
struct PartialField {
  int p = 0;
  int q = 0;
  FieldContext ctx;
  std::map<std::pair<std::size_t, std::vector<long>>, ModeBlock> slices;
};

PartialField to_partial(const CoefficientField& field, int p);
CoefficientField from_partial(const PartialField& pf, long tau_bound = 1L << 40);

struct PartialDecayReport {
  bool pass = true;
  double eps_mode = 0;
  double eps_eta = 0;
  double sigma = 0;
  double C_derivative = 0;  // fitted C in sup|d^alpha a| <= C^{|alpha|} (alpha!)^sigma sup|a|
  std::size_t slices = 0;
};

PartialDecayReport check_partial_decay(const PartialField& pf, const std::vector<int>& derivative_orders,
                                       const std::vector<double>& sigma_grid = {}, const DecayOptions& opt = {});

// CSV with header tau_1..tau_m,j,re,im; nonzero entries only.
void write_field_csv(std::ostream& os, const CoefficientField& field);
void write_field_csv(const std::string& path, const CoefficientField& field);
CoefficientField read_field_csv(std::istream& is, FieldContext ctx = {}, const std::string& name = "<stream>");
CoefficientField read_field_csv(const std::string& path, FieldContext ctx = {});

}  // namespace hypo
