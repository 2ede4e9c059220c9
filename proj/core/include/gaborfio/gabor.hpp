#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gaborfio/grid.hpp"

namespace gaborfio {

// Separable lattice alpha Z x beta Z truncated to the one-dimensional torus.
// Time points m_i = (i - floor(Kt/2)) alpha, frequency points
// n_k = (k - floor(Kf/2)) beta, where Kt = L/alpha and Kf = n/(L beta).
class Lattice {
 public:
  Lattice(const Grid& grid, double alpha, double beta);

  const Grid& grid() const { return grid_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  int time_step() const { return time_step_; }
  int freq_step() const { return freq_step_; }
  int time_count() const { return time_count_; }
  int freq_count() const { return freq_count_; }
  std::size_t size() const {
    return static_cast<std::size_t>(time_count_) * static_cast<std::size_t>(freq_count_);
  }

  double time_point(int i) const { return (i - time_count_ / 2) * alpha_; }
  double freq_point(int k) const { return (k - freq_count_ / 2) * beta_; }
  int time_grid_index(int i) const { return grid_.samples() / 2 + (i - time_count_ / 2) * time_step_; }
  int freq_grid_index(int k) const { return grid_.samples() / 2 + (k - freq_count_ / 2) * freq_step_; }

  std::size_t flat(int i, int k) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(freq_count_) +
           static_cast<std::size_t>(k);
  }
  int time_of(std::size_t flat) const { return static_cast<int>(flat / freq_count_); }
  int freq_of(std::size_t flat) const { return static_cast<int>(flat % freq_count_); }

  // Periods of the phase-space torus: L in time, n/L in frequency.
  double time_period() const { return grid_.period(); }
  double freq_period() const { return grid_.bandwidth(); }

  bool operator==(const Lattice& other) const;

 private:
  Grid grid_;
  double alpha_;
  double beta_;
  int time_step_;
  int freq_step_;
  int time_count_;
  int freq_count_;
};

// Coefficients c_{m,n} indexed (time index i, frequency index k); m is the row index.
struct CoefficientArray {
  Lattice lattice;
  std::vector<cplx> values;

  explicit CoefficientArray(const Lattice& l) : lattice(l), values(l.size()) {}
  cplx& operator()(int i, int k) { return values[lattice.flat(i, k)]; }
  const cplx& operator()(int i, int k) const { return values[lattice.flat(i, k)]; }
  double l2_norm() const;
};

// Full-grid STFT V_g f(x_j, eta_k); row j is the time shift, column k the frequency.
struct STFTField {
  Grid grid;
  std::vector<cplx> values;

  const cplx& at(int j, int k) const {
    return values[static_cast<std::size_t>(j) * grid.samples() + k];
  }
  // L2 norm with the phase-space measure dx * deta.
  double l2_norm() const;
};

// One STFT row: V_g f(x_j, .) over the full frequency grid, written to `row`.
void stft_row(const SampledFunction& f, const SampledFunction& g, int shift_index,
              std::span<cplx> row);

// V_g f(x_j, eta_k) = dx sum_t f(t) conj(g(t - x_j)) exp(-2 pi i eta_k t).
STFTField stft(const SampledFunction& f, const SampledFunction& g);

// g_{m,n}(t) = exp(2 pi i n t) g(t - m) for lattice indices (i, k).
SampledFunction atom(const SampledFunction& g, const Lattice& lattice, int i, int k);

// Dense n x n matrix of the frame operator S_g f = sum <f, g_{m,n}> g_{m,n}
// in the sample basis, assembled with the Walnut identity (entries vanish
// unless j = j' mod Kf).
Eigen::MatrixXcd frame_operator(const SampledFunction& g, const Lattice& lattice);

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

FrameBounds frame_bounds(const Eigen::MatrixXcd& frame_op);

// gamma = S^{-1} g by a linear solve. Throws NotAFrameError when A < 1e-10 B.
SampledFunction dual_window(const SampledFunction& g, const Lattice& lattice);
// S^{-1/2} g by Hermitian eigendecomposition; the resulting system is a Parseval frame.
SampledFunction tight_window(const SampledFunction& g, const Lattice& lattice);

// C_g f: (C_g f)_{m,n} = <f, g_{m,n}>.
CoefficientArray analyze(const SampledFunction& window, const Lattice& lattice,
                         const SampledFunction& f);
// D_g c = sum c_{m,n} g_{m,n}.
SampledFunction synthesize(const SampledFunction& window, const Lattice& lattice,
                           const CoefficientArray& c);

// Window, lattice and the derived dual and tight windows with frame bounds.
class GaborSystem {
 public:
  static GaborSystem build(const SampledFunction& g, const Lattice& lattice);

  const SampledFunction& window() const { return window_; }
  const SampledFunction& dual() const { return dual_; }
  const SampledFunction& tight() const { return tight_; }
  const Lattice& lattice() const { return lattice_; }
  FrameBounds bounds() const { return bounds_; }

 private:
  GaborSystem(SampledFunction g, Lattice lattice, SampledFunction dual, SampledFunction tight,
              FrameBounds bounds);

  SampledFunction window_;
  Lattice lattice_;
  SampledFunction dual_;
  SampledFunction tight_;
  FrameBounds bounds_;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Exponents of l^{p,q} / L^{p,q} with polynomial weight v_s(z) = <z>^s.
struct MixedNormSpec {
  double p = 2.0;
  double q = 2.0;
  double s = 0.0;

  void validate() const;
};

// (sum_n (sum_m |c_{m,n}|^p v_s(m,n)^p)^{q/p})^{1/q}; p or q = inf are maxima.
double mixed_seq_norm(const CoefficientArray& c, const MixedNormSpec& spec);

}  // namespace gaborfio
