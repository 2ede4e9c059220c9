#pragma once

#include <cstddef>
#include <vector>

#include "gaborfio/types.hpp"

namespace gaborfio {

// Uniform periodic discretization of the torus [-L/2, L/2)^d with n samples
// per axis. Sample j sits at x_j = (j - n/2) dx, frequency k at
// eta_k = (k - n/2) / L. Multi-dimensional data is row-major with axis 0
// varying slowest.
class Grid {
 public:
  Grid(int dim, double period, int samples);

  int dim() const { return dim_; }
  double period() const { return period_; }
  int samples() const { return samples_; }
  double dx() const { return period_ / samples_; }
  double deta() const { return 1.0 / period_; }
  // Frequency period n / L (the extent of the frequency grid).
  double bandwidth() const { return samples_ / period_; }
  std::size_t size() const;

  double coordinate(int index) const { return (index - samples_ / 2) * dx(); }
  double frequency(int index) const { return (index - samples_ / 2) * deta(); }

  // Point of R^d for a flat index on the time or frequency side.
  Vec point(std::size_t flat) const;
  Vec frequency_point(std::size_t flat) const;

  bool operator==(const Grid& other) const;

 private:
  int dim_;
  double period_;
  int samples_;
};

enum class Side { time, frequency };

const char* to_string(Side side);

struct SampledFunction {
  Grid grid;
  Side side = Side::time;
  std::vector<cplx> values;
  // Set by factories when the periodization error exceeds 1e-6 of the L2 mass.
  bool periodization_warning = false;

  SampledFunction(Grid g, Side s);
  SampledFunction(Grid g, Side s, std::vector<cplx> v);

  double spacing() const { return side == Side::time ? grid.dx() : grid.deta(); }
  double l2_norm() const;
};

// <f, g> in L^2 of the grid's side (conjugate-linear in g).
cplx inner_product(const SampledFunction& f, const SampledFunction& g);

// f^(eta_k) = dx^d sum_j f(x_j) exp(-2 pi i x_j . eta_k).
SampledFunction fourier_transform(const SampledFunction& f);
SampledFunction inverse_fourier_transform(const SampledFunction& fhat);

// (T_shift f)(x) = f(x - shift), circular; shift must be a multiple of the
// side's spacing on every axis.
SampledFunction translate(const SampledFunction& f, const Vec& shift);

// (M_w f)(t) = exp(2 pi i w . t) f(t); w must lie on the dual lattice of the
// side (multiples of 1/L on the time side, of dx on the frequency side).
SampledFunction modulate(const SampledFunction& f, const Vec& w);

// L2-normalized Gaussian (2/w^2)^{d/4} exp(-pi |x - c|^2 / w^2) sampled at the
// nearest periodic image of the center. width = 1, center = 0 gives
// phi(t) = 2^{1/4} exp(-pi t^2).
SampledFunction gaussian(const Grid& grid, const Vec& center, double width);

// Integer shift (in samples) represented by `shift`, or throws ContractError.
int lattice_steps(double shift, double spacing);

// Wraps a coordinate into [-P/2, P/2).
double wrap(double value, double period);

}  // namespace gaborfio
