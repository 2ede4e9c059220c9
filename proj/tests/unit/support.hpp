#pragma once

#include <cmath>
#include <random>

#include "gaborfio/grid.hpp"

namespace gaborfio::test {

inline Vec v1(double x) { return Vec::Constant(1, x); }

inline Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

// Random function whose spectrum is supported in |eta| <= band.
inline SampledFunction random_band_limited(const Grid& grid, std::mt19937_64& rng, double band = 3.0) {
  std::normal_distribution<double> normal;
  SampledFunction fhat(grid, Side::frequency);
  for (int k = 0; k < grid.samples(); ++k)
    if (std::abs(grid.frequency(k)) <= band) fhat.values[k] = {normal(rng), normal(rng)};
  return inverse_fourier_transform(fhat);
}

inline double relative_l2(const SampledFunction& a, const SampledFunction& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    num += std::norm(a.values[i] - b.values[i]);
    den += std::norm(b.values[i]);
  }
  return std::sqrt(num / den);
}

inline double max_abs_diff(const SampledFunction& a, const SampledFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

// Trapezoid rule on [-R, R]; integrands here are Gaussian-type, so the tails
// are negligible and the rule converges spectrally.
template <typename F>
auto quadrature(F&& f, double radius = 12.0, double h = 1e-3) {
  const int steps = static_cast<int>(std::lround(2.0 * radius / h));
  decltype(f(0.0)) sum = 0.5 * (f(-radius) + f(radius));
  for (int i = 1; i < steps; ++i) sum += f(-radius + i * h);
  return sum * h;
}

}  // namespace gaborfio::test
