#include "gaborfio/grid.hpp"

#include <cmath>

#include "gaborfio/error.hpp"
#include "gaborfio/fft.hpp"

namespace gaborfio {

Grid::Grid(int dim, double period, int samples) : dim_(dim), period_(period), samples_(samples) {
  if (dim != 1 && dim != 2) throw ContractError("grid dimension must be 1 or 2");
  if (!(period > 0.0) || !std::isfinite(period)) throw ContractError("grid period must be positive");
  if (samples < 8 || (samples % 2) != 0)
    throw ContractError("grid needs an even number of samples >= 8");
}

std::size_t Grid::size() const {
  std::size_t total = 1;
  for (int a = 0; a < dim_; ++a) total *= static_cast<std::size_t>(samples_);
  return total;
}

Vec Grid::point(std::size_t flat) const {
  Vec p(dim_);
  const auto n = static_cast<std::size_t>(samples_);
  for (int a = dim_ - 1; a >= 0; --a) {
    p[a] = coordinate(static_cast<int>(flat % n));
    flat /= n;
  }
  return p;
}

Vec Grid::frequency_point(std::size_t flat) const {
  Vec p(dim_);
  const auto n = static_cast<std::size_t>(samples_);
  for (int a = dim_ - 1; a >= 0; --a) {
    p[a] = frequency(static_cast<int>(flat % n));
    flat /= n;
  }
  return p;
}

bool Grid::operator==(const Grid& other) const {
  return dim_ == other.dim_ && samples_ == other.samples_ && period_ == other.period_;
}

const char* to_string(Side side) { return side == Side::time ? "time" : "frequency"; }

SampledFunction::SampledFunction(Grid g, Side s) : grid(g), side(s), values(g.size()) {}

SampledFunction::SampledFunction(Grid g, Side s, std::vector<cplx> v)
    : grid(g), side(s), values(std::move(v)) {
  if (values.size() != grid.size()) throw ContractError("sample count does not match grid");
}

double SampledFunction::l2_norm() const {
  double sum = 0.0;
  for (const auto& v : values) sum += std::norm(v);
  return std::sqrt(std::pow(spacing(), grid.dim()) * sum);
}

cplx inner_product(const SampledFunction& f, const SampledFunction& g) {
  if (!(f.grid == g.grid) || f.side != g.side) throw ContractError("inner product: grid mismatch");
  cplx sum = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) sum += f.values[i] * std::conj(g.values[i]);
  return std::pow(f.spacing(), f.grid.dim()) * sum;
}

SampledFunction fourier_transform(const SampledFunction& f) {
  if (f.side != Side::time) throw ContractError("fourier_transform expects a time-side function");
  SampledFunction out(f.grid, Side::frequency, f.values);
  fft::centered_dft(out.values, f.grid.samples(), f.grid.dim(), fft::Direction::forward);
  const double scale = std::pow(f.grid.dx(), f.grid.dim());
  for (auto& v : out.values) v *= scale;
  return out;
}

SampledFunction inverse_fourier_transform(const SampledFunction& fhat) {
  if (fhat.side != Side::frequency)
    throw ContractError("inverse_fourier_transform expects a frequency-side function");
  SampledFunction out(fhat.grid, Side::time, fhat.values);
  fft::centered_dft(out.values, fhat.grid.samples(), fhat.grid.dim(), fft::Direction::backward);
  const double scale = std::pow(fhat.grid.deta(), fhat.grid.dim());
  for (auto& v : out.values) v *= scale;
  return out;
}

int lattice_steps(double shift, double spacing) {
  const double steps = shift / spacing;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, std::abs(steps)))
    throw ContractError("shift " + detail::num(shift) + " is not a multiple of the grid spacing");
  return static_cast<int>(rounded);
}

double wrap(double value, double period) {
  double r = std::fmod(value + 0.5 * period, period);
  if (r < 0) r += period;
  return r - 0.5 * period;
}

SampledFunction translate(const SampledFunction& f, const Vec& shift) {
  const int d = f.grid.dim();
  if (shift.size() != d) throw ContractError("translate: shift dimension mismatch");
  const int n = f.grid.samples();
  int steps[2] = {0, 0};
  for (int a = 0; a < d; ++a) {
    const int s = lattice_steps(shift[a], f.spacing()) % n;
    steps[a] = s < 0 ? s + n : s;
  }
  SampledFunction out(f.grid, f.side);
  out.periodization_warning = f.periodization_warning;
  if (d == 1) {
    for (int j = 0; j < n; ++j) out.values[(j + steps[0]) % n] = f.values[j];
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.values[((i + steps[0]) % n) * n + (j + steps[1]) % n] = f.values[i * n + j];
  }
  return out;
}

SampledFunction modulate(const SampledFunction& f, const Vec& w) {
  const int d = f.grid.dim();
  if (w.size() != d) throw ContractError("modulate: frequency dimension mismatch");
  // Dual spacing of the side: 1/L on the time side, dx on the frequency side.
  const double dual = f.side == Side::time ? f.grid.deta() : f.grid.dx();
  for (int a = 0; a < d; ++a) lattice_steps(w[a], dual);
  SampledFunction out(f.grid, f.side);
  out.periodization_warning = f.periodization_warning;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const Vec t = f.side == Side::time ? f.grid.point(i) : f.grid.frequency_point(i);
    out.values[i] = std::polar(1.0, kTwoPi * w.dot(t)) * f.values[i];
  }
  return out;
}

SampledFunction gaussian(const Grid& grid, const Vec& center, double width) {
  if (!(width > 0.0)) throw ContractError("gaussian width must be positive");
  const int d = grid.dim();
  if (center.size() != d) throw ContractError("gaussian: center dimension mismatch");
  SampledFunction out(grid, Side::time);
  const double amplitude = std::pow(2.0 / (width * width), 0.25 * d);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const Vec x = grid.point(i);
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) {
      const double t = wrap(x[a] - center[a], grid.period());
      r2 += t * t;
    }
    out.values[i] = amplitude * std::exp(-kPi * r2 / (width * width));
  }
  // L2 mass of |phi_w|^2 beyond distance L/2 from the center, per axis.
  const double tail = std::erfc(std::sqrt(2.0 * kPi) * 0.5 * grid.period() / width);
  out.periodization_warning = 1.0 - std::pow(1.0 - tail, d) > 1e-6;
  return out;
}

}  // namespace gaborfio
