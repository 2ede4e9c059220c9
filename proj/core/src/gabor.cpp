#include "gaborfio/gabor.hpp"

#include <algorithm>
#include <cmath>

#include "gaborfio/error.hpp"
#include "gaborfio/fft.hpp"

namespace gaborfio {
namespace {

void require_time_side_1d(const SampledFunction& f, const char* what) {
  if (f.side != Side::time) throw ContractError(std::string(what) + ": expects a time-side function");
  if (f.grid.dim() != 1) throw ContractError(std::string(what) + ": Gabor systems are one-dimensional");
}

int positive_mod(int a, int n) {
  const int r = a % n;
  return r < 0 ? r + n : r;
}

// The Walnut pattern makes S block diagonal over residue classes j mod Kf;
// each class is an independent Hermitian block of size n / Kf.
struct BlockSpectrum {
  int classes = 0;
  int block = 0;
  std::vector<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>> solvers;
  std::vector<Eigen::LLT<Eigen::MatrixXcd>> factors;
  FrameBounds bounds;
};

BlockSpectrum block_spectrum(const Eigen::MatrixXcd& s, int classes, bool want_factor) {
  const int n = static_cast<int>(s.rows());
  BlockSpectrum out;
  out.classes = classes;
  out.block = n / classes;
  out.bounds.lower = std::numeric_limits<double>::infinity();
  out.bounds.upper = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < classes; ++r) {
    Eigen::MatrixXcd b(out.block, out.block);
    for (int u = 0; u < out.block; ++u)
      for (int v = 0; v < out.block; ++v) b(u, v) = s(r + u * classes, r + v * classes);
    out.solvers.emplace_back(b);
    const auto& ev = out.solvers.back().eigenvalues();
    out.bounds.lower = std::min(out.bounds.lower, ev.minCoeff());
    out.bounds.upper = std::max(out.bounds.upper, ev.maxCoeff());
    if (want_factor) out.factors.emplace_back(b);
  }
  return out;
}

void require_frame(const FrameBounds& b) {
  if (!(b.lower > 1e-10 * b.upper)) throw NotAFrameError(b.lower, b.upper);
}

SampledFunction dual_from(const SampledFunction& g, const BlockSpectrum& spec) {
  SampledFunction out(g.grid, Side::time);
  for (int r = 0; r < spec.classes; ++r) {
    Eigen::VectorXcd rhs(spec.block);
    for (int u = 0; u < spec.block; ++u) rhs[u] = g.values[r + u * spec.classes];
    const Eigen::VectorXcd sol = spec.factors[r].solve(rhs);
    for (int u = 0; u < spec.block; ++u) out.values[r + u * spec.classes] = sol[u];
  }
  return out;
}

SampledFunction inverse_sqrt_from(const SampledFunction& g, const BlockSpectrum& spec) {
  SampledFunction out(g.grid, Side::time);
  const double floor = 1e-12 * spec.bounds.upper;
  for (int r = 0; r < spec.classes; ++r) {
    const auto& es = spec.solvers[r];
    Eigen::VectorXcd v(spec.block);
    for (int u = 0; u < spec.block; ++u) v[u] = g.values[r + u * spec.classes];
    Eigen::VectorXcd coeff = es.eigenvectors().adjoint() * v;
    for (int u = 0; u < spec.block; ++u)
      coeff[u] /= std::sqrt(std::max(es.eigenvalues()[u], floor));
    const Eigen::VectorXcd res = es.eigenvectors() * coeff;
    for (int u = 0; u < spec.block; ++u) out.values[r + u * spec.classes] = res[u];
  }
  return out;
}

}  // namespace

Lattice::Lattice(const Grid& grid, double alpha, double beta) : grid_(grid), alpha_(alpha), beta_(beta) {
  if (grid.dim() != 1) throw ContractError("lattice: only one-dimensional grids are supported");
  if (!(alpha > 0.0) || !(beta > 0.0)) throw ContractError("lattice parameters must be positive");
  time_step_ = lattice_steps(alpha, grid.dx());
  freq_step_ = lattice_steps(beta, grid.deta());
  const int n = grid.samples();
  if (time_step_ < 1 || freq_step_ < 1 || n % time_step_ != 0 || n % freq_step_ != 0)
    throw ContractError("lattice steps must divide the number of samples");
  time_count_ = n / time_step_;
  freq_count_ = n / freq_step_;
  if (alpha * beta > 1.0 + 1e-12)
    throw ContractError("lattice density alpha*beta > 1 cannot carry a frame");
}

bool Lattice::operator==(const Lattice& other) const {
  return grid_ == other.grid_ && time_step_ == other.time_step_ && freq_step_ == other.freq_step_;
}

double CoefficientArray::l2_norm() const {
  double sum = 0.0;
  for (const auto& v : values) sum += std::norm(v);
  return std::sqrt(sum);
}

double STFTField::l2_norm() const {
  double sum = 0.0;
  for (const auto& v : values) sum += std::norm(v);
  return std::sqrt(sum * grid.dx() * grid.deta());
}

void stft_row(const SampledFunction& f, const SampledFunction& g, int shift_index,
              std::span<cplx> row) {
  const int n = f.grid.samples();
  // g(t_j - x_s) lives at grid index j - s + n/2.
  for (int j = 0; j < n; ++j)
    row[j] = f.values[j] * std::conj(g.values[positive_mod(j - shift_index + n / 2, n)]);
  fft::centered_dft(row, n, 1, fft::Direction::forward);
  const double dx = f.grid.dx();
  for (auto& v : row) v *= dx;
}

STFTField stft(const SampledFunction& f, const SampledFunction& g) {
  require_time_side_1d(f, "stft");
  require_time_side_1d(g, "stft");
  if (!(f.grid == g.grid)) throw ContractError("stft: grid mismatch");
  const int n = f.grid.samples();
  STFTField out{f.grid, std::vector<cplx>(static_cast<std::size_t>(n) * n)};
  for (int j = 0; j < n; ++j)
    stft_row(f, g, j, std::span<cplx>(out.values.data() + static_cast<std::size_t>(j) * n, n));
  return out;
}

SampledFunction atom(const SampledFunction& g, const Lattice& lattice, int i, int k) {
  require_time_side_1d(g, "atom");
  const int n = g.grid.samples();
  const int shift = lattice.time_grid_index(i);
  const double nu = lattice.freq_point(k);
  SampledFunction out(g.grid, Side::time);
  for (int j = 0; j < n; ++j) {
    const double t = g.grid.coordinate(j);
    out.values[j] = std::polar(1.0, kTwoPi * nu * t) * g.values[positive_mod(j - shift + n / 2, n)];
  }
  return out;
}

Eigen::MatrixXcd frame_operator(const SampledFunction& g, const Lattice& lattice) {
  require_time_side_1d(g, "frame_operator");
  if (!(g.grid == lattice.grid())) throw ContractError("frame_operator: grid mismatch");
  const int n = g.grid.samples();
  const int kf = lattice.freq_count();
  const double scale = g.grid.dx() * kf;
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < lattice.time_count(); ++i) {
    const int shift = lattice.time_grid_index(i);
    for (int j = 0; j < n; ++j) {
      const cplx gj = g.values[positive_mod(j - shift + n / 2, n)];
      if (gj == 0.0) continue;
      for (int l = j % kf; l < n; l += kf)
        s(j, l) += scale * gj * std::conj(g.values[positive_mod(l - shift + n / 2, n)]);
    }
  }
  return s;
}

FrameBounds frame_bounds(const Eigen::MatrixXcd& frame_op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(frame_op, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

SampledFunction dual_window(const SampledFunction& g, const Lattice& lattice) {
  const auto spec = block_spectrum(frame_operator(g, lattice), lattice.freq_count(), true);
  require_frame(spec.bounds);
  return dual_from(g, spec);
}

SampledFunction tight_window(const SampledFunction& g, const Lattice& lattice) {
  const auto spec = block_spectrum(frame_operator(g, lattice), lattice.freq_count(), false);
  require_frame(spec.bounds);
  return inverse_sqrt_from(g, spec);
}

GaborSystem::GaborSystem(SampledFunction g, Lattice lattice, SampledFunction dual,
                         SampledFunction tight, FrameBounds bounds)
    : window_(std::move(g)), lattice_(std::move(lattice)), dual_(std::move(dual)),
      tight_(std::move(tight)), bounds_(bounds) {}

GaborSystem GaborSystem::build(const SampledFunction& g, const Lattice& lattice) {
  if (lattice.alpha() * lattice.beta() > 0.5 + 1e-12)
    throw ContractError("Gabor system construction requires alpha*beta <= 1/2");
  const auto spec = block_spectrum(frame_operator(g, lattice), lattice.freq_count(), true);
  require_frame(spec.bounds);
  return GaborSystem(g, lattice, dual_from(g, spec), inverse_sqrt_from(g, spec), spec.bounds);
}

CoefficientArray analyze(const SampledFunction& window, const Lattice& lattice,
                         const SampledFunction& f) {
  require_time_side_1d(f, "analyze");
  if (!(f.grid == lattice.grid()) || !(window.grid == lattice.grid()))
    throw ContractError("analyze: grid mismatch");
  const int n = f.grid.samples();
  CoefficientArray c(lattice);
  std::vector<cplx> row(n);
  for (int i = 0; i < lattice.time_count(); ++i) {
    stft_row(f, window, lattice.time_grid_index(i), row);
    for (int k = 0; k < lattice.freq_count(); ++k) c(i, k) = row[lattice.freq_grid_index(k)];
  }
  return c;
}

SampledFunction synthesize(const SampledFunction& window, const Lattice& lattice,
                           const CoefficientArray& c) {
  if (!(c.lattice == lattice) || !(window.grid == lattice.grid()))
    throw ContractError("synthesize: coefficient shape does not match lattice");
  const int n = lattice.grid().samples();
  SampledFunction out(lattice.grid(), Side::time);
  std::vector<cplx> buf(n);
  for (int i = 0; i < lattice.time_count(); ++i) {
    std::fill(buf.begin(), buf.end(), cplx{});
    bool any = false;
    for (int k = 0; k < lattice.freq_count(); ++k) {
      buf[lattice.freq_grid_index(k)] = c(i, k);
      any = any || c(i, k) != 0.0;
    }
    if (!any) continue;
    fft::centered_dft(buf, n, 1, fft::Direction::backward);
    const int shift = lattice.time_grid_index(i);
    for (int j = 0; j < n; ++j)
      out.values[j] += buf[j] * window.values[positive_mod(j - shift + n / 2, n)];
  }
  return out;
}

void MixedNormSpec::validate() const {
  if (!(p >= 1.0) || !(q >= 1.0)) throw ContractError("mixed norm exponents must lie in [1, inf]");
  if (!(s >= 0.0) || !std::isfinite(s)) throw ContractError("weight exponent s must be >= 0");
}

double mixed_seq_norm(const CoefficientArray& c, const MixedNormSpec& spec) {
  spec.validate();
  const auto& lat = c.lattice;
  double outer = 0.0;
  for (int k = 0; k < lat.freq_count(); ++k) {
    const double nu = lat.freq_point(k);
    double inner = 0.0;
    for (int i = 0; i < lat.time_count(); ++i) {
      const double m = lat.time_point(i);
      double a = std::abs(c(i, k));
      if (spec.s > 0.0) a *= std::pow(1.0 + m * m + nu * nu, 0.5 * spec.s);
      if (std::isinf(spec.p))
        inner = std::max(inner, a);
      else
        inner += std::pow(a, spec.p);
    }
    if (!std::isinf(spec.p)) inner = std::pow(inner, 1.0 / spec.p);
    if (std::isinf(spec.q))
      outer = std::max(outer, inner);
    else
      outer += std::pow(inner, spec.q);
  }
  return std::isinf(spec.q) ? outer : std::pow(outer, 1.0 / spec.q);
}

}  // namespace gaborfio
