#include "gaborfio/fio.hpp"

#include <algorithm>
#include <cmath>

#include "gaborfio/error.hpp"
#include "gaborfio/fft.hpp"

namespace gaborfio {
namespace {

int positive_mod(int a, int n) {
  const int r = a % n;
  return r < 0 ? r + n : r;
}

double param(const std::map<std::string, double>& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

cplx checked(cplx v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw EvaluationError("non-finite value in phase or symbol evaluation");
  return v;
}

// Evaluates sigma at grid node (J, K); grid symbols are looked up directly.
class SymbolSampler {
 public:
  SymbolSampler(const Symbol& symbol, const Grid& grid) : symbol_(symbol) {
    if (const auto* gs = std::get_if<GridSymbol>(&symbol.repr()))
      if (!(gs->grid == grid)) throw ContractError("grid symbol sampled on a different grid");
  }
  cplx operator()(std::size_t j, std::size_t k, const Vec& x, const Vec& eta) const {
    return std::visit(
        [&](const auto& s) -> cplx {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, ConstantOne>)
            return 1.0;
          else if constexpr (std::is_same_v<S, GridSymbol>)
            return s.at(j, k);
          else
            return s.value(x, eta);
        },
        symbol_.repr());
  }

 private:
  const Symbol& symbol_;
};

std::vector<Vec> frequency_points(const Grid& grid) {
  std::vector<Vec> pts(grid.size());
  for (std::size_t k = 0; k < pts.size(); ++k) pts[k] = grid.frequency_point(k);
  return pts;
}

}  // namespace

GridSymbol sample_symbol(const Symbol& symbol, const Grid& grid) {
  if (const auto* gs = std::get_if<GridSymbol>(&symbol.repr())) {
    if (!(gs->grid == grid)) throw ContractError("grid symbol sampled on a different grid");
    return *gs;
  }
  const std::size_t n = grid.size();
  GridSymbol out{grid, std::vector<cplx>(n * n)};
  SymbolSampler sampler(symbol, grid);
  const auto etas = frequency_points(grid);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec x = grid.point(j);
    for (std::size_t k = 0; k < n; ++k) out.values[j * n + k] = checked(sampler(j, k, x, etas[k]));
  }
  return out;
}

double smooth_symbol_gradient_error(const SmoothSymbol& symbol, const PhaseBox& box, int samples) {
  const int d = box.dim();
  double worst = 0.0;
  for (const auto& z : halton_points(box, samples, 17)) {
    const ComplexPhaseVec declared = symbol.gradient(head(z), tail(z));
    for (int a = 0; a < 2 * d; ++a) {
      const double h = 1e-6 * std::max(1.0, std::abs(z[a]));
      PhasePoint zp = z, zm = z;
      zp[a] += h;
      zm[a] -= h;
      const cplx fd = (symbol.value(head(zp), tail(zp)) - symbol.value(head(zm), tail(zm))) / (2 * h);
      const double scale = std::max(1.0, std::abs(declared[a]));
      worst = std::max(worst, std::abs(fd - declared[a]) / scale);
    }
  }
  return worst;
}

Symbol catalog_symbol(const std::string& name, const Grid& grid,
                      const std::map<std::string, double>& params) {
  if (name == "one") return Symbol("one", ConstantOne{});
  if (name == "gaussian-x") {
    SmoothSymbol s;
    s.value = [](const Vec& x, const Vec&) { return cplx(std::exp(-x.squaredNorm())); };
    s.gradient = [](const Vec& x, const Vec& eta) {
      const int d = static_cast<int>(x.size());
      ComplexPhaseVec g = ComplexPhaseVec::Zero(2 * d);
      const double e = std::exp(-x.squaredNorm());
      for (int a = 0; a < d; ++a) g[a] = -2.0 * x[a] * e;
      (void)eta;
      return g;
    };
    s.bounds = {1.0, std::sqrt(2.0 / std::exp(1.0)), 2.0};
    return Symbol(name, s);
  }
  if (name == "gaussian-xeta") {
    SmoothSymbol s;
    s.value = [](const Vec& x, const Vec& eta) {
      return cplx(std::exp(-x.squaredNorm() - eta.squaredNorm()));
    };
    s.gradient = [](const Vec& x, const Vec& eta) {
      const int d = static_cast<int>(x.size());
      ComplexPhaseVec g(2 * d);
      const double e = std::exp(-x.squaredNorm() - eta.squaredNorm());
      for (int a = 0; a < d; ++a) {
        g[a] = -2.0 * x[a] * e;
        g[d + a] = -2.0 * eta[a] * e;
      }
      return g;
    };
    s.bounds = {1.0, std::sqrt(2.0 / std::exp(1.0)), 2.0};
    return Symbol(name, s);
  }
  if (name == "modulation") {
    const double a = param(params, "a", 1.0 / grid.period());
    const double b = param(params, "b", 0.0);
    SmoothSymbol s;
    s.value = [a, b](const Vec& x, const Vec& eta) {
      return std::polar(1.0, kTwoPi * (a * x.sum() + b * eta.sum()));
    };
    s.gradient = [a, b](const Vec& x, const Vec& eta) {
      const int d = static_cast<int>(x.size());
      const cplx v = std::polar(1.0, kTwoPi * (a * x.sum() + b * eta.sum()));
      ComplexPhaseVec g(2 * d);
      for (int i = 0; i < d; ++i) {
        g[i] = cplx(0, kTwoPi * a) * v;
        g[d + i] = cplx(0, kTwoPi * b) * v;
      }
      return g;
    };
    s.bounds = {1.0, kTwoPi * std::max(std::abs(a), std::abs(b))};
    return Symbol(name, s);
  }
  if (name == "smoothed-sign") {
    if (grid.dim() != 1) throw ConfigError("smoothed-sign symbol is one-dimensional");
    const std::size_t n = grid.size();
    GridSymbol gs{grid, std::vector<cplx>(n * n)};
    for (std::size_t j = 0; j < n; ++j) {
      const double x = grid.coordinate(static_cast<int>(j));
      const double v = x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
      for (std::size_t k = 0; k < n; ++k) gs.values[j * n + k] = v;
    }
    return Symbol(name, gs);
  }
  throw ConfigError("unknown symbol '" + name + "'");
}

double band_edge_fraction(const SampledFunction& fhat) {
  const int n = fhat.grid.samples();
  const int w = std::max(1, n / 32);
  auto edge = [&](int idx) { return idx < w || idx >= n - w; };
  double total = 0.0, outer = 0.0;
  for (std::size_t i = 0; i < fhat.values.size(); ++i) {
    const double e = std::norm(fhat.values[i]);
    total += e;
    bool on_edge = false;
    std::size_t rest = i;
    for (int a = 0; a < fhat.grid.dim(); ++a) {
      on_edge = on_edge || edge(static_cast<int>(rest % n));
      rest /= n;
    }
    if (on_edge) outer += e;
  }
  return total > 0.0 ? outer / total : 0.0;
}

SampledFunction apply_fio(const Phase& phase, const Symbol& symbol, const SampledFunction& f,
                          const FioOptions& options) {
  if (f.side != Side::time) throw ContractError("apply_fio expects a time-side function");
  if (phase.dim() != f.grid.dim()) throw ContractError("apply_fio: phase dimension mismatch");
  const SampledFunction fhat = fourier_transform(f);
  if (options.check_band_edge) {
    const double frac = band_edge_fraction(fhat);
    if (frac > options.band_edge_tolerance) throw AliasingError(frac);
  }
  const Grid& grid = f.grid;
  const std::size_t n = grid.size();
  const double weight = std::pow(grid.deta(), grid.dim());
  const auto etas = frequency_points(grid);
  SymbolSampler sampler(symbol, grid);
  SampledFunction out(grid, Side::time);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec x = grid.point(j);
    cplx acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (fhat.values[k] == 0.0) continue;
      const cplx kern = std::polar(1.0, kTwoPi * phase.value(x, etas[k])) * sampler(j, k, x, etas[k]);
      acc += kern * fhat.values[k];
    }
    out.values[j] = checked(weight * acc);
  }
  return out;
}

FioKernel::FioKernel(const Phase& phase, const Symbol& symbol, const Grid& grid) : grid_(grid) {
  if (phase.dim() != grid.dim()) throw ContractError("FioKernel: phase dimension mismatch");
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double weight = std::pow(grid.deta(), grid.dim());
  const auto etas = frequency_points(grid);
  SymbolSampler sampler(symbol, grid);
  kernel_.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Vec x = grid.point(static_cast<std::size_t>(j));
    for (Eigen::Index k = 0; k < n; ++k) {
      const cplx s = sampler(static_cast<std::size_t>(j), static_cast<std::size_t>(k), x, etas[k]);
      kernel_(j, k) = checked(weight * std::polar(1.0, kTwoPi * phase.value(x, etas[k])) * s);
    }
  }
}

Eigen::MatrixXcd FioKernel::apply_spectra(const Eigen::MatrixXcd& spectra) const {
  if (spectra.rows() != kernel_.cols()) throw ContractError("FioKernel: spectrum length mismatch");
  return kernel_ * spectra;
}

const char* to_string(MatrixRoute route) {
  return route == MatrixRoute::direct ? "direct" : "symbol-stft";
}

GaborMatrix::GaborMatrix(const Lattice& lattice, double epsilon, MatrixRoute route,
                         std::string phase_name)
    : lattice_(lattice), epsilon_(epsilon), route_(route), phase_name_(std::move(phase_name)),
      columns_(lattice.size()) {
  if (!(epsilon >= 0.0)) throw ContractError("threshold epsilon must be non-negative");
}

cplx GaborMatrix::entry(std::size_t row, std::size_t col) const {
  const auto& c = columns_.at(col);
  auto it = std::lower_bound(c.begin(), c.end(), row,
                             [](const Entry& e, std::size_t r) { return e.row < r; });
  return (it != c.end() && it->row == row) ? it->value : cplx{};
}

std::size_t GaborMatrix::nnz() const {
  std::size_t total = 0;
  for (const auto& c : columns_) total += c.size();
  return total;
}

double GaborMatrix::max_modulus() const {
  double m = 0.0;
  for (const auto& c : columns_)
    for (const auto& e : c) m = std::max(m, std::abs(e.value));
  return m;
}

void GaborMatrix::set_column(std::size_t col, std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.row < b.row; });
  for (const auto& e : entries)
    if (e.row >= columns_.size()) throw ContractError("Gabor matrix row index outside the lattice");
  columns_.at(col) = std::move(entries);
}

void GaborMatrix::prune() {
  const double cut = epsilon_ * max_modulus();
  for (auto& c : columns_)
    c.erase(std::remove_if(c.begin(), c.end(), [cut](const Entry& e) { return std::abs(e.value) < cut; }),
            c.end());
}

GaborMatrix gabor_matrix_direct(const Phase& phase, const Symbol& symbol, const GaborSystem& gsys,
                                double epsilon) {
  const Lattice& lat = gsys.lattice();
  const Grid& grid = lat.grid();
  const SampledFunction& g = gsys.tight();
  const int n = grid.samples();
  const FioKernel kernel(phase, symbol, grid);
  GaborMatrix out(lat, epsilon, MatrixRoute::direct, phase.name());

  constexpr std::size_t kBlock = 64;
  double running_max = 0.0;
  for (std::size_t first = 0; first < lat.size(); first += kBlock) {
    const std::size_t count = std::min(kBlock, lat.size() - first);
    Eigen::MatrixXcd spectra(n, static_cast<Eigen::Index>(count));
    for (std::size_t c = 0; c < count; ++c) {
      const auto col = first + c;
      const auto a = fourier_transform(atom(g, lat, lat.time_of(col), lat.freq_of(col)));
      for (int k = 0; k < n; ++k) spectra(k, static_cast<Eigen::Index>(c)) = a.values[k];
    }
    const Eigen::MatrixXcd images = kernel.apply_spectra(spectra);
    for (std::size_t c = 0; c < count; ++c) {
      SampledFunction tg(grid, Side::time);
      for (int j = 0; j < n; ++j) tg.values[j] = images(j, static_cast<Eigen::Index>(c));
      const CoefficientArray coeff = analyze(g, lat, tg);
      for (const auto& v : coeff.values) running_max = std::max(running_max, std::abs(v));
      std::vector<GaborMatrix::Entry> entries;
      for (std::size_t r = 0; r < coeff.values.size(); ++r)
        if (std::abs(coeff.values[r]) >= epsilon * running_max && coeff.values[r] != 0.0)
          entries.push_back({static_cast<std::uint32_t>(r), coeff.values[r]});
      out.set_column(first + c, std::move(entries));
    }
  }
  out.prune();
  return out;
}

GaborMatrix gabor_matrix_via_symbol_stft(const Phase& phase, const GridSymbol& symbol,
                                         const GaborSystem& gsys, double epsilon) {
  const Lattice& lat = gsys.lattice();
  const Grid& grid = lat.grid();
  if (!(symbol.grid == grid)) throw ContractError("symbol grid does not match the lattice grid");
  if (phase.dim() != 1) throw ContractError("symbol-STFT route is one-dimensional");
  const int n = grid.samples();
  const int h = n / 2;
  const SampledFunction& g = gsys.tight();
  const SampledFunction ghat = fourier_transform(g);
  const double cell = grid.dx() * grid.deta();

  std::vector<double> xs(n), etas(n);
  for (int j = 0; j < n; ++j) {
    xs[j] = grid.coordinate(j);
    etas[j] = grid.frequency(j);
  }

  std::vector<std::vector<GaborMatrix::Entry>> columns(lat.size());
  std::vector<cplx> buf(static_cast<std::size_t>(n) * n);
  double running_max = 0.0;
  Vec x(1), eta(1), w_x(1), w_eta(1);

  for (int ip = 0; ip < lat.time_count(); ++ip) {
    for (int k = 0; k < lat.freq_count(); ++k) {
      // Base point (m', n) of the Taylor expansion.
      w_x[0] = lat.time_point(ip);
      w_eta[0] = lat.freq_point(k);
      const double phi_w = phase.value(w_x, w_eta);
      const double a = phase.grad_x(w_x, w_eta)[0];
      const double b = phase.grad_eta(w_x, w_eta)[0];
      const int idx_m = lat.time_grid_index(ip);
      const int idx_n = lat.freq_grid_index(k);

      for (int j = 0; j < n; ++j) {
        const cplx gj = std::conj(g.values[j]);
        cplx* row = buf.data() + static_cast<std::size_t>(j) * n;
        if (gj == 0.0) {
          std::fill(row, row + n, cplx{});
          continue;
        }
        const std::size_t sj = static_cast<std::size_t>(positive_mod(j + idx_m - h, n));
        x[0] = xs[j] + w_x[0];
        for (int l = 0; l < n; ++l) {
          eta[0] = etas[l] + w_eta[0];
          // Taylor remainder Phi_2 and the window Psi = e^{2 pi i Phi_2} (conj g (x) g^).
          const double remainder = phase.value(x, eta) - phi_w - a * xs[j] - b * etas[l];
          const cplx psi = std::polar(1.0, kTwoPi * remainder) * gj * ghat.values[l];
          const std::size_t sl = static_cast<std::size_t>(positive_mod(l + idx_n - h, n));
          row[l] = symbol.at(sj, sl) * psi * std::polar(1.0, kTwoPi * (a * xs[j] + b * etas[l]));
        }
      }
      fft::centered_dft(buf, n, 2, fft::Direction::forward);

      const std::size_t col_base = lat.flat(0, k);
      for (int kp = 0; kp < lat.freq_count(); ++kp) {
        const int p = lat.freq_grid_index(kp);
        const cplx prefactor = std::polar(1.0, kTwoPi * (phi_w - lat.freq_point(kp) * w_x[0]));
        const auto row = static_cast<std::uint32_t>(lat.flat(ip, kp));
        for (int i = 0; i < lat.time_count(); ++i) {
          const int q = lat.time_grid_index(i);
          const cplx v = cell * prefactor * buf[static_cast<std::size_t>(p) * n + q];
          running_max = std::max(running_max, std::abs(v));
          if (v != 0.0 && std::abs(v) >= epsilon * running_max)
            columns[col_base + lat.flat(i, 0) - lat.flat(0, 0)].push_back({row, v});
        }
      }
    }
  }
  GaborMatrix out(lat, epsilon, MatrixRoute::symbol_stft, phase.name());
  for (std::size_t c = 0; c < columns.size(); ++c) out.set_column(c, std::move(columns[c]));
  out.prune();
  return out;
}

CoefficientArray apply_via_matrix(const GaborMatrix& matrix, const CoefficientArray& c) {
  if (!(c.lattice == matrix.lattice())) throw ContractError("apply_via_matrix: lattice mismatch");
  CoefficientArray out(c.lattice);
  matrix.for_each([&](std::size_t row, std::size_t col, cplx v) { out.values[row] += v * c.values[col]; });
  return out;
}

RouteDifference compare_matrices(const GaborMatrix& a, const GaborMatrix& b) {
  if (a.dimension() != b.dimension()) throw ContractError("compare_matrices: dimension mismatch");
  RouteDifference diff;
  diff.max_modulus = std::max(a.max_modulus(), b.max_modulus());
  for (std::size_t c = 0; c < a.dimension(); ++c) {
    const auto& ca = a.column(c);
    const auto& cb = b.column(c);
    std::size_t i = 0, j = 0;
    while (i < ca.size() || j < cb.size()) {
      cplx d;
      if (j == cb.size() || (i < ca.size() && ca[i].row < cb[j].row)) {
        d = ca[i++].value;
      } else if (i == ca.size() || cb[j].row < ca[i].row) {
        d = cb[j++].value;
      } else {
        d = ca[i++].value - cb[j++].value;
      }
      diff.max_abs_difference = std::max(diff.max_abs_difference, std::abs(d));
    }
  }
  return diff;
}

}  // namespace gaborfio
