#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gaborfio/gabor.hpp"
#include "gaborfio/grid.hpp"
#include "gaborfio/phase.hpp"

namespace gaborfio {

struct ConstantOne {};

// sigma(x_J, eta_K) stored at values[J * N + K], N = grid.size().
struct GridSymbol {
  Grid grid;
  std::vector<cplx> values;

  cplx at(std::size_t time_flat, std::size_t freq_flat) const {
    return values[time_flat * grid.size() + freq_flat];
  }
};

using ComplexPhaseVec = Eigen::Matrix<cplx, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;

// Symbol with bounded derivatives: |d^alpha sigma| <= bounds[|alpha|].
struct SmoothSymbol {
  std::function<cplx(const Vec&, const Vec&)> value;
  // (d_x sigma, d_eta sigma)
  std::function<ComplexPhaseVec(const Vec&, const Vec&)> gradient;
  std::vector<double> bounds;
};

class Symbol {
 public:
  using Repr = std::variant<ConstantOne, GridSymbol, SmoothSymbol>;

  Symbol() : name_("one"), repr_(ConstantOne{}) {}
  Symbol(std::string name, Repr repr) : name_(std::move(name)), repr_(std::move(repr)) {}

  const std::string& name() const { return name_; }
  const Repr& repr() const { return repr_; }
  bool is_one() const { return std::holds_alternative<ConstantOne>(repr_); }

 private:
  std::string name_;
  Repr repr_;
};

// Samples any symbol on the grid x grid (time side x frequency side).
GridSymbol sample_symbol(const Symbol& symbol, const Grid& grid);

// max relative deviation between the declared gradient of a smooth symbol and
// central differences at `samples` points of the box.
double smooth_symbol_gradient_error(const SmoothSymbol& symbol, const PhaseBox& box,
                                    int samples = 100);

// Catalog: one, gaussian-x (e^{-x^2}), gaussian-xeta (e^{-|x|^2-|eta|^2}),
// modulation{a,b} (e^{2 pi i (a.x + b.eta)}), smoothed-sign (sign(x), one
// transition sample; grid symbol).
Symbol catalog_symbol(const std::string& name, const Grid& grid,
                      const std::map<std::string, double>& params = {});

struct FioOptions {
  // Reject inputs with more than `band_edge_tolerance` of their spectral
  // energy in the outer n/32 frequency bins.
  bool check_band_edge = true;
  double band_edge_tolerance = 1e-6;
};

// Fraction of spectral energy in the outer n/32 bins (per axis) of f^.
double band_edge_fraction(const SampledFunction& fhat);

// Tf(x_J) = deta^d sum_K exp(2 pi i Phi(x_J, eta_K)) sigma(x_J, eta_K) f^(eta_K).
SampledFunction apply_fio(const Phase& phase, const Symbol& symbol, const SampledFunction& f,
                          const FioOptions& options = {});

// Dense quadrature kernel deta^d exp(2 pi i Phi) sigma for repeated application.
class FioKernel {
 public:
  FioKernel(const Phase& phase, const Symbol& symbol, const Grid& grid);

  const Grid& grid() const { return grid_; }
  // Columns of `spectra` are f^ samples; returns the Tf samples column-wise.
  Eigen::MatrixXcd apply_spectra(const Eigen::MatrixXcd& spectra) const;

 private:
  Grid grid_;
  Eigen::MatrixXcd kernel_;
};

enum class MatrixRoute { direct, symbol_stft };

const char* to_string(MatrixRoute route);

// Sparse matrix <T g_{m,n}, g_{m',n'}> over a lattice. Column index = flat
// lattice index of (m, n), row index = flat index of (m', n'). Columns are
// stored separately, rows sorted within each column.
class GaborMatrix {
 public:
  struct Entry {
    std::uint32_t row;
    cplx value;
  };

  GaborMatrix(const Lattice& lattice, double epsilon, MatrixRoute route, std::string phase_name);

  const Lattice& lattice() const { return lattice_; }
  double epsilon() const { return epsilon_; }
  MatrixRoute route() const { return route_; }
  const std::string& phase_name() const { return phase_name_; }
  std::size_t dimension() const { return columns_.size(); }

  const std::vector<Entry>& column(std::size_t col) const { return columns_[col]; }
  cplx entry(std::size_t row, std::size_t col) const;
  std::size_t nnz() const;
  double max_modulus() const;

  // Replaces a column; entries are sorted by row.
  void set_column(std::size_t col, std::vector<Entry> entries);
  // Drops every entry with modulus < epsilon * max_modulus().
  void prune();

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t c = 0; c < columns_.size(); ++c)
      for (const auto& e : columns_[c]) f(static_cast<std::size_t>(e.row), c, e.value);
  }

 private:
  Lattice lattice_;
  double epsilon_;
  MatrixRoute route_;
  std::string phase_name_;
  std::vector<std::vector<Entry>> columns_;
};

inline constexpr double kDefaultEpsilon = 1e-8;

// Entries Δx sum_j (T g_{m,n})(x_j) conj(g_{m',n'}(x_j)) with the tight window,
// T g_{m,n} from the quadrature kernel. The band-edge check is skipped: atoms
// are periodic on the torus by construction.
GaborMatrix gabor_matrix_direct(const Phase& phase, const Symbol& symbol, const GaborSystem& gsys,
                                double epsilon = kDefaultEpsilon);

// Same matrix assembled block by block from the STFT of the symbol against the
// base-point dependent window exp(2 pi i Phi_2) (conj(g) x g^), including the
// unimodular prefactor so complex entries agree with the direct route.
GaborMatrix gabor_matrix_via_symbol_stft(const Phase& phase, const GridSymbol& symbol,
                                         const GaborSystem& gsys, double epsilon = kDefaultEpsilon);

// C_g(Tf)_{m',n'} = sum_{m,n} M_{(m',n'),(m,n)} c_{m,n}.
CoefficientArray apply_via_matrix(const GaborMatrix& matrix, const CoefficientArray& c);

struct RouteDifference {
  double max_abs_difference = 0.0;
  double max_modulus = 0.0;
  double relative() const { return max_modulus > 0 ? max_abs_difference / max_modulus : 0.0; }
};

// Entrywise difference over the union of stored entries.
RouteDifference compare_matrices(const GaborMatrix& a, const GaborMatrix& b);

}  // namespace gaborfio
