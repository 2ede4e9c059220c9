#pragma once

#include <string>
#include <vector>

#include "gaborfio/fio.hpp"
#include "gaborfio/gabor.hpp"
#include "gaborfio/phase.hpp"

namespace gaborfio {

// Sub-sampling of the STFT used by mod_norm; the Riemann measure is scaled
// by the strides. Stride 1 evaluates the full grid.
struct StftStrides {
  int time = 1;
  int freq = 1;
};

// ||V_g f||_{L^{p,q}_s}: inner L^p over x, outer L^q over eta, weight
// <(x, eta)>^s, streamed one STFT row at a time.
double mod_norm(const SampledFunction& f, const MixedNormSpec& spec, const SampledFunction& g,
                StftStrides strides = {});
// Same with the default window phi = 2^{1/4} e^{-pi x^2}.
double mod_norm(const SampledFunction& f, const MixedNormSpec& spec, StftStrides strides = {});

struct DecayRecord {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  double modulus = 0.0;
  // <chi(m,n) - (m',n')>, wrapped to the phase-space torus.
  double distance = 0.0;
  // <(m,n) - chi^{-1}(m',n')>
  double transposed = 0.0;
  // <(grad_x Phi(m',n) - n', grad_eta Phi(m',n) - m)>
  double raw = 0.0;
};

struct ProfileBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
  double max_modulus = 0.0;
};

struct DecayReport {
  std::vector<DecayRecord> records;
  std::vector<ProfileBin> profile;
  // Least-squares slope of log(max modulus) against log(bin center).
  double slope = 0.0;
  int fitted_bins = 0;
  bool slope_valid = false;
  std::vector<int> orders;
  // C_N = max |entry| r^{2N} for each order, in the three distances.
  std::vector<double> constants;
  std::vector<double> constants_transposed;
  std::vector<double> constants_raw;
  // Range of |chi(m,n) - (m',n')| / |(m,n) - chi^{-1}(m',n')| over entries
  // where both are nonzero.
  double distance_ratio_min = 0.0;
  double distance_ratio_max = 0.0;
};

inline constexpr int kProfileBins = 12;
inline constexpr int kMinFitBins = 8;

// `phase` supplies grad Phi for the raw form of the estimate.
DecayReport decay_report(const GaborMatrix& matrix, const Phase& phase, const CanonicalMap& chi,
                         const std::vector<int>& orders = {1, 2, 3});

struct SchurSums {
  double s = 0.0;
  // sup_{(m,n)} sum_{(m',n')} |T| and sup_{(m',n')} sum_{(m,n)} |T|.
  double sup_column = 0.0;
  double sup_row = 0.0;
  // Same for K = T v_s(m',n') / v_s(chi(m,n)).
  double weighted_sup_column = 0.0;
  double weighted_sup_row = 0.0;
  // sup_n sum_{n'} sup_{m'} sum_m |T|
  double nested_mixed = 0.0;
  // sup_{n'} sum_n sup_m sum_{m'} |T|
  double nested_mixed_adjoint = 0.0;
  // max over stored entries of v_s(m',n') / (<chi(m,n)-(m',n')>^s v_s(chi(m,n))).
  double moderate_quotient = 0.0;
};

SchurSums schur_sums(const GaborMatrix& matrix, double s, const CanonicalMap& chi);

struct NormRatioReport {
  std::string phase;
  std::string symbol;
  MixedNormSpec spec;
  std::vector<double> parameters;
  std::vector<double> input_norms;
  std::vector<double> output_norms;
  std::vector<double> ratios;
  // Slope of log ratio against log parameter.
  double slope = 0.0;
  std::string route;
};

// n log-spaced values in [lo, hi].
std::vector<double> log_space(double lo, double hi, int count);

// f_lambda(x) = exp(-pi lambda |x|^2) on the grid.
SampledFunction dilated_gaussian(const Grid& grid, double lambda);

// Ratio ||T f_lambda|| / ||f_lambda|| in M^{p,q} over the dilated Gaussian
// family. Quadratic phases with sigma = 1 are applied through the exact
// factorization, everything else by quadrature.
NormRatioReport operator_norm_experiment(const Phase& phase, const Symbol& symbol, const Grid& grid,
                                         const MixedNormSpec& spec, const std::vector<double>& lambdas,
                                         StftStrides strides = {});

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

// Discrete M^{infty,1} surrogate sum_zeta sup_z |V_{Psi0} sigma(z, zeta)| dzeta
// with Psi0(z) = sqrt(2) e^{-pi |z|^2}; z runs over a sub-grid of step about 1/2.
double m_infty_1_norm_estimate(const GridSymbol& symbol);

struct NuoReport {
  int samples = 0;
  // min over samples of (1 + |grad_x Phi(m',n) - n'|) / (1 + |n - psi(n')|)
  double min_ratio = 0.0;
};

// Lower-bound surrogate behind the boundedness of the nested sums: psi is the
// inverse of eta -> grad_x Phi(0, eta). One-dimensional phases only.
NuoReport nuo_surrogate(const Phase& phase, const PhaseBox& box, int samples = 400);

}  // namespace gaborfio
