#include "gaborfio/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "gaborfio/error.hpp"
#include "gaborfio/fft.hpp"
#include "gaborfio/metaplectic.hpp"

namespace gaborfio {
namespace {

double weight(double a, double b, double s) {
  return s == 0.0 ? 1.0 : std::pow(1.0 + a * a + b * b, 0.5 * s);
}

PhasePoint lattice_point(const Lattice& lat, std::size_t flat) {
  PhasePoint z(2);
  z << lat.time_point(lat.time_of(flat)), lat.freq_point(lat.freq_of(flat));
  return z;
}

// Wraps a (time, frequency) difference to the fundamental domain of the torus.
PhasePoint wrapped(const Lattice& lat, double dt, double df) {
  PhasePoint z(2);
  z << wrap(dt, lat.time_period()), wrap(df, lat.freq_period());
  return z;
}

}  // namespace

double mod_norm(const SampledFunction& f, const MixedNormSpec& spec, const SampledFunction& g,
                StftStrides strides) {
  spec.validate();
  if (f.side != Side::time || f.grid.dim() != 1)
    throw ContractError("mod_norm expects a one-dimensional time-side function");
  if (!(f.grid == g.grid)) throw ContractError("mod_norm: window grid mismatch");
  if (strides.time < 1 || strides.freq < 1) throw ContractError("mod_norm: strides must be >= 1");
  const Grid& grid = f.grid;
  const int n = grid.samples();
  const bool p_inf = std::isinf(spec.p);
  const bool q_inf = std::isinf(spec.q);

  std::vector<double> inner((n + strides.freq - 1) / strides.freq, 0.0);
  std::vector<cplx> row(n);
  for (int j = 0; j < n; j += strides.time) {
    stft_row(f, g, j, row);
    const double x = grid.coordinate(j);
    for (std::size_t idx = 0; idx < inner.size(); ++idx) {
      const int k = static_cast<int>(idx) * strides.freq;
      const double a = std::abs(row[k]) * weight(x, grid.frequency(k), spec.s);
      if (p_inf)
        inner[idx] = std::max(inner[idx], a);
      else
        inner[idx] += std::pow(a, spec.p);
    }
  }
  const double dx = grid.dx() * strides.time;
  const double deta = grid.deta() * strides.freq;
  double outer = 0.0;
  for (double v : inner) {
    const double in = p_inf ? v : std::pow(v * dx, 1.0 / spec.p);
    if (q_inf)
      outer = std::max(outer, in);
    else
      outer += std::pow(in, spec.q);
  }
  return q_inf ? outer : std::pow(outer * deta, 1.0 / spec.q);
}

double mod_norm(const SampledFunction& f, const MixedNormSpec& spec, StftStrides strides) {
  return mod_norm(f, spec, gaussian(f.grid, Vec::Zero(f.grid.dim()), 1.0), strides);
}

DecayReport decay_report(const GaborMatrix& matrix, const Phase& phase, const CanonicalMap& chi,
                         const std::vector<int>& orders) {
  const Lattice& lat = matrix.lattice();
  if (phase.dim() != 1 || chi.dim() != 1) throw ContractError("decay_report is one-dimensional");
  const std::size_t size = lat.size();

  std::vector<PhasePoint> image(size), preimage(size);
  for (std::size_t f = 0; f < size; ++f) {
    image[f] = chi(lattice_point(lat, f));
    preimage[f] = chi.inverse(lattice_point(lat, f));
  }
  // grad Phi at (m', n), indexed by (time index of the row, freq index of the column).
  std::vector<PhasePoint> grads(size);
  for (std::size_t f = 0; f < size; ++f) grads[f] = phase.gradient(lattice_point(lat, f));

  DecayReport rep;
  rep.orders = orders;
  rep.records.reserve(matrix.nnz());
  rep.distance_ratio_min = std::numeric_limits<double>::infinity();
  rep.distance_ratio_max = 0.0;
  matrix.for_each([&](std::size_t row, std::size_t col, cplx v) {
    const PhasePoint rp = lattice_point(lat, row);
    const PhasePoint cp = lattice_point(lat, col);
    DecayRecord r;
    r.row = static_cast<std::uint32_t>(row);
    r.col = static_cast<std::uint32_t>(col);
    r.modulus = std::abs(v);
    const PhasePoint d1 = wrapped(lat, image[col][0] - rp[0], image[col][1] - rp[1]);
    const PhasePoint d2 = wrapped(lat, cp[0] - preimage[row][0], cp[1] - preimage[row][1]);
    const PhasePoint& g = grads[lat.flat(lat.time_of(row), lat.freq_of(col))];
    // Both components of the raw form are wrapped with the period of their own kind.
    PhasePoint d3(2);
    d3 << wrap(g[0] - rp[1], lat.freq_period()), wrap(g[1] - cp[0], lat.time_period());
    r.distance = bracket(d1);
    r.transposed = bracket(d2);
    r.raw = bracket(d3);
    if (d1.norm() > 1e-9 && d2.norm() > 1e-9) {
      const double ratio = d1.norm() / d2.norm();
      rep.distance_ratio_min = std::min(rep.distance_ratio_min, ratio);
      rep.distance_ratio_max = std::max(rep.distance_ratio_max, ratio);
    }
    rep.records.push_back(r);
  });
  if (rep.distance_ratio_max == 0.0) rep.distance_ratio_min = rep.distance_ratio_max = 1.0;

  double rmax = 1.0;
  for (const auto& r : rep.records) rmax = std::max(rmax, r.distance);
  rmax *= 1.0 + 1e-12;
  rep.profile.resize(kProfileBins);
  for (int b = 0; b < kProfileBins; ++b) {
    rep.profile[b].lower = std::pow(rmax, static_cast<double>(b) / kProfileBins);
    rep.profile[b].upper = std::pow(rmax, static_cast<double>(b + 1) / kProfileBins);
  }
  const double log_rmax = std::log(rmax);
  for (const auto& r : rep.records) {
    int b = log_rmax > 0 ? static_cast<int>(std::log(r.distance) / log_rmax * kProfileBins) : 0;
    b = std::clamp(b, 0, kProfileBins - 1);
    rep.profile[b].count++;
    rep.profile[b].max_modulus = std::max(rep.profile[b].max_modulus, r.modulus);
  }
  std::vector<double> xs, ys;
  for (const auto& bin : rep.profile)
    if (bin.count > 0 && bin.max_modulus > 0) {
      xs.push_back(0.5 * (std::log(bin.lower) + std::log(bin.upper)));
      ys.push_back(std::log(bin.max_modulus));
    }
  rep.fitted_bins = static_cast<int>(xs.size());
  rep.slope_valid = rep.fitted_bins >= kMinFitBins;
  rep.slope = rep.slope_valid ? fit_slope(xs, ys) : std::numeric_limits<double>::quiet_NaN();

  for (int order : orders) {
    double c = 0.0, ct = 0.0, cr = 0.0;
    for (const auto& r : rep.records) {
      c = std::max(c, r.modulus * std::pow(r.distance, 2 * order));
      ct = std::max(ct, r.modulus * std::pow(r.transposed, 2 * order));
      cr = std::max(cr, r.modulus * std::pow(r.raw, 2 * order));
    }
    rep.constants.push_back(c);
    rep.constants_transposed.push_back(ct);
    rep.constants_raw.push_back(cr);
  }
  return rep;
}

SchurSums schur_sums(const GaborMatrix& matrix, double s, const CanonicalMap& chi) {
  if (!(s >= 0.0)) throw ContractError("schur_sums: weight exponent must be >= 0");
  const Lattice& lat = matrix.lattice();
  const std::size_t size = lat.size();
  const int kt = lat.time_count();
  const int kf = lat.freq_count();

  std::vector<double> image_weight(size);
  std::vector<PhasePoint> image(size);
  for (std::size_t f = 0; f < size; ++f) {
    const PhasePoint z = chi(lattice_point(lat, f));
    image[f] = wrapped(lat, z[0], z[1]);
    image_weight[f] = weight(image[f][0], image[f][1], s);
  }

  SchurSums out;
  out.s = s;
  std::vector<double> row_sum(size, 0.0), wrow_sum(size, 0.0);
  for (std::size_t col = 0; col < size; ++col) {
    double cs = 0.0, wcs = 0.0;
    for (const auto& e : matrix.column(col)) {
      const PhasePoint rp = lattice_point(lat, e.row);
      const double a = std::abs(e.value);
      const double w = weight(rp[0], rp[1], s) / image_weight[col];
      cs += a;
      wcs += a * w;
      row_sum[e.row] += a;
      wrow_sum[e.row] += a * w;
      const PhasePoint d = wrapped(lat, image[col][0] - rp[0], image[col][1] - rp[1]);
      out.moderate_quotient = std::max(out.moderate_quotient, w / std::pow(bracket(d), s));
    }
    out.sup_column = std::max(out.sup_column, cs);
    out.weighted_sup_column = std::max(out.weighted_sup_column, wcs);
  }
  out.sup_row = *std::max_element(row_sum.begin(), row_sum.end());
  out.weighted_sup_row = *std::max_element(wrow_sum.begin(), wrow_sum.end());

  // l^inf_n l^1_n' l^inf_m' l^1_m: for each n, U[(m',n')] = sum_m |T|.
  std::vector<double> acc(size);
  for (int k = 0; k < kf; ++k) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int i = 0; i < kt; ++i)
      for (const auto& e : matrix.column(lat.flat(i, k))) acc[e.row] += std::abs(e.value);
    double total = 0.0;
    for (int kp = 0; kp < kf; ++kp) {
      double best = 0.0;
      for (int ip = 0; ip < kt; ++ip) best = std::max(best, acc[lat.flat(ip, kp)]);
      total += best;
    }
    out.nested_mixed = std::max(out.nested_mixed, total);
  }
  // l^inf_n' l^1_n l^inf_m l^1_m': D[n'][n] = sup_m sum_{m'} |T|.
  std::vector<double> sup_m(static_cast<std::size_t>(kf) * kf, 0.0);
  std::vector<double> col_by_freq(kf);
  for (std::size_t col = 0; col < size; ++col) {
    std::fill(col_by_freq.begin(), col_by_freq.end(), 0.0);
    for (const auto& e : matrix.column(col)) col_by_freq[lat.freq_of(e.row)] += std::abs(e.value);
    const int k = lat.freq_of(col);
    for (int kp = 0; kp < kf; ++kp) {
      double& slot = sup_m[static_cast<std::size_t>(kp) * kf + k];
      slot = std::max(slot, col_by_freq[kp]);
    }
  }
  for (int kp = 0; kp < kf; ++kp) {
    double total = 0.0;
    for (int k = 0; k < kf; ++k) total += sup_m[static_cast<std::size_t>(kp) * kf + k];
    out.nested_mixed_adjoint = std::max(out.nested_mixed_adjoint, total);
  }
  return out;
}

std::vector<double> log_space(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw ContractError("log_space: invalid range");
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out[i] = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
  }
  return out;
}

SampledFunction dilated_gaussian(const Grid& grid, double lambda) {
  if (!(lambda > 0.0)) throw ContractError("dilated_gaussian: lambda must be positive");
  SampledFunction f(grid, Side::time);
  for (std::size_t i = 0; i < f.values.size(); ++i)
    f.values[i] = std::exp(-kPi * lambda * grid.point(i).squaredNorm());
  return f;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractError("fit_slope needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw ContractError("fit_slope: degenerate abscissae");
  return sxy / sxx;
}

NormRatioReport operator_norm_experiment(const Phase& phase, const Symbol& symbol, const Grid& grid,
                                         const MixedNormSpec& spec, const std::vector<double>& lambdas,
                                         StftStrides strides) {
  spec.validate();
  if (lambdas.size() < 2) throw ContractError("operator_norm_experiment needs at least two parameters");
  NormRatioReport rep;
  rep.phase = phase.name();
  rep.symbol = symbol.name();
  rep.spec = spec;
  rep.parameters = lambdas;
  const bool factored = phase.quadratic_form().has_value() && symbol.is_one();
  rep.route = factored ? "factorization" : "quadrature";
  std::vector<ElementaryFactor> factors;
  if (factored) factors = factorize(*phase.quadratic_form());
  const SampledFunction window = gaussian(grid, Vec::Zero(grid.dim()), 1.0);

  std::vector<double> xs, ys;
  for (double lambda : lambdas) {
    const SampledFunction f = dilated_gaussian(grid, lambda);
    FioOptions options;
    options.check_band_edge = false;
    const SampledFunction tf = factored ? apply_factors(factors, f) : apply_fio(phase, symbol, f, options);
    const double in = mod_norm(f, spec, window, strides);
    const double out = mod_norm(tf, spec, window, strides);
    if (!(in > 0.0) || !(out > 0.0) || !std::isfinite(in) || !std::isfinite(out))
      throw EvaluationError("operator_norm_experiment: non-positive or non-finite norm");
    rep.input_norms.push_back(in);
    rep.output_norms.push_back(out);
    rep.ratios.push_back(out / in);
    xs.push_back(std::log(lambda));
    ys.push_back(std::log(out / in));
  }
  rep.slope = fit_slope(xs, ys);
  return rep;
}

double m_infty_1_norm_estimate(const GridSymbol& symbol) {
  const Grid& grid = symbol.grid;
  if (grid.dim() != 1) throw ContractError("m_infty_1_norm_estimate is one-dimensional");
  const int n = grid.samples();
  const double dx = grid.dx();
  const double de = grid.deta();
  const int st = std::max(1, static_cast<int>(std::lround(0.5 / dx)));
  const int sf = std::max(1, static_cast<int>(std::lround(0.5 / de)));
  const std::size_t nn = static_cast<std::size_t>(n) * n;

  std::vector<double> gx(n), ge(n);
  std::vector<double> best(nn, 0.0);
  std::vector<cplx> buf(nn);
  for (int a = 0; a < n; a += st) {
    for (int j = 0; j < n; ++j) {
      const double t = wrap(grid.coordinate(j) - grid.coordinate(a), grid.period());
      gx[j] = std::exp(-kPi * t * t);
    }
    for (int b = 0; b < n; b += sf) {
      for (int k = 0; k < n; ++k) {
        const double t = wrap(grid.frequency(k) - grid.frequency(b), grid.bandwidth());
        ge[k] = std::exp(-kPi * t * t);
      }
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const std::size_t idx = static_cast<std::size_t>(j) * n + k;
          buf[idx] = symbol.values[idx] * (std::sqrt(2.0) * gx[j] * ge[k]);
        }
      fft::centered_dft(buf, n, 2, fft::Direction::forward);
      for (std::size_t idx = 0; idx < nn; ++idx) best[idx] = std::max(best[idx], std::abs(buf[idx]));
    }
  }
  // |V| carries dx deta; the zeta cell is (1/L)(dx) = 1/n.
  double total = 0.0;
  for (double v : best) total += v;
  return total * dx * de / n;
}

NuoReport nuo_surrogate(const Phase& phase, const PhaseBox& box, int samples) {
  if (phase.dim() != 1) throw ContractError("nuo_surrogate is one-dimensional");
  Vec zero = Vec::Zero(1);
  auto psi = [&](double target) {
    Vec eta(1);
    eta[0] = target;
    for (int it = 0; it < 60; ++it) {
      const double r = phase.grad_x(zero, eta)[0] - target;
      if (std::abs(r) < 1e-12 * std::max(1.0, std::abs(target))) break;
      eta[0] -= r / phase.hess_xeta(zero, eta)(0, 0);
    }
    return eta[0];
  };
  const auto first = halton_points(box, samples, 3);
  const auto second = halton_points(box, samples, 3 + samples);
  NuoReport rep;
  rep.samples = samples;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const Vec mp = first[i].head(1), nu = first[i].tail(1);
    const double np = second[i][1];
    const double lhs = 1.0 + std::abs(phase.grad_x(mp, nu)[0] - np);
    const double rhs = 1.0 + std::abs(nu[0] - psi(np));
    rep.min_ratio = std::min(rep.min_ratio, lhs / rhs);
  }
  return rep;
}

}  // namespace gaborfio
