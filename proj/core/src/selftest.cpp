#include "gaborfio/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "gaborfio/analysis.hpp"
#include "gaborfio/error.hpp"
#include "gaborfio/metaplectic.hpp"

namespace gaborfio {
namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

CriterionResult named(int id, std::string title) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  return r;
}

double spread(double a, double b) { return std::max(a, b) / std::min(a, b); }

// Random band-limited input: Gaussian-distributed spectrum on |eta| <= band.
SampledFunction random_band_limited(const Grid& grid, double band, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  SampledFunction spec(grid, Side::frequency);
  for (std::size_t k = 0; k < spec.values.size(); ++k)
    if (grid.frequency_point(k).cwiseAbs().maxCoeff() <= band) spec.values[k] = {normal(rng), normal(rng)};
  return inverse_fourier_transform(spec);
}

double relative_l2(const SampledFunction& a, const SampledFunction& b) {
  double diff = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    diff += std::norm(a.values[i] - b.values[i]);
    norm += std::norm(b.values[i]);
  }
  return std::sqrt(diff / norm);
}

// Dense Gram matrix <g_{m,n}, g_{m',n'}> (row (m',n'), column (m,n)) from atom samples.
Eigen::MatrixXcd gram_matrix(const SampledFunction& g, const Lattice& lat) {
  const int n = lat.grid().samples();
  Eigen::MatrixXcd atoms(n, static_cast<Eigen::Index>(lat.size()));
  for (std::size_t c = 0; c < lat.size(); ++c) {
    const auto a = atom(g, lat, lat.time_of(c), lat.freq_of(c));
    for (int j = 0; j < n; ++j) atoms(j, static_cast<Eigen::Index>(c)) = a.values[j];
  }
  return lat.grid().dx() * (atoms.adjoint() * atoms);
}

// Closed form of |<M_{n'} T_{m'} phi, M_n T_m phi>| for phi = 2^{1/4} e^{-pi x^2}.
double gaussian_gram_closed_form(double dm, double dn) {
  return std::exp(-0.5 * kPi * (dm * dm + dn * dn));
}

// Independent check of the closed form by trapezoidal quadrature on [-12, 12].
double gaussian_gram_quadrature(double m, double n, double mp, double np) {
  const double h = 1e-3;
  cplx sum = 0.0;
  for (int i = -12000; i <= 12000; ++i) {
    const double t = i * h;
    const double a = std::pow(2.0, 0.25) * std::exp(-kPi * (t - m) * (t - m));
    const double b = std::pow(2.0, 0.25) * std::exp(-kPi * (t - mp) * (t - mp));
    sum += a * b * std::polar(1.0, kTwoPi * (n - np) * t);
  }
  return std::abs(sum * h);
}

// Matrices shared between criteria, built on first use.
class Workspace {
 public:
  // Grid with n = L^2 so chirps are periodic on the grid.
  static Grid square_grid(int L) { return Grid(1, L, L * L); }

  const GaborSystem& system(int L) {
    auto& slot = systems_[L];
    if (!slot) {
      const Grid grid = square_grid(L);
      slot = std::make_unique<GaborSystem>(
          GaborSystem::build(gaussian(grid, Vec::Zero(1), 1.0), Lattice(grid, 0.5, 0.5)));
    }
    return *slot;
  }

  const GaborMatrix& direct(const std::string& phase, int L) {
    auto& slot = matrices_[{phase, L}];
    if (!slot)
      slot = std::make_unique<GaborMatrix>(gabor_matrix_direct(catalog_phase(phase, 1), Symbol(), system(L)));
    return *slot;
  }

 private:
  std::map<int, std::unique_ptr<GaborSystem>> systems_;
  std::map<std::pair<std::string, int>, std::unique_ptr<GaborMatrix>> matrices_;
};

CriterionResult identity_equivalence(Workspace& ws, std::mt19937_64& rng) {
  CriterionResult r = named(1, "identity-phase equivalence");
  const auto start = Clock::now();
  const Grid grid = Workspace::square_grid(16);
  const Phase identity = catalog_phase("identity", 1);
  double worst_fio = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_band_limited(grid, 4.0, rng);
    worst_fio = std::max(worst_fio, relative_l2(apply_fio(identity, Symbol(), f), f));
  }
  const GaborSystem& gsys = ws.system(16);
  const GaborMatrix& m = ws.direct("identity", 16);
  const Eigen::MatrixXcd gram = gram_matrix(gsys.tight(), gsys.lattice());
  double diff = 0.0;
  for (Eigen::Index c = 0; c < gram.cols(); ++c)
    for (Eigen::Index row = 0; row < gram.rows(); ++row)
      diff = std::max(diff, std::abs(m.entry(row, c) - gram(row, c)));
  const double gram_rel = diff / gram.cwiseAbs().maxCoeff();
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.passed = worst_fio <= 1e-8 && gram_rel <= 1e-6 && r.seconds < 30.0;
  r.metrics = {{"fio_max_relative_error", worst_fio}, {"gram_relative_error", gram_rel}, {"inputs", 20}};
  r.summary = "Tf=f rel " + fmt("%.2e", worst_fio) + " (<=1e-8), matrix vs Gram " + fmt("%.2e", gram_rel) +
              " (<=1e-6), runtime limit 30 s";
  return r;
}

CriterionResult gaussian_gram(Workspace&) {
  CriterionResult r = named(2, "Gaussian Gram oracle");
  // First the closed form against quadrature at a spread of offsets.
  double oracle_err = 0.0;
  for (double dm : {0.0, 0.5, 1.0, 1.5, 2.5})
    for (double dn : {0.0, 0.5, 1.0, 2.0, 3.0})
      oracle_err = std::max(oracle_err, std::abs(gaussian_gram_quadrature(0.25, -0.5, 0.25 + dm, -0.5 + dn) -
                                                 gaussian_gram_closed_form(dm, dn)));
  const Grid grid = Workspace::square_grid(16);
  const Lattice lat(grid, 0.5, 0.5);
  const Eigen::MatrixXcd gram = gram_matrix(gaussian(grid, Vec::Zero(1), 1.0), lat);
  double err = 0.0;
  for (std::size_t c = 0; c < lat.size(); ++c)
    for (std::size_t row = 0; row < lat.size(); ++row) {
      const double dm = wrap(lat.time_point(lat.time_of(row)) - lat.time_point(lat.time_of(c)), lat.time_period());
      const double dn = wrap(lat.freq_point(lat.freq_of(row)) - lat.freq_point(lat.freq_of(c)), lat.freq_period());
      err = std::max(err, std::abs(std::abs(gram(row, c)) - gaussian_gram_closed_form(dm, dn)));
    }
  r.passed = oracle_err <= 1e-9 && err <= 1e-6;
  r.metrics = {{"closed_form_vs_quadrature", oracle_err}, {"max_abs_error", err}, {"pairs", lat.size() * lat.size()}};
  r.summary = "closed form vs quadrature " + fmt("%.1e", oracle_err) + ", grid Gram vs closed form " +
              fmt("%.2e", err) + " (<=1e-6) over all lattice offsets";
  return r;
}

CriterionResult canonical_map_check(std::mt19937_64& rng) {
  CriterionResult r = named(3, "canonical map closed form");
  std::uniform_real_distribution<double> uni(-4.0, 4.0);
  NewtonOptions generic;
  generic.closed_form_seed = false;
  double newton = 0.0, symp = 0.0, roundtrip = 0.0;
  Json per_phase = Json::object();
  for (const Phase& phase : quadratic_catalog(1)) {
    const CanonicalMap closed = canonical_map_quadratic(*phase.quadratic_form());
    const CanonicalMap solved = CanonicalMap::from_phase(phase, generic);
    double pn = 0.0, ps = 0.0, pr = 0.0;
    std::vector<PhasePoint> points;
    for (int i = 0; i < 100; ++i) {
      PhasePoint z(2);
      z << uni(rng), uni(rng);
      points.push_back(z);
      pn = std::max(pn, (solved(z) - closed(z)).cwiseAbs().maxCoeff());
      pr = std::max(pr, (solved(solved.inverse(z)) - z).cwiseAbs().maxCoeff());
    }
    ps = symplectic_residual(solved, points);
    per_phase[phase.name()] = {{"newton_vs_closed", pn}, {"symplectic", ps}, {"roundtrip", pr}};
    newton = std::max(newton, pn);
    symp = std::max(symp, ps);
    roundtrip = std::max(roundtrip, pr);
  }
  r.passed = newton <= 1e-10 && symp <= 1e-8 && roundtrip <= 1e-9;
  r.metrics = {{"newton_vs_closed", newton}, {"symplectic_residual", symp}, {"roundtrip", roundtrip},
               {"phases", per_phase}};
  r.summary = "Newton vs closed form " + fmt("%.1e", newton) + " (<=1e-10), symplectic " + fmt("%.1e", symp) +
              " (<=1e-8), chi(chi^-1) " + fmt("%.1e", roundtrip) + " (<=1e-9)";
  return r;
}

CriterionResult almost_diagonalization(Workspace& ws) {
  CriterionResult r = named(4, "almost-diagonalization (chirp)");
  const auto start = Clock::now();
  const Phase chirp = catalog_phase("chirp", 1);
  const CanonicalMap chi = canonical_map_quadratic(*chirp.quadratic_form());
  const DecayReport small = decay_report(ws.direct("chirp", 16), chirp, chi);
  const DecayReport large = decay_report(ws.direct("chirp", 32), chirp, chi);
  bool ok = small.slope_valid && large.slope_valid && small.slope <= -6.0 && large.slope <= -6.0;
  Json constants = Json::array();
  std::string ratios;
  for (std::size_t i = 0; i < small.orders.size(); ++i) {
    const double ratio = spread(small.constants[i], large.constants[i]);
    ok = ok && ratio < 2.0;
    constants.push_back({{"N", small.orders[i]}, {"L16", small.constants[i]}, {"L32", large.constants[i]},
                         {"ratio", ratio}});
    ratios += (i ? "/" : "") + fmt("%.3f", ratio);
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.passed = ok && r.seconds < 300.0;
  r.metrics = {{"slope_L16", small.slope}, {"slope_L32", large.slope}, {"bins_L16", small.fitted_bins},
               {"bins_L32", large.fitted_bins}, {"constants", constants}};
  r.summary = "slope " + fmt("%.2f", small.slope) + " / " + fmt("%.2f", large.slope) + " (<=-6), C_N ratio N=1,2,3 " +
              ratios + " (<2), runtime limit 300 s";
  return r;
}

CriterionResult route_equivalence(Workspace& ws) {
  CriterionResult r = named(5, "route equivalence");
  const GaborSystem& gsys = ws.system(16);
  const Grid& grid = gsys.lattice().grid();
  double worst = 0.0;
  Json cases = Json::array();
  for (const char* phase_name : {"identity", "chirp"})
    for (const char* symbol_name : {"one", "gaussian-x"}) {
      const Phase phase = catalog_phase(phase_name, 1);
      const Symbol symbol = catalog_symbol(symbol_name, grid);
      const GaborMatrix direct = symbol.is_one() ? ws.direct(phase_name, 16)
                                                 : gabor_matrix_direct(phase, symbol, gsys);
      const GaborMatrix via = gabor_matrix_via_symbol_stft(phase, sample_symbol(symbol, grid), gsys);
      const double rel = compare_matrices(direct, via).relative();
      worst = std::max(worst, rel);
      cases.push_back({{"phase", phase_name}, {"symbol", symbol_name}, {"relative_difference", rel}});
    }
  r.passed = worst <= 1e-4;
  r.metrics = {{"max_relative_difference", worst}, {"cases", cases}};
  r.summary = "direct vs symbol-STFT max " + fmt("%.2e", worst) + " x max-modulus (<=1e-4), 4 cases";
  return r;
}

CriterionResult schur_check(Workspace& ws) {
  CriterionResult r = named(6, "Schur sums");
  auto sums = [&](const char* name, int L) {
    const Phase phase = catalog_phase(name, 1);
    return schur_sums(ws.direct(name, L), 0.0, canonical_map_quadratic(*phase.quadratic_form()));
  };
  const SchurSums c16 = sums("chirp", 16), c32 = sums("chirp", 32);
  const SchurSums f16 = sums("fourier-multiplier", 16), f32 = sums("fourier-multiplier", 32);
  const double col = spread(c16.sup_column, c32.sup_column);
  const double row = spread(c16.sup_row, c32.sup_row);
  const double nested_growth = c32.nested_mixed / c16.nested_mixed;
  const double multiplier = spread(f16.nested_mixed, f32.nested_mixed);
  r.passed = std::isfinite(c32.sup_column) && std::isfinite(c32.sup_row) && col < 2.0 && row < 2.0 &&
             nested_growth >= 2.0 && multiplier < 2.0;
  r.metrics = {{"chirp_L16", to_json(c16)}, {"chirp_L32", to_json(c32)},
               {"multiplier_L16", to_json(f16)}, {"multiplier_L32", to_json(f32)},
               {"column_ratio", col}, {"row_ratio", row},
               {"chirp_nested_growth", nested_growth}, {"chirp_nested_growth_minus_2", nested_growth - 2.0},
               {"multiplier_nested_ratio", multiplier}};
  r.summary = "chirp sup-col/sup-row ratio " + fmt("%.4f", col) + "/" + fmt("%.4f", row) + " (<2), chirp nested-sum growth " +
              fmt("%.15f", nested_growth) + " (>=2), multiplier nested-sum ratio " + fmt("%.4f", multiplier) + " (<2)";
  return r;
}

CriterionResult norm_slopes() {
  CriterionResult r = named(7, "norm-ratio slopes");
  const auto start = Clock::now();
  // n = L^2: the chirp is periodic on the grid and L = 128 resolves lambda = 1e-3.
  const Grid grid(1, 128, 128 * 128);
  const auto lambdas = log_space(1e-3, 1e-1, 9);
  const StftStrides strides{16, 8};
  const NormRatioReport chirp_inf1 =
      operator_norm_experiment(catalog_phase("chirp", 1), Symbol(), grid, {kInf, 1.0, 0.0}, lambdas, strides);
  const NormRatioReport chirp_22 =
      operator_norm_experiment(catalog_phase("chirp", 1), Symbol(), grid, {2.0, 2.0, 0.0}, lambdas, strides);
  const NormRatioReport mult_inf1 = operator_norm_experiment(catalog_phase("fourier-multiplier", 1), Symbol(),
                                                             grid, {kInf, 1.0, 0.0}, lambdas, strides);
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.passed = std::abs(chirp_inf1.slope + 0.5) <= 0.1 && std::abs(chirp_22.slope) <= 0.05 &&
             std::abs(mult_inf1.slope) <= 0.1 && r.seconds < 120.0;
  r.metrics = {{"chirp_inf_1", to_json(chirp_inf1)}, {"chirp_2_2", to_json(chirp_22)},
               {"multiplier_inf_1", to_json(mult_inf1)}};
  r.summary = "chirp (inf,1) " + fmt("%.3f", chirp_inf1.slope) + " (-0.5+-0.1), chirp (2,2) " +
              fmt("%.3f", chirp_22.slope) + " (0+-0.05), multiplier (inf,1) " + fmt("%.3f", mult_inf1.slope) +
              " (0+-0.1), runtime limit 120 s";
  return r;
}

CriterionResult frame_machinery(Workspace& ws, std::mt19937_64& rng) {
  CriterionResult r = named(8, "frame machinery");
  const GaborSystem& gsys = ws.system(16);
  const Lattice& lat = gsys.lattice();
  double tight = 0.0, dual = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random_band_limited(lat.grid(), 4.0, rng);
    tight = std::max(tight, relative_l2(synthesize(gsys.tight(), lat, analyze(gsys.tight(), lat, f)), f));
    dual = std::max(dual, relative_l2(synthesize(gsys.dual(), lat, analyze(gsys.window(), lat, f)), f));
  }
  bool ok = tight <= 1e-8 && dual <= 1e-8;
  Json spreads = Json::object();
  std::string text;
  for (double p : {1.0, 2.0, kInf}) {
    const MixedNormSpec spec{p, p, 0.0};
    double lo = kInf, hi = 0.0;
    for (double lambda : log_space(0.25, 4.0, 8)) {
      const auto f = dilated_gaussian(lat.grid(), lambda);
      const double ratio = mixed_seq_norm(analyze(gsys.window(), lat, f), spec) / mod_norm(f, spec, gsys.window());
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    ok = ok && hi / lo <= 10.0;
    const std::string key = std::isinf(p) ? "inf" : fmt("%.0f", p);
    spreads[key] = hi / lo;
    text += (text.empty() ? "" : "/") + fmt("%.2f", hi / lo);
  }
  r.passed = ok;
  r.metrics = {{"tight_reconstruction", tight}, {"dual_reconstruction", dual}, {"norm_ratio_spread", spreads},
               {"frame_bounds", to_json(gsys.bounds())}};
  r.summary = "tight " + fmt("%.1e", tight) + ", dual " + fmt("%.1e", dual) + " (<=1e-8), norm spread p=1/2/inf " +
              text + " (<=10)";
  return r;
}

CriterionResult metaplectic_consistency() {
  CriterionResult r = named(9, "metaplectic consistency");
  const Grid grid = Workspace::square_grid(16);
  Vec center(1);
  center << 0.5;
  const SampledFunction u0 = gaussian(grid, center, 1.0);
  double factor = 0.0;
  Json per_phase = Json::object();
  for (const Phase& phase : quadratic_catalog(1)) {
    const double d = phase_aligned_difference(apply_fio(phase, Symbol(), u0),
                                              apply_factors(factorize(*phase.quadratic_form()), u0));
    per_phase[phase.name()] = d;
    factor = std::max(factor, d);
  }
  const auto free = HamiltonianQuadratic::free_particle(1);
  const double schrodinger = phase_aligned_difference(schrodinger_demo(free, 1.0, u0), free_propagator(1.0, u0));

  Vec shifted(1);
  shifted << 1.0;
  const SampledFunction coherent = gaussian(grid, shifted, 1.0);
  const auto osc = HamiltonianQuadratic::harmonic_oscillator(1);
  const double norm_drift =
      std::abs(schrodinger_demo(osc, kPi / 8, coherent).l2_norm() / coherent.l2_norm() - 1.0);
  double semigroup = 0.0;
  for (const auto& h : {free, osc})
    semigroup = std::max(semigroup, (hamiltonian_flow(h, 0.8) - hamiltonian_flow(h, 0.5) * hamiltonian_flow(h, 0.3))
                                        .cwiseAbs()
                                        .maxCoeff());
  bool caustic = false;
  double caustic_det = 0.0;
  try {
    symplectic_to_phase(hamiltonian_flow(osc, kPi / 2));
  } catch (const CausticError& e) {
    caustic = true;
    caustic_det = e.determinant();
  }
  r.passed = factor <= 1e-6 && schrodinger <= 1e-6 && norm_drift <= 1e-8 && semigroup <= 1e-10 && caustic;
  r.metrics = {{"factorization_vs_fio", per_phase}, {"free_schrodinger_vs_multiplier", schrodinger},
               {"oscillator_norm_drift", norm_drift}, {"semigroup_residual", semigroup},
               {"fourier_transform_caustic", caustic}, {"caustic_determinant", caustic_det}};
  r.summary = "factorization vs FIO " + fmt("%.1e", factor) + ", free Schrodinger " + fmt("%.1e", schrodinger) +
              " (<=1e-6), oscillator norm " + fmt("%.1e", norm_drift) + " (<=1e-8), semigroup " +
              fmt("%.1e", semigroup) + " (<=1e-10), Fourier transform " + (caustic ? "rejected" : "NOT rejected");
  return r;
}

}  // namespace

std::vector<CriterionResult> run_selftest(const SelftestOptions& options,
                                          const std::function<void(const CriterionResult&)>& on_result) {
  Workspace ws;
  std::vector<CriterionResult> results;
  auto wanted = [&](int id) {
    return options.only.empty() || std::find(options.only.begin(), options.only.end(), id) != options.only.end();
  };
  for (int id = 1; id <= 9; ++id) {
    if (!wanted(id)) continue;
    // Each criterion draws from its own stream so subsets reproduce the full run.
    std::mt19937_64 rng(options.seed + static_cast<unsigned long long>(id));
    const auto start = Clock::now();
    CriterionResult r;
    try {
      switch (id) {
        case 1: r = identity_equivalence(ws, rng); break;
        case 2: r = gaussian_gram(ws); break;
        case 3: r = canonical_map_check(rng); break;
        case 4: r = almost_diagonalization(ws); break;
        case 5: r = route_equivalence(ws); break;
        case 6: r = schur_check(ws); break;
        case 7: r = norm_slopes(); break;
        case 8: r = frame_machinery(ws, rng); break;
        default: r = metaplectic_consistency(); break;
      }
    } catch (const std::exception& e) {
      r.id = id;
      r.title = "criterion " + std::to_string(id);
      r.passed = false;
      r.summary = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_result_line(const CriterionResult& r) {
  std::ostringstream out;
  out << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.title << " (" << fmt("%.1f", r.seconds)
      << " s) -- " << r.summary;
  return out.str();
}

Json to_json(const CriterionResult& r) {
  return {{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"summary", r.summary}, {"metrics", r.metrics}};
}

}  // namespace gaborfio
