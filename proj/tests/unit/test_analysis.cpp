#include <gtest/gtest.h>

#include <random>

#include "gaborfio/analysis.hpp"
#include "gaborfio/error.hpp"
#include "support.hpp"

using namespace gaborfio;
using gaborfio::test::v1;

namespace {

const Grid kGrid(1, 16.0, 256);

// ||e^{-pi lambda x^2}||_{M^{p,q}} with window phi:
// |V| = 2^{1/4} (1+l)^{-1/2} exp(-pi l x^2/(1+l)) exp(-pi eta^2/(1+l)).
double gaussian_mod_norm(double l, double p, double q) {
  auto factor = [](double r, double a) {  // (int exp(-pi r a t^2) dt)^{1/r}
    return std::isinf(r) ? 1.0 : std::pow(1.0 / std::sqrt(r * a), 1.0 / r);
  };
  return std::pow(2.0, 0.25) / std::sqrt(1.0 + l) * factor(p, l / (1.0 + l)) * factor(q, 1.0 / (1.0 + l));
}

struct Doubling {
  Grid grid;
  GaborSystem gs;
  explicit Doubling(double L)
      : grid(1, L, static_cast<int>(L * L)),
        gs(GaborSystem::build(gaussian(grid, v1(0.0), 1.0), Lattice(grid, 0.5, 0.5))) {}
};

const Doubling& small() {
  static const Doubling d(8.0);
  return d;
}
const Doubling& large() {
  static const Doubling d(16.0);
  return d;
}

GaborMatrix random_dense(const Lattice& lat, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  GaborMatrix m(lat, 0.0, MatrixRoute::direct, "identity");
  for (std::size_t c = 0; c < lat.size(); ++c) {
    std::vector<GaborMatrix::Entry> col;
    for (std::size_t r = 0; r < lat.size(); ++r) col.push_back({static_cast<std::uint32_t>(r), cplx(u(rng))});
    m.set_column(c, std::move(col));
  }
  return m;
}

}  // namespace

TEST(ModNorm, GaussianIsometryAndM1) {
  const auto g = gaussian(kGrid, v1(0.0), 1.0);
  EXPECT_NEAR(mod_norm(g, {2.0, 2.0, 0.0}), 1.0, 1e-6);
  EXPECT_NEAR(mod_norm(g, {1.0, 1.0, 0.0}), 2.0, 1e-4);
}

TEST(ModNorm, DilatedGaussianClosedForm) {
  for (double l : {0.5, 1.0, 2.0}) {
    const auto f = dilated_gaussian(kGrid, l);
    for (double p : {1.0, 2.0, kInf})
      for (double q : {1.0, 2.0, kInf}) {
        const double ref = gaussian_mod_norm(l, p, q);
        EXPECT_NEAR(mod_norm(f, {p, q, 0.0}) / ref, 1.0, 1e-6) << l << " " << p << " " << q;
      }
  }
  // The M^{inf,1} norm of the dilated family does not depend on lambda.
  EXPECT_NEAR(gaussian_mod_norm(0.01, kInf, 1.0), std::pow(2.0, 0.25), 1e-14);
}

TEST(ModNorm, StridesApproximateFullGrid) {
  const auto f = dilated_gaussian(kGrid, 0.5);
  const double full = mod_norm(f, {2.0, 2.0, 0.0});
  EXPECT_NEAR(mod_norm(f, {2.0, 2.0, 0.0}, StftStrides{2, 2}) / full, 1.0, 1e-6);
  EXPECT_GT(mod_norm(f, {2.0, 2.0, 1.0}), full);
}

TEST(Family, LogSpaceAndDilatedGaussian) {
  const auto l = log_space(1e-3, 1e-1, 9);
  ASSERT_EQ(l.size(), 9u);
  EXPECT_NEAR(l.front(), 1e-3, 1e-18);
  EXPECT_NEAR(l.back(), 1e-1, 1e-16);
  EXPECT_NEAR(l[4], 1e-2, 1e-16);
  const auto f = dilated_gaussian(kGrid, 0.25);
  EXPECT_NEAR(f.values[128 + 32].real(), std::exp(-kPi * 0.25 * 4.0), 1e-15);
  EXPECT_NEAR(fit_slope({1, 2, 3, 4}, {3, 5, 7, 9}), 2.0, 1e-14);
}

TEST(Decay, IdentityGaussianDecay) {
  const auto phase = catalog_phase("identity", 1);
  const auto chi = CanonicalMap::from_phase(phase);
  const auto r = decay_report(gabor_matrix_direct(phase, Symbol(), small().gs), phase, chi);
  EXPECT_TRUE(r.slope_valid);
  EXPECT_GE(r.fitted_bins, kMinFitBins);
  EXPECT_LE(r.slope, -6.0);
  ASSERT_EQ(r.constants.size(), 3u);
  for (double c : r.constants) EXPECT_TRUE(std::isfinite(c));
  // The diagonal carries the largest modulus ||g_tight||^2 = 1/4 at distance 1.
  EXPECT_NEAR(r.constants[0], 0.25, 1e-9);
  EXPECT_NEAR(r.distance_ratio_min, 1.0, 1e-12);
  EXPECT_NEAR(r.distance_ratio_max, 1.0, 1e-12);
}

TEST(Decay, ChirpConstantsStableUnderDoubling) {
  const auto phase = catalog_phase("chirp", 1);
  const auto chi = CanonicalMap::from_phase(phase);
  const auto a = decay_report(gabor_matrix_direct(phase, Symbol(), small().gs), phase, chi);
  const auto b = decay_report(gabor_matrix_direct(phase, Symbol(), large().gs), phase, chi);
  for (std::size_t i = 0; i < a.constants.size(); ++i) {
    const double ratio = b.constants[i] / a.constants[i];
    EXPECT_LT(ratio, 2.0);
    EXPECT_GT(ratio, 0.5);
    EXPECT_LT(b.constants_raw[i] / a.constants_raw[i], 2.0);
  }
  EXPECT_LE(b.slope, -6.0);
  // Distance equivalence within the bilipschitz constant of the chirp map.
  const double k = bilipschitz(chi, PhaseBox::centered(1, 8.0, 8.0)).constant;
  EXPECT_GE(b.distance_ratio_min, 1.0 / (k * k) - 1e-9);
  EXPECT_LE(b.distance_ratio_max, k * k + 1e-9);
}

TEST(Decay, RandomDenseMatrixIsNegativeControl) {
  const auto phase = catalog_phase("identity", 1);
  const auto chi = CanonicalMap::from_phase(phase);
  const auto a = decay_report(random_dense(small().gs.lattice(), 1), phase, chi);
  const auto b = decay_report(random_dense(large().gs.lattice(), 2), phase, chi);
  EXPECT_GT(b.slope, -0.5);
  for (std::size_t i = 0; i < a.constants.size(); ++i) EXPECT_GT(b.constants[i] / a.constants[i], 2.0);
}

TEST(Schur, IdentitySumsMatchDirectSummation) {
  const auto phase = catalog_phase("identity", 1);
  const auto chi = CanonicalMap::from_phase(phase);
  const auto m = gabor_matrix_direct(phase, Symbol(), small().gs);
  std::vector<double> col(m.dimension()), row(m.dimension());
  m.for_each([&](std::size_t r, std::size_t c, cplx v) {
    col[c] += std::abs(v);
    row[r] += std::abs(v);
  });
  const auto s = schur_sums(m, 0.0, chi);
  EXPECT_NEAR(s.sup_column, *std::max_element(col.begin(), col.end()), 1e-12);
  EXPECT_NEAR(s.sup_row, *std::max_element(row.begin(), row.end()), 1e-12);
  const auto big = schur_sums(gabor_matrix_direct(phase, Symbol(), large().gs), 0.0, chi);
  EXPECT_NEAR(big.sup_column / s.sup_column, 1.0, 1e-3);
}

TEST(Schur, ChirpNestedSumGrowsMultiplierStays) {
  const auto chirp = catalog_phase("chirp", 1);
  const auto mult = catalog_phase("fourier-multiplier", 1);
  const auto cchi = CanonicalMap::from_phase(chirp);
  const auto mchi = CanonicalMap::from_phase(mult);
  const auto c1 = schur_sums(gabor_matrix_direct(chirp, Symbol(), small().gs), 0.0, cchi);
  const auto c2 = schur_sums(gabor_matrix_direct(chirp, Symbol(), large().gs), 0.0, cchi);
  const auto m1 = schur_sums(gabor_matrix_direct(mult, Symbol(), small().gs), 0.0, mchi);
  const auto m2 = schur_sums(gabor_matrix_direct(mult, Symbol(), large().gs), 0.0, mchi);
  EXPECT_LT(c2.sup_column / c1.sup_column, 2.0);
  EXPECT_LT(c2.sup_row / c1.sup_row, 2.0);
  EXPECT_GT(c2.nested_mixed / c1.nested_mixed, 1.9);
  EXPECT_GT(c2.nested_mixed_adjoint / c1.nested_mixed_adjoint, 1.9);
  EXPECT_LT(m2.nested_mixed / m1.nested_mixed, 1.1);
  EXPECT_LT(m2.nested_mixed_adjoint / m1.nested_mixed_adjoint, 1.1);
}

TEST(Schur, ModerateWeightQuotientBounded) {
  const auto chirp = catalog_phase("chirp", 1);
  const auto chi = CanonicalMap::from_phase(chirp);
  const auto m = gabor_matrix_direct(chirp, Symbol(), small().gs);
  for (double s : {0.0, 1.0, 2.0}) {
    const auto sums = schur_sums(m, s, chi);
    EXPECT_TRUE(std::isfinite(sums.moderate_quotient));
    EXPECT_LE(sums.moderate_quotient, std::pow(2.0, s / 2.0) * 4.0) << s;
    EXPECT_TRUE(std::isfinite(sums.weighted_sup_column));
  }
}

TEST(NormExperiment, UnitaryOperatorsPreserveM2) {
  const auto lambdas = log_space(0.25, 1.0, 5);
  const auto r = operator_norm_experiment(catalog_phase("chirp", 1), Symbol(), kGrid, {2.0, 2.0, 0.0}, lambdas);
  EXPECT_EQ(r.route, "factorization");
  for (double ratio : r.ratios) EXPECT_NEAR(ratio, 1.0, 1e-6);
  EXPECT_NEAR(r.slope, 0.0, 1e-6);
  const auto g = operator_norm_experiment(catalog_phase("sine-perturbed", 1), catalog_symbol("gaussian-x", kGrid),
                                          kGrid, {2.0, 2.0, 0.0}, lambdas);
  EXPECT_EQ(g.route, "quadrature");
  for (double ratio : g.ratios) EXPECT_LT(ratio, 1.0);
}

TEST(SymbolNorm, MInfinityOneSurrogate) {
  const Grid grid(1, 8.0, 64);
  const double one = m_infty_1_norm_estimate(sample_symbol(Symbol(), grid));
  EXPECT_NEAR(one, std::sqrt(2.0), 1e-3);
  const double mod = m_infty_1_norm_estimate(
      sample_symbol(catalog_symbol("modulation", grid, {{"a", 0.25}, {"b", 0.5}}), grid));
  EXPECT_NEAR(mod, one, 1e-9);
  const double sign = m_infty_1_norm_estimate(sample_symbol(catalog_symbol("smoothed-sign", grid), grid));
  EXPECT_TRUE(std::isfinite(sign));
  EXPECT_GT(sign, one);
}

TEST(Nuo, MultiplierBoundedBelow) {
  const auto box = PhaseBox::centered(1, 6.0, 6.0);
  const auto r = nuo_surrogate(catalog_phase("fourier-multiplier", 1), box);
  EXPECT_GT(r.samples, 0);
  EXPECT_GT(r.min_ratio, 0.1);
  const auto chirp = nuo_surrogate(catalog_phase("chirp", 1), box);
  EXPECT_LT(chirp.min_ratio, r.min_ratio);
}
