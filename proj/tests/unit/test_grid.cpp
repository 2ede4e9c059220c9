#include <gtest/gtest.h>

#include <random>

#include "gaborfio/error.hpp"
#include "gaborfio/fft.hpp"
#include "gaborfio/grid.hpp"
#include "support.hpp"

using namespace gaborfio;
using gaborfio::test::v1;

namespace {

const Grid kGrid(1, 16.0, 256);

double phi(double t) { return std::pow(2.0, 0.25) * std::exp(-kPi * t * t); }

}  // namespace

TEST(Grid, Coordinates) {
  EXPECT_DOUBLE_EQ(kGrid.dx(), 1.0 / 16.0);
  EXPECT_DOUBLE_EQ(kGrid.deta(), 1.0 / 16.0);
  EXPECT_DOUBLE_EQ(kGrid.coordinate(128), 0.0);
  EXPECT_DOUBLE_EQ(kGrid.coordinate(0), -8.0);
  EXPECT_DOUBLE_EQ(kGrid.frequency(0), -8.0);
  EXPECT_EQ(Grid(2, 4.0, 16).size(), 256u);
}

TEST(Grid, RejectsBadParameters) {
  EXPECT_THROW(Grid(3, 1.0, 16), ContractError);
  EXPECT_THROW(Grid(1, -1.0, 16), ContractError);
  EXPECT_THROW(Grid(1, 1.0, 15), ContractError);
}

TEST(Grid, GaussianIsNormalizedAndSelfDual) {
  const auto g = gaussian(kGrid, v1(0.0), 1.0);
  EXPECT_NEAR(g.l2_norm(), 1.0, 1e-9);
  EXPECT_FALSE(g.periodization_warning);
  for (int j = 0; j < kGrid.samples(); ++j) EXPECT_NEAR(g.values[j].real(), phi(kGrid.coordinate(j)), 1e-14);
  const auto gh = fourier_transform(g);
  EXPECT_EQ(gh.side, Side::frequency);
  for (int k = 0; k < kGrid.samples(); ++k)
    EXPECT_NEAR(std::abs(gh.values[k] - phi(kGrid.frequency(k))), 0.0, 1e-8);
}

TEST(Grid, WideGaussianIsFlagged) {
  EXPECT_TRUE(gaussian(kGrid, v1(0.0), 8.0).periodization_warning);
  EXPECT_THROW(gaussian(kGrid, v1(0.0), 0.0), ContractError);
}

TEST(Grid, GaussianCenteredAtHalfPeriodPeaksAtMidpoint) {
  const auto g = gaussian(kGrid, v1(8.0), 1.0);
  std::size_t best = 0;
  for (std::size_t j = 0; j < g.values.size(); ++j)
    if (std::abs(g.values[j]) > std::abs(g.values[best])) best = j;
  EXPECT_NEAR(std::abs(wrap(kGrid.coordinate(static_cast<int>(best)) - 8.0, 16.0)), 0.0, 1e-12);
}

TEST(Grid, DiracSampleHasFlatSpectrum) {
  SampledFunction f(kGrid, Side::time);
  f.values[128] = 1.0 / kGrid.dx();
  for (const auto& v : fourier_transform(f).values) EXPECT_NEAR(std::abs(v - 1.0), 0.0, 1e-12);
}

TEST(Grid, FourierRoundTripAndParseval) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 5; ++trial) {
    SampledFunction f(kGrid, Side::time);
    for (auto& v : f.values) v = {normal(rng), normal(rng)};
    const auto fh = fourier_transform(f);
    EXPECT_NEAR(fh.l2_norm() / f.l2_norm(), 1.0, 1e-12);
    EXPECT_LT(test::relative_l2(inverse_fourier_transform(fh), f), 1e-12);
  }
}

TEST(Grid, TwoDimensionalRoundTrip) {
  const Grid g2(2, 8.0, 32);
  const auto f = gaussian(g2, test::v2(0.5, -1.0), 1.0);
  EXPECT_NEAR(f.l2_norm(), 1.0, 1e-9);
  EXPECT_LT(test::relative_l2(inverse_fourier_transform(fourier_transform(f)), f), 1e-12);
}

TEST(Grid, SideMismatchIsRejected) {
  const auto g = gaussian(kGrid, v1(0.0), 1.0);
  EXPECT_THROW(inverse_fourier_transform(g), ContractError);
  EXPECT_THROW(fourier_transform(fourier_transform(g)), ContractError);
}

TEST(Grid, TranslationMovesPeakAndIsExact) {
  const auto g = gaussian(kGrid, v1(0.0), 1.0);
  EXPECT_LT(test::max_abs_diff(translate(g, v1(0.0)), g), 1e-15);
  const auto t = translate(g, v1(1.0));
  EXPECT_LT(test::max_abs_diff(t, gaussian(kGrid, v1(1.0), 1.0)), 1e-14);
  EXPECT_THROW(translate(g, v1(0.01)), ContractError);
  EXPECT_THROW(modulate(g, v1(0.01)), ContractError);
}

TEST(Grid, TranslationBecomesModulationInFrequency) {
  const auto g = gaussian(kGrid, v1(0.0), 1.0);
  const double x0 = 1.5;
  const auto lhs = fourier_transform(translate(g, v1(x0)));
  const auto rhs = modulate(fourier_transform(g), v1(-x0));
  EXPECT_LT(test::max_abs_diff(lhs, rhs), 1e-12);
}

TEST(Grid, ShiftModulationCommutation) {
  const auto g = gaussian(kGrid, v1(0.0), 1.0);
  const double x = 1.0, eta = 2.0;
  const auto a = modulate(translate(g, v1(x)), v1(eta));
  const auto b = translate(modulate(g, v1(eta)), v1(x));
  const cplx factor = std::polar(1.0, kTwoPi * x * eta);
  for (std::size_t j = 0; j < a.values.size(); ++j)
    EXPECT_LT(std::abs(a.values[j] - factor * b.values[j]), 1e-12);
  const double x2 = 0.5, eta2 = 0.25;
  const auto c = modulate(translate(g, v1(x2)), v1(eta2));
  const auto d = translate(modulate(g, v1(eta2)), v1(x2));
  const cplx f2 = std::polar(1.0, kTwoPi * x2 * eta2);
  for (std::size_t j = 0; j < c.values.size(); ++j) EXPECT_LT(std::abs(c.values[j] - f2 * d.values[j]), 1e-12);
}

TEST(Grid, InnerProductAndLatticeSteps) {
  const auto g = gaussian(kGrid, v1(0.0), 1.0);
  EXPECT_NEAR(std::abs(inner_product(g, g) - 1.0), 0.0, 1e-9);
  EXPECT_EQ(lattice_steps(0.5, 1.0 / 16.0), 8);
  EXPECT_THROW(lattice_steps(0.3, 1.0 / 16.0), ContractError);
  EXPECT_DOUBLE_EQ(wrap(9.0, 16.0), -7.0);
  EXPECT_DOUBLE_EQ(wrap(-8.0, 16.0), -8.0);
}

TEST(Fft, RowsMatchSingleTransforms) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  const int n = 32, count = 4;
  std::vector<cplx> data(n * count);
  for (auto& v : data) v = {normal(rng), normal(rng)};
  auto rows = data;
  fft::centered_dft_rows(rows, n, count, fft::Direction::forward);
  for (int r = 0; r < count; ++r) {
    std::vector<cplx> one(data.begin() + r * n, data.begin() + (r + 1) * n);
    fft::centered_dft(one, n, 1, fft::Direction::forward);
    for (int k = 0; k < n; ++k) EXPECT_LT(std::abs(one[k] - rows[r * n + k]), 1e-12);
  }
  // Direct sum oracle for the centered kernel.
  for (int k = 0; k < n; ++k) {
    cplx s = 0.0;
    for (int j = 0; j < n; ++j) s += data[j] * std::polar(1.0, -kTwoPi * (j - n / 2) * (k - n / 2) / n);
    EXPECT_LT(std::abs(s - rows[k]), 1e-11);
  }
}
