#include <gtest/gtest.h>

#include "gaborfio/error.hpp"
#include "gaborfio/fio.hpp"
#include "gaborfio/metaplectic.hpp"
#include "support.hpp"

using namespace gaborfio;
using gaborfio::test::v1;

namespace {

const Grid kGrid(1, 16.0, 256);

PhaseMat mat2(double a, double b, double c, double d) {
  PhaseMat m(2, 2);
  m << a, b, c, d;
  return m;
}

QuadraticPhase quad(double a, double b, double c, double x0 = 0.0, double eta0 = 0.0) {
  auto qp = QuadraticPhase::identity(1);
  qp.A(0, 0) = a;
  qp.B(0, 0) = b;
  qp.C(0, 0) = c;
  qp.x0[0] = x0;
  qp.eta0[0] = eta0;
  return qp;
}

}  // namespace

TEST(Flow, CalibrationCases) {
  const auto free = HamiltonianQuadratic::free_particle(1);
  const auto osc = HamiltonianQuadratic::harmonic_oscillator(1);
  EXPECT_LT((hamiltonian_flow(osc, 0.0) - PhaseMat::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LT((hamiltonian_flow(free, 1.0) - mat2(1, 1, 0, 1)).norm(), 1e-12);
  for (double t : {0.3, 1.0, 2.5}) {
    const auto s = hamiltonian_flow(osc, t);
    EXPECT_LT((s - mat2(std::cos(t), std::sin(t), -std::sin(t), std::cos(t))).norm(), 1e-12);
    const auto omega = symplectic_form(1);
    EXPECT_LT((s.transpose() * omega * s - omega).norm(), 1e-10);
  }
  EXPECT_LT((hamiltonian_flow(osc, 0.8) - hamiltonian_flow(osc, 0.3) * hamiltonian_flow(osc, 0.5)).norm(), 1e-10);
  const auto free2 = hamiltonian_flow(HamiltonianQuadratic::free_particle(2), 2.0);
  const auto omega2 = symplectic_form(2);
  EXPECT_LT((free2.transpose() * omega2 * free2 - omega2).norm(), 1e-10);
  EXPECT_NEAR(free2(0, 2), 2.0, 1e-12);
}

TEST(Flow, RejectsAsymmetricHamiltonian) {
  HamiltonianQuadratic h{mat2(1, 2, 0, 1)};
  EXPECT_THROW(h.validate(), Error);
}

TEST(SymplecticToPhase, Examples) {
  const auto id = symplectic_to_phase(PhaseMat::Identity(2, 2));
  EXPECT_NEAR(id.A(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(id.B(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(id.C(0, 0), 0.0, 1e-15);
  const auto free = symplectic_to_phase(mat2(1, 1, 0, 1));
  EXPECT_NEAR(free.A(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(free.B(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(free.C(0, 0), -1.0, 1e-15);
  try {
    symplectic_to_phase(mat2(0, 1, -1, 0));
    FAIL() << "expected a caustic";
  } catch (const CausticError& e) {
    EXPECT_NEAR(e.determinant(), 0.0, 1e-15);
  }
}

TEST(SymplecticToPhase, RoundTrips) {
  for (const auto& qp : {quad(0.5, 1.5, -0.25, 0.5, -1.0), quad(-1.0, 0.5, 2.0, 0.0, 0.75), quad(0, 2, 0, 1, 0)}) {
    const auto map = canonical_map_quadratic(qp);
    const auto back = symplectic_to_phase(map.matrix(), map.shift());
    EXPECT_NEAR(back.A(0, 0), qp.A(0, 0), 1e-10);
    EXPECT_NEAR(back.B(0, 0), qp.B(0, 0), 1e-10);
    EXPECT_NEAR(back.C(0, 0), qp.C(0, 0), 1e-10);
    EXPECT_NEAR(back.x0[0], qp.x0[0], 1e-10);
    EXPECT_NEAR(back.eta0[0], qp.eta0[0], 1e-10);
  }
  const auto s = hamiltonian_flow(HamiltonianQuadratic::harmonic_oscillator(1), 0.4);
  EXPECT_LT((canonical_map_quadratic(symplectic_to_phase(s)).matrix() - s).norm(), 1e-10);
}

TEST(Factorize, OrderAndNames) {
  const auto f = factorize(quad(1, 2, 3, 4, 5));
  ASSERT_EQ(f.size(), 5u);
  EXPECT_TRUE(std::holds_alternative<ModulationFactor>(f[0]));
  EXPECT_TRUE(std::holds_alternative<ChirpXFactor>(f[1]));
  EXPECT_TRUE(std::holds_alternative<DilationFactor>(f[2]));
  EXPECT_TRUE(std::holds_alternative<ChirpFreqFactor>(f[3]));
  EXPECT_TRUE(std::holds_alternative<TranslationFactor>(f[4]));
  for (const auto& factor : f) EXPECT_FALSE(factor_name(factor).empty());
  EXPECT_THROW(factorize(quad(0, 0, 0)), Error);
}

TEST(Factorize, ElementaryCases) {
  const auto f = gaussian(kGrid, v1(0.5), 1.0);
  EXPECT_LT(test::max_abs_diff(apply_factors(factorize(quad(0, 1, 0)), f), f), 1e-12);
  const auto chirped = apply_factors(factorize(quad(1, 1, 0)), f);
  for (int j = 0; j < kGrid.samples(); ++j) {
    const double x = kGrid.coordinate(j);
    EXPECT_LT(std::abs(chirped.values[j] - std::polar(1.0, kPi * x * x) * f.values[j]), 1e-12);
  }
  EXPECT_NEAR(chirped.l2_norm(), f.l2_norm(), 1e-12);
  // C = t: the free propagator, multiplier exp(pi i t eta^2).
  const auto prop = apply_factors(factorize(quad(0, 1, 0.7)), f);
  auto fh = fourier_transform(f);
  for (int k = 0; k < kGrid.samples(); ++k) fh.values[k] *= std::polar(1.0, kPi * 0.7 * std::pow(kGrid.frequency(k), 2));
  EXPECT_LT(test::max_abs_diff(prop, inverse_fourier_transform(fh)), 1e-12);
  EXPECT_LT(test::max_abs_diff(prop, free_propagator(0.7, f)), 1e-12);
}

TEST(Factorize, DilationsScaleNorm) {
  const auto f = gaussian(kGrid, v1(0.0), 1.0);
  // f(Bx) on the torus: integer B wraps the argument by L, B = 1/q wraps x by L.
  auto dilated = [](double x, double b, double period) {
    const double unit = period * std::min(1.0, b);
    double s = 0.0;
    for (int w = -3; w <= 3; ++w) s += std::pow(2.0, 0.25) * std::exp(-kPi * std::pow(b * x + w * unit, 2));
    return s;
  };
  for (double b : {2.0, 0.5, 3.0, 0.25}) {
    const auto out = apply_factors({DilationFactor{Mat::Constant(1, 1, b)}}, f);
    for (int j = 0; j < kGrid.samples(); ++j) {
      const double x = kGrid.coordinate(j);
      EXPECT_NEAR(std::abs(out.values[j] - dilated(x, b, kGrid.period())), 0.0, 1e-8);
    }
    // b < 1 keeps the dilated bump inside one period: ||D_B f|| = |B|^{-1/2} ||f||.
    // An integer b covers the torus b times, which restores the norm.
    EXPECT_NEAR(out.l2_norm(), b < 1.0 ? 1.0 / std::sqrt(b) : 1.0, 1e-8) << b;
  }
  EXPECT_THROW(apply_factors({DilationFactor{Mat::Constant(1, 1, std::sqrt(2.0))}}, f), ContractError);
}

TEST(Factorize, MatchesApplyFioOnCatalog) {
  const auto f = gaussian(kGrid, v1(0.5), 1.0);
  for (const auto& phase : quadratic_catalog(1)) {
    const auto& qp = *phase.quadratic_form();
    const auto a = apply_factors(factorize(qp), f);
    const auto b = apply_fio(phase, Symbol(), f);
    EXPECT_LT(phase_aligned_difference(b, a), 1e-6) << phase.name();
  }
  const auto general = quad(0.5, 2.0, -1.0, 0.5, 0.25);
  EXPECT_LT(phase_aligned_difference(apply_fio(Phase::quadratic("general", general), Symbol(), f),
                                     apply_factors(factorize(general), f)),
            1e-6);
}

TEST(Schrodinger, FreeParticleMatchesMultiplier) {
  const auto u0 = gaussian(kGrid, v1(0.0), 1.0);
  const auto free = HamiltonianQuadratic::free_particle(1);
  EXPECT_LT(phase_aligned_difference(schrodinger_demo(free, 0.0, u0), u0), 1e-12);
  for (double t : {0.5, 1.0}) {
    const auto u = schrodinger_demo(free, t, u0);
    EXPECT_LT(phase_aligned_difference(u, free_propagator(t, u0)), 1e-6) << t;
    EXPECT_FALSE(u.periodization_warning);
  }
}

TEST(Schrodinger, OscillatorSemigroupAndUnitarity) {
  const auto u0 = gaussian(kGrid, v1(1.0), 1.0);
  const auto osc = HamiltonianQuadratic::harmonic_oscillator(1);
  const double t = kPi / 8;
  const auto once = schrodinger_demo(osc, t, u0);
  EXPECT_NEAR(once.l2_norm(), 1.0, 1e-8);
  const auto twice = schrodinger_demo(osc, t, once);
  const auto direct = schrodinger_demo(osc, 2 * t, u0);
  EXPECT_LT(phase_aligned_difference(twice, direct), 1e-4);
  // Ground state exp(-pi x^2) is stationary up to a phase.
  const auto ground = gaussian(kGrid, v1(0.0), 1.0);
  EXPECT_LT(phase_aligned_difference(schrodinger_demo(osc, 0.3, ground), ground), 1e-8);
  EXPECT_THROW(schrodinger_demo(osc, kPi / 2, u0), CausticError);
  // Near the caustic |B| x leaves the torus; the result is flagged, not silently wrong.
  EXPECT_TRUE(schrodinger_demo(osc, 1.0, u0).periodization_warning);
}

TEST(Schrodinger, PhaseIsFlowAtNegativeTime) {
  const auto free = HamiltonianQuadratic::free_particle(1);
  const auto qp = schrodinger_phase(free, 0.5);
  EXPECT_NEAR(qp.C(0, 0), 0.5, 1e-12);
  EXPECT_LT((canonical_map_quadratic(qp).matrix() - hamiltonian_flow(free, -0.5)).norm(), 1e-12);
}
