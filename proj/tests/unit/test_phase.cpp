#include <gtest/gtest.h>

#include "gaborfio/error.hpp"
#include "gaborfio/phase.hpp"
#include "support.hpp"

using namespace gaborfio;
using gaborfio::test::v1;

namespace {

PhasePoint pp(double y, double eta) { return join(v1(y), v1(eta)); }

NewtonOptions generic_seed() {
  NewtonOptions o;
  o.closed_form_seed = false;
  return o;
}

void expect_point(const PhasePoint& got, const PhasePoint& want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  EXPECT_LE((got - want).cwiseAbs().maxCoeff(), tol) << got.transpose() << " vs " << want.transpose();
}

}  // namespace

TEST(Phase, CatalogCanonicalMaps) {
  const auto o = generic_seed();
  for (auto [y, eta] : {std::pair{0.3, -1.2}, {2.0, 0.5}, {-1.5, 3.0}}) {
    expect_point(canonical_map(catalog_phase("identity", 1), v1(y), v1(eta), o), pp(y, eta), 1e-10);
    expect_point(canonical_map(catalog_phase("translation", 1, {{"x0", 0.75}}), v1(y), v1(eta), o),
                 pp(y + 0.75, eta), 1e-10);
    expect_point(canonical_map(catalog_phase("chirp", 1), v1(y), v1(eta), o), pp(y, eta + y), 1e-10);
    expect_point(canonical_map(catalog_phase("dilation", 1, {{"b", 2.0}}), v1(y), v1(eta), o),
                 pp(y / 2.0, 2.0 * eta), 1e-10);
    expect_point(canonical_map(catalog_phase("free-schrodinger", 1, {{"t", 0.5}}), v1(y), v1(eta), o),
                 pp(y - 0.5 * eta, eta), 1e-10);
  }
}

TEST(Phase, UnknownNameIsConfigError) { EXPECT_THROW(catalog_phase("nope", 1), ConfigError); }

TEST(Phase, ValueAndDerivativesOfQuadraticForm) {
  QuadraticPhase qp = QuadraticPhase::identity(1);
  qp.A(0, 0) = 0.5;
  qp.B(0, 0) = 2.0;
  qp.C(0, 0) = -1.0;
  qp.x0[0] = 0.25;
  qp.eta0[0] = 1.5;
  const double x = 0.7, e = -0.4;
  EXPECT_NEAR(qp.value(v1(x), v1(e)), 0.25 * x * x + 2 * x * e - 0.5 * e * e + 1.5 * x - 0.25 * e, 1e-15);
  const Phase p = Phase::quadratic("q", qp);
  EXPECT_NEAR(p.grad_x(v1(x), v1(e))[0], 0.5 * x + 2 * e + 1.5, 1e-15);
  EXPECT_NEAR(p.grad_eta(v1(x), v1(e))[0], 2 * x - e - 0.25, 1e-15);
  EXPECT_NEAR(p.hessian(pp(x, e))(0, 1), 2.0, 1e-15);
  qp.B(0, 0) = 0.0;
  EXPECT_THROW(qp.validate(), Error);
}

TEST(Phase, QuadraticClosedFormAgreesWithNewton) {
  const auto box = PhaseBox::centered(1, 4.0, 4.0);
  QuadraticPhase qp = QuadraticPhase::identity(1);
  qp.A(0, 0) = 0.5;
  qp.B(0, 0) = 1.5;
  qp.C(0, 0) = -0.25;
  qp.x0[0] = 0.5;
  qp.eta0[0] = -1.0;
  const auto closed = canonical_map_quadratic(qp);
  const auto newton = CanonicalMap::from_phase(
      Phase("generic-wrapper", 1,
            {[qp](const Vec& x, const Vec& e) { return qp.value(x, e); },
             [qp](const Vec& x, const Vec& e) { return qp.grad_x(x, e); },
             [qp](const Vec& x, const Vec& e) { return qp.grad_eta(x, e); },
             [qp](const Vec&, const Vec&) { return qp.B; }, {}, {}},
            1.5),
      generic_seed());
  EXPECT_FALSE(newton.is_affine());
  EXPECT_TRUE(closed.is_affine());
  for (const auto& z : halton_points(box, 100)) expect_point(closed(z), newton(z), 1e-10);
  // Affine column: the image of the origin.
  const auto z0 = closed(pp(0.0, 0.0));
  EXPECT_NEAR(z0[0], 0.5 / 1.5, 1e-14);
  EXPECT_NEAR(z0[1], 0.5 * 0.5 / 1.5 - 1.0, 1e-14);
}

TEST(Phase, TwoDimensionalChirp) {
  const auto chirp = catalog_phase("chirp", 2);
  Vec y(2), e(2);
  y << 0.5, -1.0;
  e << 2.0, 0.25;
  const auto z = canonical_map(chirp, y, e, generic_seed());
  EXPECT_LE((head(z) - y).norm(), 1e-10);
  EXPECT_LE((tail(z) - (e + y)).norm(), 1e-10);
}

TEST(Phase, GenericPhaseRoundTripAndIdentities) {
  const auto phase = catalog_phase("sine-perturbed", 1, {{"eps", 0.5}});
  const auto box = PhaseBox::centered(1, 5.0, 5.0);
  for (const auto& z : halton_points(box, 100)) {
    const Vec y = head(z), eta = tail(z);
    const auto xxi = canonical_map(phase, y, eta);
    const Vec x = head(xxi), xi = tail(xxi);
    EXPECT_LE((phase.grad_eta(x, eta) - y).norm(), 1e-9);
    expect_point(canonical_map_inverse(phase, x, xi), z, 1e-9);
    // xi(grad_eta Phi(x, eta), eta) = grad_x Phi(x, eta)
    EXPECT_LE((tail(canonical_map(phase, phase.grad_eta(x, eta), eta)) - phase.grad_x(x, eta)).norm(), 1e-9);
  }
  const auto map = CanonicalMap::from_phase(phase);
  EXPECT_LT(symplectic_residual(map, halton_points(box, 50)), 1e-6);
  const auto bl = bilipschitz(map, box);
  EXPECT_GE(bl.min_ratio, 1.0 / bl.constant);
  EXPECT_LT(bl.constant, 10.0);
}

TEST(Phase, JacobianIsSymplecticForQuadraticPhases) {
  const auto box = PhaseBox::centered(1, 3.0, 3.0);
  for (const auto& phase : quadratic_catalog(1)) {
    const auto map = CanonicalMap::from_phase(phase);
    EXPECT_LT(symplectic_residual(map, halton_points(box, 20)), 1e-10) << phase.name();
  }
  const auto id = bilipschitz(CanonicalMap::from_phase(catalog_phase("identity", 1)), box);
  EXPECT_NEAR(id.constant, 1.0, 1e-12);
}

TEST(Phase, DegenerateMixedHessianRaises) {
  // Same evaluators, but a declared determinant bound the phase cannot honour.
  const auto base = catalog_phase("sine-perturbed", 1, {{"eps", 0.5}});
  const Phase claimed("claimed", 1,
                      {[base](const Vec& x, const Vec& e) { return base.value(x, e); },
                       [base](const Vec& x, const Vec& e) { return base.grad_x(x, e); },
                       [base](const Vec& x, const Vec& e) { return base.grad_eta(x, e); },
                       [base](const Vec& x, const Vec& e) { return base.hess_xeta(x, e); }, {}, {}},
                      4.0);
  EXPECT_THROW(canonical_map(claimed, v1(2.0), v1(1.0)), ConditionViolation);
}

TEST(Phase, ConditionReports) {
  const auto box = PhaseBox::centered(1, 6.0, 6.0);
  const auto q = check_phase_conditions(catalog_phase("dilation", 1, {{"b", 2.0}}), box);
  EXPECT_TRUE(q.exact);
  EXPECT_EQ(q.sup_third, 0.0);
  EXPECT_DOUBLE_EQ(q.min_det, 2.0);
  EXPECT_TRUE(q.det_condition);

  const auto s = check_phase_conditions(catalog_phase("sine-perturbed", 1, {{"eps", 1.0}}), box);
  EXPECT_FALSE(s.exact);
  EXPECT_LE(s.sup_second, 2.0 + 1e-6);
  EXPECT_GE(s.min_det, 0.0);
  EXPECT_LE(s.min_det, 2.0);
  EXPECT_FALSE(s.det_condition);
  EXPECT_FALSE(s.second_growth);

  const auto quartic = check_phase_conditions(catalog_phase("quartic", 1), box);
  EXPECT_TRUE(quartic.second_growth);
  EXPECT_TRUE(quartic.det_condition);
}

TEST(Phase, XGradientDiameter) {
  const auto box = PhaseBox::centered(1, 8.0, 8.0);
  const auto mult = x_gradient_diameter(catalog_phase("fourier-multiplier", 1), box);
  EXPECT_EQ(mult.diameter, 0.0);
  EXPECT_FALSE(mult.unbounded);
  const auto chirp = x_gradient_diameter(catalog_phase("chirp", 1), box);
  EXPECT_TRUE(chirp.unbounded);
  EXPECT_NEAR(chirp.diameter, 2.0 * chirp.inner_diameter, 1e-9);
  const auto sine = x_gradient_diameter(catalog_phase("x-sine", 1), box);
  EXPECT_LE(sine.diameter, 2.0 + 1e-12);
  EXPECT_FALSE(sine.unbounded);
}

TEST(Phase, LatticeInequalityConstants) {
  const auto c = lattice_inequality_constants(catalog_phase("chirp", 1), PhaseBox::centered(1, 6.0, 6.0), 0.5, 0.5);
  EXPECT_GT(c.samples, 0);
  EXPECT_NEAR(c.lower, 1.0, 1e-9);
  EXPECT_LE(c.upper, 1.0 + 1e-9);
}

TEST(Phase, HaltonPointsStayInBox) {
  const auto box = PhaseBox::centered(2, 1.0, 3.0);
  for (const auto& z : halton_points(box, 200)) {
    for (int a = 0; a < 4; ++a) {
      EXPECT_GE(z[a], box.lower[a]);
      EXPECT_LE(z[a], box.upper[a]);
    }
  }
  EXPECT_EQ(halton_points(box, 5)[3], halton_points(box, 5)[3]);
}
