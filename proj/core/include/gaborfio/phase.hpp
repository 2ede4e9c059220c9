#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gaborfio/types.hpp"

namespace gaborfio {

// Phi(x, eta) = 1/2 Ax.x + Bx.eta + 1/2 C eta.eta + eta0.x - x0.eta
struct QuadraticPhase {
  Mat A;
  Mat B;
  Mat C;
  Vec x0;
  Vec eta0;

  static QuadraticPhase identity(int d);

  int dim() const { return static_cast<int>(B.rows()); }
  // Checks shapes, A = A^T and C = C^T exactly, and det B != 0.
  void validate() const;

  double value(const Vec& x, const Vec& eta) const;
  Vec grad_x(const Vec& x, const Vec& eta) const;
  Vec grad_eta(const Vec& x, const Vec& eta) const;
};

// Axis-aligned box in phase space R^{2d}, coordinates ordered (x, eta).
struct PhaseBox {
  PhasePoint lower;
  PhasePoint upper;

  static PhaseBox centered(int d, double half_x, double half_eta);
  int dim() const { return static_cast<int>(lower.size()) / 2; }
  // Same center, half-widths multiplied by `factor`.
  PhaseBox scaled(double factor) const;
};

// Low-discrepancy (Halton) points in a box; deterministic for a given offset.
std::vector<PhasePoint> halton_points(const PhaseBox& box, int count, int offset = 1);

// A smooth phase given by evaluators. Gradients and the mixed Hessian
// H_{ij} = d^2 Phi / dx_i deta_j are required; the pure blocks fall back to
// central differences of the gradients when not supplied.
class Phase {
 public:
  using ScalarFn = std::function<double(const Vec&, const Vec&)>;
  using GradientFn = std::function<Vec(const Vec&, const Vec&)>;
  using HessianFn = std::function<Mat(const Vec&, const Vec&)>;

  struct Evaluators {
    ScalarFn value;
    GradientFn grad_x;
    GradientFn grad_eta;
    HessianFn hess_xeta;
    HessianFn hess_xx;
    HessianFn hess_etaeta;
  };

  Phase(std::string name, int dim, Evaluators evaluators, double delta);
  static Phase quadratic(std::string name, const QuadraticPhase& qp);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  // Declared lower bound for |det d2_{x,eta} Phi|.
  double delta() const { return delta_; }
  const std::optional<QuadraticPhase>& quadratic_form() const { return quadratic_; }

  double value(const Vec& x, const Vec& eta) const { return ev_.value(x, eta); }
  Vec grad_x(const Vec& x, const Vec& eta) const { return ev_.grad_x(x, eta); }
  Vec grad_eta(const Vec& x, const Vec& eta) const { return ev_.grad_eta(x, eta); }
  Mat hess_xeta(const Vec& x, const Vec& eta) const { return ev_.hess_xeta(x, eta); }
  Mat hess_xx(const Vec& x, const Vec& eta) const;
  Mat hess_etaeta(const Vec& x, const Vec& eta) const;
  // (grad_x, grad_eta) at z = (x, eta).
  PhasePoint gradient(const PhasePoint& z) const;
  // Full 2d x 2d Hessian in (x, eta) ordering.
  PhaseMat hessian(const PhasePoint& z) const;

 private:
  std::string name_;
  int dim_;
  Evaluators ev_;
  double delta_;
  std::optional<QuadraticPhase> quadratic_;
};

using PhaseParams = std::map<std::string, double>;

// Built-in catalog: identity, translation{x0}, modulation{eta0}, dilation{b},
// chirp{a}, free-schrodinger{t}, fourier-multiplier{c}, sine-perturbed{eps},
// and the non-conforming test phases x-sine{amp} and quartic{}.
Phase catalog_phase(const std::string& name, int dim, const PhaseParams& params = {});
std::vector<std::string> catalog_names();
// The subset of the catalog with quadratic phases, at default parameters.
std::vector<Phase> quadratic_catalog(int dim);

struct NewtonOptions {
  int max_iterations = 50;
  int max_halvings = 10;
  double tolerance = 1e-10;
  // Seed quadratic phases with the exact affine solution; otherwise x0 = y.
  bool closed_form_seed = true;
};

// chi(y, eta) = (x, xi): solves grad_eta Phi(x, eta) = y by damped Newton
// and sets xi = grad_x Phi(x, eta).
PhasePoint canonical_map(const Phase& phase, const Vec& y, const Vec& eta,
                         const NewtonOptions& options = {});
// chi^{-1}(x, xi) = (y, eta): solves grad_x Phi(x, eta) = xi for eta.
PhasePoint canonical_map_inverse(const Phase& phase, const Vec& x, const Vec& xi,
                                 const NewtonOptions& options = {});
// Jacobian of chi at (y, eta).
PhaseMat canonical_jacobian(const Phase& phase, const PhasePoint& yeta,
                            const NewtonOptions& options = {});

// The canonical transformation as an object: either Newton-backed (generic
// phase) or the closed-form affine map of a quadratic phase.
class CanonicalMap {
 public:
  static CanonicalMap from_phase(const Phase& phase, const NewtonOptions& options = {});
  static CanonicalMap affine(const PhaseMat& matrix, const PhasePoint& shift);

  int dim() const { return dim_; }
  bool is_affine() const { return !phase_.has_value(); }
  const PhaseMat& matrix() const { return matrix_; }
  const PhasePoint& shift() const { return shift_; }

  PhasePoint operator()(const PhasePoint& yeta) const;
  PhasePoint inverse(const PhasePoint& xxi) const;
  PhaseMat jacobian(const PhasePoint& yeta) const;

 private:
  CanonicalMap() = default;
  int dim_ = 1;
  std::optional<Phase> phase_;
  NewtonOptions options_;
  PhaseMat matrix_;
  PhasePoint shift_;
};

// Closed-form affine map: [x; xi] = [[B^-1, -B^-1 C], [A B^-1, B^T - A B^-1 C]] [y; eta]
//                                    + [B^-1 x0; A B^-1 x0 + eta0].
CanonicalMap canonical_map_quadratic(const QuadraticPhase& qp);

// max |J^T Omega J - Omega| over sampled points.
double symplectic_residual(const CanonicalMap& map, const std::vector<PhasePoint>& points);

struct BilipschitzReport {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  // |chi(z1) - chi(z2)| / |z1 - z2| lies in [1/K, K].
  double constant = 0.0;
};

BilipschitzReport bilipschitz(const CanonicalMap& map, const PhaseBox& box, int samples = 100);

struct PhaseConditionReport {
  int samples = 0;
  double sup_second = 0.0;
  double sup_third = 0.0;
  double min_det = 0.0;
  double delta = 0.0;
  bool exact = false;
  // min |det| >= delta/2 with delta > 0.
  bool det_condition = false;
  // Sup grows by more than 1.5x from the half-size box to the full box.
  bool second_growth = false;
  bool third_growth = false;
};

// Sampled (not proved) check of the derivative bounds and the mixed-Hessian
// determinant on a fixed 100-point low-discrepancy sample.
PhaseConditionReport check_phase_conditions(const Phase& phase, const PhaseBox& box,
                                            int samples = 100);

struct DiameterReport {
  double diameter = 0.0;
  double inner_diameter = 0.0;
  bool unbounded = false;
};

// Sampled sup_{x, x', eta} |grad_x Phi(x, eta) - grad_x Phi(x', eta)| on the
// box, compared with the half-size box to detect growth.
DiameterReport x_gradient_diameter(const Phase& phase, const PhaseBox& box);

struct LatticeInequalityConstants {
  int samples = 0;
  // min |grad_eta Phi(m', n) - m| / |x(m, n) - m'|
  double lower = 0.0;
  // max (|xi(m, n) - n'| - |grad_x Phi(m', n) - n'|) / |grad_eta Phi(m', n) - m|
  double upper = 0.0;
};

// Constants of the two lattice inequalities behind the almost-diagonalization
// estimate, fitted on lattice tuples (m, n, m', n') drawn from the box.
LatticeInequalityConstants lattice_inequality_constants(const Phase& phase, const PhaseBox& box, double alpha, double beta,
                               int samples = 400);

}  // namespace gaborfio
