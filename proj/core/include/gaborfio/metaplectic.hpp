#pragma once

#include <string>
#include <variant>
#include <vector>

#include "gaborfio/grid.hpp"
#include "gaborfio/phase.hpp"

namespace gaborfio {

// Elementary factors of T = M_{eta0} U_A D_B F^{-1} U_C F T_{x0}.
struct ModulationFactor {
  Vec eta0;
};
struct TranslationFactor {
  Vec x0;
};
// (D_B f)(x) = f(Bx)
struct DilationFactor {
  Mat B;
};
// Multiplication by exp(pi i Ax.x).
struct ChirpXFactor {
  Mat A;
};
// Fourier multiplier exp(pi i C eta.eta).
struct ChirpFreqFactor {
  Mat C;
};

using ElementaryFactor =
    std::variant<ModulationFactor, ChirpXFactor, DilationFactor, ChirpFreqFactor, TranslationFactor>;

std::string factor_name(const ElementaryFactor& factor);

// Ordered list [M_{eta0}, U_A, D_B, F^{-1} U_C F, T_{x0}] (leftmost applied last).
std::vector<ElementaryFactor> factorize(const QuadraticPhase& qp);

// Applies the factors right to left with exact grid operations. Dilations
// must be diagonal with rational entries p/q (q <= 64); integer factors
// subsample the time grid, 1/q factors rescale the spectrum.
SampledFunction apply_factors(const std::vector<ElementaryFactor>& factors, const SampledFunction& f);

// Quadratic Hamiltonian with Weyl symbol h(z) = pi z.Hz on R^{2d}; the free
// particle -(1/4 pi) Laplacian is H = diag(0, I), the harmonic oscillator
// -(1/4 pi) Laplacian + pi |x|^2 is H = I.
struct HamiltonianQuadratic {
  PhaseMat H;

  static HamiltonianQuadratic free_particle(int d);
  static HamiltonianQuadratic harmonic_oscillator(int d);
  int dim() const { return static_cast<int>(H.rows()) / 2; }
  void validate() const;
};

// exp(t J H) with J the standard symplectic form.
PhaseMat hamiltonian_flow(const HamiltonianQuadratic& h, double t);

// Generating quadratic phase of the affine symplectic map z -> S z + shift:
// B = M11^{-1}, C = -M11^{-1} M12, A = M21 M11^{-1}, x0 = B s1, eta0 = s2 - A s1.
// Throws CausticError when M11 is singular.
QuadraticPhase symplectic_to_phase(const PhaseMat& S, const PhasePoint& shift);
QuadraticPhase symplectic_to_phase(const PhaseMat& S);

// Quadratic phase generating e^{itH} (i u_t + H u = 0); its canonical map is
// the classical flow at time -t.
QuadraticPhase schrodinger_phase(const HamiltonianQuadratic& h, double t);

// u(t) = e^{itH} u0 via apply_fio with sigma = 1, scaled by |det B|^{1/2} so the
// result is unitary up to a global phase. Sets periodization_warning when the
// L2 norm drifts by more than 1e-6 (|B| x leaves the torus).
SampledFunction schrodinger_demo(const HamiltonianQuadratic& h, double t, const SampledFunction& u0);

// Exact free propagator: Fourier multiplier exp(pi i t |eta|^2).
SampledFunction free_propagator(double t, const SampledFunction& u0);

// ||a - e^{i theta} b|| / ||a|| minimized over the global phase theta.
double phase_aligned_difference(const SampledFunction& a, const SampledFunction& b);

}  // namespace gaborfio
