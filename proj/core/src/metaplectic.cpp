#include "gaborfio/metaplectic.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "gaborfio/error.hpp"
#include "gaborfio/fio.hpp"

namespace gaborfio {
namespace {

struct Ratio {
  long p;
  long q;
};

Ratio rational(double b) {
  for (long q = 1; q <= 64; ++q) {
    const double bq = b * static_cast<double>(q);
    if (std::abs(bq - std::round(bq)) < 1e-12 * std::max(1.0, std::abs(bq))) {
      const auto p = static_cast<long>(std::round(bq));
      if (p == 0) break;
      return {p, q};
    }
  }
  throw ContractError("dilation entry " + detail::num(b) + " is not a representable ratio p/q");
}

long positive_mod(long a, long n) {
  const long r = a % n;
  return r < 0 ? r + n : r;
}

// Applies index map `source(j)` (returns -1 for zero) along one axis.
template <typename F>
std::vector<cplx> remap_axis(const std::vector<cplx>& in, int n, int dim, int axis, F source) {
  std::vector<cplx> out(in.size());
  const std::size_t inner = (dim == 2 && axis == 0) ? static_cast<std::size_t>(n) : 1;
  const std::size_t outer = in.size() / (static_cast<std::size_t>(n) * inner);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base = o * n * inner + i;
      for (int j = 0; j < n; ++j) {
        const long s = source(j);
        out[base + j * inner] = s < 0 ? cplx{} : in[base + static_cast<std::size_t>(s) * inner];
      }
    }
  return out;
}

SampledFunction dilate(const SampledFunction& f, const Mat& B) {
  const int d = f.grid.dim();
  const int n = f.grid.samples();
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      if (a != b && B(a, b) != 0.0)
        throw ContractError("apply_factors: only diagonal dilations are grid-representable");
  SampledFunction g = f;
  for (int a = 0; a < d; ++a) {
    const Ratio r = rational(B(a, a));
    if (r.q != 1) {
      // h^(eta) = q g^(q eta), band-limited to the grid.
      auto spec = fourier_transform(g);
      spec.values = remap_axis(spec.values, n, d, a, [&](int k) -> long {
        const long src = n / 2 + r.q * (k - n / 2);
        return (src >= 0 && src < n) ? src : -1;
      });
      for (auto& v : spec.values) v *= static_cast<double>(r.q);
      g = inverse_fourier_transform(spec);
    }
    if (r.p != 1)
      g.values = remap_axis(g.values, n, d, a,
                            [&](int j) { return positive_mod(n / 2 + r.p * (j - n / 2), n); });
  }
  return g;
}

template <typename F>
void multiply_pointwise(SampledFunction& f, F factor) {
  for (std::size_t i = 0; i < f.values.size(); ++i)
    f.values[i] *= factor(f.side == Side::time ? f.grid.point(i) : f.grid.frequency_point(i));
}

}  // namespace

std::string factor_name(const ElementaryFactor& factor) {
  static const char* names[] = {"modulation", "chirp-x", "dilation", "chirp-frequency", "translation"};
  return names[factor.index()];
}

std::vector<ElementaryFactor> factorize(const QuadraticPhase& qp) {
  qp.validate();
  return {ModulationFactor{qp.eta0}, ChirpXFactor{qp.A}, DilationFactor{qp.B}, ChirpFreqFactor{qp.C},
          TranslationFactor{qp.x0}};
}

SampledFunction apply_factors(const std::vector<ElementaryFactor>& factors, const SampledFunction& f) {
  if (f.side != Side::time) throw ContractError("apply_factors expects a time-side function");
  SampledFunction g = f;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    std::visit(
        [&](const auto& fac) {
          using T = std::decay_t<decltype(fac)>;
          if constexpr (std::is_same_v<T, ModulationFactor>) {
            multiply_pointwise(g, [&](const Vec& x) { return std::polar(1.0, kTwoPi * fac.eta0.dot(x)); });
          } else if constexpr (std::is_same_v<T, ChirpXFactor>) {
            multiply_pointwise(g, [&](const Vec& x) { return std::polar(1.0, kPi * x.dot(fac.A * x)); });
          } else if constexpr (std::is_same_v<T, DilationFactor>) {
            g = dilate(g, fac.B);
          } else if constexpr (std::is_same_v<T, ChirpFreqFactor>) {
            auto spec = fourier_transform(g);
            multiply_pointwise(spec, [&](const Vec& e) { return std::polar(1.0, kPi * e.dot(fac.C * e)); });
            g = inverse_fourier_transform(spec);
          } else {
            // Translation on the frequency side handles off-lattice shifts exactly.
            auto spec = fourier_transform(g);
            multiply_pointwise(spec, [&](const Vec& e) { return std::polar(1.0, -kTwoPi * fac.x0.dot(e)); });
            g = inverse_fourier_transform(spec);
          }
        },
        *it);
  }
  return g;
}

HamiltonianQuadratic HamiltonianQuadratic::free_particle(int d) {
  HamiltonianQuadratic h{PhaseMat::Zero(2 * d, 2 * d)};
  h.H.bottomRightCorner(d, d).setIdentity();
  return h;
}

HamiltonianQuadratic HamiltonianQuadratic::harmonic_oscillator(int d) {
  return {PhaseMat::Identity(2 * d, 2 * d)};
}

void HamiltonianQuadratic::validate() const {
  if (H.rows() != H.cols() || (H.rows() != 2 && H.rows() != 4))
    throw ConfigError("Hamiltonian matrix must be 2d x 2d with d in {1, 2}");
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 0.0)
    throw ConfigError("Hamiltonian matrix must be symmetric");
}

PhaseMat hamiltonian_flow(const HamiltonianQuadratic& h, double t) {
  h.validate();
  const Eigen::MatrixXd generator = t * symplectic_form(h.dim()) * h.H;
  return generator.exp();
}

QuadraticPhase symplectic_to_phase(const PhaseMat& S, const PhasePoint& shift) {
  const int d = static_cast<int>(S.rows()) / 2;
  const Mat m11 = S.topLeftCorner(d, d);
  const Mat m12 = S.topRightCorner(d, d);
  const Mat m21 = S.bottomLeftCorner(d, d);
  const double det = m11.determinant();
  if (std::abs(det) < 1e-10 * std::max(1.0, S.cwiseAbs().maxCoeff())) throw CausticError(det);
  const Mat inv = m11.inverse();
  QuadraticPhase qp;
  qp.B = inv;
  Mat c = -inv * m12;
  Mat a = m21 * inv;
  // Symmetric for symplectic S; remove round-off asymmetry.
  qp.C = 0.5 * (c + c.transpose());
  qp.A = 0.5 * (a + a.transpose());
  qp.x0 = qp.B * Vec(shift.head(d));
  qp.eta0 = Vec(shift.tail(d)) - qp.A * Vec(shift.head(d));
  return qp;
}

QuadraticPhase symplectic_to_phase(const PhaseMat& S) {
  return symplectic_to_phase(S, PhasePoint::Zero(S.rows()));
}

QuadraticPhase schrodinger_phase(const HamiltonianQuadratic& h, double t) {
  return symplectic_to_phase(hamiltonian_flow(h, -t));
}

SampledFunction schrodinger_demo(const HamiltonianQuadratic& h, double t, const SampledFunction& u0) {
  if (h.dim() != u0.grid.dim()) throw ContractError("schrodinger_demo: dimension mismatch");
  const QuadraticPhase qp = schrodinger_phase(h, t);
  SampledFunction u = apply_fio(Phase::quadratic("schrodinger", qp), Symbol(), u0);
  const double scale = std::sqrt(std::abs(qp.B.determinant()));
  for (auto& v : u.values) v *= scale;
  // For |B| large the quadrature samples periodic images of the input and
  // unitarity is lost; flag it instead of returning silently aliased data.
  u.periodization_warning = u0.periodization_warning || std::abs(u.l2_norm() / u0.l2_norm() - 1.0) > 1e-6;
  return u;
}

SampledFunction free_propagator(double t, const SampledFunction& u0) {
  auto spec = fourier_transform(u0);
  multiply_pointwise(spec, [t](const Vec& e) { return std::polar(1.0, kPi * t * e.squaredNorm()); });
  return inverse_fourier_transform(spec);
}

double phase_aligned_difference(const SampledFunction& a, const SampledFunction& b) {
  if (a.values.size() != b.values.size()) throw ContractError("phase_aligned_difference: size mismatch");
  cplx overlap = 0.0;
  double norm_a = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    overlap += std::conj(b.values[i]) * a.values[i];
    norm_a += std::norm(a.values[i]);
  }
  const cplx rot = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx(1.0);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) diff += std::norm(a.values[i] - rot * b.values[i]);
  return norm_a > 0 ? std::sqrt(diff / norm_a) : std::sqrt(diff);
}

}  // namespace gaborfio
