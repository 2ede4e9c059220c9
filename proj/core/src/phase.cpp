#include "gaborfio/phase.hpp"

#include <algorithm>
#include <cmath>

#include "gaborfio/error.hpp"

namespace gaborfio {
namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

double radical_inverse(int index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * (index % base);
    index /= base;
    f /= base;
  }
  return result;
}

double param(const PhaseParams& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void check_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) throw EvaluationError(std::string("non-finite ") + what);
}

double scale_of(const Vec& v) { return std::max(1.0, v.norm()); }

// Solves F(u) = target for u with Jacobian jac(u), damped by step halving.
template <typename Residual, typename Jacobian>
Vec newton(Vec u, const Vec& target, Residual residual, Jacobian jac, double delta,
           const NewtonOptions& opt, const char* what) {
  const double tol = opt.tolerance * scale_of(target);
  Vec r = residual(u) - target;
  check_finite(r, what);
  double rn = r.norm();
  for (int it = 0; it < opt.max_iterations && rn > 1e-4 * tol; ++it) {
    const Mat j = jac(u);
    const double det = j.determinant();
    if (!(std::abs(det) >= 0.5 * delta) || det == 0.0)
      throw ConditionViolation(std::string(what) + ": mixed Hessian determinant below delta/2",
                               std::abs(det));
    const Vec step = j.partialPivLu().solve(r);
    double lambda = 1.0;
    Vec trial = u - step;
    Vec rt = residual(trial) - target;
    int halvings = 0;
    while (!(rt.norm() < rn) && halvings < opt.max_halvings) {
      lambda *= 0.5;
      trial = u - lambda * step;
      rt = residual(trial) - target;
      ++halvings;
    }
    if (!(rt.norm() < rn)) break;  // stagnated at round-off level
    u = trial;
    r = rt;
    rn = r.norm();
  }
  if (!(rn <= tol)) throw ConvergenceError(std::string(what) + ": Newton did not converge", rn);
  return u;
}

}  // namespace

QuadraticPhase QuadraticPhase::identity(int d) {
  return {Mat::Zero(d, d), Mat::Identity(d, d), Mat::Zero(d, d), Vec::Zero(d), Vec::Zero(d)};
}

void QuadraticPhase::validate() const {
  const int d = dim();
  if (d < 1 || d > 2 || B.cols() != d || A.rows() != d || A.cols() != d || C.rows() != d ||
      C.cols() != d || x0.size() != d || eta0.size() != d)
    throw ContractError("quadratic phase: inconsistent dimensions");
  if (A != A.transpose() || C != C.transpose())
    throw ContractError("quadratic phase: A and C must be symmetric");
  if (B.determinant() == 0.0) throw ConditionViolation("quadratic phase: B is singular", 0.0);
}

double QuadraticPhase::value(const Vec& x, const Vec& eta) const {
  return 0.5 * x.dot(A * x) + (B * x).dot(eta) + 0.5 * eta.dot(C * eta) + eta0.dot(x) - x0.dot(eta);
}

Vec QuadraticPhase::grad_x(const Vec& x, const Vec& eta) const {
  return A * x + B.transpose() * eta + eta0;
}

Vec QuadraticPhase::grad_eta(const Vec& x, const Vec& eta) const { return B * x + C * eta - x0; }

PhaseBox PhaseBox::centered(int d, double half_x, double half_eta) {
  PhaseBox box{PhasePoint(2 * d), PhasePoint(2 * d)};
  for (int a = 0; a < d; ++a) {
    box.lower[a] = -half_x;
    box.upper[a] = half_x;
    box.lower[d + a] = -half_eta;
    box.upper[d + a] = half_eta;
  }
  return box;
}

PhaseBox PhaseBox::scaled(double factor) const {
  const PhasePoint mid = 0.5 * (lower + upper);
  const PhasePoint half = 0.5 * (upper - lower);
  return {mid - factor * half, mid + factor * half};
}

std::vector<PhasePoint> halton_points(const PhaseBox& box, int count, int offset) {
  const int dims = static_cast<int>(box.lower.size());
  std::vector<PhasePoint> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    PhasePoint p(dims);
    for (int a = 0; a < dims; ++a)
      p[a] = box.lower[a] + (box.upper[a] - box.lower[a]) * radical_inverse(i + offset, kPrimes[a]);
    pts.push_back(p);
  }
  return pts;
}

Phase::Phase(std::string name, int dim, Evaluators evaluators, double delta)
    : name_(std::move(name)), dim_(dim), ev_(std::move(evaluators)), delta_(delta) {
  if (dim != 1 && dim != 2) throw ContractError("phase dimension must be 1 or 2");
  if (!ev_.value || !ev_.grad_x || !ev_.grad_eta || !ev_.hess_xeta)
    throw ContractError("phase '" + name_ + "' is missing required evaluators");
}

Phase Phase::quadratic(std::string name, const QuadraticPhase& qp) {
  qp.validate();
  Evaluators ev;
  ev.value = [qp](const Vec& x, const Vec& e) { return qp.value(x, e); };
  ev.grad_x = [qp](const Vec& x, const Vec& e) { return qp.grad_x(x, e); };
  ev.grad_eta = [qp](const Vec& x, const Vec& e) { return qp.grad_eta(x, e); };
  ev.hess_xeta = [bt = Mat(qp.B.transpose())](const Vec&, const Vec&) { return bt; };
  ev.hess_xx = [a = qp.A](const Vec&, const Vec&) { return a; };
  ev.hess_etaeta = [c = qp.C](const Vec&, const Vec&) { return c; };
  Phase phase(std::move(name), qp.dim(), std::move(ev), std::abs(qp.B.determinant()));
  phase.quadratic_ = qp;
  return phase;
}

Mat Phase::hess_xx(const Vec& x, const Vec& eta) const {
  if (ev_.hess_xx) return ev_.hess_xx(x, eta);
  Mat h(dim_, dim_);
  for (int j = 0; j < dim_; ++j) {
    const double step = 1e-5 * std::max(1.0, std::abs(x[j]));
    Vec xp = x, xm = x;
    xp[j] += step;
    xm[j] -= step;
    h.col(j) = (grad_x(xp, eta) - grad_x(xm, eta)) / (2.0 * step);
  }
  return h;
}

Mat Phase::hess_etaeta(const Vec& x, const Vec& eta) const {
  if (ev_.hess_etaeta) return ev_.hess_etaeta(x, eta);
  Mat h(dim_, dim_);
  for (int j = 0; j < dim_; ++j) {
    const double step = 1e-5 * std::max(1.0, std::abs(eta[j]));
    Vec ep = eta, em = eta;
    ep[j] += step;
    em[j] -= step;
    h.col(j) = (grad_eta(x, ep) - grad_eta(x, em)) / (2.0 * step);
  }
  return h;
}

PhasePoint Phase::gradient(const PhasePoint& z) const {
  const Vec x = head(z), eta = tail(z);
  return join(grad_x(x, eta), grad_eta(x, eta));
}

PhaseMat Phase::hessian(const PhasePoint& z) const {
  const Vec x = head(z), eta = tail(z);
  const int d = dim_;
  PhaseMat h(2 * d, 2 * d);
  const Mat mixed = hess_xeta(x, eta);
  h.topLeftCorner(d, d) = hess_xx(x, eta);
  h.topRightCorner(d, d) = mixed;
  h.bottomLeftCorner(d, d) = mixed.transpose();
  h.bottomRightCorner(d, d) = hess_etaeta(x, eta);
  return h;
}

Phase catalog_phase(const std::string& name, int d, const PhaseParams& params) {
  auto qp = QuadraticPhase::identity(d);
  if (name == "identity") return Phase::quadratic(name, qp);
  if (name == "translation") {
    qp.x0 = Vec::Constant(d, param(params, "x0", 1.0));
    return Phase::quadratic(name, qp);
  }
  if (name == "modulation") {
    qp.eta0 = Vec::Constant(d, param(params, "eta0", 1.0));
    return Phase::quadratic(name, qp);
  }
  if (name == "dilation") {
    qp.B = param(params, "b", 2.0) * Mat::Identity(d, d);
    return Phase::quadratic(name, qp);
  }
  if (name == "chirp") {
    qp.A = param(params, "a", 1.0) * Mat::Identity(d, d);
    return Phase::quadratic(name, qp);
  }
  if (name == "free-schrodinger") {
    qp.C = param(params, "t", 1.0) * Mat::Identity(d, d);
    return Phase::quadratic(name, qp);
  }
  if (name == "fourier-multiplier") {
    qp.C = param(params, "c", 1.0) * Mat::Identity(d, d);
    return Phase::quadratic(name, qp);
  }
  if (name == "sine-perturbed") {
    const double eps = param(params, "eps", 0.5);
    Phase::Evaluators ev;
    ev.value = [eps](const Vec& x, const Vec& e) {
      double v = x.dot(e);
      for (int a = 0; a < x.size(); ++a) v += eps * std::sin(x[a]) * std::sin(e[a]);
      return v;
    };
    ev.grad_x = [eps](const Vec& x, const Vec& e) {
      Vec g = e;
      for (int a = 0; a < x.size(); ++a) g[a] += eps * std::cos(x[a]) * std::sin(e[a]);
      return g;
    };
    ev.grad_eta = [eps](const Vec& x, const Vec& e) {
      Vec g = x;
      for (int a = 0; a < x.size(); ++a) g[a] += eps * std::sin(x[a]) * std::cos(e[a]);
      return g;
    };
    ev.hess_xeta = [eps](const Vec& x, const Vec& e) {
      Mat h = Mat::Identity(x.size(), x.size());
      for (int a = 0; a < x.size(); ++a) h(a, a) += eps * std::cos(x[a]) * std::cos(e[a]);
      return h;
    };
    ev.hess_xx = [eps](const Vec& x, const Vec& e) {
      Mat h = Mat::Zero(x.size(), x.size());
      for (int a = 0; a < x.size(); ++a) h(a, a) = -eps * std::sin(x[a]) * std::sin(e[a]);
      return h;
    };
    ev.hess_etaeta = ev.hess_xx;
    const double delta = std::pow(std::max(0.0, 1.0 - std::abs(eps)), d);
    return Phase(name, d, std::move(ev), delta);
  }
  if (name == "x-sine") {
    const double amp = param(params, "amp", 1.0);
    Phase::Evaluators ev;
    ev.value = [amp](const Vec& x, const Vec& e) {
      double v = x.dot(e);
      for (int a = 0; a < x.size(); ++a) v += amp * std::sin(x[a]);
      return v;
    };
    ev.grad_x = [amp](const Vec& x, const Vec& e) {
      Vec g = e;
      for (int a = 0; a < x.size(); ++a) g[a] += amp * std::cos(x[a]);
      return g;
    };
    ev.grad_eta = [](const Vec& x, const Vec&) { return x; };
    ev.hess_xeta = [](const Vec& x, const Vec&) { return Mat(Mat::Identity(x.size(), x.size())); };
    ev.hess_xx = [amp](const Vec& x, const Vec&) {
      Mat h = Mat::Zero(x.size(), x.size());
      for (int a = 0; a < x.size(); ++a) h(a, a) = -amp * std::sin(x[a]);
      return h;
    };
    ev.hess_etaeta = [](const Vec& x, const Vec&) { return Mat(Mat::Zero(x.size(), x.size())); };
    return Phase(name, d, std::move(ev), 1.0);
  }
  if (name == "quartic") {
    Phase::Evaluators ev;
    ev.value = [](const Vec& x, const Vec& e) { return x.dot(e) + x.array().pow(4).sum(); };
    ev.grad_x = [](const Vec& x, const Vec& e) { return Vec(e + 4.0 * x.array().pow(3).matrix()); };
    ev.grad_eta = [](const Vec& x, const Vec&) { return x; };
    ev.hess_xeta = [](const Vec& x, const Vec&) { return Mat(Mat::Identity(x.size(), x.size())); };
    ev.hess_xx = [](const Vec& x, const Vec&) {
      return Mat((12.0 * x.array().square()).matrix().asDiagonal());
    };
    ev.hess_etaeta = [](const Vec& x, const Vec&) { return Mat(Mat::Zero(x.size(), x.size())); };
    return Phase(name, d, std::move(ev), 1.0);
  }
  throw ConfigError("unknown phase '" + name + "'");
}

std::vector<std::string> catalog_names() {
  return {"identity",         "translation",        "modulation",     "dilation", "chirp",
          "free-schrodinger", "fourier-multiplier", "sine-perturbed", "x-sine",   "quartic"};
}

std::vector<Phase> quadratic_catalog(int d) {
  std::vector<Phase> out;
  for (const char* name :
       {"identity", "translation", "modulation", "dilation", "chirp", "free-schrodinger"})
    out.push_back(catalog_phase(name, d));
  return out;
}

PhasePoint canonical_map(const Phase& phase, const Vec& y, const Vec& eta,
                         const NewtonOptions& options) {
  Vec seed = y;
  if (options.closed_form_seed && phase.quadratic_form()) {
    const auto& qp = *phase.quadratic_form();
    seed = qp.B.partialPivLu().solve(y - qp.C * eta + qp.x0);
  }
  const Vec x = newton(
      seed, y, [&](const Vec& u) { return phase.grad_eta(u, eta); },
      [&](const Vec& u) { return Mat(phase.hess_xeta(u, eta).transpose()); }, phase.delta(),
      options, "canonical_map");
  const Vec xi = phase.grad_x(x, eta);
  check_finite(xi, "xi");
  return join(x, xi);
}

PhasePoint canonical_map_inverse(const Phase& phase, const Vec& x, const Vec& xi,
                                 const NewtonOptions& options) {
  Vec seed = xi;
  if (options.closed_form_seed && phase.quadratic_form()) {
    const auto& qp = *phase.quadratic_form();
    seed = qp.B.transpose().partialPivLu().solve(xi - qp.A * x - qp.eta0);
  }
  const Vec eta = newton(
      seed, xi, [&](const Vec& u) { return phase.grad_x(x, u); },
      [&](const Vec& u) { return phase.hess_xeta(x, u); }, phase.delta(), options,
      "canonical_map_inverse");
  const Vec y = phase.grad_eta(x, eta);
  check_finite(y, "y");
  return join(y, eta);
}

PhaseMat canonical_jacobian(const Phase& phase, const PhasePoint& yeta, const NewtonOptions& options) {
  const int d = phase.dim();
  const PhasePoint xxi = canonical_map(phase, head(yeta), tail(yeta), options);
  const Vec x = head(xxi), eta = tail(yeta);
  const Mat h = phase.hess_xeta(x, eta);
  const Mat p = phase.hess_xx(x, eta);
  const Mat q = phase.hess_etaeta(x, eta);
  const Mat hinv_t = h.transpose().inverse();
  PhaseMat j(2 * d, 2 * d);
  j.topLeftCorner(d, d) = hinv_t;
  j.topRightCorner(d, d) = -hinv_t * q;
  j.bottomLeftCorner(d, d) = p * hinv_t;
  j.bottomRightCorner(d, d) = h - p * hinv_t * q;
  return j;
}

CanonicalMap CanonicalMap::from_phase(const Phase& phase, const NewtonOptions& options) {
  CanonicalMap m;
  m.dim_ = phase.dim();
  m.phase_ = phase;
  m.options_ = options;
  return m;
}

CanonicalMap CanonicalMap::affine(const PhaseMat& matrix, const PhasePoint& shift) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != shift.size() || (shift.size() % 2) != 0)
    throw ContractError("affine canonical map: inconsistent shapes");
  CanonicalMap m;
  m.dim_ = static_cast<int>(shift.size()) / 2;
  m.matrix_ = matrix;
  m.shift_ = shift;
  return m;
}

PhasePoint CanonicalMap::operator()(const PhasePoint& yeta) const {
  if (phase_) return canonical_map(*phase_, head(yeta), tail(yeta), options_);
  return matrix_ * yeta + shift_;
}

PhasePoint CanonicalMap::inverse(const PhasePoint& xxi) const {
  if (phase_) return canonical_map_inverse(*phase_, head(xxi), tail(xxi), options_);
  return matrix_.partialPivLu().solve(xxi - shift_);
}

PhaseMat CanonicalMap::jacobian(const PhasePoint& yeta) const {
  if (phase_) return canonical_jacobian(*phase_, yeta, options_);
  return matrix_;
}

CanonicalMap canonical_map_quadratic(const QuadraticPhase& qp) {
  qp.validate();
  const int d = qp.dim();
  const Mat binv = qp.B.inverse();
  PhaseMat m(2 * d, 2 * d);
  m.topLeftCorner(d, d) = binv;
  m.topRightCorner(d, d) = -binv * qp.C;
  m.bottomLeftCorner(d, d) = qp.A * binv;
  m.bottomRightCorner(d, d) = qp.B.transpose() - qp.A * binv * qp.C;
  PhasePoint shift = join(binv * qp.x0, qp.A * binv * qp.x0 + qp.eta0);
  return CanonicalMap::affine(m, shift);
}

double symplectic_residual(const CanonicalMap& map, const std::vector<PhasePoint>& points) {
  const PhaseMat omega = symplectic_form(map.dim());
  double worst = 0.0;
  for (const auto& z : points) {
    const PhaseMat j = map.jacobian(z);
    worst = std::max(worst, (j.transpose() * omega * j - omega).cwiseAbs().maxCoeff());
  }
  return worst;
}

BilipschitzReport bilipschitz(const CanonicalMap& map, const PhaseBox& box, int samples) {
  const auto a = halton_points(box, samples, 1);
  const auto b = halton_points(box, samples, 1 + 7 * samples);
  BilipschitzReport r;
  r.min_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double dz = (a[i] - b[i]).norm();
    if (dz == 0.0) continue;
    const double ratio = (map(a[i]) - map(b[i])).norm() / dz;
    r.min_ratio = std::min(r.min_ratio, ratio);
    r.max_ratio = std::max(r.max_ratio, ratio);
  }
  r.constant = std::max(r.max_ratio, 1.0 / r.min_ratio);
  return r;
}

namespace {

struct DerivativeSup {
  double second = 0.0;
  double third = 0.0;
  double min_det = std::numeric_limits<double>::infinity();
};

DerivativeSup sample_derivatives(const Phase& phase, const PhaseBox& box, int samples) {
  DerivativeSup out;
  const int d = phase.dim();
  for (const auto& z : halton_points(box, samples)) {
    const PhaseMat h = phase.hessian(z);
    out.second = std::max(out.second, h.cwiseAbs().maxCoeff());
    out.min_det = std::min(out.min_det, std::abs(h.topRightCorner(d, d).determinant()));
    for (int k = 0; k < 2 * d; ++k) {
      const double step = 1e-4 * std::max(1.0, std::abs(z[k]));
      PhasePoint zp = z, zm = z;
      zp[k] += step;
      zm[k] -= step;
      const PhaseMat dh = (phase.hessian(zp) - phase.hessian(zm)) / (2.0 * step);
      out.third = std::max(out.third, dh.cwiseAbs().maxCoeff());
    }
  }
  return out;
}

}  // namespace

PhaseConditionReport check_phase_conditions(const Phase& phase, const PhaseBox& box, int samples) {
  PhaseConditionReport r;
  r.samples = samples;
  r.delta = phase.delta();
  if (const auto& qp = phase.quadratic_form()) {
    r.exact = true;
    r.sup_second = std::max({qp->A.cwiseAbs().maxCoeff(), qp->B.cwiseAbs().maxCoeff(),
                             qp->C.cwiseAbs().maxCoeff()});
    r.sup_third = 0.0;
    r.min_det = std::abs(qp->B.determinant());
  } else {
    const auto full = sample_derivatives(phase, box, samples);
    const auto inner = sample_derivatives(phase, box.scaled(0.5), samples);
    r.sup_second = full.second;
    r.sup_third = full.third;
    r.min_det = std::min(full.min_det, inner.min_det);
    r.second_growth = full.second > 1.5 * inner.second && full.second > 1e-8;
    r.third_growth = full.third > 1.5 * inner.third && full.third > 1e-6;
  }
  r.det_condition = r.delta > 0.0 && r.min_det >= 0.5 * r.delta;
  return r;
}

namespace {

double gradient_diameter(const Phase& phase, const PhaseBox& box) {
  const int d = phase.dim();
  constexpr int kEta = 24;
  constexpr int kX = 24;
  PhaseBox xbox = box;
  double diameter = 0.0;
  for (const auto& ze : halton_points(box, kEta, 3)) {
    const Vec eta = tail(ze);
    std::vector<Vec> grads;
    for (const auto& zx : halton_points(xbox, kX, 5)) grads.push_back(phase.grad_x(head(zx), eta));
    // Include the box corners along x where extremes of monotone gradients sit.
    for (int corner = 0; corner < (1 << d); ++corner) {
      Vec x(d);
      for (int a = 0; a < d; ++a) x[a] = (corner >> a) & 1 ? box.upper[a] : box.lower[a];
      grads.push_back(phase.grad_x(x, eta));
    }
    for (std::size_t i = 0; i < grads.size(); ++i)
      for (std::size_t j = i + 1; j < grads.size(); ++j)
        diameter = std::max(diameter, (grads[i] - grads[j]).norm());
  }
  return diameter;
}

}  // namespace

DiameterReport x_gradient_diameter(const Phase& phase, const PhaseBox& box) {
  DiameterReport r;
  r.diameter = gradient_diameter(phase, box);
  r.inner_diameter = gradient_diameter(phase, box.scaled(0.5));
  r.unbounded = r.diameter > 1.5 * r.inner_diameter && r.diameter > 1e-9;
  return r;
}

LatticeInequalityConstants lattice_inequality_constants(const Phase& phase, const PhaseBox& box, double alpha, double beta,
                               int samples) {
  const int d = phase.dim();
  LatticeInequalityConstants out;
  out.lower = std::numeric_limits<double>::infinity();
  out.upper = 0.0;
  auto snap = [](const Vec& v, double step) {
    Vec s = v;
    for (int a = 0; a < v.size(); ++a) s[a] = step * std::round(v[a] / step);
    return s;
  };
  const auto first = halton_points(box, samples, 11);
  const auto second = halton_points(box, samples, 11 + 3 * samples);
  for (int i = 0; i < samples; ++i) {
    const Vec m = snap(head(first[i]), alpha), n = snap(tail(first[i]), beta);
    const Vec mp = snap(head(second[i]), alpha), np = snap(tail(second[i]), beta);
    const PhasePoint chi = canonical_map(phase, m, n);
    const Vec x = head(chi), xi = tail(chi);
    const double lhs1 = (phase.grad_eta(mp, n) - m).norm();
    const double rhs1 = (x - mp).norm();
    if (rhs1 > 1e-12) out.lower = std::min(out.lower, lhs1 / rhs1);
    const double gap = (xi - np).norm() - (phase.grad_x(mp, n) - np).norm();
    if (lhs1 > 1e-12) out.upper = std::max(out.upper, gap / lhs1);
    ++out.samples;
  }
  (void)d;
  return out;
}

}  // namespace gaborfio
