#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace gaborfio {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Points of R^d (d <= 2) and d x d matrices; fixed max size keeps them off the heap.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 2, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 2, 2>;

// Points (x, xi) of phase space R^{2d} and 2d x 2d matrices.
using PhasePoint = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;
using PhaseMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 4, 4>;

inline PhasePoint join(const Vec& a, const Vec& b) {
  PhasePoint z(a.size() + b.size());
  z << a, b;
  return z;
}

inline Vec head(const PhasePoint& z) { return z.head(z.size() / 2); }
inline Vec tail(const PhasePoint& z) { return z.tail(z.size() / 2); }

// The standard symplectic form [[0, I], [-I, 0]] on R^{2d}.
inline PhaseMat symplectic_form(int d) {
  PhaseMat omega = PhaseMat::Zero(2 * d, 2 * d);
  omega.topRightCorner(d, d).setIdentity();
  omega.bottomLeftCorner(d, d) = -Mat::Identity(d, d);
  return omega;
}

// Japanese bracket <z> = (1 + |z|^2)^{1/2}.
template <typename Derived>
double bracket(const Eigen::MatrixBase<Derived>& z) {
  return std::sqrt(1.0 + z.squaredNorm());
}

}  // namespace gaborfio
