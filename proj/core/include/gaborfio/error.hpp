#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace gaborfio {

namespace detail {
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}
}  // namespace detail

// Base of every error thrown by the library. The CLI maps the subclasses to
// exit codes (ContractError/ConfigError -> 2, numerical failures -> 3,
// CausticError -> 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition of an operation was not met (side mismatch, off-lattice
// shift, shape mismatch, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Invalid user configuration (unknown catalog names, bad parameters).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The input carries too much spectral mass at the band edge.
class AliasingError : public Error {
 public:
  explicit AliasingError(double edge_fraction)
      : Error("spectral mass at the band edge too large: " + detail::num(edge_fraction)),
        edge_fraction_(edge_fraction) {}
  double edge_fraction() const { return edge_fraction_; }

 private:
  double edge_fraction_;
};

// NaN or inf produced while evaluating a phase or symbol.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// Newton iteration did not reach the residual tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what + " (last residual " + detail::num(residual) + ")"), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// |det d2_{x,eta} Phi| dropped below delta/2 (or B is singular).
class ConditionViolation : public Error {
 public:
  ConditionViolation(const std::string& what, double determinant)
      : Error(what + " (|det| = " + detail::num(determinant) + ")"), determinant_(determinant) {}
  double determinant() const { return determinant_; }

 private:
  double determinant_;
};

// The frame operator is numerically singular on this grid.
class NotAFrameError : public Error {
 public:
  NotAFrameError(double lower, double upper)
      : Error("not a frame on this grid: A = " + detail::num(lower) +
              ", B = " + detail::num(upper)),
        lower_(lower), upper_(upper) {}
  double lower() const { return lower_; }
  double upper() const { return upper_; }

 private:
  double lower_;
  double upper_;
};

// A linear symplectic map whose upper-left block is singular has no
// generating quadratic phase.
class CausticError : public Error {
 public:
  explicit CausticError(double det_upper_left)
      : Error("caustic: det of the upper-left block is " + detail::num(det_upper_left)),
        det_(det_upper_left) {}
  double determinant() const { return det_; }

 private:
  double det_;
};

}  // namespace gaborfio
