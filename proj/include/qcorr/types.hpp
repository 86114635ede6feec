#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace qcorr {

using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rvec = Eigen::VectorXd;
using rmat = Eigen::MatrixXd;

// Thrown when an input violates a documented precondition.
struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when intermediate results drift beyond the documented roundoff windows.
struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

namespace tol {
inline constexpr double hermitian = 1e-12;   // relative Hermiticity residual
inline constexpr double trace_one = 1e-10;
inline constexpr double eig_clamp = 1e-10;   // eigenvalues in [-clamp, 0] -> 0
inline constexpr double support = 1e-10;     // support cutoff for relative entropy
inline constexpr double completeness = 1e-10;
inline constexpr double cmi_clamp = 1e-8;    // QCMI roundoff window
inline constexpr double strict = 1e-8;       // closed-form check tier
inline constexpr double eq = 1e-4;           // optimizer check tier
inline constexpr double zero_prob = 1e-12;   // ensemble outcomes below this are dropped
}  // namespace tol

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw validation_error(msg);
}

inline bool is_hermitian(const cmat& m, double rel_tol = tol::hermitian) {
  if (m.rows() != m.cols()) return false;
  double scale = std::max(1.0, m.norm());
  return (m - m.adjoint()).norm() <= rel_tol * scale;
}

inline cmat hermitize(const cmat& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace qcorr
