#pragma once

#include <algorithm>
#include <utility>

#include "qcorr/rng.hpp"
#include "qcorr/types.hpp"

namespace qcorr {

struct EigResult {
  rvec values;  // ascending
  cmat vectors; // unitary, columns match values
};

// Eigendecomposition of a Hermitian matrix. Input is validated against the
// Hermiticity window and symmetrized before factorization.
inline EigResult herm_eig(const cmat& m) {
  require(m.rows() == m.cols(), "herm_eig: matrix must be square");
  if (!is_hermitian(m))
    throw validation_error("herm_eig: matrix is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<cmat> es(hermitize(m));
  if (es.info() != Eigen::Success)
    throw numerical_error("herm_eig: eigensolver failed to converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

inline rvec herm_eigenvalues(const cmat& m) { return herm_eig(m).values; }

// Eigenvalue clamp policy: values in [-eig_clamp, 0] are roundoff and become 0;
// anything more negative means the input was not PSD to begin with.
inline rvec clamp_spectrum(const rvec& v, double clamp = tol::eig_clamp) {
  rvec out = v;
  for (int i = 0; i < out.size(); ++i) {
    if (out[i] < 0.0) {
      if (out[i] < -clamp)
        throw numerical_error("clamp_spectrum: eigenvalue " + std::to_string(out[i]) +
                              " below the roundoff window");
      out[i] = 0.0;
    }
  }
  return out;
}

inline cmat mat_sqrt_psd(const cmat& m) {
  EigResult e = herm_eig(m);
  rvec lam = clamp_spectrum(e.values);
  cmat d = cmat::Zero(lam.size(), lam.size());
  for (int i = 0; i < lam.size(); ++i) d(i, i) = std::sqrt(lam[i]);
  return e.vectors * d * e.vectors.adjoint();
}

// Sum of singular values. Hermitian inputs reduce to sum of |eigenvalues|,
// which is both faster and more accurate for the difference-of-states cases.
inline double trace_norm(const cmat& m) {
  if (m.rows() == m.cols() && is_hermitian(m, 1e-10)) {
    rvec lam = herm_eigenvalues(hermitize(m));
    return lam.cwiseAbs().sum();
  }
  Eigen::JacobiSVD<cmat> svd(m);
  return svd.singularValues().sum();
}

inline double op_norm(const cmat& m) {
  if (m.rows() == m.cols() && is_hermitian(m, 1e-10)) {
    rvec lam = herm_eigenvalues(hermitize(m));
    return lam.cwiseAbs().maxCoeff();
  }
  Eigen::JacobiSVD<cmat> svd(m);
  return svd.singularValues().maxCoeff();
}

inline cmat kron(const cmat& a, const cmat& b) {
  cmat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline cvec kron_vec(const cvec& a, const cvec& b) {
  cvec out(a.size() * b.size());
  for (int i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

// Haar unitary: QR of a Ginibre matrix with the phase convention fixed so the
// distribution is exactly invariant.
inline cmat random_unitary(int d, Rng& rng) {
  require(d >= 1, "random_unitary: dimension must be positive");
  cmat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.cgaussian();
  Eigen::HouseholderQR<cmat> qr(g);
  cmat q = qr.householderQ();
  cmat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    cplx ph = r(j, j) / std::abs(r(j, j));
    q.col(j) *= ph;
  }
  return q;
}

inline cvec random_unit_vector(int d, Rng& rng) {
  cvec v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.cgaussian();
  v /= v.norm();
  return v;
}

// Thin QR orthonormalization: columns of the result span the columns of m.
inline cmat orthonormal_columns(const cmat& m) {
  Eigen::HouseholderQR<cmat> qr(m);
  cmat q = qr.householderQ() * cmat::Identity(m.rows(), m.cols());
  return q;
}

}  // namespace qcorr
