#pragma once

#include "qcorr/linalg.hpp"

namespace qcorr {

// Discrete POVM on one subsystem: PSD elements summing to the identity.
struct Povm {
  std::vector<cmat> elements;

  int dim() const { return elements.empty() ? 0 : static_cast<int>(elements[0].rows()); }
  int outcomes() const { return static_cast<int>(elements.size()); }

  void validate() const {
    require(!elements.empty(), "Povm: no elements");
    int d = dim();
    cmat sum = cmat::Zero(d, d);
    for (const auto& e : elements) {
      require(e.rows() == d && e.cols() == d, "Povm: element size mismatch");
      if (!is_hermitian(e, 1e-10))
        throw validation_error("Povm: element not Hermitian");
      rvec lam = herm_eigenvalues(hermitize(e));
      if (lam.minCoeff() < -tol::eig_clamp)
        throw validation_error("Povm: element not PSD within tolerance");
      sum += e;
    }
    if ((sum - cmat::Identity(d, d)).norm() > tol::completeness * std::sqrt(double(d)))
      throw validation_error("Povm: elements do not sum to identity");
  }

  bool is_rank_one(double cut = 1e-10) const {
    for (const auto& e : elements) {
      rvec lam = herm_eigenvalues(hermitize(e));
      int r = 0;
      for (int i = 0; i < lam.size(); ++i)
        if (lam[i] > cut) ++r;
      if (r > 1) return false;
    }
    return true;
  }
};

inline Povm projective_povm(const cmat& basis) {
  Povm p;
  for (int k = 0; k < basis.cols(); ++k)
    p.elements.push_back(basis.col(k) * basis.col(k).adjoint());
  return p;
}

// Rank-one POVM from the rows of a (k x d) isometry W (W^dagger W = I_d):
// M_i = w_i w_i^dagger with w_i the conjugated i-th row.
inline Povm povm_from_isometry_rows(const cmat& w) {
  Povm p;
  for (int i = 0; i < w.rows(); ++i) {
    cvec m = w.row(i).adjoint();
    p.elements.push_back(m * m.adjoint());
  }
  return p;
}

// Naimark compression of a Haar basis: W = first d columns of a Haar unitary
// on d*k, elements M_i = B_i^dagger B_i from the k row-blocks.
inline Povm random_povm(int d, int k, Rng& rng) {
  require(d >= 1 && k >= 1, "random_povm: dimensions must be positive");
  cmat u = random_unitary(d * k, rng);
  cmat w = u.leftCols(d);  // isometry C^d -> C^d (x) C^k, row index a*k + i
  Povm p;
  for (int i = 0; i < k; ++i) {
    cmat b(d, d);
    for (int a = 0; a < d; ++a) b.row(a) = w.row(a * k + i);
    p.elements.push_back(b.adjoint() * b);
  }
  return p;
}

}  // namespace qcorr
