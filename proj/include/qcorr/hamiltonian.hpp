#pragma once

#include "qcorr/types.hpp"

namespace qcorr {

// Finite diagonal truncation of an energy observable. Eigenvalues ascending,
// nonnegative; states are expressed in the eigenbasis so the mean energy is a
// weighted diagonal sum.
struct Hamiltonian {
  rvec eigenvalues;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  double ground() const { return eigenvalues[0]; }
  double mean_at_uniform() const { return eigenvalues.mean(); }

  void validate() const {
    require(eigenvalues.size() >= 1, "Hamiltonian: empty spectrum");
    require(eigenvalues[0] >= 0.0, "Hamiltonian: negative eigenvalue");
    for (int i = 1; i < eigenvalues.size(); ++i)
      require(eigenvalues[i] >= eigenvalues[i - 1], "Hamiltonian: spectrum not ascending");
  }

  double energy(const cmat& rho) const {
    require(rho.rows() == dim(), "Hamiltonian: state dimension mismatch");
    double e = 0.0;
    for (int i = 0; i < dim(); ++i) e += eigenvalues[i] * rho(i, i).real();
    return e;
  }
};

inline Hamiltonian number_operator(int dim) {
  rvec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = i;
  return {v};
}

inline Hamiltonian hamiltonian_from(std::initializer_list<double> vals) {
  rvec v(static_cast<int>(vals.size()));
  int i = 0;
  for (double x : vals) v[i++] = x;
  Hamiltonian h{v};
  h.validate();
  return h;
}

}  // namespace qcorr
