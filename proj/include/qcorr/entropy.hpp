#pragma once

#include <limits>

#include "qcorr/state.hpp"

namespace qcorr {

// Nonnegative extended real: a finite value or +infinity. All quantities here
// are in nats (natural log convention throughout).
struct ExtReal {
  double value = 0.0;
  bool infinite = false;

  static ExtReal inf() { return {0.0, true}; }
  static ExtReal finite(double v) { return {v, false}; }

  double finite_value() const {
    if (infinite) throw numerical_error("ExtReal: expected a finite value");
    return value;
  }

  friend ExtReal operator+(const ExtReal& a, const ExtReal& b) {
    if (a.infinite || b.infinite) return inf();
    return finite(a.value + b.value);
  }
  friend bool operator<(const ExtReal& a, const ExtReal& b) {
    if (a.infinite) return false;
    if (b.infinite) return true;
    return a.value < b.value;
  }
  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.infinite != b.infinite) return false;
    return a.infinite || a.value == b.value;
  }
};

// eta(x) = -x ln x with eta(0) = 0
inline double eta(double x) { return x > 0.0 ? -x * std::log(x) : 0.0; }

inline double binary_entropy(double p) {
  require(p >= 0.0 && p <= 1.0, "binary_entropy: p outside [0,1]");
  return eta(p) + eta(1.0 - p);
}

// g(e) = (e+1) ln(e+1) - e ln e, continuous with g(0) = 0
inline double g_func(double e) {
  require(e >= 0.0, "g_func: argument must be nonnegative");
  if (e == 0.0) return 0.0;
  return (e + 1.0) * std::log(e + 1.0) - e * std::log(e);
}

inline double von_neumann_entropy(const cmat& rho) {
  rvec lam = clamp_spectrum(herm_eigenvalues(hermitize(rho)));
  double s = 0.0;
  for (int i = 0; i < lam.size(); ++i) s += eta(lam[i]);
  return std::max(0.0, s);
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
  return von_neumann_entropy(rho.m);
}

// Homogeneous extension -Tr X ln X to the positive cone (trace need not be 1).
inline double entropy_cone(const cmat& x) {
  rvec lam = clamp_spectrum(herm_eigenvalues(hermitize(x)));
  double s = 0.0;
  for (int i = 0; i < lam.size(); ++i) s += eta(lam[i]);
  return s;
}

// D(rho||sigma), +infinity when supp rho is not contained in supp sigma.
// The support cutoff matches the eigenvalue clamp so the finite/infinite
// decision is stable under roundoff.
inline ExtReal relative_entropy(const cmat& rho, const cmat& sigma) {
  require(rho.rows() == sigma.rows(), "relative_entropy: dimension mismatch");
  EigResult er = herm_eig(rho);
  EigResult es = herm_eig(sigma);

  rvec lr = clamp_spectrum(er.values);
  rvec ls = clamp_spectrum(es.values);

  // kernel projector of sigma applied to the support of rho
  for (int i = 0; i < lr.size(); ++i) {
    if (lr[i] <= tol::support) continue;
    double out_of_supp = 0.0;
    for (int j = 0; j < ls.size(); ++j) {
      if (ls[j] > tol::support) continue;
      out_of_supp += std::norm(es.vectors.col(j).dot(er.vectors.col(i)));
    }
    if (lr[i] * out_of_supp > 1e-14) return ExtReal::inf();
  }

  // sum_i <i| rho ln rho - rho ln sigma |i> in rho's eigenbasis
  double d = 0.0;
  for (int i = 0; i < lr.size(); ++i) {
    double p = lr[i];
    if (p <= tol::support) continue;
    d += p * std::log(p);
    double cross = 0.0;
    for (int j = 0; j < ls.size(); ++j) {
      if (ls[j] <= tol::support) continue;
      cross += std::norm(es.vectors.col(j).dot(er.vectors.col(i))) * std::log(ls[j]);
    }
    d -= p * cross;
  }
  return ExtReal::finite(std::max(0.0, d));
}

inline ExtReal relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require(rho.dims == sigma.dims, "relative_entropy: factorization mismatch");
  return relative_entropy(rho.m, sigma.m);
}

// I(X:Y) for the bipartition (labels_x | labels_y) of the state's factors.
inline double mutual_information(const DensityMatrix& rho,
                                 const std::vector<std::string>& labels_x,
                                 const std::vector<std::string>& labels_y) {
  DensityMatrix rx = partial_trace(rho, labels_x);
  DensityMatrix ry = partial_trace(rho, labels_y);
  std::vector<std::string> both = labels_x;
  both.insert(both.end(), labels_y.begin(), labels_y.end());
  DensityMatrix rxy = partial_trace(rho, both);
  double v = von_neumann_entropy(rx) + von_neumann_entropy(ry) -
             von_neumann_entropy(rxy);
  return std::max(0.0, v);
}

// Relative-entropy route I(X:Y) = D(rho || rho_X ox rho_Y); used as the
// cross-check half of the two-formula contract.
inline double mutual_information_via_relent(const DensityMatrix& rho,
                                            const std::vector<std::string>& labels_x,
                                            const std::vector<std::string>& labels_y) {
  DensityMatrix rx = partial_trace(rho, labels_x);
  DensityMatrix ry = partial_trace(rho, labels_y);
  std::vector<std::string> both = labels_x;
  both.insert(both.end(), labels_y.begin(), labels_y.end());
  DensityMatrix rxy = partial_trace(rho, both);
  DensityMatrix prod = tensor(rx, ry);
  // the product state carries the labels in (X,Y) order, matching rxy
  return relative_entropy(rxy.m, prod.m).finite_value();
}

// I(A:B|C) = S(AC) + S(BC) - S(ABC) - S(C); tiny negatives inside the
// roundoff window are clamped, anything worse raises.
inline double conditional_mutual_information(const DensityMatrix& rho,
                                             const std::vector<std::string>& la,
                                             const std::vector<std::string>& lb,
                                             const std::vector<std::string>& lc) {
  std::vector<std::string> ac = la, bc = lb, abc = la;
  ac.insert(ac.end(), lc.begin(), lc.end());
  bc.insert(bc.end(), lc.begin(), lc.end());
  abc.insert(abc.end(), lb.begin(), lb.end());
  abc.insert(abc.end(), lc.begin(), lc.end());
  double v = von_neumann_entropy(partial_trace(rho, ac)) +
             von_neumann_entropy(partial_trace(rho, bc)) -
             von_neumann_entropy(partial_trace(rho, abc)) -
             von_neumann_entropy(partial_trace(rho, lc));
  if (v < 0.0) {
    if (v < -tol::cmi_clamp)
      throw numerical_error("conditional_mutual_information: negative beyond window (" +
                            std::to_string(v) + ")");
    v = 0.0;
  }
  return v;
}

// Finite list of (probability, state) pairs over one space.
struct Ensemble {
  std::vector<double> probs;
  std::vector<DensityMatrix> states;

  void validate() const {
    require(probs.size() == states.size() && !probs.empty(),
            "Ensemble: probs/states mismatch");
    double s = 0.0;
    for (double p : probs) {
      require(p >= 0.0, "Ensemble: negative probability");
      s += p;
    }
    require(std::abs(s - 1.0) <= tol::trace_one, "Ensemble: probabilities do not sum to 1");
    for (size_t k = 1; k < states.size(); ++k)
      require(states[k].dims == states[0].dims, "Ensemble: states on different spaces");
  }

  DensityMatrix average() const {
    cmat m = cmat::Zero(states[0].m.rows(), states[0].m.cols());
    for (size_t k = 0; k < states.size(); ++k) m += probs[k] * states[k].m;
    return {states[0].dims, states[0].labels, m};
  }
};

// chi = S(avg) - sum_k p_k S(rho_k)
inline double holevo_chi(const Ensemble& mu) {
  double s = von_neumann_entropy(mu.average());
  for (size_t k = 0; k < mu.states.size(); ++k)
    if (mu.probs[k] > tol::zero_prob) s -= mu.probs[k] * von_neumann_entropy(mu.states[k]);
  return std::max(0.0, s);
}

// chi = sum_k p_k D(rho_k || avg); the dual formula used by cross-checks.
inline double holevo_chi_via_relent(const Ensemble& mu) {
  DensityMatrix avg = mu.average();
  double s = 0.0;
  for (size_t k = 0; k < mu.states.size(); ++k)
    if (mu.probs[k] > tol::zero_prob)
      s += mu.probs[k] * relative_entropy(mu.states[k].m, avg.m).finite_value();
  return s;
}

}  // namespace qcorr
