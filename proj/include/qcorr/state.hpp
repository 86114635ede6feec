#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "qcorr/linalg.hpp"

namespace qcorr {

namespace detail {

inline std::vector<long> factor_strides(const std::vector<int>& dims) {
  std::vector<long> s(dims.size(), 1);
  for (int f = static_cast<int>(dims.size()) - 2; f >= 0; --f)
    s[f] = s[f + 1] * dims[f + 1];
  return s;
}

inline long product(const std::vector<int>& dims) {
  long p = 1;
  for (int d : dims) p *= d;
  return p;
}

// Flat offsets contributed by a subset of factors, enumerated in row-major
// order over that subset.
inline std::vector<long> subset_offsets(const std::vector<int>& dims,
                                        const std::vector<long>& strides,
                                        const std::vector<int>& factors) {
  long n = 1;
  for (int f : factors) n *= dims[f];
  std::vector<long> out(n, 0);
  long rep = 1;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    int f = *it;
    for (long i = 0; i < n; ++i) {
      long digit = (i / rep) % dims[f];
      out[i] += digit * strides[f];
    }
    rep *= dims[f];
  }
  return out;
}

}  // namespace detail

// Multipartite mixed state: an explicit tensor factorization (dims, labels)
// plus the dense matrix. Tensor order is the declaration order of the labels.
struct DensityMatrix {
  std::vector<int> dims;
  std::vector<std::string> labels;
  cmat m;

  long dim() const { return detail::product(dims); }

  int factor(const std::string& label) const {
    for (size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return static_cast<int>(i);
    throw validation_error("unknown subsystem label '" + label + "'");
  }

  bool has_label(const std::string& label) const {
    for (const auto& l : labels)
      if (l == label) return true;
    return false;
  }

  int label_dim(const std::string& label) const { return dims[factor(label)]; }

  void validate() const {
    require(!dims.empty() && dims.size() == labels.size(),
            "DensityMatrix: dims/labels mismatch");
    require(dim() == m.rows() && m.rows() == m.cols(),
            "DensityMatrix: matrix size does not match dims");
    require(dim() <= 4096, "DensityMatrix: dimension above the 4096 cap");
    if (!is_hermitian(m))
      throw validation_error("DensityMatrix: not Hermitian within tolerance");
    if (std::abs(m.trace().real() - 1.0) > tol::trace_one ||
        std::abs(m.trace().imag()) > tol::trace_one)
      throw validation_error("DensityMatrix: trace differs from 1");
    rvec lam = herm_eigenvalues(hermitize(m));
    if (lam.minCoeff() < -tol::eig_clamp)
      throw validation_error("DensityMatrix: negative eigenvalue beyond roundoff");
  }
};

struct PureState {
  std::vector<int> dims;
  std::vector<std::string> labels;
  cvec amps;

  long dim() const { return detail::product(dims); }

  void validate() const {
    require(!dims.empty() && dims.size() == labels.size(),
            "PureState: dims/labels mismatch");
    require(dim() == amps.size(), "PureState: amplitude size does not match dims");
    require(std::abs(amps.norm() - 1.0) <= 1e-12, "PureState: not unit norm");
  }

  DensityMatrix to_density() const {
    return {dims, labels, amps * amps.adjoint()};
  }
};

inline DensityMatrix make_density(cmat m, std::vector<int> dims,
                                  std::vector<std::string> labels) {
  DensityMatrix rho{std::move(dims), std::move(labels), std::move(m)};
  rho.validate();
  return rho;
}

inline DensityMatrix single_density(cmat m, const std::string& label) {
  int d = static_cast<int>(m.rows());
  return make_density(std::move(m), {d}, {label});
}

// Trace out everything except the `keep` labels (kept in declaration order).
inline DensityMatrix partial_trace(const DensityMatrix& rho,
                                   const std::vector<std::string>& keep) {
  require(!keep.empty(), "partial_trace: keep set must be nonempty");
  std::vector<bool> keep_mask(rho.dims.size(), false);
  for (const auto& l : keep) keep_mask[rho.factor(l)] = true;

  std::vector<int> kept_f, traced_f;
  for (size_t f = 0; f < rho.dims.size(); ++f)
    (keep_mask[f] ? kept_f : traced_f).push_back(static_cast<int>(f));

  std::vector<long> strides = detail::factor_strides(rho.dims);
  std::vector<long> koff = detail::subset_offsets(rho.dims, strides, kept_f);
  std::vector<long> toff = detail::subset_offsets(rho.dims, strides, traced_f);

  long dk = static_cast<long>(koff.size());
  cmat out = cmat::Zero(dk, dk);
  for (long a = 0; a < dk; ++a)
    for (long b = 0; b < dk; ++b) {
      cplx s = 0.0;
      for (long t : toff) s += rho.m(koff[a] + t, koff[b] + t);
      out(a, b) = s;
    }

  std::vector<int> new_dims;
  std::vector<std::string> new_labels;
  for (int f : kept_f) {
    new_dims.push_back(rho.dims[f]);
    new_labels.push_back(rho.labels[f]);
  }
  return {new_dims, new_labels, out};
}

inline DensityMatrix marginal(const DensityMatrix& rho, const std::string& label) {
  return partial_trace(rho, {label});
}

// Reorder the tensor factors to the given label order.
inline DensityMatrix permute_factors(const DensityMatrix& rho,
                                     const std::vector<std::string>& order) {
  require(order.size() == rho.labels.size(), "permute_factors: wrong label count");
  std::vector<int> src(order.size());
  for (size_t i = 0; i < order.size(); ++i) src[i] = rho.factor(order[i]);

  std::vector<int> new_dims(order.size());
  for (size_t i = 0; i < order.size(); ++i) new_dims[i] = rho.dims[src[i]];

  std::vector<long> old_strides = detail::factor_strides(rho.dims);
  std::vector<long> new_strides = detail::factor_strides(new_dims);
  long d = rho.dim();
  std::vector<long> to_old(d);
  for (long x = 0; x < d; ++x) {
    long old_idx = 0;
    long rem = x;
    for (size_t f = 0; f < order.size(); ++f) {
      long digit = rem / new_strides[f];
      rem %= new_strides[f];
      old_idx += digit * old_strides[src[f]];
    }
    to_old[x] = old_idx;
  }
  cmat out(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) out(i, j) = rho.m(to_old[i], to_old[j]);
  return {new_dims, std::vector<std::string>(order.begin(), order.end()), out};
}

// (A ... X ... ) -> applies X on the factor `label` from the left. X may be
// rectangular (rows become the factor's new dimension).
inline cmat left_apply_on_factor(const cmat& a, const cmat& x,
                                 const std::vector<int>& dims, int f) {
  long lead = 1, trail = 1;
  for (int g = 0; g < f; ++g) lead *= dims[g];
  for (size_t g = f + 1; g < dims.size(); ++g) trail *= dims[g];
  int din = dims[f];
  int dout = static_cast<int>(x.rows());
  require(x.cols() == din, "left_apply_on_factor: dimension mismatch");

  cmat out = cmat::Zero(lead * dout * trail, a.cols());
  for (long l = 0; l < lead; ++l)
    for (int v = 0; v < dout; ++v)
      for (int u = 0; u < din; ++u) {
        cplx c = x(v, u);
        if (c == cplx(0.0)) continue;
        out.middleRows((l * dout + v) * trail, trail) +=
            c * a.middleRows((l * din + u) * trail, trail);
      }
  return out;
}

// (I ... X ... I) rho (I ... X ... I)^dagger on the factor `label`. The
// adjoint side is realized as (X (X rho)^dagger)^dagger so rectangular X works.
inline DensityMatrix conj_on_factor(const DensityMatrix& rho, const cmat& x,
                                    const std::string& label, bool renormalize = false) {
  int f = rho.factor(label);
  cmat half = left_apply_on_factor(rho.m, x, rho.dims, f);
  cmat full = left_apply_on_factor(half.adjoint(), x, rho.dims, f).adjoint();
  std::vector<int> new_dims = rho.dims;
  new_dims[f] = static_cast<int>(x.rows());
  DensityMatrix out{new_dims, rho.labels, hermitize(full)};
  if (renormalize) out.m /= out.m.trace().real();
  return out;
}

// Same sandwich but the factor is replaced by several new factors (used when an
// isometry maps one subsystem into a composite one).
inline DensityMatrix conj_on_factor_split(const DensityMatrix& rho, const cmat& x,
                                          const std::string& label,
                                          const std::vector<int>& out_dims,
                                          const std::vector<std::string>& out_labels) {
  require(detail::product(out_dims) == x.rows(),
          "conj_on_factor_split: output dims do not match operator rows");
  DensityMatrix flat = conj_on_factor(rho, x, label);
  int f = flat.factor(label);
  std::vector<int> dims;
  std::vector<std::string> labels;
  for (size_t g = 0; g < flat.dims.size(); ++g) {
    if (static_cast<int>(g) == f) {
      dims.insert(dims.end(), out_dims.begin(), out_dims.end());
      labels.insert(labels.end(), out_labels.begin(), out_labels.end());
    } else {
      dims.push_back(flat.dims[g]);
      labels.push_back(flat.labels[g]);
    }
  }
  return {dims, labels, flat.m};
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  for (const auto& l : b.labels)
    require(!a.has_label(l), "tensor: duplicate label '" + l + "'");
  std::vector<int> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  std::vector<std::string> labels = a.labels;
  labels.insert(labels.end(), b.labels.begin(), b.labels.end());
  return {dims, labels, kron(a.m, b.m)};
}

inline PureState tensor(const PureState& a, const PureState& b) {
  std::vector<int> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  std::vector<std::string> labels = a.labels;
  labels.insert(labels.end(), b.labels.begin(), b.labels.end());
  return {dims, labels, kron_vec(a.amps, b.amps)};
}

// Purification on an ancilla of dimension rank(rho) (eigenvalues > 1e-12).
inline PureState purify(const DensityMatrix& rho, const std::string& r_label = "R") {
  require(!rho.has_label(r_label), "purify: label '" + r_label + "' already in use");
  EigResult e = herm_eig(rho.m);
  std::vector<int> keep;
  for (int i = 0; i < e.values.size(); ++i)
    if (e.values[i] > 1e-12) keep.push_back(i);
  require(!keep.empty(), "purify: state has no support");
  int r = static_cast<int>(keep.size());
  long d = rho.dim();
  cvec amps = cvec::Zero(d * r);
  for (int j = 0; j < r; ++j) {
    double w = std::sqrt(e.values[keep[j]]);
    for (long x = 0; x < d; ++x) amps[x * r + j] = w * e.vectors(x, keep[j]);
  }
  amps /= amps.norm();
  std::vector<int> dims = rho.dims;
  dims.push_back(r);
  std::vector<std::string> labels = rho.labels;
  labels.push_back(r_label);
  return {dims, labels, amps};
}

inline double trace_distance(const cmat& a, const cmat& b) {
  return 0.5 * trace_norm(a - b);
}

// F(rho,sigma) = ||sqrt(rho) sqrt(sigma)||_1^2
inline double fidelity(const cmat& rho, const cmat& sigma) {
  require(rho.rows() == sigma.rows() && rho.cols() == sigma.cols(),
          "fidelity: dimension mismatch");
  cmat a = mat_sqrt_psd(rho);
  cmat inner = a * sigma * a;
  rvec lam = clamp_spectrum(herm_eigenvalues(hermitize(inner)), 1e-8);
  double s = 0.0;
  for (int i = 0; i < lam.size(); ++i) s += std::sqrt(lam[i]);
  double f = s * s;
  return std::min(1.0, f);
}

inline double bures_distance(const cmat& rho, const cmat& sigma) {
  double f = fidelity(rho, sigma);
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::sqrt(f)));
}

inline double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  require(a.dims == b.dims, "fidelity: factorization mismatch");
  return fidelity(a.m, b.m);
}

inline double bures_distance(const DensityMatrix& a, const DensityMatrix& b) {
  require(a.dims == b.dims, "bures_distance: factorization mismatch");
  return bures_distance(a.m, b.m);
}

inline PureState random_pure(const std::vector<int>& dims,
                             const std::vector<std::string>& labels, Rng& rng) {
  require(dims.size() == labels.size(), "random_pure: dims/labels mismatch");
  long d = detail::product(dims);
  return {dims, labels, random_unit_vector(static_cast<int>(d), rng)};
}

// Partial trace of a Haar-random purification of the requested rank.
inline DensityMatrix random_density(const std::vector<int>& dims,
                                    const std::vector<std::string>& labels, int rank,
                                    Rng& rng) {
  long d = detail::product(dims);
  require(rank >= 1 && rank <= d, "random_density: rank out of range");
  cmat g(d, rank);
  for (long i = 0; i < d; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = rng.cgaussian();
  cmat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return {dims, labels, hermitize(rho)};
}

inline DensityMatrix random_density(int d, const std::string& label, int rank, Rng& rng) {
  return random_density(std::vector<int>{d}, std::vector<std::string>{label}, rank, rng);
}

}  // namespace qcorr
