#pragma once

#include "qcorr/entropy.hpp"
#include "qcorr/povm.hpp"
#include "qcorr/state.hpp"

namespace qcorr {

// Completely positive trace-preserving map in Kraus form.
struct Channel {
  int d_in = 0;
  int d_out = 0;
  std::vector<cmat> kraus;

  void validate() const {
    require(!kraus.empty() && d_in >= 1 && d_out >= 1, "Channel: empty Kraus list");
    cmat sum = cmat::Zero(d_in, d_in);
    for (const auto& k : kraus) {
      require(k.rows() == d_out && k.cols() == d_in, "Channel: Kraus shape mismatch");
      sum += k.adjoint() * k;
    }
    if ((sum - cmat::Identity(d_in, d_in)).norm() >
        tol::completeness * std::sqrt(double(d_in)))
      throw validation_error("Channel: Kraus operators are not trace preserving");
  }

  cmat apply(const cmat& rho) const {
    require(rho.rows() == d_in && rho.cols() == d_in, "Channel::apply: dimension mismatch");
    cmat out = cmat::Zero(d_out, d_out);
    for (const auto& k : kraus) out += k * rho * k.adjoint();
    return out;
  }

  DensityMatrix apply(const DensityMatrix& rho, const std::string& out_label = "B") const {
    require(rho.dim() == d_in, "Channel::apply: state dimension mismatch");
    return {{d_out},
            rho.labels.size() == 1 ? rho.labels : std::vector<std::string>{out_label},
            hermitize(apply(rho.m))};
  }
};

struct StinespringIsometry {
  cmat v;     // (d_out * d_env) x d_in, row index i*d_env + e
  int d_out = 0;
  int d_env = 0;

  void validate() const {
    require(v.rows() == static_cast<long>(d_out) * d_env, "Stinespring: shape mismatch");
    if ((v.adjoint() * v - cmat::Identity(v.cols(), v.cols())).norm() >
        tol::completeness * std::sqrt(double(v.cols())))
      throw validation_error("Stinespring: V is not an isometry");
  }
};

inline StinespringIsometry stinespring(const Channel& ch) {
  int env = static_cast<int>(ch.kraus.size());
  cmat v(static_cast<long>(ch.d_out) * env, ch.d_in);
  for (int e = 0; e < env; ++e)
    for (int i = 0; i < ch.d_out; ++i)
      v.row(static_cast<long>(i) * env + e) = ch.kraus[e].row(i);
  return {v, ch.d_out, env};
}

// Complementary channel: trace over the output side of the dilation. The
// canonical environment basis is indexed by the Kraus index.
inline Channel complementary(const Channel& ch) {
  int env = static_cast<int>(ch.kraus.size());
  Channel out;
  out.d_in = ch.d_in;
  out.d_out = env;
  out.kraus.resize(ch.d_out);
  for (int i = 0; i < ch.d_out; ++i) {
    cmat k(env, ch.d_in);
    for (int e = 0; e < env; ++e) k.row(e) = ch.kraus[e].row(i);
    out.kraus[i] = k;
  }
  return out;
}

inline Channel compose(const Channel& later, const Channel& first) {
  require(first.d_out == later.d_in, "compose: dimension mismatch");
  Channel out;
  out.d_in = first.d_in;
  out.d_out = later.d_out;
  for (const auto& a : later.kraus)
    for (const auto& b : first.kraus) out.kraus.push_back(a * b);
  return out;
}

// Phi (x) id on the labeled factor of a multipartite state.
inline DensityMatrix apply_on_factor(const Channel& ch, const DensityMatrix& rho,
                                     const std::string& label) {
  int f = rho.factor(label);
  require(rho.dims[f] == ch.d_in, "apply_on_factor: dimension mismatch on target");
  std::vector<int> out_dims = rho.dims;
  out_dims[f] = ch.d_out;
  cmat acc = cmat::Zero(detail::product(out_dims), detail::product(out_dims));
  for (const auto& k : ch.kraus) {
    cmat half = left_apply_on_factor(rho.m, k, rho.dims, f);
    acc += left_apply_on_factor(half.adjoint(), k, rho.dims, f).adjoint();
  }
  return {out_dims, rho.labels, hermitize(acc)};
}

inline Channel identity_channel(int d) {
  return {d, d, {cmat::Identity(d, d)}};
}

inline Channel unitary_channel(const cmat& u) {
  return {static_cast<int>(u.cols()), static_cast<int>(u.rows()), {u}};
}

// rho -> Tr(rho) |tau><tau|
inline Channel pin_channel(int d, const cvec& tau) {
  Channel ch;
  ch.d_in = d;
  ch.d_out = static_cast<int>(tau.size());
  for (int j = 0; j < d; ++j) {
    cmat k = cmat::Zero(ch.d_out, d);
    k.col(j) = tau;
    ch.kraus.push_back(k);
  }
  return ch;
}

// Erasure channel from a d-dimensional system into its (d+1)-dimensional
// extension; the erasure flag is the extra basis vector.
inline Channel erasure_channel(int d, double p) {
  require(p >= 0.0 && p <= 1.0, "erasure_channel: p outside [0,1]");
  Channel ch;
  ch.d_in = d;
  ch.d_out = d + 1;
  cmat embed = cmat::Zero(d + 1, d);
  embed.topRows(d) = cmat::Identity(d, d);
  ch.kraus.push_back(std::sqrt(1.0 - p) * embed);
  for (int j = 0; j < d; ++j) {
    cmat k = cmat::Zero(d + 1, d);
    k(d, j) = std::sqrt(p);
    ch.kraus.push_back(k);
  }
  return ch;
}

// rho -> sum_k <phi_k|rho|phi_k> |phi_k><phi_k| for the given orthonormal basis.
inline Channel dephasing_channel(const cmat& basis) {
  int d = static_cast<int>(basis.rows());
  require(basis.cols() == d, "dephasing_channel: basis must be square");
  require((basis.adjoint() * basis - cmat::Identity(d, d)).norm() < 1e-10,
          "dephasing_channel: basis not orthonormal");
  Channel ch;
  ch.d_in = d;
  ch.d_out = d;
  for (int k = 0; k < d; ++k)
    ch.kraus.push_back(basis.col(k) * basis.col(k).adjoint());
  return ch;
}

inline Channel dephasing_channel(int d) {
  return dephasing_channel(cmat::Identity(d, d));
}

namespace detail {
// Discrete Weyl operators X^a Z^b on C^d.
inline cmat weyl(int d, int a, int b) {
  cmat w = cmat::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    cplx ph = std::exp(cplx(0.0, 2.0 * M_PI * b * j / d));
    w((j + a) % d, j) = ph;
  }
  return w;
}
}  // namespace detail

// rho -> (1-q) rho + q Tr(rho) I/d via the Weyl twirl Kraus set.
inline Channel depolarizing_channel(int d, double q) {
  require(q >= 0.0 && q <= 1.0, "depolarizing_channel: q outside [0,1]");
  Channel ch;
  ch.d_in = d;
  ch.d_out = d;
  double beta2 = q / double(d) / double(d);
  double alpha2 = 1.0 - q + beta2;
  ch.kraus.push_back(std::sqrt(alpha2) * cmat::Identity(d, d));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      if (a == 0 && b == 0) continue;
      ch.kraus.push_back(std::sqrt(beta2) * detail::weyl(d, a, b));
    }
  return ch;
}

// One-parameter depolarizing semigroup: Phi_t o Phi_s = Phi_{t+s}.
inline Channel depolarizing_semigroup(int d, double t) {
  require(t >= 0.0, "depolarizing_semigroup: t must be nonnegative");
  return depolarizing_channel(d, 1.0 - std::exp(-t));
}

// q-c measurement channel: rho -> sum_i Tr(M_i rho) |i><i|.
inline Channel measurement_channel(const Povm& m) {
  m.validate();
  int d = m.dim();
  int k = m.outcomes();
  Channel ch;
  ch.d_in = d;
  ch.d_out = k;
  for (int i = 0; i < k; ++i) {
    EigResult e = herm_eig(m.elements[i]);
    for (int j = 0; j < e.values.size(); ++j) {
      if (e.values[j] <= 1e-12) continue;
      cmat kr = cmat::Zero(k, d);
      kr.row(i) = std::sqrt(e.values[j]) * e.vectors.col(j).adjoint();
      ch.kraus.push_back(kr);
    }
  }
  return ch;
}

// Partial trace as a channel from the full space onto the kept factors.
inline Channel partial_trace_channel(const std::vector<int>& dims,
                                     const std::vector<int>& keep_factors) {
  std::vector<int> kept = keep_factors, traced;
  std::sort(kept.begin(), kept.end());
  for (int f = 0; f < static_cast<int>(dims.size()); ++f)
    if (std::find(kept.begin(), kept.end(), f) == kept.end()) traced.push_back(f);
  std::vector<long> strides = detail::factor_strides(dims);
  std::vector<long> koff = detail::subset_offsets(dims, strides, kept);
  std::vector<long> toff = detail::subset_offsets(dims, strides, traced);
  Channel ch;
  ch.d_in = static_cast<int>(detail::product(dims));
  ch.d_out = static_cast<int>(koff.size());
  for (long t : toff) {
    cmat k = cmat::Zero(ch.d_out, ch.d_in);
    for (long a = 0; a < static_cast<long>(koff.size()); ++a) k(a, koff[a] + t) = 1.0;
    ch.kraus.push_back(k);
  }
  return ch;
}

// Stinespring dilation of a Haar-random isometry.
inline Channel random_channel(int d_in, int d_out, int d_env, Rng& rng) {
  require(d_in >= 1 && d_out >= 1 && d_env >= 1, "random_channel: bad dimensions");
  require(static_cast<long>(d_out) * d_env >= d_in,
          "random_channel: d_out*d_env < d_in is infeasible");
  cmat u = random_unitary(d_out * d_env, rng);
  cmat v = u.leftCols(d_in);  // row index i*d_env + e
  Channel ch;
  ch.d_in = d_in;
  ch.d_out = d_out;
  for (int e = 0; e < d_env; ++e) {
    cmat k(d_out, d_in);
    for (int i = 0; i < d_out; ++i) k.row(i) = v.row(static_cast<long>(i) * d_env + e);
    ch.kraus.push_back(k);
  }
  return ch;
}

// I(Phi, rho) = S(rho) + S(Phi(rho)) - S(Phi^c(rho))
inline double channel_mutual_information(const Channel& ch, const cmat& rho) {
  Channel comp = complementary(ch);
  double v = von_neumann_entropy(rho) + von_neumann_entropy(ch.apply(rho)) -
             von_neumann_entropy(comp.apply(rho));
  return std::max(0.0, v);
}

// Purification route I(Phi,rho) = I(B:R) of Phi (x) id applied to a
// purification; the cross-check half of the contract.
inline double channel_mutual_information_via_purification(const Channel& ch,
                                                          const cmat& rho) {
  DensityMatrix in = single_density(rho, "A");
  PureState pure = purify(in, "R");
  DensityMatrix joint = apply_on_factor(ch, pure.to_density(), "A");
  joint.labels[joint.factor("A")] = "B";
  return mutual_information(joint, {"B"}, {"R"});
}

// Entropy exchange S(Phi, rho) = S(Phi^c(rho)).
inline double entropy_exchange(const Channel& ch, const cmat& rho) {
  return von_neumann_entropy(complementary(ch).apply(rho));
}

inline Ensemble apply(const Channel& ch, const Ensemble& mu) {
  Ensemble out;
  out.probs = mu.probs;
  for (const auto& s : mu.states) out.states.push_back(ch.apply(s));
  return out;
}

}  // namespace qcorr
