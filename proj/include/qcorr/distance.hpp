#pragma once

#include "qcorr/channel.hpp"
#include "qcorr/hamiltonian.hpp"

namespace qcorr {

enum class DistanceKind { diamond, bures, ec_diamond, ec_bures };

// Certified bracket around a channel divergence: `lower` comes from explicit
// witness states, `upper` from a feasible dual certificate, so the true value
// always lies inside.
struct ChannelDistance {
  double lower = 0.0;
  double upper = 0.0;
  DistanceKind kind = DistanceKind::diamond;
};

struct DiamondOptions {
  int restarts = 64;
  int max_sweeps = 500;
  double rel_improve = 1e-9;
  std::uint64_t seed = 7;
};

namespace detail {

inline cmat map_diff_apply(const Channel& a, const Channel& b, const cmat& x) {
  return a.apply(x) - b.apply(x);
}

// (Phi (x) id_R)(X) for X on in (x) R.
inline cmat channel_apply_ref(const Channel& ch, const cmat& x, int d_ref) {
  cmat acc = cmat::Zero(static_cast<long>(ch.d_out) * d_ref,
                        static_cast<long>(ch.d_out) * d_ref);
  cmat id = cmat::Identity(d_ref, d_ref);
  for (const auto& k : ch.kraus) {
    cmat kk = kron(k, id);
    acc += kk * x * kk.adjoint();
  }
  return acc;
}

// (Theta (x) id_R)(X) for X on in (x) R, Theta = a - b.
inline cmat map_diff_apply_ref(const Channel& a, const Channel& b, const cmat& x,
                               int d_ref) {
  cmat acc = cmat::Zero(static_cast<long>(a.d_out) * d_ref,
                        static_cast<long>(a.d_out) * d_ref);
  cmat id = cmat::Identity(d_ref, d_ref);
  for (const auto& k : a.kraus) {
    cmat kk = kron(k, id);
    acc += kk * x * kk.adjoint();
  }
  for (const auto& k : b.kraus) {
    cmat kk = kron(k, id);
    acc -= kk * x * kk.adjoint();
  }
  return acc;
}

}  // namespace detail

// Unnormalized Choi matrix of Phi - Psi on out (x) in.
inline cmat choi_diff(const Channel& a, const Channel& b) {
  require(a.d_in == b.d_in && a.d_out == b.d_out, "choi_diff: shape mismatch");
  int din = a.d_in, dout = a.d_out;
  cmat j = cmat::Zero(static_cast<long>(dout) * din, static_cast<long>(dout) * din);
  for (int i = 0; i < din; ++i)
    for (int k = 0; k < din; ++k) {
      cmat e = cmat::Zero(din, din);
      e(i, k) = 1.0;
      cmat t = detail::map_diff_apply(a, b, e);
      for (int r = 0; r < dout; ++r)
        for (int c = 0; c < dout; ++c)
          j(static_cast<long>(r) * din + i, static_cast<long>(c) * din + k) += t(r, c);
    }
  return j;
}

// ||Tr_out |J|||_inf: a feasible dual certificate, hence a true upper bound on
// the diamond norm of the Hermitian-preserving difference map.
inline double diamond_upper(const Channel& a, const Channel& b) {
  cmat j = choi_diff(a, b);
  EigResult e = herm_eig(hermitize(j));
  int din = a.d_in, dout = a.d_out;
  cmat absj = cmat::Zero(j.rows(), j.cols());
  for (int i = 0; i < e.values.size(); ++i)
    absj += std::abs(e.values[i]) * (e.vectors.col(i) * e.vectors.col(i).adjoint());
  cmat tr_out = cmat::Zero(din, din);
  for (int i = 0; i < din; ++i)
    for (int k = 0; k < din; ++k) {
      cplx s = 0.0;
      for (int r = 0; r < dout; ++r)
        s += absj(static_cast<long>(r) * din + i, static_cast<long>(r) * din + k);
      tr_out(i, k) = s;
    }
  return op_norm(tr_out);
}

namespace detail {

struct GivensAscent {
  const Channel& a;
  const Channel& b;
  int d_ref;

  double value(const cvec& psi) const {
    cmat x = psi * psi.adjoint();
    return trace_norm(hermitize(map_diff_apply_ref(a, b, x, d_ref)));
  }

  // Gradient-free coordinate rotations: sweep all coordinate pairs, trying a
  // small set of phased rotations with an adaptive step.
  double ascend(cvec& psi, int max_sweeps, double rel_improve) const {
    double f = value(psi);
    double step = 0.5;
    const double phases[4] = {0.0, M_PI_2, M_PI, 3.0 * M_PI_2};
    int n = static_cast<int>(psi.size());
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      double f_start = f;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          double best_f = f;
          cvec best = psi;
          for (double ph : phases)
            for (double th : {step, -step}) {
              cvec cand = psi;
              cplx e = std::exp(cplx(0.0, ph));
              cand[i] = std::cos(th) * psi[i] - std::conj(e) * std::sin(th) * psi[j];
              cand[j] = e * std::sin(th) * psi[i] + std::cos(th) * psi[j];
              double fc = value(cand);
              if (fc > best_f) {
                best_f = fc;
                best = cand;
              }
            }
          if (best_f > f) {
            f = best_f;
            psi = best;
          }
        }
      if (f - f_start <= rel_improve * std::max(1.0, std::abs(f))) {
        if (step <= 1e-7) break;
        step *= 0.25;
      }
    }
    return f;
  }
};

}  // namespace detail

// Multistart ascent over pure inputs on in (x) R with dim R = d_in. Every
// evaluated witness value is an exact lower bound.
inline double diamond_lower(const Channel& a, const Channel& b,
                            const DiamondOptions& opts = {}, cvec* witness = nullptr) {
  require(a.d_in == b.d_in && a.d_out == b.d_out, "diamond_lower: shape mismatch");
  int d = a.d_in;
  detail::GivensAscent ascent{a, b, d};
  Rng rng(opts.seed);
  double best = 0.0;
  cvec best_psi;

  // deterministic maximally entangled start plus Haar restarts
  cvec me = cvec::Zero(static_cast<long>(d) * d);
  for (int i = 0; i < d; ++i) me[static_cast<long>(i) * d + i] = 1.0 / std::sqrt(double(d));
  std::vector<cvec> starts{me};
  for (int r = 0; r < opts.restarts; ++r)
    starts.push_back(random_unit_vector(d * d, rng));

  for (auto& psi : starts) {
    cvec p = psi;
    double f = ascent.ascend(p, opts.max_sweeps, opts.rel_improve);
    if (f > best) {
      best = f;
      best_psi = p;
    }
  }
  if (witness) *witness = best_psi;
  return best;
}

inline ChannelDistance diamond_distance(const Channel& a, const Channel& b,
                                        const DiamondOptions& opts = {},
                                        cvec* witness = nullptr) {
  double up = diamond_upper(a, b);
  double lo = diamond_lower(a, b, opts, witness);
  lo = std::min(lo, up);
  return {lo, up, DistanceKind::diamond};
}

struct BuresOptions {
  int samples = 96;
  std::uint64_t seed = 11;
  DiamondOptions diamond;
};

// Bures distance bracket: sampled witnesses below, sqrt of the diamond upper
// bound above (beta <= sqrt(||.||_1) pointwise, hence for the sup).
inline ChannelDistance bures_distance_channels(const Channel& a, const Channel& b,
                                               const BuresOptions& opts = {}) {
  require(a.d_in == b.d_in && a.d_out == b.d_out,
          "bures_distance_channels: shape mismatch");
  int d = a.d_in;
  Rng rng(opts.seed);
  double lo = 0.0;
  auto eval = [&](const cmat& x) {
    cmat oa = hermitize(detail::channel_apply_ref(a, x, d));
    cmat ob = hermitize(detail::channel_apply_ref(b, x, d));
    return bures_distance(oa, ob);
  };
  for (int s = 0; s < opts.samples; ++s) {
    cvec psi = random_unit_vector(d * d, rng);
    lo = std::max(lo, eval(psi * psi.adjoint()));
  }
  cvec w;
  DiamondOptions dop = opts.diamond;
  dop.restarts = std::min(dop.restarts, 16);
  double dup = diamond_upper(a, b);
  diamond_lower(a, b, dop, &w);
  if (w.size() > 0) lo = std::max(lo, eval(w * w.adjoint()));
  double up = std::sqrt(dup);
  lo = std::min(lo, up);
  return {lo, up, DistanceKind::bures};
}

struct EcOptions {
  int samples = 48;
  int r_dim = 0;  // 0 -> d_in
  std::uint64_t seed = 13;
  std::vector<double> extra_energies;  // witness grid shared across an E-sweep
};

// Energy-constrained divergence bracket. Witnesses: Haar pure states on A(x)R
// mixed toward a fixed ground anchor by bisection until Tr H rho_A <= E; the
// candidate interpolation weights are shared across the caller's energy grid
// so the reported lower bound is monotone in E by construction. Upper bound:
// the unconstrained one (the constrained supremum cannot exceed it).
inline ChannelDistance ec_distance(const Channel& a, const Channel& b,
                                   const Hamiltonian& h, double e_bound,
                                   DistanceKind kind, const EcOptions& opts = {}) {
  require(a.d_in == b.d_in && a.d_out == b.d_out, "ec_distance: shape mismatch");
  require(h.dim() == a.d_in, "ec_distance: Hamiltonian dimension mismatch");
  require(kind == DistanceKind::ec_diamond || kind == DistanceKind::ec_bures,
          "ec_distance: kind must be energy-constrained");
  require(e_bound > h.ground(), "ec_distance: E at or below the ground energy");

  int d = a.d_in;
  int dr = opts.r_dim > 0 ? opts.r_dim : d;
  Rng rng(opts.seed);

  // ground anchor |e0>(x)|0>
  cvec anchor = cvec::Zero(static_cast<long>(d) * dr);
  anchor[0] = 1.0;
  cmat anchor_m = anchor * anchor.adjoint();

  auto marginal_energy = [&](const cmat& x) {
    double e = 0.0;
    for (int i = 0; i < d; ++i)
      for (int r = 0; r < dr; ++r)
        e += h.eigenvalues[i] * x(static_cast<long>(i) * dr + r,
                                  static_cast<long>(i) * dr + r).real();
    return e;
  };
  auto witness_value = [&](const cmat& x) {
    cmat oa = hermitize(detail::channel_apply_ref(a, x, dr));
    cmat ob = hermitize(detail::channel_apply_ref(b, x, dr));
    if (kind == DistanceKind::ec_bures) return bures_distance(oa, ob);
    return trace_norm(oa - ob);
  };
  // smallest feasible mixing weight toward the anchor for a given energy cap
  auto feasible_t = [&](double e_psi, double cap) {
    if (e_psi <= cap) return 0.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      double em = (1.0 - mid) * e_psi + mid * h.ground();
      (em <= cap ? hi : lo) = mid;
    }
    return hi;
  };

  std::vector<double> caps = opts.extra_energies;
  caps.push_back(e_bound);

  double lo = 0.0;
  for (int s = 0; s < opts.samples; ++s) {
    cvec psi = random_unit_vector(d * dr, rng);
    cmat x = psi * psi.adjoint();
    double e_psi = marginal_energy(x);
    double t_min = feasible_t(e_psi, e_bound);
    std::vector<double> cands{t_min, 1.0};
    for (double cap : caps) {
      double t = feasible_t(e_psi, cap);
      if (t >= t_min) cands.push_back(t);
    }
    for (double t : cands) {
      cmat mixed = (1.0 - t) * x + t * anchor_m;
      if (marginal_energy(mixed) > e_bound + 1e-9) continue;
      lo = std::max(lo, witness_value(mixed));
    }
  }

  double up;
  if (kind == DistanceKind::ec_bures)
    up = std::min(std::sqrt(diamond_upper(a, b)), std::sqrt(2.0));
  else
    up = diamond_upper(a, b);
  lo = std::min(lo, up);
  return {lo, up, kind};
}

}  // namespace qcorr
