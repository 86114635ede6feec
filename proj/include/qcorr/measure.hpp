#pragma once

#include <optional>

#include "qcorr/channel.hpp"
#include "qcorr/distance.hpp"
#include "qcorr/optim.hpp"

namespace qcorr {

enum class OptKind { lower_bound_of_sup, upper_bound_of_inf };

// Value of a sup/inf estimated by multistart optimization, together with the
// guaranteed inequality direction relative to the true optimum.
struct OptResult {
  double value = 0.0;
  OptKind kind = OptKind::lower_bound_of_sup;
  int restarts = 0;
  bool converged = false;
  std::optional<Povm> povm;  // witness measurement where one applies
};

namespace detail {

inline std::vector<std::string> other_labels(const DensityMatrix& rho,
                                             const std::string& measured) {
  std::vector<std::string> rest;
  for (const auto& l : rho.labels)
    if (l != measured) rest.push_back(l);
  require(!rest.empty(), "state must have an unmeasured part");
  return rest;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// entropy reduction and posteriors
// ---------------------------------------------------------------------------

// ER(omega, I (x) M) = S(omega) - sum_i p_i S(omega_i) with the sandwiched
// posteriors omega_i = (I (x) sqrt(M_i)) omega (I (x) sqrt(M_i)) / p_i.
inline double entropy_reduction(const DensityMatrix& omega, const Povm& m,
                                const std::string& measured) {
  m.validate();
  require(omega.label_dim(measured) == m.dim(), "entropy_reduction: POVM dimension");
  double s = von_neumann_entropy(omega);
  for (const auto& el : m.elements) {
    cmat root = mat_sqrt_psd(el);
    DensityMatrix sub = conj_on_factor(omega, root, measured);
    double p = sub.m.trace().real();
    if (p <= tol::zero_prob) continue;
    s -= p * von_neumann_entropy(sub.m / p);
  }
  return s;
}

// Posterior ensemble on the unmeasured part; zero-probability outcomes are
// dropped.
inline Ensemble posterior_ensemble(const DensityMatrix& omega, const Povm& m,
                                   const std::string& measured) {
  m.validate();
  require(omega.label_dim(measured) == m.dim(), "posterior_ensemble: POVM dimension");
  std::vector<std::string> rest = detail::other_labels(omega, measured);
  Ensemble mu;
  for (const auto& el : m.elements) {
    cmat root = mat_sqrt_psd(el);
    DensityMatrix sub = conj_on_factor(omega, root, measured);
    double p = sub.m.trace().real();
    if (p <= tol::zero_prob) continue;
    DensityMatrix post = partial_trace(sub, rest);
    post.m /= p;
    mu.probs.push_back(p);
    mu.states.push_back(post);
  }
  // renormalize away the dropped outcomes' roundoff
  double z = 0.0;
  for (double p : mu.probs) z += p;
  for (double& p : mu.probs) p /= z;
  return mu;
}

// ---------------------------------------------------------------------------
// unoptimized one-way classical correlation and discord
// ---------------------------------------------------------------------------

inline double unopt_classical_correlation(const DensityMatrix& omega, const Povm& m,
                                          const std::string& measured) {
  return holevo_chi(posterior_ensemble(omega, m, measured));
}

inline double unopt_discord(const DensityMatrix& omega, const Povm& m,
                            const std::string& measured) {
  std::vector<std::string> rest = detail::other_labels(omega, measured);
  return mutual_information(omega, rest, {measured}) -
         unopt_classical_correlation(omega, m, measured);
}

// Conditional-mutual-information representation of the unoptimized discord:
// dilate the measurement channel and evaluate I(A:F|E) on the lifted state.
inline double unopt_discord_via_cmi(const DensityMatrix& omega, const Povm& m,
                                    const std::string& measured) {
  m.validate();
  Channel meas = measurement_channel(m);
  StinespringIsometry v = stinespring(meas);
  // row index of v is e_out * n_kraus + f
  int de = meas.d_out;
  int df = v.d_env;
  DensityMatrix lifted =
      conj_on_factor_split(omega, v.v, measured, {de, df}, {"_E", "_F"});
  std::vector<std::string> rest = detail::other_labels(omega, measured);
  return conditional_mutual_information(lifted, rest, {"_F"}, {"_E"});
}

// ---------------------------------------------------------------------------
// optimized one-way classical correlation C_B and quantum discord D_B
// ---------------------------------------------------------------------------

struct CbOptions {
  int restarts = 32;       // Haar-seeded simplex starts, split across outcome counts
  int nm_evals = 900;
  std::uint64_t seed = 5;
  int qubit_grid = 18;     // polar resolution of the projective warm-start grid
};

namespace detail {

// Block view of a bipartite state with the measured factor last: the
// (a,a') block is the d_B x d_B operator <a|omega|a'> on the measured side.
struct MeasuredBlocks {
  int da = 0;
  int db = 0;
  double s_rest = 0.0;  // S(omega_A)
  cmat m;               // permuted matrix

  cmat block(int a, int ap) const { return m.block(a * db, ap * db, db, db); }
};

inline MeasuredBlocks measured_blocks(const DensityMatrix& omega,
                                      const std::string& measured) {
  std::vector<std::string> order = other_labels(omega, measured);
  std::vector<std::string> rest = order;
  order.push_back(measured);
  DensityMatrix perm = permute_factors(omega, order);
  MeasuredBlocks mb;
  mb.db = omega.label_dim(measured);
  mb.da = static_cast<int>(omega.dim() / mb.db);
  mb.s_rest = von_neumann_entropy(partial_trace(omega, rest));
  mb.m = perm.m;
  return mb;
}

// chi of the posterior ensemble steered by the rank-one POVM given as rows of
// the isometry w; chi = S(A) - sum_i [ S~(B_i) + p_i ln p_i ].
inline double chi_of_isometry(const MeasuredBlocks& mb, const cmat& w) {
  double acc = 0.0;
  for (int i = 0; i < w.rows(); ++i) {
    cvec v = w.row(i).adjoint();
    cmat b(mb.da, mb.da);
    for (int a = 0; a < mb.da; ++a)
      for (int ap = 0; ap < mb.da; ++ap)
        b(a, ap) = (v.adjoint() * mb.block(a, ap) * v)(0, 0);
    double p = b.trace().real();
    if (p <= tol::zero_prob) continue;
    acc += entropy_cone(hermitize(b)) + p * std::log(p);
  }
  return std::max(0.0, mb.s_rest - acc);
}

inline double chi_of_povm(const MeasuredBlocks& mb, const Povm& povm) {
  double acc = 0.0;
  for (const auto& el : povm.elements) {
    cmat b(mb.da, mb.da);
    for (int a = 0; a < mb.da; ++a)
      for (int ap = 0; ap < mb.da; ++ap) b(a, ap) = (el * mb.block(a, ap)).trace();
    double p = b.trace().real();
    if (p <= tol::zero_prob) continue;
    acc += entropy_cone(hermitize(b)) + p * std::log(p);
  }
  return std::max(0.0, mb.s_rest - acc);
}

}  // namespace detail

// One-way classical correlation: supremum of the posterior Holevo quantity
// over rank-one POVMs on the measured side. Rank-one outcome counts k run from
// d_B to d_B^2; each is optimized over the isometry chart by multistart
// Nelder-Mead with projective warm starts. The result is a certified lower
// bound of the supremum.
inline OptResult classical_correlation(const DensityMatrix& omega,
                                       const std::string& measured,
                                       const CbOptions& opts = {}) {
  detail::MeasuredBlocks mb = detail::measured_blocks(omega, measured);
  int db = mb.db;
  Rng rng(opts.seed);

  double best = 0.0;
  cmat best_w;

  auto consider = [&](const cmat& w) {
    double v = detail::chi_of_isometry(mb, w);
    if (v > best) {
      best = v;
      best_w = w;
    }
  };

  // Projective warm starts: computational basis and the eigenbasis of omega_B.
  consider(cmat::Identity(db, db));
  {
    std::vector<std::string> ml{measured};
    EigResult eb = herm_eig(partial_trace(omega, ml).m);
    consider(eb.vectors.adjoint());
  }
  if (db == 2) {
    // coarse Bloch-sphere sweep of projective measurements
    int nt = opts.qubit_grid, np = 2 * opts.qubit_grid;
    for (int it = 0; it <= nt; ++it) {
      double th = M_PI * it / nt;
      for (int ip = 0; ip < np; ++ip) {
        double ph = 2.0 * M_PI * ip / np;
        cmat w(2, 2);
        w << std::cos(th / 2), std::sin(th / 2) * std::exp(cplx(0, -ph)),
            -std::sin(th / 2) * std::exp(cplx(0, ph)), std::cos(th / 2);
        consider(w);
      }
    }
  }

  std::vector<int> ks;
  for (int k = db; k <= db * db; k += std::max(1, (db * db - db) / 2))
    if (ks.empty() || ks.back() != k) ks.push_back(k);
  if (ks.back() != db * db) ks.push_back(db * db);

  int per_k = std::max(2, opts.restarts / static_cast<int>(ks.size()));
  for (int k : ks) {
    auto objective = [&](const rvec& x) {
      return -detail::chi_of_isometry(mb, isometry_chart(x, k, db));
    };
    for (int r = 0; r < per_k; ++r) {
      rvec x0(2 * k * db);
      if (r == 0 && best_w.rows() == db && k >= db) {
        // extend the best projective start with zero rows plus jitter
        cmat z = cmat::Zero(k, db);
        z.topRows(db) = best_w;
        x0 = chart_from_matrix(z);
        for (int i = 0; i < x0.size(); ++i) x0[i] += 1e-3 * rng.gaussian();
      } else {
        for (int i = 0; i < x0.size(); ++i) x0[i] = rng.gaussian();
      }
      NmOptions nm;
      nm.max_evals = opts.nm_evals;
      nm.step = 0.4;
      NmResult res = nelder_mead(objective, x0, nm);
      consider(isometry_chart(res.x, k, db));
    }
  }

  OptResult out;
  out.value = best;
  out.kind = OptKind::lower_bound_of_sup;
  out.restarts = per_k * static_cast<int>(ks.size());
  out.converged = true;
  if (best_w.size() > 0) out.povm = povm_from_isometry_rows(best_w);
  return out;
}

// Quantum discord D_B = I(A:B) - C_B; an upper bound of the infimum since the
// classical correlation is a lower bound of its supremum.
inline OptResult discord(const DensityMatrix& omega, const std::string& measured,
                         const CbOptions& opts = {}) {
  std::vector<std::string> rest = detail::other_labels(omega, measured);
  double mi = mutual_information(omega, rest, {measured});
  OptResult cb = classical_correlation(omega, measured, opts);
  OptResult out;
  out.value = mi - cb.value;
  out.kind = OptKind::upper_bound_of_inf;
  out.restarts = cb.restarts;
  out.converged = cb.converged;
  out.povm = cb.povm;
  return out;
}

// ---------------------------------------------------------------------------
// decompositions of a state: the shared engine behind E_F, chi_A and the
// constrained Holevo capacity
// ---------------------------------------------------------------------------

struct DecompOptions {
  int restarts = 32;
  int max_iters = 300;
  std::uint64_t seed = 9;
  std::vector<int> m_list;  // decomposition sizes; default spans r..r^2
};

namespace detail {

struct DecompEngine {
  cmat w;  // d x r, columns sqrt(lambda_j) e_j
  std::function<cmat(const cmat&)> map;      // CP action on rank-one pieces
  std::function<cmat(const cmat&)> map_adj;  // its adjoint

  // f(U) = sum_k p_k S(map(psi_k)), via the homogeneous entropy extension.
  double value(const cmat& u) const {
    cmat psis = w * u.transpose();  // columns are subnormalized members
    double f = 0.0;
    for (int k = 0; k < psis.cols(); ++k) {
      cmat x = map(psis.col(k) * psis.col(k).adjoint());
      double p = x.trace().real();
      if (p <= tol::zero_prob) continue;
      f += entropy_cone(hermitize(x)) + p * std::log(p);
    }
    return f;
  }

  double value_and_grad(const cmat& u, cmat* grad) const {
    cmat psis = w * u.transpose();
    int m = static_cast<int>(u.rows());
    cmat g = cmat::Zero(w.rows(), m);
    double f = 0.0;
    for (int k = 0; k < m; ++k) {
      cvec psi = psis.col(k);
      double p = std::real(psi.dot(psi));
      if (p <= 1e-14) continue;
      cmat x = hermitize(map(psi * psi.adjoint()));
      EigResult e = herm_eig(x);
      cmat mlnx = cmat::Zero(x.rows(), x.cols());
      double se = 0.0;
      for (int i = 0; i < e.values.size(); ++i) {
        double lam = std::max(e.values[i], 1e-18);
        se += eta(std::max(e.values[i], 0.0));
        mlnx -= std::log(lam) * (e.vectors.col(i) * e.vectors.col(i).adjoint());
      }
      f += se + p * std::log(p);
      cmat inner = mlnx - cmat::Identity(x.rows(), x.cols());
      g.col(k) = map_adj(inner) * psi + (std::log(p) + 1.0) * psi;
    }
    if (grad) *grad = (w.adjoint() * g).transpose();
    return f;
  }
};

inline DecompEngine make_engine(const DensityMatrix& rho,
                                std::function<cmat(const cmat&)> map,
                                std::function<cmat(const cmat&)> map_adj) {
  EigResult e = herm_eig(rho.m);
  std::vector<int> keep;
  for (int i = 0; i < e.values.size(); ++i)
    if (e.values[i] > 1e-12) keep.push_back(i);
  cmat w(rho.m.rows(), keep.size());
  for (size_t j = 0; j < keep.size(); ++j)
    w.col(j) = std::sqrt(e.values[keep[j]]) * e.vectors.col(keep[j]);
  return {w, std::move(map), std::move(map_adj)};
}

// multistart minimization of the engine objective over m x r isometries
inline double minimize_engine(const DecompEngine& eng, const DecompOptions& opts,
                              cmat* best_u_out = nullptr) {
  int r = static_cast<int>(eng.w.cols());
  std::vector<int> ms = opts.m_list;
  if (ms.empty()) {
    ms.push_back(r);
    int mid = (r + r * r) / 2;
    if (mid != r) ms.push_back(mid);
    if (r * r != ms.back()) ms.push_back(r * r);
  }
  auto vg = [&](const cmat& u, cmat* g) { return eng.value_and_grad(u, g); };

  double best = std::numeric_limits<double>::infinity();
  cmat best_u;
  Rng rng(opts.seed);
  int per_m = std::max(2, opts.restarts / static_cast<int>(ms.size()));
  StiefelOptions sopts;
  sopts.max_iters = opts.max_iters;
  for (int m : ms) {
    for (int rs = 0; rs < per_m; ++rs) {
      cmat u0;
      if (rs == 0) {
        u0 = cmat::Zero(m, r);
        u0.topRows(r) = cmat::Identity(r, r);  // the eigen-decomposition itself
      } else {
        u0 = random_isometry(m, r, rng);
      }
      StiefelResult res = stiefel_minimize(vg, u0, sopts);
      double exact = eng.value(res.u);
      if (exact < best) {
        best = exact;
        best_u = res.u;
      }
    }
  }
  if (best_u_out) *best_u_out = best_u;
  return best;
}

}  // namespace detail

// Entanglement of formation: infimum of the mean marginal entropy over pure
// decompositions, parameterized by right-unitary mixing of the eigenvectors.
// Returns an upper bound of the infimum.
inline OptResult entanglement_of_formation(const DensityMatrix& omega,
                                           const DecompOptions& opts = {}) {
  require(omega.labels.size() == 2, "entanglement_of_formation: need a bipartite state");
  int da = omega.dims[0], db = omega.dims[1];

  OptResult out;
  out.kind = OptKind::upper_bound_of_inf;
  out.converged = true;

  rvec lam = herm_eigenvalues(omega.m);
  int rank = 0;
  for (int i = 0; i < lam.size(); ++i)
    if (lam[i] > 1e-12) ++rank;
  if (rank == 1) {
    out.value = von_neumann_entropy(partial_trace(omega, {omega.labels[0]}));
    out.restarts = 0;
    return out;
  }

  auto tr_second = [da, db](const cmat& x) {
    cmat r = cmat::Zero(da, da);
    for (int a = 0; a < da; ++a)
      for (int ap = 0; ap < da; ++ap) {
        cplx s = 0.0;
        for (int b = 0; b < db; ++b) s += x(a * db + b, ap * db + b);
        r(a, ap) = s;
      }
    return r;
  };
  auto embed_second = [da, db](const cmat& y) {
    cmat r = cmat::Zero(da * db, da * db);
    for (int a = 0; a < da; ++a)
      for (int ap = 0; ap < da; ++ap)
        for (int b = 0; b < db; ++b) r(a * db + b, ap * db + b) = y(a, ap);
    return r;
  };

  detail::DecompEngine eng = detail::make_engine(omega, tr_second, embed_second);
  out.value = std::max(0.0, detail::minimize_engine(eng, opts));
  out.restarts = opts.restarts;
  return out;
}

// Constrained Holevo capacity of the partial trace at omega, reported through
// two independent routes: (i) direct ensemble optimization of the mean
// relative entropy to the marginal, (ii) the entropy/EoF identity.
struct ChiARoutes {
  OptResult direct;   // lower bound of the supremum
  OptResult via_eof;  // S(omega_A) - E_F upper bound, also a capacity estimate
};

inline ChiARoutes chi_A(const DensityMatrix& omega, const DecompOptions& opts = {}) {
  require(omega.labels.size() == 2, "chi_A: need a bipartite state");
  int da = omega.dims[0], db = omega.dims[1];
  DensityMatrix wa = partial_trace(omega, {omega.labels[0]});
  double s_a = von_neumann_entropy(wa);

  auto tr_second = [da, db](const cmat& x) {
    cmat r = cmat::Zero(da, da);
    for (int a = 0; a < da; ++a)
      for (int ap = 0; ap < da; ++ap) {
        cplx s = 0.0;
        for (int b = 0; b < db; ++b) s += x(a * db + b, ap * db + b);
        r(a, ap) = s;
      }
    return r;
  };
  auto embed_second = [da, db](const cmat& y) {
    cmat r = cmat::Zero(da * db, da * db);
    for (int a = 0; a < da; ++a)
      for (int ap = 0; ap < da; ++ap)
        for (int b = 0; b < db; ++b) r(a * db + b, ap * db + b) = y(a, ap);
    return r;
  };

  ChiARoutes routes;

  // route (i): the optimizing decomposition, scored by mean relative entropy
  {
    detail::DecompEngine eng = detail::make_engine(omega, tr_second, embed_second);
    cmat best_u;
    detail::minimize_engine(eng, opts, &best_u);
    double val = 0.0;
    if (best_u.size() > 0) {
      cmat psis = eng.w * best_u.transpose();
      for (int k = 0; k < psis.cols(); ++k) {
        cvec psi = psis.col(k);
        double p = std::real(psi.dot(psi));
        if (p <= tol::zero_prob) continue;
        cmat marg = tr_second(psi * psi.adjoint()) / p;
        val += p * relative_entropy(hermitize(marg), wa.m).finite_value();
      }
    }
    routes.direct.value = val;
    routes.direct.kind = OptKind::lower_bound_of_sup;
    routes.direct.restarts = opts.restarts;
    routes.direct.converged = true;
  }

  // route (ii): S(omega_A) - E_F with an independent seed schedule
  {
    DecompOptions o2 = opts;
    o2.seed = opts.seed + 101;
    OptResult ef = entanglement_of_formation(omega, o2);
    routes.via_eof.value = std::max(0.0, s_a - ef.value);
    routes.via_eof.kind = OptKind::lower_bound_of_sup;
    routes.via_eof.restarts = ef.restarts;
    routes.via_eof.converged = ef.converged;
  }
  return routes;
}

// Constrained Holevo capacity of a channel at rho: supremum of the output
// Holevo quantity over pure-state decompositions of rho.
inline OptResult constrained_holevo_capacity(const Channel& ch, const cmat& rho,
                                             const DecompOptions& opts = {}) {
  require(rho.rows() == ch.d_in, "constrained_holevo_capacity: dimension mismatch");
  double s_out = von_neumann_entropy(ch.apply(rho));
  auto map = [&ch](const cmat& x) { return ch.apply(x); };
  auto map_adj = [&ch](const cmat& y) {
    cmat r = cmat::Zero(ch.d_in, ch.d_in);
    for (const auto& k : ch.kraus) r += k.adjoint() * y * k;
    return r;
  };
  DensityMatrix in = single_density(rho, "A");
  detail::DecompEngine eng = detail::make_engine(in, map, map_adj);
  double mean_out_entropy = detail::minimize_engine(eng, opts);
  OptResult out;
  out.value = std::max(0.0, s_out - mean_out_entropy);
  out.kind = OptKind::lower_bound_of_sup;
  out.restarts = opts.restarts;
  out.converged = true;
  return out;
}

// ---------------------------------------------------------------------------
// Holevo capacity (unconstrained and energy-constrained)
// ---------------------------------------------------------------------------

struct CapacityOptions {
  int restarts = 8;
  int members = 0;  // 0 -> d_in^2
  int max_iters = 400;
  std::uint64_t seed = 17;
  double penalty = 200.0;  // energy-constraint penalty weight
};

namespace detail {

struct CapacityEnsemble {
  std::vector<cvec> v;  // unnormalized member vectors
  rvec w;               // softmax weights

  std::vector<double> probs() const {
    rvec e = (w.array() - w.maxCoeff()).exp();
    double z = e.sum();
    std::vector<double> p(w.size());
    for (int i = 0; i < w.size(); ++i) p[i] = e[i] / z;
    return p;
  }
};

// exact chi of the ensemble under the channel
inline double capacity_chi(const Channel& ch, const CapacityEnsemble& ens) {
  std::vector<double> p = ens.probs();
  cmat avg = cmat::Zero(ch.d_out, ch.d_out);
  double mean_s = 0.0;
  for (size_t k = 0; k < ens.v.size(); ++k) {
    cvec psi = ens.v[k] / ens.v[k].norm();
    cmat o = hermitize(ch.apply(psi * psi.adjoint()));
    avg += p[k] * o;
    mean_s += p[k] * von_neumann_entropy(o);
  }
  return std::max(0.0, von_neumann_entropy(hermitize(avg)) - mean_s);
}

inline cmat safe_log(const cmat& x) {
  EigResult e = herm_eig(hermitize(x));
  cmat out = cmat::Zero(x.rows(), x.cols());
  for (int i = 0; i < e.values.size(); ++i)
    out += std::log(std::max(e.values[i], 1e-18)) *
           (e.vectors.col(i) * e.vectors.col(i).adjoint());
  return out;
}

}  // namespace detail

// Supremum of chi(Phi(mu)) over all input ensembles: projected gradient ascent
// over pure members and softmax weights, with basis-ensemble warm starts. The
// value is the exact chi of the best ensemble found, hence a lower bound.
inline OptResult holevo_capacity(const Channel& ch, const CapacityOptions& opts = {},
                                 const Hamiltonian* h = nullptr, double e_cap = 0.0) {
  int d = ch.d_in;
  int m = opts.members > 0 ? opts.members : d * d;
  Rng rng(opts.seed);
  bool constrained = h != nullptr;
  if (constrained) {
    require(h->dim() == d, "holevo_capacity: Hamiltonian dimension mismatch");
    require(e_cap > h->ground(), "holevo_capacity: energy cap at or below ground");
  }

  auto energy_of = [&](const detail::CapacityEnsemble& ens) {
    std::vector<double> p = ens.probs();
    double e = 0.0;
    for (size_t k = 0; k < ens.v.size(); ++k) {
      cvec psi = ens.v[k] / ens.v[k].norm();
      for (int i = 0; i < d; ++i) e += p[k] * h->eigenvalues[i] * std::norm(psi[i]);
    }
    return e;
  };

  // exact feasible value: mix toward the ground member when over budget
  auto feasible_chi = [&](const detail::CapacityEnsemble& ens) {
    if (!constrained) return detail::capacity_chi(ch, ens);
    double e = energy_of(ens);
    if (e <= e_cap) return detail::capacity_chi(ch, ens);
    detail::CapacityEnsemble mixed = ens;
    // append the ground state carrying the mixing weight
    double t_lo = 0.0, t_hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      double t = 0.5 * (t_lo + t_hi);
      double em = (1.0 - t) * e + t * h->ground();
      (em <= e_cap ? t_hi : t_lo) = t;
    }
    double t = t_hi;
    std::vector<double> p = ens.probs();
    cvec ground = cvec::Zero(d);
    ground[0] = 1.0;
    cmat avg = cmat::Zero(ch.d_out, ch.d_out);
    double mean_s = 0.0;
    for (size_t k = 0; k < ens.v.size(); ++k) {
      cvec psi = ens.v[k] / ens.v[k].norm();
      cmat o = hermitize(ch.apply(psi * psi.adjoint()));
      avg += (1.0 - t) * p[k] * o;
      mean_s += (1.0 - t) * p[k] * von_neumann_entropy(o);
    }
    cmat og = hermitize(ch.apply(ground * ground.adjoint()));
    avg += t * og;
    mean_s += t * von_neumann_entropy(og);
    return std::max(0.0, von_neumann_entropy(hermitize(avg)) - mean_s);
  };

  // penalized objective and gradient for the ascent
  auto ascend = [&](detail::CapacityEnsemble ens) {
    auto value = [&](const detail::CapacityEnsemble& e) {
      double f = detail::capacity_chi(ch, e);
      if (constrained) {
        double ex = std::max(0.0, energy_of(e) - e_cap);
        f -= opts.penalty * ex * ex;
      }
      return f;
    };
    double f = value(ens);
    double step = 0.3;
    for (int it = 0; it < opts.max_iters; ++it) {
      std::vector<double> p = ens.probs();
      cmat avg = cmat::Zero(ch.d_out, ch.d_out);
      std::vector<cmat> outs(m);
      std::vector<cvec> psis(m);
      for (int k = 0; k < m; ++k) {
        psis[k] = ens.v[k] / ens.v[k].norm();
        outs[k] = hermitize(ch.apply(psis[k] * psis[k].adjoint()));
        avg += p[k] * outs[k];
      }
      cmat ln_avg = detail::safe_log(avg);
      double over = constrained ? std::max(0.0, energy_of(ens) - e_cap) : 0.0;

      std::vector<cvec> gv(m);
      rvec dk(m);
      for (int k = 0; k < m; ++k) {
        cmat inner = detail::safe_log(outs[k]) - ln_avg;
        cmat mk = cmat::Zero(d, d);
        for (const auto& kr : ch.kraus) mk += kr.adjoint() * inner * kr;
        if (constrained && over > 0.0) {
          cmat hd = cmat::Zero(d, d);
          for (int i = 0; i < d; ++i) hd(i, i) = h->eigenvalues[i];
          mk -= 2.0 * opts.penalty * over * hd;
        }
        double expect = (psis[k].adjoint() * mk * psis[k])(0, 0).real();
        gv[k] = p[k] * (mk * psis[k] - expect * psis[k]);
        dk[k] = (outs[k] * inner).trace().real();
        if (constrained && over > 0.0) {
          double ek = 0.0;
          for (int i = 0; i < d; ++i) ek += h->eigenvalues[i] * std::norm(psis[k][i]);
          dk[k] -= 2.0 * opts.penalty * over * ek;
        }
      }
      double dbar = 0.0;
      for (int k = 0; k < m; ++k) dbar += p[k] * dk[k];
      rvec gw(m);
      for (int k = 0; k < m; ++k) gw[k] = p[k] * (dk[k] - dbar);

      double gnorm2 = gw.squaredNorm();
      for (int k = 0; k < m; ++k) gnorm2 += gv[k].squaredNorm();
      if (gnorm2 < 1e-20) break;

      bool accepted = false;
      for (int ls = 0; ls < 20; ++ls) {
        detail::CapacityEnsemble cand = ens;
        for (int k = 0; k < m; ++k) {
          cand.v[k] = psis[k] + step * gv[k];
          cand.v[k] /= cand.v[k].norm();
        }
        cand.w = ens.w + step * gw;
        double fc = value(cand);
        if (fc > f + 1e-12) {
          ens = cand;
          f = fc;
          step = std::min(step * 1.4, 4.0);
          accepted = true;
          break;
        }
        step *= 0.5;
        if (step < 1e-10) break;
      }
      if (!accepted) break;
    }
    return ens;
  };

  auto basis_ensemble = [&](const cmat& basis) {
    detail::CapacityEnsemble ens;
    ens.w = rvec::Zero(m);
    for (int k = 0; k < m; ++k) {
      if (k < d)
        ens.v.push_back(basis.col(k));
      else
        ens.v.push_back(random_unit_vector(d, rng));
    }
    return ens;
  };

  std::vector<detail::CapacityEnsemble> starts;
  starts.push_back(basis_ensemble(cmat::Identity(d, d)));
  {
    // a Kraus-weighted Gram basis; for basis-aligned channels this recovers
    // the distinguished input basis
    cmat gram = cmat::Zero(d, d);
    for (size_t e = 0; e < ch.kraus.size(); ++e)
      gram += double(e + 1) * ch.kraus[e].adjoint() * ch.kraus[e];
    starts.push_back(basis_ensemble(herm_eig(hermitize(gram)).vectors));
  }
  if (constrained) {
    // Gibbs-weighted basis start: feasible by construction when beta >= 0
    detail::CapacityEnsemble ens = basis_ensemble(cmat::Identity(d, d));
    for (int k = 0; k < d && k < m; ++k) ens.w[k] = -h->eigenvalues[k];
    starts.push_back(ens);
  }
  while (static_cast<int>(starts.size()) < opts.restarts + 2) {
    detail::CapacityEnsemble ens;
    ens.w = rvec::Zero(m);
    for (int k = 0; k < m; ++k) {
      ens.v.push_back(random_unit_vector(d, rng));
      ens.w[k] = 0.3 * rng.gaussian();
    }
    starts.push_back(ens);
  }

  double best = 0.0;
  for (auto& s : starts) {
    double direct = feasible_chi(s);
    best = std::max(best, direct);
    detail::CapacityEnsemble opt = ascend(s);
    best = std::max(best, feasible_chi(opt));
  }

  OptResult out;
  out.value = best;
  out.kind = OptKind::lower_bound_of_sup;
  out.restarts = static_cast<int>(starts.size());
  out.converged = true;
  return out;
}

inline OptResult holevo_capacity_ec(const Channel& ch, const Hamiltonian& h, double e_cap,
                                    const CapacityOptions& opts = {}) {
  return holevo_capacity(ch, opts, &h, e_cap);
}

// ---------------------------------------------------------------------------
// quantum-classical state detection
// ---------------------------------------------------------------------------

struct QcDetection {
  bool is_qc = false;
  std::optional<cmat> basis;  // columns: the classical basis on the measured side
};

// omega is q-c iff the operator blocks <m_A| omega |n_A> on the measured side
// are normal and pairwise commuting; the basis is recovered from a joint
// diagonalization of a random Hermitian combination.
inline QcDetection is_qc_state(const DensityMatrix& omega, const std::string& measured,
                               double tolerance = 1e-8) {
  detail::MeasuredBlocks mb = detail::measured_blocks(omega, measured);
  std::vector<cmat> blocks;
  for (int a = 0; a < mb.da; ++a)
    for (int ap = 0; ap < mb.da; ++ap) blocks.push_back(mb.block(a, ap));

  for (const auto& b : blocks) {
    if ((b * b.adjoint() - b.adjoint() * b).norm() > tolerance) return {false, {}};
  }
  for (size_t i = 0; i < blocks.size(); ++i)
    for (size_t j = i + 1; j < blocks.size(); ++j)
      if ((blocks[i] * blocks[j] - blocks[j] * blocks[i]).norm() > tolerance)
        return {false, {}};

  Rng rng(1234577);
  for (int attempt = 0; attempt < 3; ++attempt) {
    cmat comb = cmat::Zero(mb.db, mb.db);
    for (const auto& b : blocks) {
      double cr = rng.gaussian(), ci = rng.gaussian();
      comb += cr * (b + b.adjoint()) + ci * cplx(0, 1) * (b - b.adjoint());
    }
    EigResult e = herm_eig(hermitize(comb));
    bool ok = true;
    for (const auto& b : blocks) {
      cmat rot = e.vectors.adjoint() * b * e.vectors;
      for (int i = 0; i < rot.rows() && ok; ++i)
        for (int j = 0; j < rot.cols(); ++j)
          if (i != j && std::abs(rot(i, j)) > 10.0 * tolerance) {
            ok = false;
            break;
          }
    }
    if (ok) return {true, e.vectors};
  }
  return {false, {}};
}

}  // namespace qcorr
