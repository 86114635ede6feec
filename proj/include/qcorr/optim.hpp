#pragma once

#include <functional>

#include "qcorr/linalg.hpp"

namespace qcorr {

struct NmOptions {
  int max_evals = 2000;
  double ftol = 1e-10;
  double step = 0.5;
};

struct NmResult {
  rvec x;
  double f = 0.0;
  int evals = 0;
  bool converged = false;
};

// Nelder-Mead simplex minimization.
inline NmResult nelder_mead(const std::function<double(const rvec&)>& f, const rvec& x0,
                            const NmOptions& opts = {}) {
  const int n = static_cast<int>(x0.size());
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  std::vector<rvec> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  int evals = 0;
  for (int i = 1; i <= n; ++i) xs[i][i - 1] += opts.step;
  for (int i = 0; i <= n; ++i) {
    fs[i] = f(xs[i]);
    ++evals;
  }

  auto order = [&] {
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    std::vector<rvec> nx(n + 1);
    std::vector<double> nf(n + 1);
    for (int i = 0; i <= n; ++i) {
      nx[i] = xs[idx[i]];
      nf[i] = fs[idx[i]];
    }
    xs = std::move(nx);
    fs = std::move(nf);
  };

  bool converged = false;
  while (evals < opts.max_evals) {
    order();
    if (std::abs(fs[n] - fs[0]) <= opts.ftol * (1.0 + std::abs(fs[0]))) {
      converged = true;
      break;
    }
    rvec centroid = rvec::Zero(n);
    for (int i = 0; i < n; ++i) centroid += xs[i];
    centroid /= double(n);

    rvec xr = centroid + alpha * (centroid - xs[n]);
    double fr = f(xr);
    ++evals;
    if (fr < fs[0]) {
      rvec xe = centroid + gamma * (centroid - xs[n]);
      double fe = f(xe);
      ++evals;
      if (fe < fr) {
        xs[n] = xe;
        fs[n] = fe;
      } else {
        xs[n] = xr;
        fs[n] = fr;
      }
    } else if (fr < fs[n - 1]) {
      xs[n] = xr;
      fs[n] = fr;
    } else {
      rvec xc = centroid + rho * (xs[n] - centroid);
      double fc = f(xc);
      ++evals;
      if (fc < fs[n]) {
        xs[n] = xc;
        fs[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          xs[i] = xs[0] + sigma * (xs[i] - xs[0]);
          fs[i] = f(xs[i]);
          ++evals;
        }
      }
    }
  }
  order();
  return {xs[0], fs[0], evals, converged};
}

inline double golden_section_min(const std::function<double(double)>& f, double a,
                                 double b, double width) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > width) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

// rows x cols complex isometry (cols orthonormal) from a free real vector.
inline cmat isometry_chart(const rvec& params, int rows, int cols) {
  require(params.size() == 2 * rows * cols, "isometry_chart: wrong parameter count");
  cmat z(rows, cols);
  int idx = 0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      z(i, j) = cplx(params[idx], params[idx + 1]);
      idx += 2;
    }
  return orthonormal_columns(z);
}

inline rvec chart_from_matrix(const cmat& z) {
  rvec p(2 * z.rows() * z.cols());
  int idx = 0;
  for (int i = 0; i < z.rows(); ++i)
    for (int j = 0; j < z.cols(); ++j) {
      p[idx] = z(i, j).real();
      p[idx + 1] = z(i, j).imag();
      idx += 2;
    }
  return p;
}

struct StiefelOptions {
  int max_iters = 400;
  double gtol = 1e-9;
  double ftol = 1e-12;
  double step0 = 1.0;
};

struct StiefelResult {
  cmat u;
  double f = 0.0;
  int iters = 0;
  bool converged = false;
};

// Riemannian gradient descent on the complex Stiefel manifold {U : U^H U = I}
// with QR retraction and Armijo backtracking. The functor returns the value
// and writes the Euclidean Wirtinger gradient dF/d(conj U).
inline StiefelResult stiefel_minimize(
    const std::function<double(const cmat&, cmat*)>& value_grad, const cmat& u0,
    const StiefelOptions& opts = {}) {
  cmat u = orthonormal_columns(u0);
  cmat grad(u.rows(), u.cols());
  double f = value_grad(u, &grad);
  double step = opts.step0;
  bool converged = false;
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    // project onto the tangent space: xi = G - U herm(U^H G)
    cmat uhg = u.adjoint() * grad;
    cmat xi = grad - u * (0.5 * (uhg + uhg.adjoint()));
    double gn = xi.norm();
    if (gn <= opts.gtol * (1.0 + std::abs(f))) {
      converged = true;
      break;
    }
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      cmat cand = orthonormal_columns(u - step * xi);
      cmat cgrad(u.rows(), u.cols());
      double fc = value_grad(cand, &cgrad);
      if (fc <= f - 1e-4 * step * gn * gn) {
        if (f - fc <= opts.ftol * (1.0 + std::abs(f))) {
          u = cand;
          f = fc;
          grad = cgrad;
          converged = true;
          accepted = true;
          break;
        }
        u = cand;
        f = fc;
        grad = cgrad;
        step = std::min(step * 1.6, 16.0);
        accepted = true;
        break;
      }
      step *= 0.4;
      if (step < 1e-14) break;
    }
    if (!accepted || converged) {
      converged = converged || !accepted;
      break;
    }
  }
  return {u, f, it, converged};
}

inline cmat random_isometry(int rows, int cols, Rng& rng) {
  cmat g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = rng.cgaussian();
  return orthonormal_columns(g);
}

}  // namespace qcorr
