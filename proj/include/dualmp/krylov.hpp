#pragma once

// Restarted GMRES with Givens rotations for a matrix-free operator on
// std::vector<double>.

#include <cmath>
#include <vector>

namespace dualmp {

struct GmresResult {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

namespace detail {
inline double vdot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
}  // namespace detail

/// Solves A x = b from x = 0 until ‖b - A x‖ <= rel_tol ‖b‖.
template <class Op>
GmresResult gmres(const Op& apply, const std::vector<double>& b, std::vector<double>& x,
                  double rel_tol, int restart = 30, int max_iters = 300) {
  const std::size_t n = b.size();
  x.assign(n, 0.0);
  GmresResult res;
  const double bnorm = std::sqrt(detail::vdot(b, b));
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  std::vector<double> r = b;
  double beta = bnorm;
  std::vector<std::vector<double>> V;
  std::vector<std::vector<double>> H(restart + 1, std::vector<double>(restart, 0.0));
  std::vector<double> cs(restart), sn(restart), gvec(restart + 1);
  std::vector<double> w(n);
  while (res.iterations < max_iters) {
    V.assign(1, r);
    for (double& v : V[0]) v /= beta;
    std::fill(gvec.begin(), gvec.end(), 0.0);
    gvec[0] = beta;
    int j = 0;
    for (; j < restart && res.iterations < max_iters; ++j) {
      apply(V[j], w);
      ++res.iterations;
      for (int i = 0; i <= j; ++i) {
        H[i][j] = detail::vdot(w, V[i]);
        for (std::size_t k = 0; k < n; ++k) w[k] -= H[i][j] * V[i][k];
      }
      H[j + 1][j] = std::sqrt(detail::vdot(w, w));
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * H[i][j] + sn[i] * H[i + 1][j];
        H[i + 1][j] = -sn[i] * H[i][j] + cs[i] * H[i + 1][j];
        H[i][j] = t;
      }
      const double denom = std::hypot(H[j][j], H[j + 1][j]);
      cs[j] = H[j][j] / denom;
      sn[j] = H[j + 1][j] / denom;
      const double hj1 = H[j + 1][j];
      H[j][j] = denom;
      H[j + 1][j] = 0.0;
      gvec[j + 1] = -sn[j] * gvec[j];
      gvec[j] = cs[j] * gvec[j];
      if (hj1 != 0.0) {
        V.emplace_back(w);
        for (double& v : V.back()) v /= hj1;
      }
      if (std::abs(gvec[j + 1]) <= rel_tol * bnorm || hj1 == 0.0) {
        ++j;
        break;
      }
    }
    // Back substitution for the j-dimensional least-squares problem.
    std::vector<double> y(j, 0.0);
    for (int i = j - 1; i >= 0; --i) {
      double s = gvec[i];
      for (int k = i + 1; k < j; ++k) s -= H[i][k] * y[k];
      y[i] = s / H[i][i];
    }
    for (int i = 0; i < j; ++i) {
      for (std::size_t k = 0; k < n; ++k) x[k] += y[i] * V[i][k];
    }
    apply(x, w);
    for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - w[k];
    beta = std::sqrt(detail::vdot(r, r));
    res.rel_residual = beta / bnorm;
    if (res.rel_residual <= rel_tol) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

}  // namespace dualmp
