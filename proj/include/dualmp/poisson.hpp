#pragma once

// K = (-Δ_h)^{-1} with zero Dirichlet data: matrix-free stencil, conjugate
// gradients, and the principal eigenpair by inverse power iteration.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "dualmp/errors.hpp"
#include "dualmp/grid.hpp"

namespace dualmp {

/// out = -Δ_h u with zero ghost values; out must be sized like u.
inline void apply_neg_laplacian(const GridField& u, GridField& out) {
  const GridDomain& d = u.domain;
  const auto s = d.shape();
  const int nx = s[0], ny = s[1], nz = s[2];
  const double cx = 1.0 / (d.h(0) * d.h(0));
  const double cy = d.dim > 1 ? 1.0 / (d.h(1) * d.h(1)) : 0.0;
  const double cz = d.dim > 2 ? 1.0 / (d.h(2) * d.h(2)) : 0.0;
  const double diag = 2.0 * (cx + cy + cz);
  const double* in = u.values.data();
  double* o = out.values.data();
  const std::size_t sx = static_cast<std::size_t>(ny) * nz;
  const std::size_t sy = static_cast<std::size_t>(nz);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const std::size_t base = i * sx + j * sy;
      for (int k = 0; k < nz; ++k) {
        const std::size_t c = base + k;
        double acc = diag * in[c];
        if (i > 0) acc -= cx * in[c - sx];
        if (i + 1 < nx) acc -= cx * in[c + sx];
        if (d.dim > 1) {
          if (j > 0) acc -= cy * in[c - sy];
          if (j + 1 < ny) acc -= cy * in[c + sy];
        }
        if (d.dim > 2) {
          if (k > 0) acc -= cz * in[c - 1];
          if (k + 1 < nz) acc -= cz * in[c + 1];
        }
        o[c] = acc;
      }
    }
  }
}

inline GridField apply_neg_laplacian(const GridField& u) {
  GridField out(u.domain);
  apply_neg_laplacian(u, out);
  return out;
}

/// Σ_i (2 - 2cos(π h_i / L_i)) / h_i².
inline double discrete_lambda1(const GridDomain& d) {
  double lam = 0.0;
  for (int i = 0; i < d.dim; ++i) {
    const double h = d.h(i);
    lam += (2.0 - 2.0 * std::cos(std::numbers::pi * h / d.length(i))) / (h * h);
  }
  return lam;
}

inline int default_cg_cap(const GridDomain& d) {
  const double n_avg = std::pow(static_cast<double>(d.size()), 1.0 / d.dim);
  return static_cast<int>(10.0 * n_avg * d.dim * 10.0);
}

struct CGResult {
  GridField solution;
  int iterations = 0;
  double rel_residual = 0.0;
};

namespace detail {
inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
}  // namespace detail

/// Conjugate gradients on -Δ_h x = rhs to ‖r‖/‖rhs‖ <= rel_tol.
inline CGResult solve_K_detailed(const GridField& rhs, double rel_tol = 1e-10,
                                 const GridField* warm = nullptr, int max_iters = 0) {
  const GridDomain& d = rhs.domain;
  if (max_iters <= 0) {
    max_iters = default_cg_cap(d);
  }
  CGResult res;
  res.solution = warm ? *warm : GridField(d);
  const double bnorm = std::sqrt(detail::dot(rhs.values, rhs.values));
  if (bnorm == 0.0) {
    res.solution = GridField(d);
    return res;
  }
  std::vector<double>& x = res.solution.values;
  GridField r(d);
  GridField Ap(d);
  if (warm) {
    apply_neg_laplacian(res.solution, r);
    for (std::size_t i = 0; i < x.size(); ++i) r.values[i] = rhs.values[i] - r.values[i];
  } else {
    r.values = rhs.values;
  }
  GridField p = r;
  double rr = detail::dot(r.values, r.values);
  std::vector<double> history;
  const double target = rel_tol * bnorm;
  int it = 0;
  while (std::sqrt(rr) > target) {
    if (it >= max_iters) {
      throw ConvergenceError("solve_K: iteration cap " + std::to_string(max_iters) + " reached",
                             history);
    }
    apply_neg_laplacian(p, Ap);
    const double alpha = rr / detail::dot(p.values, Ap.values);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += alpha * p.values[i];
      r.values[i] -= alpha * Ap.values[i];
    }
    const double rr_new = detail::dot(r.values, r.values);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < x.size(); ++i) p.values[i] = r.values[i] + beta * p.values[i];
    ++it;
    history.push_back(std::sqrt(rr) / bnorm);
  }
  res.iterations = it;
  res.rel_residual = std::sqrt(rr) / bnorm;
  return res;
}

inline GridField solve_K(const GridField& rhs, double rel_tol = 1e-10,
                         const GridField* warm = nullptr) {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-4)) {
    throw std::invalid_argument("solve_K: rel_tol must lie in (0, 1e-4]");
  }
  return solve_K_detailed(rhs, rel_tol, warm).solution;
}

struct EigenPair {
  double lambda1 = 0.0;
  GridField phi1;
};

/// Inverse power iteration; stops once the Rayleigh quotient changes by less
/// than tol relative.
inline EigenPair principal_eigenpair(const GridDomain& d, double tol = 1e-12, int max_iters = 500) {
  if (!(tol > 0.0 && tol <= 1e-6)) {
    throw std::invalid_argument("principal_eigenpair: tol must lie in (0, 1e-6]");
  }
  // Positive start: product of parabolic bumps.
  GridField x = GridField::sample(d, [&](double a, double b, double c) {
    const double xs[3] = {a, b, c};
    double v = 1.0;
    for (int i = 0; i < d.dim; ++i) {
      const double r = xs[i] / d.half_extent[i];
      v *= 1.0 - r * r;
    }
    return v;
  });
  const double cg_tol = std::min(1e-12, tol * 1e-2);
  auto rayleigh = [](const GridField& v) {
    const GridField Lv = apply_neg_laplacian(v);
    return detail::dot(Lv.values, v.values) / detail::dot(v.values, v.values);
  };
  double lam = rayleigh(x);
  std::vector<double> history{lam};
  bool done = false;
  for (int it = 0; it < max_iters; ++it) {
    GridField y = solve_K_detailed(x, cg_tol, nullptr).solution;
    y *= 1.0 / max_abs(y);
    const double lam_new = rayleigh(y);
    history.push_back(lam_new);
    x = std::move(y);
    const bool stagnant = std::abs(lam_new - lam) <= tol * lam_new;
    lam = lam_new;
    if (stagnant) {
      done = true;
      break;
    }
  }
  if (!done) {
    throw ConvergenceError("principal_eigenpair: Rayleigh quotient did not settle, last " +
                               std::to_string(lam),
                           history);
  }
  double mx = 0.0;
  for (double v : x.values) mx = std::max(mx, v);
  if (mx <= 0.0) {
    x *= -1.0;
    for (double v : x.values) mx = std::max(mx, v);
  }
  x *= 1.0 / mx;
  return {lam, std::move(x)};
}

}  // namespace dualmp
