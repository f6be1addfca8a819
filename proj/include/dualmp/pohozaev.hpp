#pragma once

// Rellich-Pohozaev-Mitidieri checks on boxes: the raw identity for arbitrary
// fields vanishing on the boundary, and the energy balance of solutions with
// its logarithmic corrections.

#include <array>
#include <cmath>
#include <vector>

#include "dualmp/grid.hpp"
#include "dualmp/nfunc.hpp"
#include "dualmp/poisson.hpp"

namespace dualmp {

namespace detail {

// Interior values plus the zero boundary layer. Trailing unused axes keep a
// single node and are never differentiated.
class PaddedField {
 public:
  explicit PaddedField(const GridField& f) : d_(f.domain) {
    for (int a = 0; a < 3; ++a) m_[a] = a < d_.dim ? d_.n[a] + 2 : 1;
    vals_.assign(static_cast<std::size_t>(m_[0]) * m_[1] * m_[2], 0.0);
    const auto s = d_.shape();
    const int o1 = d_.dim > 1 ? 1 : 0;
    const int o2 = d_.dim > 2 ? 1 : 0;
    for (int i = 0; i < s[0]; ++i)
      for (int j = 0; j < s[1]; ++j)
        for (int k = 0; k < s[2]; ++k)
          at(i + 1, j + o1, k + o2) = f.values[d_.index(i, j, k)];
  }

  const std::array<int, 3>& extent() const { return m_; }
  const GridDomain& domain() const { return d_; }

  double& at(int i, int j, int k) { return vals_[idx(i, j, k)]; }
  double at(int i, int j, int k) const { return vals_[idx(i, j, k)]; }

  double coord(int axis, int i) const {
    return -d_.half_extent[axis] + i * d_.h(axis);
  }

  /// Second-order first derivative; one-sided three-point at the ends.
  double d1(int axis, std::array<int, 3> p) const {
    const int m = m_[axis];
    const double h = d_.h(axis);
    auto u = [&](int off) {
      std::array<int, 3> q = p;
      q[axis] += off;
      return at(q[0], q[1], q[2]);
    };
    const int i = p[axis];
    if (i == 0) return (-3.0 * u(0) + 4.0 * u(1) - u(2)) / (2.0 * h);
    if (i == m - 1) return (3.0 * u(0) - 4.0 * u(-1) + u(-2)) / (2.0 * h);
    return (u(1) - u(-1)) / (2.0 * h);
  }

  /// Second-order second derivative; one-sided four-point at the ends.
  double d2(int axis, std::array<int, 3> p) const {
    const int m = m_[axis];
    const double h2 = d_.h(axis) * d_.h(axis);
    auto u = [&](int off) {
      std::array<int, 3> q = p;
      q[axis] += off;
      return at(q[0], q[1], q[2]);
    };
    const int i = p[axis];
    if (i == 0) return (2.0 * u(0) - 5.0 * u(1) + 4.0 * u(2) - u(3)) / h2;
    if (i == m - 1) return (2.0 * u(0) - 5.0 * u(-1) + 4.0 * u(-2) - u(-3)) / h2;
    return (u(1) - 2.0 * u(0) + u(-1)) / h2;
  }

  double laplacian(std::array<int, 3> p) const {
    double s = 0.0;
    for (int a = 0; a < d_.dim; ++a) s += d2(a, p);
    return s;
  }

  std::array<double, 3> gradient(std::array<int, 3> p) const {
    std::array<double, 3> g{0.0, 0.0, 0.0};
    for (int a = 0; a < d_.dim; ++a) g[a] = d1(a, p);
    return g;
  }

  /// x·∇u at node p.
  double radial(std::array<int, 3> p) const {
    const auto g = gradient(p);
    double s = 0.0;
    for (int a = 0; a < d_.dim; ++a) s += coord(a, p[a]) * g[a];
    return s;
  }

  /// Trapezoid weight of index i along axis.
  double weight(int axis, int i) const {
    if (axis >= d_.dim) return 1.0;
    const double h = d_.h(axis);
    return (i == 0 || i == m_[axis] - 1) ? 0.5 * h : h;
  }

 private:
  std::size_t idx(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * m_[1] + j) * m_[2] + k;
  }

  GridDomain d_;
  std::array<int, 3> m_{};
  std::vector<double> vals_;
};

inline double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace detail

struct IdentityCheck {
  double lhs = 0.0;             // ∫Δu(x·∇v) + Δv(x·∇u)
  double gradient_term = 0.0;   // (N-2)∫∇u·∇v
  double boundary_terms = 0.0;  // ∫∂νu(x·∇v) + ∂νv(x·∇u) - (∇u·∇v)(x·ν)
  double rhs = 0.0;
  double gap = 0.0;
};

/// Both sides of the Rellich-type identity on the box, with every derivative
/// taken to second order on the boundary-padded grid and trapezoid rules for
/// volume and face integrals.
inline IdentityCheck identity_check_raw(const GridField& u, const GridField& v) {
  if (!(u.domain == v.domain)) {
    throw std::invalid_argument("identity_check_raw: fields on different grids");
  }
  const detail::PaddedField U(u);
  const detail::PaddedField V(v);
  const GridDomain& d = u.domain;
  const auto m = U.extent();
  const int N = d.dim;

  double lhs = 0.0;
  double grad = 0.0;
  for (int i = 0; i < m[0]; ++i)
    for (int j = 0; j < m[1]; ++j)
      for (int k = 0; k < m[2]; ++k) {
        const std::array<int, 3> p{i, j, k};
        const double w = U.weight(0, i) * U.weight(1, j) * U.weight(2, k);
        lhs += w * (U.laplacian(p) * V.radial(p) + V.laplacian(p) * U.radial(p));
        grad += w * detail::dot3(U.gradient(p), V.gradient(p));
      }

  double bnd = 0.0;
  for (const Face f : faces(d)) {
    const int a = f.axis;
    const double x_nu = d.half_extent[a];
    const int fixed = f.side > 0 ? m[a] - 1 : 0;
    std::array<int, 2> t{};
    int c = 0;
    for (int ax = 0; ax < 3; ++ax)
      if (ax != a) t[c++] = ax;
    for (int i = 0; i < m[t[0]]; ++i)
      for (int j = 0; j < m[t[1]]; ++j) {
        std::array<int, 3> p{};
        p[a] = fixed;
        p[t[0]] = i;
        p[t[1]] = j;
        const auto gu = U.gradient(p);
        const auto gv = V.gradient(p);
        const double dnu = f.side * gu[a];
        const double dnv = f.side * gv[a];
        const double w = U.weight(t[0], i) * U.weight(t[1], j);
        bnd += w * (dnu * V.radial(p) + dnv * U.radial(p) - detail::dot3(gu, gv) * x_nu);
      }
  }

  IdentityCheck r;
  r.lhs = lhs;
  r.gradient_term = (N - 2) * grad;
  r.boundary_terms = bnd;
  r.rhs = r.gradient_term + bnd;
  r.gap = std::abs(r.lhs - r.rhs);
  return r;
}

/// Face integral of ∂νu ∂νv (x·ν) from the one-sided normal derivatives.
inline double boundary_flux_term(const GridField& u, const GridField& v) {
  const GridDomain& d = u.domain;
  double total = 0.0;
  for (const Face f : faces(d)) {
    const auto du = boundary_normal_derivative(u, f);
    const auto dv = boundary_normal_derivative(v, f);
    double area = 1.0;
    for (int ax = 0; ax < d.dim; ++ax)
      if (ax != f.axis) area *= d.h(ax);
    double s = 0.0;
    for (std::size_t i = 0; i < du.size(); ++i) s += du[i] * dv[i];
    total += s * area * d.half_extent[f.axis];
  }
  return total;
}

struct ThetaBalance {
  double theta = 0.0;
  double value = 0.0;  // N∫[A(u)+B(v)] - (N-2)∫[θ u a(u) + (1-θ) v b(v)]
};

struct PohozaevBreakdown {
  double lhs_volume = 0.0;    // N∫[A(u)+B(v)] - (N-2)∫u a(u)
  double rhs_boundary = 0.0;  // ∫∂νu ∂νv (x·ν)
  double alpha_term = 0.0;    // (αN/(p+1)) ∫G_a(u)
  double beta_term = 0.0;     // (βN/(q+1)) ∫G_b(v)
  double prefactor = 0.0;     // N(1/(p+1) + 1/(q+1)) - (N-2)
  double int_ua = 0.0;
  double int_vb = 0.0;
  double int_grad = 0.0;      // ⟨u, -Δ_h v⟩
  double graduv_consistency = 0.0;  // |∫ua - ∫vb| / ∫ua
  double balance = 0.0;       // signed defect of the corrected balance
  double residual = 0.0;      // |balance| / max(1, |rhs_boundary|)
  double log_sign = 0.0;      // α/(p+1) + β/(q+1)
  std::vector<ThetaBalance> theta_variants;
};

/// θ from the Palais-Smale argument: ½(p/(p+1) + 1/(q+1)).
inline double theta_ps(const SystemParams& sp) {
  return 0.5 * (sp.p / (sp.p + 1.0) + 1.0 / (sp.q + 1.0));
}

inline PohozaevBreakdown pohozaev_residual(const GridField& u, const GridField& v,
                                           const SystemParams& sp, const Nonlinearity& a,
                                           const Nonlinearity& b) {
  sp.validate();
  if (!(u.domain == v.domain)) {
    throw std::invalid_argument("pohozaev_residual: fields on different grids");
  }
  const double N = u.domain.dim;
  const double vol = u.domain.cell_volume();
  double sumA = 0.0, sumB = 0.0, sua = 0.0, svb = 0.0, sGa = 0.0, sGb = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u[i];
    const double y = v[i];
    sumA += a.primitive(x);
    sumB += b.primitive(y);
    sua += x * a.density(x);
    svb += y * b.density(y);
    sGa += a.log_correction(x);
    sGb += b.log_correction(y);
  }
  PohozaevBreakdown r;
  const double intW = (sumA + sumB) * vol;
  r.int_ua = sua * vol;
  r.int_vb = svb * vol;
  r.int_grad = inner(u, apply_neg_laplacian(v));
  r.graduv_consistency = r.int_ua == 0.0 ? 0.0 : std::abs(r.int_ua - r.int_vb) / std::abs(r.int_ua);
  r.lhs_volume = N * intW - (N - 2.0) * r.int_ua;
  r.rhs_boundary = boundary_flux_term(u, v);
  r.alpha_term = sp.alpha * N / (sp.p + 1.0) * sGa * vol;
  r.beta_term = sp.beta * N / (sp.q + 1.0) * sGb * vol;
  r.prefactor = N * (1.0 / (sp.p + 1.0) + 1.0 / (sp.q + 1.0)) - (N - 2.0);
  r.balance = r.prefactor * r.int_ua + r.alpha_term + r.beta_term - r.rhs_boundary;
  r.residual = std::abs(r.balance) / std::max(1.0, std::abs(r.rhs_boundary));
  r.log_sign = sp.alpha / (sp.p + 1.0) + sp.beta / (sp.q + 1.0);
  for (double th : {theta_ps(sp), 0.0, 0.5, 1.0}) {
    r.theta_variants.push_back(
        {th, N * intW - (N - 2.0) * (th * r.int_ua + (1.0 - th) * r.int_vb)});
  }
  return r;
}

inline PohozaevBreakdown pohozaev_residual(const GridField& u, const GridField& v,
                                           const SystemParams& sp) {
  sp.validate();
  const Nonlinearity a(sp, Which::a);
  const Nonlinearity b(sp, Which::b);
  return pohozaev_residual(u, v, sp, a, b);
}

}  // namespace dualmp
