#pragma once

// Modulars, Luxemburg norms, Hölder ratios and the Orlicz dual-norm bracket
// on grid fields. H is any even callable; NFunction overloads build fast
// evaluators for the power-log family.

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>

#include "dualmp/errors.hpp"
#include "dualmp/grid.hpp"
#include "dualmp/nfunc.hpp"

namespace dualmp {

template <class H>
double modular(const H& fn, const GridField& field) {
  double sum = 0.0;
  for (double v : field.values) sum += fn(std::abs(v));
  if (!std::isfinite(sum)) {
    throw RangeError("modular: H overflows on the field's range");
  }
  return sum * field.domain.cell_volume();
}

/// ∫H(u/λ) as a function of λ.
template <class H>
double scaled_modular(const H& fn, const GridField& field, double lambda) {
  double sum = 0.0;
  const double inv = 1.0 / lambda;
  for (double v : field.values) sum += fn(std::abs(v) * inv);
  return sum * field.domain.cell_volume();
}

struct LuxemburgResult {
  double norm = 0.0;
  double modular_at_norm = 0.0;
  int iterations = 0;
};

/// λ* with |∫H(u/λ*) - 1| <= tol. H(t)/t is nondecreasing, so the modular
/// scales at least like 1/λ and a step of ln M in ln λ crosses the level;
/// doubling only covers the case where rounding breaks that bound. The root
/// is then polished by Illinois-modified regula falsi on (ln λ, ln M).
template <class H>
LuxemburgResult luxemburg_detailed(const H& fn, const GridField& field, double tol = 1e-10) {
  const double umax = max_abs(field);
  if (umax == 0.0) {
    throw std::domain_error("luxemburg_norm: zero field");
  }
  auto M = [&](double log_lambda) { return scaled_modular(fn, field, std::exp(log_lambda)); };
  LuxemburgResult res;
  int evals = 0;
  auto done = [&](double x, double m) {
    res.norm = std::exp(x);
    res.modular_at_norm = m;
    res.iterations = evals;
    return res;
  };
  double x0 = std::log(umax);
  double m0 = M(x0);
  ++evals;
  if (std::abs(m0 - 1.0) <= tol) return done(x0, m0);
  if (!(m0 > 0.0) || !std::isfinite(m0)) {
    // Fall back to doubling from the sup-norm scale.
    const double step = std::log(2.0);
    while (!(m0 > 0.0) || !std::isfinite(m0)) {
      x0 += std::isfinite(m0) ? -step : step;
      m0 = M(x0);
      if (++evals > 4000) throw RangeError("luxemburg_norm: no usable starting scale");
    }
  }
  double xlo, mlo, xhi, mhi;
  {
    double x1 = x0 + std::log(m0) * (1.0 + 1e-12);
    double m1 = M(x1);
    ++evals;
    int guard = 0;
    while ((m0 > 1.0) == (m1 > 1.0)) {
      x1 += (m0 > 1.0 ? 1.0 : -1.0) * std::log(2.0);
      m1 = M(x1);
      ++evals;
      if (++guard > 2000) throw RangeError("luxemburg_norm: no bracket");
    }
    if (std::abs(m1 - 1.0) <= tol) return done(x1, m1);
    if (m0 > 1.0) {
      xlo = x0, mlo = m0, xhi = x1, mhi = m1;
    } else {
      xlo = x1, mlo = m1, xhi = x0, mhi = m0;
    }
  }
  // ylo > 0 > yhi throughout; side marks which end moved last.
  double ylo = std::log(mlo), yhi = mhi > 0.0 ? std::log(mhi) : -745.0;
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    double x = xlo + ylo * (xhi - xlo) / (ylo - yhi);
    if (!(x > xlo && x < xhi)) x = 0.5 * (xlo + xhi);
    const double m = M(x);
    ++evals;
    if (std::abs(m - 1.0) <= tol) return done(x, m);
    const double y = m > 0.0 ? std::log(m) : -745.0;
    if (m > 1.0) {
      xlo = x, ylo = y;
      if (side == -1) yhi *= 0.5;
      side = -1;
    } else {
      xhi = x, yhi = y;
      if (side == 1) ylo *= 0.5;
      side = 1;
    }
    if (xhi - xlo <= 1e-15 * std::max(1.0, std::abs(x))) return done(x, m);
  }
  throw ConvergenceError("luxemburg_norm: 200 iterations without reaching tol", {});
}

template <class H>
double luxemburg_norm(const H& fn, const GridField& field, double tol = 1e-10) {
  return luxemburg_detailed(fn, field, tol).norm;
}

/// An N-function together with its density and Young conjugate.
struct OrliczPair {
  std::function<double(double)> H;
  std::function<double(double)> density;
  std::function<double(double)> conjugate;
};

/// Supported: Primitive (A with conjugate Ã), ConjugatePrimitive (Ã with
/// conjugate A) and Power.
inline OrliczPair make_orlicz_pair(const NFunction& fn) {
  switch (fn.kind) {
    case NKind::Primitive: {
      auto nl = std::make_shared<const Nonlinearity>(fn.sigma());
      return {[nl](double t) { return nl->primitive(t); },
              [nl](double t) { return nl->density(t); },
              [nl](double t) { return nl->conjugate(t); }};
    }
    case NKind::ConjugatePrimitive: {
      auto nl = std::make_shared<const Nonlinearity>(fn.sigma());
      return {[nl](double t) { return nl->conjugate(t); },
              [nl](double t) { return nl->inverse(t); },
              [nl](double t) { return nl->primitive(t); }};
    }
    case NKind::Power: {
      const double r = fn.gamma;
      const double k = fn.coeff;
      std::function<double(double)> conj = [](double) -> double {
        throw std::domain_error("make_orlicz_pair: t^1 has no finite Young conjugate");
      };
      if (r > 1.0) {
        const NFunction c = fn.conjugate();
        conj = [c](double t) { return c.coeff * std::pow(std::abs(t), c.gamma); };
      }
      return {[r, k](double t) { return k * std::pow(std::abs(t), r); },
              [r, k](double t) {
                return std::copysign(k * r * std::pow(std::abs(t), r - 1.0), t);
              },
              conj};
    }
    default:
      throw std::invalid_argument("make_orlicz_pair: H must be a primitive, conjugate or power");
  }
}

inline double modular(const NFunction& fn, const GridField& field) {
  return modular(make_orlicz_pair(fn).H, field);
}

inline double luxemburg_norm(const NFunction& fn, const GridField& field, double tol = 1e-10) {
  return luxemburg_norm(make_orlicz_pair(fn).H, field, tol);
}

/// ∫|fg| / (‖f‖_(H) ‖g‖_(H̃)).
inline double holder_ratio(const GridField& f, const GridField& g, const OrliczPair& pair,
                           double tol = 1e-10) {
  const double nf = luxemburg_norm(pair.H, f, tol);
  const double ng = luxemburg_norm(pair.conjugate, g, tol);
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::abs(f[i] * g[i]);
  s *= f.domain.cell_volume();
  return s / (nf * ng);
}

inline double holder_ratio(const GridField& f, const GridField& g, const NFunction& H,
                           double tol = 1e-10) {
  return holder_ratio(f, g, make_orlicz_pair(H), tol);
}

/// The Orlicz norm ‖u‖_H = sup{∫uv : ‖v‖_(H̃) <= 1} lies in [lower, upper];
/// witness is ∫uv for v = h(w)/‖h(w)‖_(H̃), w = u/‖u‖_(H), itself a lower
/// bound for ‖u‖_H and never below ‖u‖_(H).
struct DualNormBracket {
  double lower = 0.0;
  double upper = 0.0;
  double witness = 0.0;
};

inline DualNormBracket dual_norm_bracket(const GridField& u, const OrliczPair& pair,
                                         double tol = 1e-10) {
  DualNormBracket b;
  const double lux = luxemburg_norm(pair.H, u, tol);
  b.lower = lux;
  b.upper = 2.0 * lux;
  GridField v = u.map([&](double x) { return pair.density(x / lux); });
  const double nv = luxemburg_norm(pair.conjugate, v, tol);
  v *= 1.0 / nv;
  b.witness = inner(u, v);
  return b;
}

}  // namespace dualmp
