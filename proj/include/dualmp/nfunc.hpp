#pragma once

// Power-log nonlinearities a(t) = t^p / ln(e+t)^alpha, their primitives,
// inverses and Young conjugates, plus the hyperbola and embedding calculus.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualmp/errors.hpp"
#include "dualmp/quadrature.hpp"

namespace dualmp {

inline constexpr double euler_e = std::numbers::e;

/// ln(e + t) for t >= 0, accurate for small t.
inline double log_e_plus(double t) { return 1.0 + std::log1p(t / euler_e); }

/// sigma(t) = t^gamma * ln(e+t)^nu on t >= 0, odd extension below 0.
struct PowerLog {
  double gamma = 1.0;
  double nu = 0.0;

  double value(double t) const {
    if (t < 0.0) {
      return -value(-t);
    }
    if (t == 0.0) {
      return 0.0;
    }
    return std::pow(t, gamma) * std::pow(log_e_plus(t), nu);
  }

  /// t sigma'(t) / sigma(t).
  double log_slope(double t) const {
    t = std::abs(t);
    return gamma + nu * t / ((euler_e + t) * log_e_plus(t));
  }

  double derivative(double t) const {
    t = std::abs(t);
    if (t == 0.0) {
      if (gamma > 1.0) return 0.0;
      if (gamma == 1.0) return 1.0;
      return std::numeric_limits<double>::infinity();
    }
    return value(t) / t * log_slope(t);
  }

  bool increasing() const { return gamma > 0.0 && nu >= -gamma; }

  /// Solves sigma(t) = s. Doubling bracket from T = 1, then Newton in
  /// log variables with bisection fallback.
  double inverse(double s, double tol = 1e-12) const {
    if (!std::isfinite(s)) {
      throw std::domain_error("inverse: non-finite argument");
    }
    if (s < 0.0) {
      return -inverse(-s, tol);
    }
    if (s == 0.0) {
      return 0.0;
    }
    double lo = 0.0;
    double hi = 1.0;
    if (value(hi) < s) {
      while (value(hi) < s) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) {
          throw RangeError("inverse: no bracket below overflow guard for s = " +
                           std::to_string(s));
        }
      }
    } else {
      lo = 0.5;
      while (value(lo) >= s) {
        hi = lo;
        lo *= 0.5;
        if (lo < 1e-300) {
          throw RangeError("inverse: root below underflow guard for s = " + std::to_string(s));
        }
      }
    }
    const double log_s = std::log(s);
    double xlo = std::log(lo);
    double xhi = std::log(hi);
    auto residual = [&](double x) {
      const double t = std::exp(x);
      return gamma * x + nu * std::log(log_e_plus(t)) - log_s;
    };
    // Start from the pure-power guess with the log factor frozen at hi.
    double x = (log_s - nu * std::log(log_e_plus(hi))) / gamma;
    if (!(x > xlo && x < xhi)) {
      x = 0.5 * (xlo + xhi);
    }
    for (int it = 0; it < 200; ++it) {
      const double r = residual(x);
      if (r == 0.0) {
        break;
      }
      if (r > 0.0) {
        xhi = x;
      } else {
        xlo = x;
      }
      const double slope = log_slope(std::exp(x));
      double next = x - r / slope;
      if (!(next > xlo && next < xhi)) {
        next = 0.5 * (xlo + xhi);
      }
      const double step = std::abs(next - x);
      x = next;
      if (step <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)) ||
          xhi - xlo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
        break;
      }
    }
    const double t = std::exp(x);
    const double err = std::abs(value(t) - s);
    if (err > tol * std::max(1.0, s)) {
      throw AccuracyError("inverse: residual above tolerance", err);
    }
    return t;
  }

  /// ∫_0^t sigma by adaptive quadrature; even extension.
  double primitive(double t, double rel_tol = 1e-10) const {
    t = std::abs(t);
    const auto rho = [this](double s) { return value(s); };
    return quad::checked(quad::integrate_from_zero(rho, t, gamma, rel_tol), "primitive");
  }

  /// ∫_0^t sigma(s) / ln(e+s) * s/(e+s) ds, the correction integral of the
  /// integration-by-parts identity for the primitive.
  double log_correction(double t, double rel_tol = 1e-10) const {
    t = std::abs(t);
    const auto rho = [this](double s) {
      return value(s) / log_e_plus(s) * s / (euler_e + s);
    };
    return quad::checked(quad::integrate_from_zero(rho, t, gamma + 1.0, rel_tol),
                         "log_correction");
  }

  /// Young conjugate of the primitive: t sigma^{-1}(t) - H(sigma^{-1}(t)).
  double conjugate_primitive(double t, double rel_tol = 1e-10) const {
    t = std::abs(t);
    if (t == 0.0) {
      return 0.0;
    }
    const double r = inverse(t);
    return t * r - primitive(r, rel_tol);
  }
};

// ---------------------------------------------------------------------------

enum class Which { a, b };

enum class Classification { Subcritical, CriticalLog, Neither };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::Subcritical: return "Subcritical";
    case Classification::CriticalLog: return "CriticalLog";
    case Classification::Neither: return "Neither";
  }
  return "?";
}

struct SystemParams {
  int N = 3;
  double p = 2.0;
  double q = 2.0;
  double alpha = 0.0;
  double beta = 0.0;

  void validate() const {
    if (N < 2) {
      throw std::invalid_argument("SystemParams: N must be >= 2");
    }
    if (!(std::isfinite(p) && std::isfinite(q) && std::isfinite(alpha) && std::isfinite(beta))) {
      throw std::invalid_argument("SystemParams: non-finite field");
    }
    if (!(p > 0.0) || !(q > 0.0)) {
      throw std::invalid_argument("SystemParams: p and q must be positive");
    }
    if (alpha > p) {
      throw std::invalid_argument("SystemParams: alpha > p, a is not monotone");
    }
    if (beta > q) {
      throw std::invalid_argument("SystemParams: beta > q, b is not monotone");
    }
  }

  double exponent(Which w) const { return w == Which::a ? p : q; }
  double log_exponent(Which w) const { return w == Which::a ? alpha : beta; }
  PowerLog sigma(Which w) const { return {exponent(w), -log_exponent(w)}; }
};

inline double eval_ab(const SystemParams& params, Which which, double t) {
  if (!std::isfinite(t)) {
    throw std::domain_error("eval_ab: non-finite argument");
  }
  return params.sigma(which).value(t);
}

inline void check_rel_tol(double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-6)) {
    throw std::invalid_argument("rel_tol must lie in (0, 1e-6]");
  }
}

/// A or B by adaptive quadrature.
inline double eval_AB(const SystemParams& params, Which which, double t, double rel_tol = 1e-10) {
  check_rel_tol(rel_tol);
  if (!std::isfinite(t)) {
    throw std::domain_error("eval_AB: non-finite argument");
  }
  return params.sigma(which).primitive(t, rel_tol);
}

/// ã or b̃.
inline double invert_ab(const SystemParams& params, Which which, double s, double tol = 1e-12) {
  if (!std::isfinite(s)) {
    throw std::domain_error("invert_ab: non-finite argument");
  }
  return params.sigma(which).inverse(s, tol);
}

/// Ã or B̃ through the Young equality.
inline double eval_tildeAB(const SystemParams& params, Which which, double t,
                           double rel_tol = 1e-10) {
  check_rel_tol(rel_tol);
  if (!std::isfinite(t)) {
    throw std::domain_error("eval_tildeAB: non-finite argument");
  }
  return params.sigma(which).conjugate_primitive(t, rel_tol);
}

// ---------------------------------------------------------------------------

enum class NKind { Raw, Primitive, Inverse, ConjugatePrimitive, Power };

/// Descriptor for sigma_{gamma,nu} and the objects derived from it. Power is
/// coeff * t^gamma and is closed under conjugation.
struct NFunction {
  double gamma = 1.0;
  double nu = 0.0;
  NKind kind = NKind::Raw;
  double coeff = 1.0;

  static NFunction power(double r, double c = 1.0) { return {r, 0.0, NKind::Power, c}; }
  static NFunction A(const SystemParams& sp, Which w = Which::a) {
    return {sp.exponent(w), -sp.log_exponent(w), NKind::Primitive, 1.0};
  }
  static NFunction tildeA(const SystemParams& sp, Which w = Which::a) {
    return {sp.exponent(w), -sp.log_exponent(w), NKind::ConjugatePrimitive, 1.0};
  }

  PowerLog sigma() const { return {gamma, nu}; }

  double evaluate(double t, double rel_tol = 1e-10) const {
    switch (kind) {
      case NKind::Raw: return sigma().value(t);
      case NKind::Inverse: return sigma().inverse(t);
      case NKind::Primitive: return sigma().primitive(t, rel_tol);
      case NKind::ConjugatePrimitive: return sigma().conjugate_primitive(t, rel_tol);
      case NKind::Power: return coeff * std::pow(std::abs(t), gamma);
    }
    return 0.0;
  }

  /// Young conjugate for primitive kinds and powers; the density/inverse
  /// pair for Raw and Inverse.
  NFunction conjugate() const {
    switch (kind) {
      case NKind::Raw: return {gamma, nu, NKind::Inverse, coeff};
      case NKind::Inverse: return {gamma, nu, NKind::Raw, coeff};
      case NKind::Primitive: return {gamma, nu, NKind::ConjugatePrimitive, coeff};
      case NKind::ConjugatePrimitive: return {gamma, nu, NKind::Primitive, coeff};
      case NKind::Power: {
        if (!(gamma > 1.0)) {
          throw std::domain_error("conjugate: power exponent must exceed 1");
        }
        const double r = gamma;
        const double rc = r / (r - 1.0);
        const double c = (r - 1.0) / r * std::pow(coeff * r, -1.0 / (r - 1.0));
        return {rc, 0.0, NKind::Power, c};
      }
    }
    return *this;
  }
};

/// t h(t) / H(t) with h from a centered difference of H.
inline double delta2_index(const NFunction& fn, double t_probe) {
  if (!(t_probe >= 1e6)) {
    throw std::invalid_argument("delta2_index: t_probe must be >= 1e6");
  }
  constexpr double rel_step = 1e-6;
  constexpr double tight = 1e-13;
  const double Hp = fn.evaluate(t_probe * (1.0 + rel_step), tight);
  const double Hm = fn.evaluate(t_probe * (1.0 - rel_step), tight);
  const double H = fn.evaluate(t_probe, tight);
  const double h = (Hp - Hm) / (2.0 * rel_step * t_probe);
  return t_probe * h / H;
}

struct HyperbolaResult {
  Classification cls = Classification::Neither;
  double gap1 = 0.0;
  double gap2 = 0.0;
};

inline constexpr double hyperbola_tol = 1e-12;

inline HyperbolaResult hyperbola_classify(const SystemParams& sp) {
  HyperbolaResult r;
  const double sum = 1.0 / (sp.p + 1.0) + 1.0 / (sp.q + 1.0);
  r.gap1 = sum - static_cast<double>(sp.N - 2) / sp.N;
  r.gap2 = sp.alpha / (sp.p + 1.0) + sp.beta / (sp.q + 1.0);
  if (std::abs(r.gap1) <= hyperbola_tol) {
    r.cls = r.gap2 > 0.0 ? Classification::CriticalLog : Classification::Neither;
  } else if (r.gap1 > 0.0 && sum < 1.0) {
    r.cls = Classification::Subcritical;
  } else {
    r.cls = Classification::Neither;
  }
  return r;
}

enum class EmbeddingCase { PowerLog, Exponential, DoubleExponential, Bounded, BoundedC1 };

inline const char* to_string(EmbeddingCase c) {
  switch (c) {
    case EmbeddingCase::PowerLog: return "power-log";
    case EmbeddingCase::Exponential: return "exponential";
    case EmbeddingCase::DoubleExponential: return "double-exponential";
    case EmbeddingCase::Bounded: return "bounded";
    case EmbeddingCase::BoundedC1: return "bounded-C1";
  }
  return "?";
}

/// Target space of W^{2,Ã}. For PowerLog: s^power [log s]^log_power.
/// For Exponential: e^{s^power}. For DoubleExponential: e^{e^{s^power}}.
struct EmbeddingExponents {
  EmbeddingCase kind = EmbeddingCase::PowerLog;
  double power = 0.0;
  double log_power = 0.0;
};

inline EmbeddingExponents embedding_exponents(const SystemParams& sp) {
  constexpr double tol = 1e-12;
  const double N = sp.N;
  const double p = sp.p;
  const double alpha = sp.alpha;
  const double ratio = (p + 1.0) / p;
  EmbeddingExponents e;
  if (ratio < 0.5 * N - tol) {
    const double d = N * p - 2.0 * (p + 1.0);
    e.kind = EmbeddingCase::PowerLog;
    e.power = N * (p + 1.0) / d;
    e.log_power = alpha * N / d;
    return e;
  }
  if (std::abs(ratio - 0.5 * N) <= tol) {
    const double d1 = N * p - (p + 1.0);
    const double threshold = (1.0 - 1.0 / N) * d1;
    if (std::abs(alpha - threshold) <= tol) {
      e.kind = EmbeddingCase::DoubleExponential;
      e.power = N / (N - 1.0);
    } else if (alpha < threshold) {
      e.kind = EmbeddingCase::Exponential;
      e.power = N / (N - 1.0 - alpha * N / d1);
    } else {
      e.kind = EmbeddingCase::Bounded;
    }
    return e;
  }
  const bool c1 = ratio > N + tol || (std::abs(ratio - N) <= tol && alpha > p * (N - 1.0));
  e.kind = c1 ? EmbeddingCase::BoundedC1 : EmbeddingCase::Bounded;
  return e;
}

// ---------------------------------------------------------------------------

/// ∫_0^t rho tabulated as y = ln P against x = ln t with quintic Hermite
/// pieces. The node data y, y' = t rho / P and y'' = y'(1 + t rho'/rho - y')
/// are exact, so the interpolant is accurate to O(dx^6). Values outside the
/// table follow the end slopes.
class PrimitiveTable {
 public:
  PrimitiveTable() = default;

  /// rho_log_slope(t) = t rho'(t) / rho(t).
  template <class Rho, class RhoSlope>
  PrimitiveTable(const Rho& rho, const RhoSlope& rho_log_slope, double tail_gamma, double rel_tol,
                 double t_min = 1e-20, double t_max = 1e40, int per_decade = 64) {
    x0_ = std::log(t_min);
    dx_ = std::log(10.0) / per_decade;
    const int count = static_cast<int>(std::ceil((std::log(t_max) - x0_) / dx_)) + 1;
    y_.reserve(count);
    d1_.reserve(count);
    d2_.reserve(count);
    double t = t_min;
    double P = quad::checked(quad::integrate_from_zero(rho, t, tail_gamma, rel_tol), "table");
    for (int k = 0; k < count; ++k) {
      if (!(P > 0.0) || !std::isfinite(P) || P > 1e300) {
        break;
      }
      const double s = t * rho(t) / P;
      y_.push_back(std::log(P));
      d1_.push_back(s);
      d2_.push_back(s * (1.0 + rho_log_slope(t) - s));
      const double t_next = std::exp(x0_ + (k + 1) * dx_);
      P += quad::checked(quad::simpson(rho, t, t_next, rel_tol), "table");
      t = t_next;
    }
    if (y_.size() < 2) {
      throw RangeError("PrimitiveTable: range too small");
    }
  }

  double operator()(double t) const {
    t = std::abs(t);
    if (t == 0.0) {
      return 0.0;
    }
    const double x = std::log(t);
    const double u = (x - x0_) / dx_;
    const std::size_t last = y_.size() - 1;
    if (u <= 0.0) {
      return std::exp(y_[0] + d1_[0] * (x - x0_));
    }
    if (u >= static_cast<double>(last)) {
      return std::exp(y_[last] + d1_[last] * (x - x0_ - last * dx_));
    }
    const auto i = static_cast<std::size_t>(u);
    const double s = u - static_cast<double>(i);
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double s4 = s3 * s;
    const double s5 = s4 * s;
    const double h0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    const double h1 = s - 6 * s3 + 8 * s4 - 3 * s5;
    const double h2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
    const double k0 = 10 * s3 - 15 * s4 + 6 * s5;
    const double k1 = -4 * s3 + 7 * s4 - 3 * s5;
    const double k2 = 0.5 * (s3 - 2 * s4 + s5);
    const double dx2 = dx_ * dx_;
    const double y = h0 * y_[i] + h1 * dx_ * d1_[i] + h2 * dx2 * d2_[i] + k0 * y_[i + 1] +
                     k1 * dx_ * d1_[i + 1] + k2 * dx2 * d2_[i + 1];
    return std::exp(y);
  }

 private:
  double x0_ = 0.0;
  double dx_ = 1.0;
  std::vector<double> y_;
  std::vector<double> d1_;
  std::vector<double> d2_;
};

/// Fast evaluator for one nonlinearity: direct density and inverse, tabulated
/// primitive and log-correction integral. Immutable after construction.
class Nonlinearity {
 public:
  explicit Nonlinearity(PowerLog sigma, double rel_tol = 1e-12)
      : sigma_(sigma),
        primitive_([s = sigma](double t) { return s.value(t); },
                   [s = sigma](double t) { return s.log_slope(t); }, sigma.gamma, rel_tol),
        correction_(
            [s = sigma](double t) { return s.value(t) / log_e_plus(t) * t / (euler_e + t); },
            [s = sigma](double t) {
              const double w = t / (euler_e + t);
              return s.log_slope(t) + 1.0 - w - w / log_e_plus(t);
            },
            sigma.gamma + 1.0, rel_tol) {}

  Nonlinearity(const SystemParams& sp, Which w, double rel_tol = 1e-12)
      : Nonlinearity(sp.sigma(w), rel_tol) {}

  const PowerLog& sigma() const { return sigma_; }
  double density(double t) const { return sigma_.value(t); }
  double density_derivative(double t) const { return sigma_.derivative(t); }
  double primitive(double t) const { return primitive_(t); }
  double log_correction(double t) const { return correction_(t); }
  /// Newton in log variables from the pure-power guess; falls back to the
  /// bracketed solver if it has not settled after a few steps.
  double inverse(double s) const {
    if (s < 0.0) {
      return -inverse(-s);
    }
    if (s == 0.0) {
      return 0.0;
    }
    const double g = sigma_.gamma;
    const double nu = sigma_.nu;
    const double log_s = std::log(s);
    double x = log_s / g;
    for (int it = 0; it < 12; ++it) {
      const double t = std::exp(x);
      const double L = log_e_plus(t);
      const double r = g * x + nu * std::log(L) - log_s;
      const double dx = r / (g + nu * t / ((euler_e + t) * L));
      x -= dx;
      if (std::abs(dx) <= 1e-15 * std::max(1.0, std::abs(x))) {
        return std::exp(x);
      }
    }
    return sigma_.inverse(s);
  }

  double conjugate(double s) const {
    s = std::abs(s);
    if (s == 0.0) {
      return 0.0;
    }
    const double r = inverse(s);
    return s * r - primitive_(r);
  }

 private:
  PowerLog sigma_;
  PrimitiveTable primitive_;
  PrimitiveTable correction_;
};

}  // namespace dualmp
