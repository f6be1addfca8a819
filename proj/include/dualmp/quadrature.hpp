#pragma once

// Adaptive Simpson quadrature with interval halving, plus a helper for
// integrals over [0, t] of densities that behave like s^gamma near zero.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "dualmp/errors.hpp"

namespace dualmp::quad {

inline constexpr double absolute_floor = 1e-300;

struct Budget {
  std::size_t max_evaluations = 4'000'000;
  int max_depth = 60;
};

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

namespace detail {

template <class F>
struct SimpsonState {
  const F& f;
  const Budget& budget;
  Result result;
};

template <class F>
double simpson_step(SimpsonState<F>& st, double a, double fa, double m, double fm, double b,
                    double fb, double whole, double eps, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.f(lm);
  const double frm = st.f(rm);
  st.result.evaluations += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  const bool out_of_budget = depth >= st.budget.max_depth ||
                             st.result.evaluations >= st.budget.max_evaluations ||
                             !(lm > a && rm < b);
  if (std::abs(delta) <= 15.0 * eps || out_of_budget) {
    if (out_of_budget && std::abs(delta) > 15.0 * eps) {
      st.result.converged = false;
    }
    st.result.error_estimate += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  const double half = 0.5 * eps;
  return simpson_step(st, a, fa, lm, flm, m, fm, left, half, depth + 1) +
         simpson_step(st, m, fm, rm, frm, b, fb, right, half, depth + 1);
}

}  // namespace detail

/// Integrates f over [a, b] to the absolute tolerance max(abs_tol, absolute_floor).
template <class F>
Result simpson_abs(const F& f, double a, double b, double abs_tol, const Budget& budget = {}) {
  detail::SimpsonState<F> st{f, budget, {}};
  if (!(b > a)) {
    return st.result;
  }
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  st.result.evaluations = 3;
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double eps = std::max(abs_tol, absolute_floor);
  st.result.value = detail::simpson_step(st, a, fa, m, fm, b, fb, whole, eps, 0);
  return st.result;
}

/// Relative-tolerance variant: a coarse pass sets the absolute target.
template <class F>
Result simpson(const F& f, double a, double b, double rel_tol, const Budget& budget = {}) {
  if (!(b > a)) {
    return {};
  }
  // 9-point composite Simpson as magnitude probe; only its size matters.
  double probe = 0.0;
  const double hstep = (b - a) / 8.0;
  for (int i = 0; i <= 8; ++i) {
    const double w = (i == 0 || i == 8) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    probe += w * std::abs(f(a + i * hstep));
  }
  probe *= hstep / 3.0;
  Result r = simpson_abs(f, a, b, rel_tol * probe, budget);
  r.evaluations += 9;
  return r;
}

/// ∫_0^t rho(s) ds for a nonnegative density with rho(s) ~ c s^gamma as s -> 0.
/// The interval is split dyadically toward 0 so every piece is resolved to
/// relative accuracy; the remaining [0, t 2^-K] sliver uses the power law.
template <class F>
Result integrate_from_zero(const F& rho, double t, double gamma, double rel_tol,
                           const Budget& budget = {}) {
  Result total;
  if (!(t > 0.0)) {
    return total;
  }
  double hi = t;
  for (int k = 0; k < 1200; ++k) {
    const double lo = 0.5 * hi;
    const Result piece = simpson(rho, lo, hi, rel_tol, budget);
    total.value += piece.value;
    total.error_estimate += piece.error_estimate;
    total.evaluations += piece.evaluations;
    total.converged = total.converged && piece.converged;
    // Power-law estimate of what is left on [0, lo].
    const double tail = lo * rho(lo) / (gamma + 1.0);
    ++total.evaluations;
    if (tail <= 1e-3 * rel_tol * total.value || lo < 1e-300) {
      total.value += tail;
      return total;
    }
    hi = lo;
  }
  total.converged = false;
  return total;
}

/// Throws AccuracyError when the result did not meet its tolerance.
inline double checked(const Result& r, const char* what) {
  if (!r.converged) {
    throw AccuracyError(std::string(what) + ": quadrature did not converge within budget",
                        r.error_estimate);
  }
  return r.value;
}

}  // namespace dualmp::quad
