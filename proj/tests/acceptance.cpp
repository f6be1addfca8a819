// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.
// Exit status is nonzero when any hard criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dualmp/dualmp.hpp"
#include "oracles.hpp"

using namespace dualmp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel_l2(const GridField& a, const GridField& b) { return lp_norm(a - b, 2.0) / lp_norm(b, 2.0); }

// ---------------------------------------------------------------- 1

Outcome nonlinearity_identities() {
  constexpr double tol = 1e-8;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> Up(0.5, 6.0);
  double worst_young = 0.0, worst_ibp = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double p = Up(rng);
    std::uniform_real_distribution<double> Ua(-p, p);
    const SystemParams sp{3, p, 2.0, Ua(rng), 0.0};
    const PowerLog s = sp.sigma(Which::a);
    for (double t : oracle::log_grid(1e-6, 1e10, 2)) {
      const double r = invert_ab(sp, Which::a, t, 1e-14);
      const double At = eval_tildeAB(sp, Which::a, t);
      const double A_r = oracle::gauss_from_zero([&](double x) { return s.value(x); }, r, 8);
      worst_young = std::max(worst_young, std::abs(At - (t * r - A_r)) / std::max(1.0, At));
      const double A_t = eval_AB(sp, Which::a, t, 1e-12);
      const double G = oracle::gauss_from_zero(
          [&](double x) { return s.value(x) / std::log(M_E + x) * x / (M_E + x); }, t, 8);
      const double lhs = A_t - t * eval_ab(sp, Which::a, t) / (sp.p + 1.0);
      worst_ibp = std::max(worst_ibp, std::abs(lhs - sp.alpha / (sp.p + 1.0) * G) / A_t);
    }
  }
  return {worst_young <= tol && worst_ibp <= tol,
          fmt("Young %.2e, integration by parts %.2e (tol %.0e)", worst_young, worst_ibp, tol)};
}

// ---------------------------------------------------------------- 2

double worst_index_gap(const SystemParams& sp, double t) {
  const double want[4] = {sp.p + 1.0, sp.q + 1.0, 1.0 / sp.p + 1.0, 1.0 / sp.q + 1.0};
  const NFunction fns[4] = {NFunction::A(sp, Which::a), NFunction::A(sp, Which::b),
                            NFunction::tildeA(sp, Which::a), NFunction::tildeA(sp, Which::b)};
  double worst = 0.0;
  for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(delta2_index(fns[k], t) - want[k]));
  return worst;
}

Outcome asymptotic_indices() {
  constexpr double tol = 0.05;
  constexpr double t = 1e12;
  double worst = 0.0;
  for (const SystemParams sp : {SystemParams{3, 2.0, 2.0, 0.0, 0.0}, SystemParams{3, 2.0, 3.0, 1.0, -0.5},
                                SystemParams{3, 5.0, 5.0, -1.0, -1.0}, SystemParams{3, 5.0, 5.0, 1.0, 1.0},
                                SystemParams{3, 0.8, 6.0, 0.5, -1.0}, SystemParams{3, 3.0, 1.5, 0.0, 0.5}}) {
    worst = std::max(worst, worst_index_gap(sp, t));
  }
  // The index of A is p + 1 - α/ln t to first order, so the band only holds
  // for |α|, |β| <= 1 at this probe; a larger exponent is reported, not gated.
  const SystemParams big{3, 1.5, 4.0, -1.0, 2.0};
  const double big_gap = worst_index_gap(big, t);
  return {worst <= tol, fmt("max |index - limit| = %.4f for |log exponents| <= 1 (tol %.2f); "
                            "beta = 2 gives %.4f against 2/ln t = %.4f",
                            worst, tol, big_gap, 2.0 / std::log(t))};
}

// ---------------------------------------------------------------- 3

Outcome bands() {
  constexpr double spread_tol = 10.0;
  constexpr double cauchy_tol = 0.05;
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> Up(0.5, 6.0);
  double worst_spread = 0.0, worst_cauchy = 0.0;
  bool finite = true;
  for (int i = 0; i < 10; ++i) {
    const double p = Up(rng);
    std::uniform_real_distribution<double> Ua(-p, p);
    const SystemParams sp{3, p, 2.0, Ua(rng), 0.0};
    double lo = 1e300, hi = 0.0;
    for (double t : oracle::log_grid(1.0, 1e12, 2)) {
      const double r = invert_ab(sp, Which::a, t) /
                       (std::pow(t, 1.0 / sp.p) * std::pow(std::log(M_E + t), sp.alpha / sp.p));
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    finite = finite && lo > 0.0 && std::isfinite(hi);
    worst_spread = std::max(worst_spread, hi / lo);
    double prev1 = 0.0, prev2 = 0.0;
    for (int k = 4; k <= 12; ++k) {
      const double t = std::pow(10.0, k);
      const double r1 = eval_AB(sp, Which::a, t) / eval_tildeAB(sp, Which::a, eval_ab(sp, Which::a, t));
      const double r2 = eval_tildeAB(sp, Which::a, t) / eval_AB(sp, Which::a, invert_ab(sp, Which::a, t));
      finite = finite && std::isfinite(r1) && r1 > 0.0 && std::isfinite(r2) && r2 > 0.0;
      if (k > 4) {
        worst_cauchy = std::max({worst_cauchy, std::abs(r1 / prev1 - 1.0), std::abs(r2 / prev2 - 1.0)});
      }
      prev1 = r1;
      prev2 = r2;
    }
  }
  return {finite && worst_spread <= spread_tol && worst_cauchy <= cauchy_tol,
          fmt("band spread %.3f (tol %.0f), successive ratio change %.4f (tol %.2f)", worst_spread,
              spread_tol, worst_cauchy, cauchy_tol)};
}

// ---------------------------------------------------------------- 4

Outcome orlicz_norms() {
  constexpr double tol = 1e-8;
  const GridDomain d = GridDomain::cube(3, 33);
  std::mt19937_64 rng(404);
  double worst_lp = 0.0;
  for (double r : {1.0, 1.5, 2.0, 3.0, 4.5}) {
    const GridField f = oracle::random_field(d, rng, -3.0, 3.0);
    worst_lp = std::max(worst_lp, std::abs(luxemburg_norm(NFunction::power(r, 1.0), f, 1e-14) / lp_norm(f, r) - 1.0));
  }
  const SystemParams sp{3, 2.0, 2.0, 1.0, 1.0};
  const OrliczPair pair = make_orlicz_pair(NFunction::A(sp, Which::a));
  double worst_holder = 0.0;
  for (int i = 0; i < 500; ++i) {
    const double scale = std::pow(10.0, (i % 5) - 2);
    worst_holder = std::max(worst_holder, holder_ratio(oracle::random_field(d, rng, -scale, scale),
                                                       oracle::random_field(d, rng, -scale, scale), pair));
  }
  double worst_mod = 0.0;
  for (double scale : {1e-2, 1.0, 1e2}) {
    const GridField f = oracle::random_field(d, rng, -scale, scale);
    const double n = luxemburg_norm(pair.H, f, 1e-13);
    worst_mod = std::max(worst_mod, std::abs(modular(pair.H, (1.0 / n) * f) - 1.0));
  }
  return {worst_lp <= tol && worst_holder <= 2.0 && worst_mod <= tol,
          fmt("Luxemburg vs L^r %.2e, max Holder ratio %.4f (bound 2), unit modular %.2e", worst_lp,
              worst_holder, worst_mod)};
}

// ---------------------------------------------------------------- 5

Outcome poisson_k() {
  constexpr double tol = 1e-8;
  const GridDomain d = GridDomain::cube(3, 17);
  std::mt19937_64 rng(505);
  double worst_rt = 0.0, worst_sym = 0.0, worst_neg = 0.0;
  for (int i = 0; i < 10; ++i) {
    const GridField u = oracle::random_field(d, rng);
    const GridField w = oracle::random_field(d, rng);
    worst_rt = std::max(worst_rt, max_abs(solve_K(apply_neg_laplacian(u), 1e-12) - u) / max_abs(u));
    const double a = inner(solve_K(u, 1e-12), w), b = inner(u, solve_K(w, 1e-12));
    worst_sym = std::max(worst_sym, std::abs(a - b) / (lp_norm(u, 2.0) * lp_norm(w, 2.0) / discrete_lambda1(d)));
  }
  for (int i = 0; i < 100; ++i) {
    GridField f = oracle::random_field(d, rng, 0.0, 1.0);
    if (i % 2) {
      for (double& v : f.values) v = v > 0.9 ? v : 0.0;
    }
    const GridField u = solve_K(f, 1e-12);
    double mn = 0.0;
    for (double v : u.values) mn = std::min(mn, v);
    worst_neg = std::max(worst_neg, -mn / max_abs(u));
  }
  const double eig = std::abs(principal_eigenpair(d, 1e-12).lambda1 / discrete_lambda1(d) - 1.0);
  std::vector<double> errs;
  const double exact = 3.0 * M_PI * M_PI;
  for (int n : {16, 32, 64}) {
    const GridDomain g = GridDomain::cube(3, n);
    const double lam = n <= 32 ? principal_eigenpair(g, 1e-12).lambda1 : discrete_lambda1(g);
    errs.push_back(std::abs(lam - exact));
  }
  const double order = oracle::observed_order(errs);
  const bool ok = worst_rt <= tol && worst_sym <= tol && worst_neg <= 1e-12 && eig <= 1e-10 &&
                  std::abs(order - 2.0) <= 0.1;
  return {ok, fmt("round trip %.1e, symmetry %.1e, worst negative part %.1e, eigenvalue %.1e, order %.3f",
                  worst_rt, worst_sym, worst_neg, eig, order)};
}

// ---------------------------------------------------------------- 6

Outcome gradient_check() {
  constexpr double tol = 1e-5;
  const GridDomain d = GridDomain::cube(3, 17);
  std::mt19937_64 rng(606);
  const SystemParams params[] = {{3, 2.0, 2.0, 1.0, 1.0}, {3, 3.0, 1.5, -1.0, 0.5}, {3, 5.0, 5.0, -1.0, -1.0},
                                 {3, 1.2, 4.0, 0.0, 2.0}, {3, 0.8, 3.0, 0.4, -2.0}};
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const DualProblem pb(params[i % 5], d, 1e-13);
    const double scale = std::pow(10.0, i % 3);
    const DualState s{oracle::random_field(d, rng, -scale, scale), oracle::random_field(d, rng, -scale, scale)};
    const DualState psi{oracle::random_field(d, rng), oracle::random_field(d, rng)};
    const double eps = 1e-5 * scale;
    const GradState g = pb.grad_J(s);
    const double pairing = inner(g.e_f, psi.f) + inner(g.e_g, psi.g);
    const double fd = (pb.eval_J({s.f + eps * psi.f, s.g + eps * psi.g}) -
                       pb.eval_J({s.f - eps * psi.f, s.g - eps * psi.g})) / (2.0 * eps);
    const double ref = g.norm() * std::sqrt(inner(psi.f, psi.f) + inner(psi.g, psi.g));
    worst = std::max(worst, std::abs(fd - pairing) / ref);
  }
  return {worst <= tol, fmt("max |fd - <J',psi>| / (|J'||psi|) = %.2e over 50 states (tol %.0e)", worst, tol)};
}

// ---------------------------------------------------------------- 7

Outcome mp_geometry() {
  const SystemParams sp{3, 2.0, 2.0, 0.0, 0.0};
  const GridDomain d = GridDomain::cube(3, 17);
  const DualProblem pb(sp, d, 1e-12);
  std::mt19937_64 rng(707);
  double minJ = 1e300;
  for (int i = 0; i < 200; ++i) {
    DualState s{oracle::random_field(d, rng), oracle::random_field(d, rng)};
    if (i % 5 == 0) s.g = s.f;
    const double nrm = std::sqrt(inner(s.f, s.f) + inner(s.g, s.g));
    s.f *= 1e-3 / nrm;
    s.g *= 1e-3 / nrm;
    minJ = std::min(minJ, pb.eval_J(s));
  }
  const auto path = initial_path(MPConfig{}, sp, d);
  const double endJ = path.back().J;
  return {minJ > 0.0 && endJ < 0.0, fmt("min J on the 1e-3 sphere %.3e, path endpoint J %.4e", minJ, endJ)};
}

// ---------------------------------------------------------------- 8, 9

const SystemParams kQuad{3, 2.0, 2.0, 0.0, 0.0};

const SolveReport& quad_solution(int n) {
  static SolveReport r17 = mp_solve(MPConfig{}, kQuad, GridDomain::cube(3, 17));
  if (n == 17) return r17;
  static SolveReport r33 = mp_solve(MPConfig{}, kQuad, GridDomain::cube(3, 33));
  return r33;
}

Outcome solution_quality() {
  bool ok = true;
  std::ostringstream o;
  for (int n : {17, 33}) {
    const SolveReport& r = quad_solution(n);
    const double res = std::max(r.residuals.residual_u, r.residuals.residual_v);
    const double sym = rel_l2(r.state.f, r.state.g);
    const bool pos = r.residuals.positive_u && r.residuals.positive_v;
    ok = ok && r.converged && pos && res <= 1e-4 && sym <= 1e-6;
    o << fmt("%d^3: %s, J %.6f, residual %.1e, |f-g|/|f| %.1e, positive %s; ", n,
             r.converged ? "converged" : "not converged", r.J_value, res, sym, pos ? "yes" : "no");
  }
  std::string s = o.str();
  s.resize(s.size() - 2);
  return {ok, s};
}

Outcome pohozaev() {
  std::vector<double> gaps;
  const double pi = M_PI;
  for (int n : {16, 32, 64}) {
    const GridDomain g = GridDomain::cube(3, n);
    auto bump = [&](double x, double y, double z) { return std::cos(pi * x) * std::cos(pi * y) * std::cos(pi * z); };
    const GridField u = GridField::sample(g, bump);
    const GridField v =
        GridField::sample(g, [&](double x, double y, double z) { return bump(x, y, z) * (1.0 + x + y * y); });
    gaps.push_back(identity_check_raw(u, v).gap);
  }
  const double order = oracle::observed_order(gaps);
  double rel[2];
  int k = 0;
  for (int n : {17, 33}) {
    const SolveReport& r = quad_solution(n);
    const PohozaevBreakdown b = pohozaev_residual(r.u, r.v, kQuad);
    rel[k++] = std::abs(b.lhs_volume - b.rhs_boundary) / b.rhs_boundary;
  }
  return {order >= 1.8 && rel[1] <= 0.10 && rel[1] < rel[0],
          fmt("identity gap order %.3f (min 1.8); balance gap %.4f at 17^3, %.4f at 33^3 (max 0.10)", order,
              rel[0], rel[1])};
}

// ---------------------------------------------------------------- 10

Outcome regime_map() {
  ExperimentConfig cfg;
  cfg.params = SystemParams{3, 5.0, 5.0, 0.0, 0.0};
  cfg.domain = GridDomain::cube(3, 17);
  cfg.sweep.p = {5.0};
  cfg.sweep.alpha = {-1.0, -0.5, 0.0, 0.5, 1.0};
  cfg.sweep.diagonal = true;
  cfg.grid_doubling = 1;
  cfg.workers = 5;
  const auto res = sweep_results(cfg);
  bool gate = res.size() == 5;
  std::ostringstream o;
  for (const PointResult& r : res) {
    const double g2 = r.params.alpha / 6.0 + r.params.beta / 6.0;
    const Classification want = r.params.alpha > 0.0 ? Classification::CriticalLog : Classification::Neither;
    gate = gate && r.classification.cls == want && std::abs(r.classification.gap1) <= hyperbola_tol &&
           std::abs(r.classification.gap2 - g2) <= 1e-15 &&
           (r.classification.gap2 > 0.0) == (r.params.alpha > 0.0);
    o << "\n    alpha=beta=" << fmt("%+.1f", r.params.alpha) << " " << to_string(r.classification.cls)
      << fmt(" gap2 %+.4f", r.classification.gap2);
    if (r.has_report) {
      o << (r.report.converged ? " converged" : " not converged")
        << fmt(" J %.4f concentration %.1f -> %.1f (33^3%s)", r.report.J_value, r.report.concentration,
               r.concentration_fine, r.converged_fine ? "" : " not converged");
    } else {
      o << " " << r.status;
    }
  }
  return {gate, "classification and gap2 signs " + std::string(gate ? "correct" : "WRONG") + o.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "nonlinearity identities", nonlinearity_identities},
      {2, "asymptotic indices", asymptotic_indices},
      {3, "ratio bands and equivalence at infinity", bands},
      {4, "Orlicz norms", orlicz_norms},
      {5, "Poisson operator and eigenvalue", poisson_k},
      {6, "gradient check", gradient_check},
      {7, "mountain-pass geometry", mp_geometry},
      {8, "solution quality", solution_quality},
      {9, "Pohozaev identity", pohozaev},
      {10, "critical regime map (gate: classification)", regime_map},
  };
  int failed = 0;
  for (const Criterion& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s: %s [%s, %.1f s]\n", c.id, out.pass ? "PASS" : "FAIL", c.name,
                out.detail.c_str(), secs);
    std::fflush(stdout);
    failed += out.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
