#pragma once

// Batch drivers behind the command-line tool: property suite, single solves,
// Pohozaev checks, eigenvalue refinement and parameter sweeps. Every output
// file carries the resolved config hash; no timings are written, so reruns
// are byte-identical.

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dualmp/config.hpp"
#include "dualmp/dual.hpp"
#include "dualmp/errors.hpp"
#include "dualmp/field_io.hpp"
#include "dualmp/grid.hpp"
#include "dualmp/mpsolve.hpp"
#include "dualmp/nfunc.hpp"
#include "dualmp/orlicz.hpp"
#include "dualmp/pohozaev.hpp"
#include "dualmp/poisson.hpp"

namespace dualmp {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_geometry = 2, exit_io = 3 };

namespace fs = std::filesystem;

inline void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  f << text;
  if (!f) throw IoError("short write to " + path.string());
}

/// n_k = 2^k (n - 1) + 1 along every used axis.
inline GridDomain refined(const GridDomain& d, int k) {
  GridDomain r = d;
  for (int a = 0; a < d.dim; ++a) r.n[a] = (d.n[a] - 1) * (1 << k) + 1;
  return r;
}

inline std::string csv_preamble(const ExperimentConfig& cfg, const std::string& what,
                                const std::string& units) {
  return "# dualmp " + what + "\n# config_hash = " + config_hash(cfg) + "\n# units: " + units + "\n";
}

// ---------------------------------------------------------------- suite

struct CheckResult {
  std::string module;
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

namespace detail {

inline std::vector<double> log_grid(double lo, double hi, int per_decade) {
  std::vector<double> t;
  const int n = static_cast<int>(std::round(std::log10(hi / lo) * per_decade));
  for (int i = 0; i <= n; ++i) t.push_back(lo * std::pow(10.0, static_cast<double>(i) / per_decade));
  return t;
}

inline GridField random_field(const GridDomain& d, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> U(lo, hi);
  GridField f(d);
  for (double& v : f.values) v = U(rng);
  return f;
}

inline std::vector<CheckResult> nfunc_checks(const SystemParams& sp) {
  std::vector<CheckResult> out;
  const Nonlinearity a(sp, Which::a);
  const auto grid = log_grid(1e-8, 1e12, 4);
  double worst_mono = 1.0;
  double worst_inv = 0.0;
  double prev = -1.0;
  for (double t : grid) {
    const double v = eval_ab(sp, Which::a, t);
    worst_mono = std::min(worst_mono, v > prev ? 1.0 : 0.0);
    prev = v;
    worst_inv = std::max(worst_inv, std::abs(invert_ab(sp, Which::a, v, 1e-13) - t) / std::max(1.0, t));
  }
  out.push_back({"nfunc", "a strictly increasing on [1e-8, 1e12]", worst_mono, 1.0, worst_mono == 1.0});
  out.push_back({"nfunc", "inverse round trip", worst_inv, 1e-8, worst_inv <= 1e-8});

  double worst_young = 0.0;
  double worst_eqA = 0.0;
  for (double t : log_grid(1e-6, 1e10, 2)) {
    const double r = invert_ab(sp, Which::a, t);
    const double lhs = eval_tildeAB(sp, Which::a, t);
    const double young = t * r - eval_AB(sp, Which::a, r, 1e-12);
    worst_young = std::max(worst_young, std::abs(lhs - young) / std::max(1.0, std::abs(lhs)));
    const double At = eval_AB(sp, Which::a, t, 1e-12);
    const double left = At - t * eval_ab(sp, Which::a, t) / (sp.p + 1.0);
    const double right = sp.alpha / (sp.p + 1.0) * a.sigma().log_correction(t, 1e-12);
    worst_eqA = std::max(worst_eqA, std::abs(left - right) / std::max(1e-300, At));
  }
  out.push_back({"nfunc", "Young equality", worst_young, 1e-8, worst_young <= 1e-8});
  out.push_back({"nfunc", "integration-by-parts identity for A", worst_eqA, 1e-8, worst_eqA <= 1e-8});

  const double tp = 1e12;
  const double dA = std::abs(delta2_index(NFunction::A(sp, Which::a), tp) - (sp.p + 1.0));
  const double dT = std::abs(delta2_index(NFunction::tildeA(sp, Which::a), tp) - (1.0 / sp.p + 1.0));
  const double band = 10.0 / std::log(tp);
  out.push_back({"nfunc", "delta2 index of A at 1e12", dA, band, dA <= band});
  out.push_back({"nfunc", "delta2 index of conjugate A at 1e12", dT, band, dT <= band});

  const double theta = theta_ps(sp);
  const double id = std::abs((sp.p / (sp.p + 1.0) - theta) - (sp.q / (sp.q + 1.0) - (1.0 - theta)));
  out.push_back({"nfunc", "PS theta identity", id, 1e-14, id <= 1e-14});
  return out;
}

inline std::vector<CheckResult> grid_checks(const GridDomain& d, std::mt19937_64& rng) {
  std::vector<CheckResult> out;
  const GridField f = random_field(d, rng, -1.0, 1.0);
  const GridField g = random_field(d, rng, -1.0, 1.0);
  const double lin = std::abs(integrate(2.0 * f + g) - (2.0 * integrate(f) + integrate(g)));
  out.push_back({"grid", "integrate is linear", lin, 1e-12, lin <= 1e-12});
  const double tri = lp_norm(f + g, 3.0) - lp_norm(f, 3.0) - lp_norm(g, 3.0);
  out.push_back({"grid", "Minkowski inequality (r = 3)", tri, 1e-12, tri <= 1e-12});
  const double hom = std::abs(lp_norm(-2.5 * f, 2.0) - 2.5 * lp_norm(f, 2.0));
  out.push_back({"grid", "lp_norm homogeneity", hom, 1e-12, hom <= 1e-12});
  return out;
}

inline std::vector<CheckResult> poisson_checks(const GridDomain& d, std::mt19937_64& rng) {
  std::vector<CheckResult> out;
  const double tol = 1e-10;
  const GridField f = random_field(d, rng, -1.0, 1.0);
  const GridField g = random_field(d, rng, -1.0, 1.0);
  const double Knorm = 1.0 / discrete_lambda1(d);
  const double sym = std::abs(inner(f, solve_K(g, tol)) - inner(g, solve_K(f, tol))) /
                     (lp_norm(f, 2.0) * lp_norm(g, 2.0) * Knorm);
  out.push_back({"poisson", "symmetry of K", sym, 10 * tol, sym <= 10 * tol});
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const GridField r = random_field(d, rng, 0.0, 1.0);
    const GridField u = solve_K(r, tol);
    double mn = 0.0;
    for (double v : u.values) mn = std::min(mn, v);
    worst = std::max(worst, -mn / max_abs(u));
  }
  out.push_back({"poisson", "maximum principle", worst, 10 * tol, worst <= 10 * tol});
  const EigenPair e = principal_eigenpair(d, 1e-12);
  const double lam = std::abs(e.lambda1 - discrete_lambda1(d)) / discrete_lambda1(d);
  out.push_back({"poisson", "principal eigenvalue vs closed form", lam, 1e-10, lam <= 1e-10});
  return out;
}

inline std::vector<CheckResult> orlicz_checks(const SystemParams& sp, const GridDomain& d,
                                              std::mt19937_64& rng) {
  std::vector<CheckResult> out;
  const GridField f = random_field(d, rng, -2.0, 2.0);
  const double r = 3.0;
  const double lux = luxemburg_norm(NFunction::power(r, 1.0), f, 1e-14);
  const double lp = std::abs(lux - lp_norm(f, r)) / lp_norm(f, r);
  out.push_back({"orlicz", "Luxemburg norm of a power equals L^r", lp, 1e-8, lp <= 1e-8});
  const NFunction A = NFunction::A(sp, Which::a);
  const OrliczPair pair = make_orlicz_pair(A);
  const double n = luxemburg_norm(pair.H, f, 1e-12);
  const double m = std::abs(modular(pair.H, (1.0 / n) * f) - 1.0);
  out.push_back({"orlicz", "unit modular at the norm", m, 1e-8, m <= 1e-8});
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    worst = std::max(worst, holder_ratio(random_field(d, rng, -3.0, 3.0),
                                         random_field(d, rng, -3.0, 3.0), pair));
  }
  out.push_back({"orlicz", "Holder ratio", worst, 2.0, worst <= 2.0});
  return out;
}

inline std::vector<CheckResult> dual_checks(const SystemParams& sp, const GridDomain& d,
                                            std::mt19937_64& rng) {
  std::vector<CheckResult> out;
  const DualProblem pb(sp, d, 1e-12);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const DualState s{random_field(d, rng, -1.0, 1.0), random_field(d, rng, -1.0, 1.0)};
    const DualState dir{random_field(d, rng, -1.0, 1.0), random_field(d, rng, -1.0, 1.0)};
    const GradState gs = pb.grad_J(s);
    const double an = inner(gs.e_f, dir.f) + inner(gs.e_g, dir.g);
    const double eps = 1e-5;
    const double jp = pb.eval_J({s.f + eps * dir.f, s.g + eps * dir.g});
    const double jm = pb.eval_J({s.f - eps * dir.f, s.g - eps * dir.g});
    const double fd = (jp - jm) / (2 * eps);
    const double scale = gs.norm() * std::sqrt(inner(dir.f, dir.f) + inner(dir.g, dir.g));
    worst = std::max(worst, std::abs(fd - an) / std::max(1e-300, scale));
  }
  out.push_back({"dual", "gradient vs central differences", worst, 1e-5, worst <= 1e-5});
  double minJ = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 20; ++i) {
    DualState s{random_field(d, rng, -1.0, 1.0), random_field(d, rng, -1.0, 1.0)};
    const double nrm = std::sqrt(inner(s.f, s.f) + inner(s.g, s.g));
    s.f *= 1e-3 / nrm;
    s.g *= 1e-3 / nrm;
    minJ = std::min(minJ, pb.eval_J(s));
  }
  out.push_back({"dual", "J > 0 on the small sphere", minJ, 0.0, minJ > 0.0});
  return out;
}

inline std::vector<CheckResult> pohozaev_checks(const GridDomain& d) {
  std::vector<CheckResult> out;
  std::vector<double> gaps;
  const double pi = std::acos(-1.0);
  for (int n : {16, 32, 64}) {
    GridDomain g = d;
    for (int a = 0; a < d.dim; ++a) g.n[a] = n;
    auto bump = [&](double x, double y, double z) {
      double v = std::cos(pi * x / g.length(0)) * std::cos(pi * y / g.length(1));
      if (g.dim > 2) v *= std::cos(pi * z / g.length(2));
      return v;
    };
    const GridField u = GridField::sample(g, bump);
    const GridField v = GridField::sample(g, [&](double x, double y, double z) {
      return bump(x, y, z) * (1.0 + x + y * y);
    });
    gaps.push_back(identity_check_raw(u, v).gap);
  }
  const double order = std::log2(gaps[1] / gaps[2]);
  out.push_back({"pohozaev", "Rellich identity gap order", order, 1.8, order >= 1.8});
  return out;
}

inline bool selected(const std::string& suites, const std::string& module) {
  if (suites == "all") return true;
  std::stringstream ss(suites);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item) == module) return true;
  }
  return false;
}

}  // namespace detail

/// Quick invariants of the selected modules on the configured params and grid.
inline std::vector<CheckResult> suite_checks(const ExperimentConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::vector<CheckResult> out;
  auto add = [&](std::vector<CheckResult> v) { out.insert(out.end(), v.begin(), v.end()); };
  if (detail::selected(cfg.suites, "nfunc")) add(detail::nfunc_checks(cfg.params));
  if (detail::selected(cfg.suites, "grid")) add(detail::grid_checks(cfg.domain, rng));
  if (detail::selected(cfg.suites, "poisson")) add(detail::poisson_checks(cfg.domain, rng));
  if (detail::selected(cfg.suites, "orlicz")) add(detail::orlicz_checks(cfg.params, cfg.domain, rng));
  if (detail::selected(cfg.suites, "dual")) add(detail::dual_checks(cfg.params, cfg.domain, rng));
  if (detail::selected(cfg.suites, "pohozaev")) add(detail::pohozaev_checks(cfg.domain));
  return out;
}

inline int run_suite(const ExperimentConfig& cfg, std::ostream& log) {
  const auto checks = suite_checks(cfg);
  const fs::path dir(cfg.output_dir);
  ensure_dir(dir);
  std::string csv = csv_preamble(cfg, "suite", "measured and tolerance in the check's own units") +
                    "module,check,measured,tolerance,status\n";
  bool ok = true;
  for (const auto& c : checks) {
    csv += c.module + "," + c.name + "," + format_real(c.measured) + "," + format_real(c.tolerance) +
           "," + (c.passed ? "PASS" : "FAIL") + "\n";
    log << (c.passed ? "PASS " : "FAIL ") << c.module << ": " << c.name << " (" << c.measured
        << " vs " << c.tolerance << ")\n";
    ok = ok && c.passed;
  }
  write_text(dir / "suite_report.csv", csv);
  write_text(dir / "config.cfg", write_config(cfg));
  return ok ? exit_ok : exit_failure;
}

// ---------------------------------------------------------------- solves

/// Everything reported for one (params, grid) solve.
struct PointResult {
  SystemParams params;
  HyperbolaResult classification;
  std::string status = "ok";  // ok, geometry_error, error
  std::string error;
  bool has_report = false;
  SolveReport report;
  bool has_pohozaev = false;
  PohozaevBreakdown pohozaev;
  double concentration_fine = std::numeric_limits<double>::quiet_NaN();
  bool converged_fine = false;
};

inline PointResult solve_point(const ExperimentConfig& cfg, const SystemParams& sp,
                               const GridDomain& domain) {
  PointResult r;
  r.params = sp;
  try {
    sp.validate();
    r.classification = hyperbola_classify(sp);
    cfg.mp.validate(sp);
    r.report = mp_solve(cfg.mp, sp, domain);
    r.has_report = true;
    try {
      r.pohozaev = pohozaev_residual(r.report.u, r.report.v, sp);
      r.report.pohozaev_residual = r.pohozaev.residual;
      r.has_pohozaev = true;
    } catch (const std::exception& e) {
      r.error = std::string("pohozaev: ") + e.what();
    }
    if (cfg.grid_doubling > 0) {
      const SolveReport fine = mp_solve(cfg.mp, sp, refined(domain, cfg.grid_doubling));
      r.concentration_fine = fine.concentration;
      r.converged_fine = fine.converged;
    }
  } catch (const GeometryError& e) {
    r.status = "geometry_error";
    r.error = e.what();
  } catch (const std::exception& e) {
    r.status = "error";
    r.error = e.what();
  }
  return r;
}

inline std::string point_header() {
  return "N,p,q,alpha,beta,classification,gap1,gap2,status,converged,stop_reason,iterations,J,"
         "grad_norm,residual_u,residual_v,positive,concentration,concentration_fine,converged_fine,"
         "poh_lhs_volume,poh_rhs_boundary,poh_alpha_term,poh_beta_term,poh_residual,"
         "graduv_consistency,log_sign,theta_ps,theta_ps_value,theta0_value,theta_half_value,"
         "theta1_value,error\n";
}

inline std::string csv_escape(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '"') c = ';';
  return s;
}

inline std::string point_row(const PointResult& r) {
  const auto R = format_real;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::string s = std::to_string(r.params.N) + "," + R(r.params.p) + "," + R(r.params.q) + "," +
                  R(r.params.alpha) + "," + R(r.params.beta) + "," +
                  to_string(r.classification.cls) + "," + R(r.classification.gap1) + "," +
                  R(r.classification.gap2) + "," + r.status + ",";
  if (r.has_report) {
    const SolveReport& p = r.report;
    s += std::string(p.converged ? "true" : "false") + "," + csv_escape(p.stop_reason) + "," +
         std::to_string(p.iterations) + "," + R(p.J_value) + "," + R(p.grad_norm) + "," +
         R(p.residuals.residual_u) + "," + R(p.residuals.residual_v) + "," +
         (p.residuals.positive_u && p.residuals.positive_v ? "true" : "false") + "," +
         R(p.concentration) + ",";
  } else {
    s += "false,,0,nan,nan,nan,nan,false,nan,";
  }
  s += R(r.concentration_fine) + "," + (r.converged_fine ? "true" : "false") + ",";
  const PohozaevBreakdown& b = r.pohozaev;
  if (r.has_pohozaev) {
    s += R(b.lhs_volume) + "," + R(b.rhs_boundary) + "," + R(b.alpha_term) + "," + R(b.beta_term) +
         "," + R(b.residual) + "," + R(b.graduv_consistency) + "," + R(b.log_sign) + ",";
    for (const auto& t : b.theta_variants) s += (&t == &b.theta_variants[0] ? R(t.theta) + "," : "") + R(t.value) + ",";
  } else {
    for (int i = 0; i < 12; ++i) s += R(nan) + ",";
  }
  s += csv_escape(r.error) + "\n";
  return s;
}

inline std::string solve_report_text(const ExperimentConfig& cfg, const PointResult& r) {
  std::ostringstream o;
  const auto R = format_real;
  o << "# dualmp solve report\nconfig_hash = " << config_hash(cfg) << "\n";
  o << "classification = " << to_string(r.classification.cls) << "\n";
  if (r.classification.cls == Classification::Neither) o << "label = outside existence regime\n";
  o << "gap1 = " << R(r.classification.gap1) << "\ngap2 = " << R(r.classification.gap2) << "\n";
  o << "status = " << r.status << "\n";
  if (!r.error.empty()) o << "error = " << r.error << "\n";
  if (r.has_report) {
    const SolveReport& p = r.report;
    o << "converged = " << (p.converged ? "true" : "false") << "\n"
      << "stop_reason = " << p.stop_reason << "\n"
      << "iterations = " << p.iterations << "\n"
      << "J_value = " << R(p.J_value) << "\n"
      << "grad_norm = " << R(p.grad_norm) << "\n"
      << "grad_tol_absolute = " << R(p.grad_tol_absolute) << "\n"
      << "residual_u = " << R(p.residuals.residual_u) << "\n"
      << "residual_v = " << R(p.residuals.residual_v) << "\n"
      << "positive_u = " << (p.residuals.positive_u ? "true" : "false") << "\n"
      << "positive_v = " << (p.residuals.positive_v ? "true" : "false") << "\n"
      << "pohozaev_residual = " << R(p.pohozaev_residual) << "\n"
      << "endpoint_t = " << R(p.endpoint_t) << "\n"
      << "s_exponent = " << R(p.s_exponent) << "\n"
      << "concentration = " << R(p.concentration) << "\n";
  }
  if (r.has_pohozaev) {
    const PohozaevBreakdown& b = r.pohozaev;
    o << "pohozaev.lhs_volume = " << R(b.lhs_volume) << "\n"
      << "pohozaev.rhs_boundary = " << R(b.rhs_boundary) << "\n"
      << "pohozaev.alpha_term = " << R(b.alpha_term) << "\n"
      << "pohozaev.beta_term = " << R(b.beta_term) << "\n"
      << "pohozaev.prefactor = " << R(b.prefactor) << "\n"
      << "pohozaev.int_ua = " << R(b.int_ua) << "\n"
      << "pohozaev.int_vb = " << R(b.int_vb) << "\n"
      << "pohozaev.int_grad = " << R(b.int_grad) << "\n"
      << "pohozaev.graduv_consistency = " << R(b.graduv_consistency) << "\n"
      << "pohozaev.balance = " << R(b.balance) << "\n"
      << "pohozaev.residual = " << R(b.residual) << "\n"
      << "pohozaev.log_sign = " << R(b.log_sign) << "\n";
    for (const auto& t : b.theta_variants) {
      o << "pohozaev.theta[" << R(t.theta) << "] = " << R(t.value) << "\n";
    }
  }
  return o.str();
}

inline void dump_point(const fs::path& dir, const ExperimentConfig& cfg, const PointResult& r) {
  ensure_dir(dir);
  write_text(dir / "report.txt", solve_report_text(cfg, r));
  if (!r.has_report) return;
  write_ompf((dir / "u.ompf").string(), r.report.u);
  write_ompf((dir / "v.ompf").string(), r.report.v);
  write_ompf((dir / "f.ompf").string(), r.report.state.f);
  write_ompf((dir / "g.ompf").string(), r.report.state.g);
  std::string h = csv_preamble(cfg, "convergence history", "J energy, grad_norm L2, phase 1 descent / 2 Newton") +
                  "iteration,J,grad_norm,phase\n";
  for (const auto& e : r.report.history) {
    h += std::to_string(e.iteration) + "," + format_real(e.J) + "," + format_real(e.grad_norm) + "," +
         std::to_string(e.phase) + "\n";
  }
  write_text(dir / "history.csv", h);
}

/// Refuses Neither classifications unless cfg.force.
inline int run_solve(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  const HyperbolaResult cls = hyperbola_classify(cfg.params);
  if (cls.cls == Classification::Neither && !cfg.force) {
    log << "parameters are outside the existence regime (classification Neither); use --force\n";
    return exit_failure;
  }
  const fs::path dir(cfg.output_dir);
  ensure_dir(dir);
  write_text(dir / "config.cfg", write_config(cfg));
  std::string table = csv_preamble(cfg, "solve", "J energy, residuals relative L2") + point_header();
  int status = exit_ok;
  for (int k = 0; k <= cfg.grid_doubling; ++k) {
    ExperimentConfig level = cfg;
    level.grid_doubling = 0;
    const GridDomain d = refined(cfg.domain, k);
    const PointResult r = solve_point(level, cfg.params, d);
    const fs::path sub = cfg.grid_doubling == 0 ? dir : dir / ("level" + std::to_string(k));
    dump_point(sub, cfg, r);
    table += point_row(r);
    log << "n = " << d.n[0] << ": " << r.status;
    if (r.has_report) log << ", converged = " << r.report.converged << ", J = " << r.report.J_value;
    if (cls.cls == Classification::Neither) log << " (outside existence regime)";
    log << "\n";
    if (r.status == "geometry_error") return exit_geometry;
    if (r.status != "ok" || !r.report.converged) status = exit_failure;
  }
  write_text(dir / "solve.csv", table);
  return status;
}

/// Solve, then report the full Pohozaev breakdown and the raw identity gap
/// under grid doubling of the manufactured pair.
inline int run_pohozaev(const ExperimentConfig& cfg, std::ostream& log) {
  const int st = run_solve(cfg, log);
  if (st == exit_geometry) return st;
  const fs::path dir(cfg.output_dir);
  std::string csv = csv_preamble(cfg, "rellich identity refinement", "gap absolute") +
                    "n,lhs,rhs,gap,order\n";
  const double pi = std::acos(-1.0);
  double prev = 0.0;
  for (int k = 0; k <= std::max(2, cfg.grid_doubling); ++k) {
    GridDomain g = cfg.domain;
    for (int a = 0; a < g.dim; ++a) g.n[a] = 16 << k;
    auto bump = [&](double x, double y, double z) {
      double v = std::cos(pi * x / g.length(0)) * std::cos(pi * y / g.length(1));
      if (g.dim > 2) v *= std::cos(pi * z / g.length(2));
      return v;
    };
    const auto chk = identity_check_raw(
        GridField::sample(g, bump),
        GridField::sample(g, [&](double x, double y, double z) { return bump(x, y, z) * (1.0 + x + y * y); }));
    const double order = prev > 0.0 ? std::log2(prev / chk.gap) : std::numeric_limits<double>::quiet_NaN();
    csv += std::to_string(g.n[0]) + "," + format_real(chk.lhs) + "," + format_real(chk.rhs) + "," +
           format_real(chk.gap) + "," + format_real(order) + "\n";
    log << "identity n = " << g.n[0] << " gap = " << chk.gap << "\n";
    prev = chk.gap;
  }
  write_text(dir / "identity.csv", csv);
  return st;
}

inline int run_eigen(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.domain.validate();
  const fs::path dir(cfg.output_dir);
  ensure_dir(dir);
  std::string csv = csv_preamble(cfg, "principal eigenvalue", "lambda in 1/length^2") +
                    "n,h,lambda1,lambda1_closed_form,relative_error\n";
  for (int k = 0; k <= cfg.grid_doubling; ++k) {
    const GridDomain d = refined(cfg.domain, k);
    const EigenPair e = principal_eigenpair(d, 1e-12);
    const double exact = discrete_lambda1(d);
    csv += std::to_string(d.n[0]) + "," + format_real(d.h(0)) + "," + format_real(e.lambda1) + "," +
           format_real(exact) + "," + format_real(std::abs(e.lambda1 - exact) / exact) + "\n";
    log << "n = " << d.n[0] << " lambda1 = " << format_real(e.lambda1) << "\n";
    if (k == cfg.grid_doubling) write_ompf((dir / "phi1.ompf").string(), e.phi1);
  }
  write_text(dir / "eigen.csv", csv);
  return exit_ok;
}

// ---------------------------------------------------------------- sweeps

/// Points in grid order: p outermost, β innermost. With sweep.diagonal the
/// point list is p × α with q = p and β = α. An empty axis empties the sweep.
inline std::vector<SystemParams> sweep_points(const ExperimentConfig& cfg) {
  const SweepGrid& g = cfg.sweep;
  std::vector<SystemParams> pts;
  if (g.p.empty() || g.alpha.empty()) return pts;
  if (g.diagonal) {
    for (double p : g.p)
      for (double a : g.alpha) pts.push_back({cfg.params.N, p, p, a, a});
    return pts;
  }
  if (g.q.empty() || g.beta.empty()) return pts;
  for (double p : g.p)
    for (double q : g.q)
      for (double a : g.alpha)
        for (double b : g.beta) pts.push_back({cfg.params.N, p, q, a, b});
  return pts;
}

inline std::vector<PointResult> sweep_results(const ExperimentConfig& cfg) {
  const auto pts = sweep_points(cfg);
  std::vector<PointResult> results(pts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pts.size(); i = next++) {
      results[i] = solve_point(cfg, pts[i], cfg.domain);
    }
  };
  const int nw = std::max(1, std::min<int>(cfg.workers, static_cast<int>(pts.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < nw; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

inline int run_sweep(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.domain.validate();
  if (cfg.domain.dim != cfg.params.N) {
    throw std::invalid_argument("ExperimentConfig: domain.dim must equal params.N");
  }
  const fs::path dir(cfg.output_dir);
  ensure_dir(dir);
  write_text(dir / "config.cfg", write_config(cfg));
  const auto results = sweep_results(cfg);
  std::string csv = csv_preamble(cfg, "sweep", "J energy, residuals relative L2, concentration max/mean") +
                    point_header();
  for (std::size_t i = 0; i < results.size(); ++i) {
    csv += point_row(results[i]);
    dump_point(dir / "points" / std::to_string(i), cfg, results[i]);
    const auto& r = results[i];
    log << "p=" << r.params.p << " q=" << r.params.q << " alpha=" << r.params.alpha
        << " beta=" << r.params.beta << " " << to_string(r.classification.cls) << " " << r.status
        << (r.has_report ? (r.report.converged ? " converged" : " not converged") : "") << "\n";
  }
  write_text(dir / "sweep.csv", csv);
  return exit_ok;
}

}  // namespace dualmp
