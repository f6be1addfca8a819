#pragma once

// Mountain-pass solver on the dual functional. A discrete path from (0,0)
// to a point with J < 0 is deformed by descending its highest node; once the
// gradient there is small, Newton-GMRES on J' = 0 finishes the job.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualmp/dual.hpp"
#include "dualmp/errors.hpp"
#include "dualmp/krylov.hpp"
#include "dualmp/nfunc.hpp"
#include "dualmp/poisson.hpp"

namespace dualmp {

struct DescentConfig {
  double initial_step = 1.0;
  double backtracking = 0.5;
  double armijo = 1e-4;
};

struct MPConfig {
  int path_nodes = 17;
  /// NaN selects (p+1)q / (p(q+1)), where Ã(t) and B̃(t^s) grow at the same
  /// rate; it lies in (1/p, q) whenever pq > 1 and is 1 for p = q.
  double s_exponent = std::numeric_limits<double>::quiet_NaN();
  double t_cap = 1e12;
  DescentConfig descent;
  /// Relative to the initial max-node gradient norm.
  double grad_tol = 1e-6;
  int max_iters = 5000;
  double cg_tol = 1e-8;
  /// Cap on a descent displacement, as a fraction of the nearer neighbour distance.
  double neighbour_fraction = 0.0;
  /// Cap on a descent displacement relative to the node's own L² size.
  double size_fraction = 0.5;
  /// Line maximizations per iteration that keep the top node on the
  /// maximum of the polygonal path.
  int refine_rounds = 2;
  bool reparametrize = true;
  int reparam_every = 10;
  /// Every stall_window iterations the Newton phase is also tried when the
  /// path maximum fell by less than stall_decrease relative.
  int stall_window = 50;
  double stall_decrease = 1e-3;
  bool newton_polish = true;
  /// Relative gradient level at which the Newton phase takes over.
  double polish_switch = 1e-2;
  double polish_cg_tol = 1e-12;
  int gmres_restart = 30;
  int gmres_max_iters = 300;

  double resolved_s(const SystemParams& sp) const {
    return std::isnan(s_exponent) ? (sp.p + 1.0) * sp.q / (sp.p * (sp.q + 1.0)) : s_exponent;
  }

  void validate(const SystemParams& sp) const {
    if (path_nodes < 9) {
      throw std::invalid_argument("MPConfig: path_nodes must be >= 9");
    }
    const double s = resolved_s(sp);
    if (!(s > 1.0 / sp.p && s < sp.q)) {
      throw std::invalid_argument("MPConfig: s_exponent must lie strictly inside (1/p, q)");
    }
    if (!(t_cap > 1.0)) throw std::invalid_argument("MPConfig: t_cap must exceed 1");
    if (!(descent.initial_step > 0.0) || !(descent.backtracking > 0.0 && descent.backtracking < 1.0) ||
        !(descent.armijo > 0.0 && descent.armijo < 1.0)) {
      throw std::invalid_argument("MPConfig: invalid descent parameters");
    }
    if (!(grad_tol > 0.0)) throw std::invalid_argument("MPConfig: grad_tol must be positive");
    if (max_iters < 1) throw std::invalid_argument("MPConfig: max_iters must be >= 1");
    if (!(cg_tol > 0.0 && cg_tol <= 1e-4)) throw std::invalid_argument("MPConfig: bad cg_tol");
  }
};

struct HistoryEntry {
  int iteration = 0;
  double J = 0.0;
  double grad_norm = 0.0;
  int phase = 1;
};

struct ResidualReport {
  double residual_u = 0.0;  // ‖-Δu - b(v)‖ / ‖b(v)‖
  double residual_v = 0.0;  // ‖-Δv - a(u)‖ / ‖a(u)‖
  bool positive_u = false;
  bool positive_v = false;
  bool degenerate = false;
};

struct SolveReport {
  DualState state;
  GridField u;
  GridField v;
  double J_value = 0.0;
  double grad_norm = 0.0;
  double grad_tol_absolute = 0.0;
  int iterations = 0;
  ResidualReport residuals;
  double pohozaev_residual = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  std::string stop_reason;
  double endpoint_t = 0.0;
  double s_exponent = 0.0;
  double concentration = 0.0;  // max u / mean u
  std::vector<HistoryEntry> history;
};

/// One node of the path, kept in the variables u = ã(f), v = b̃(g).
struct PathNode {
  GridField u;
  GridField v;
  DualProblem::Evaluation ev;
  GridField ju;  // ∂J/∂u = a'(u) e_f
  GridField jv;  // ∂J/∂v = b'(v) e_g
  double J = 0.0;
  double grad_norm = 0.0;
  double step = 1.0;
};

/// One deformation step as seen from outside; path is valid only during the callback.
struct StepEvent {
  int iteration = 0;
  std::size_t node = 0;
  double J_before = 0.0;
  double J_after = 0.0;
  bool accepted = false;
  const std::vector<PathNode>* path = nullptr;
};

class MountainPass {
 public:
  MountainPass(const MPConfig& config, const SystemParams& params, const GridDomain& domain)
      : cfg_(config), problem_(params, domain, config.cg_tol) {
    cfg_.validate(params);
  }

  const DualProblem& problem() const { return problem_; }
  const MPConfig& config() const { return cfg_; }
  void set_observer(std::function<void(const StepEvent&)> obs) { observer_ = std::move(obs); }

  /// Node from mirror variables; warm supplies CG starting guesses.
  PathNode make_node(GridField u, GridField v, const PathNode* warm = nullptr) const {
    PathNode n;
    DualState s{u.map([this](double x) { return problem_.a().density(x); }),
                v.map([this](double x) { return problem_.b().density(x); })};
    n.ev = problem_.evaluate(s, warm ? &warm->ev : nullptr);
    n.u = std::move(u);
    n.v = std::move(v);
    fill_energy(n);
    n.step = warm ? warm->step : cfg_.descent.initial_step;
    return n;
  }

  /// Node from dual variables.
  PathNode make_dual_node(const DualState& s) const {
    return make_node(s.f.map([this](double x) { return problem_.a().inverse(x); }),
                     s.g.map([this](double x) { return problem_.b().inverse(x); }));
  }

  /// J(tφ₁, t^sφ₁).
  double path_energy(const GridField& phi1, double t, double s) const {
    DualState st{t * phi1, std::pow(t, s) * phi1};
    return make_dual_node(st).J;
  }

  /// Nodes (t_k φ₁, t_k^s φ₁), t_k = t* k/(P-1), where t* is the first
  /// doubling of t = 1 with J < 0.
  std::vector<PathNode> initial_path(const GridField& phi1, double* t_star = nullptr) const {
    const double s = cfg_.resolved_s(problem_.params());
    double t = 1.0;
    while (path_energy(phi1, t, s) >= 0.0) {
      t *= 2.0;
      if (t > cfg_.t_cap) {
        throw GeometryError("initial_path: J >= 0 up to t_cap; no mountain-pass endpoint");
      }
    }
    if (t_star) *t_star = t;
    std::vector<PathNode> path;
    const int P = cfg_.path_nodes;
    path.reserve(P);
    for (int k = 0; k < P; ++k) {
      const double tk = t * k / (P - 1);
      DualState st{tk * phi1, std::pow(tk, s) * phi1};
      path.push_back(make_dual_node(st));
    }
    return path;
  }

  SolveReport solve() const {
    const EigenPair eig = principal_eigenpair(problem_.domain(), 1e-10);
    return solve_from(eig.phi1);
  }

  SolveReport solve_from(const GridField& phi1) const {
    SolveReport rep;
    rep.s_exponent = cfg_.resolved_s(problem_.params());
    std::vector<PathNode> path = initial_path(phi1, &rep.endpoint_t);

    std::size_t kmax = argmax(path);
    const double g0 = path[kmax].grad_norm;
    rep.grad_tol_absolute = cfg_.grad_tol * g0;
    double next_polish = cfg_.polish_switch * g0;
    double window_J = path[kmax].J;
    int it = 0;
    bool done = false;
    std::optional<PathNode> polished;

    while (it < cfg_.max_iters) {
      kmax = locate_top(path);
      const double level = path[kmax].J;
      rep.history.push_back({it, path[kmax].J, path[kmax].grad_norm, 1});
      if (gradient_small(path[kmax], rep.grad_tol_absolute)) {
        done = true;
        rep.stop_reason = "gradient tolerance reached";
        break;
      }
      const double J_before = path[kmax].J;
      const bool stagnated = !try_descent(path, kmax);
      if (observer_) observer_({it, kmax, J_before, path[kmax].J, !stagnated, &path});
      ++it;
      if (cfg_.reparametrize && it % cfg_.reparam_every == 0) {
        reparametrize(path);
      }
      const PathNode& top = path[argmax(path)];
      bool stalled = false;
      if (it % cfg_.stall_window == 0) {
        stalled = window_J - top.J < cfg_.stall_decrease * std::abs(top.J);
        window_J = top.J;
      }
      if (cfg_.newton_polish && (top.grad_norm <= next_polish || stagnated || stalled)) {
        std::optional<PathNode> cand = newton_polish(top, rep, it);
        if (cand && acceptable(*cand, top, level, rep.grad_tol_absolute)) {
          polished = std::move(cand);
          done = true;
          rep.stop_reason = "Newton polish converged";
          break;
        }
        next_polish = 0.1 * std::min(next_polish, top.grad_norm);
      }
      if (stagnated) {
        rep.stop_reason = "descent stagnated";
        break;
      }
    }
    if (!done && rep.stop_reason.empty()) {
      rep.stop_reason = "max_iters reached";
    }
    const PathNode& best = polished ? *polished : path[argmax(path)];
    rep.iterations = it;
    finalize(best, rep);
    const double scale = std::hypot(lp_norm(rep.u, 2.0), lp_norm(rep.v, 2.0));
    rep.converged = done && rep.grad_norm <= rep.grad_tol_absolute &&
                    rep.grad_norm <= cfg_.grad_tol * scale;
    return rep;
  }

  ResidualReport residual_report(const DualState& s) const {
    return compute_residuals(problem_, s);
  }

  static ResidualReport compute_residuals(const DualProblem& pb, const DualState& s) {
    ResidualReport r;
    const Discrepancy d = pb.recover_uv(s);
    const GridField bv = d.v.map([&](double x) { return pb.b().density(x); });
    const GridField au = d.u.map([&](double x) { return pb.a().density(x); });
    const GridField lu = apply_neg_laplacian(d.u);
    const GridField lv = apply_neg_laplacian(d.v);
    r.residual_u = relative_l2(lu, bv);
    r.residual_v = relative_l2(lv, au);
    r.degenerate = max_abs(bv) == 0.0 || max_abs(au) == 0.0;
    r.positive_u = std::all_of(d.u.values.begin(), d.u.values.end(), [](double x) { return x > 0.0; });
    r.positive_v = std::all_of(d.v.values.begin(), d.v.values.end(), [](double x) { return x > 0.0; });
    return r;
  }

 private:
  void fill_energy(PathNode& n) const {
    const auto& ev = n.ev;
    const Nonlinearity& a = problem_.a();
    const Nonlinearity& b = problem_.b();
    double J = 0.0;
    double g2 = 0.0;
    n.ju = GridField(problem_.domain());
    n.jv = GridField(problem_.domain());
    for (std::size_t i = 0; i < n.u.size(); ++i) {
      const double f = ev.state.f[i];
      const double g = ev.state.g[i];
      // Ã(a(u)) = u a(u) - A(u), likewise for B̃.
      J += f * n.u[i] - a.primitive(n.u[i]) + g * n.v[i] - b.primitive(n.v[i]);
      J -= 0.5 * (f * ev.Kg[i] + g * ev.Kf[i]);
      const double ef = n.u[i] - ev.Kg[i];
      const double eg = n.v[i] - ev.Kf[i];
      g2 += ef * ef + eg * eg;
      n.ju[i] = std::min(a.density_derivative(n.u[i]), 1e300) * ef;
      n.jv[i] = std::min(b.density_derivative(n.v[i]), 1e300) * eg;
    }
    const double vol = problem_.domain().cell_volume();
    n.J = J * vol;
    n.grad_norm = std::sqrt(g2 * vol);
  }

  /// Highest interior node, lowest index on ties.
  static std::size_t argmax(const std::vector<PathNode>& path) {
    std::size_t k = 1;
    for (std::size_t i = 2; i + 1 < path.size(); ++i) {
      if (path[i].J > path[k].J) k = i;
    }
    return k;
  }

  /// Absolute test against the initial gradient plus the same relative
  /// level against the size of the state itself.
  bool gradient_small(const PathNode& n, double abs_tol) const {
    const double scale = std::hypot(lp_norm(n.u, 2.0), lp_norm(n.v, 2.0));
    return n.grad_norm <= abs_tol && n.grad_norm <= cfg_.grad_tol * scale;
  }

  /// A Newton result counts when it is critical, nontrivial and not above
  /// the path level, the refined maximum before the last descent step.
  bool acceptable(const PathNode& cand, const PathNode& top, double level, double abs_tol) const {
    if (!gradient_small(cand, abs_tol)) return false;
    if (!(cand.J > 0.0) || cand.J > level * (1.0 + 1e-6)) return false;
    return max_abs(cand.u) > 1e-3 * max_abs(top.u) && max_abs(cand.v) > 1e-3 * max_abs(top.v);
  }

  /// Derivative of J at a along the mirror-space displacement from a to b.
  double slope_towards(const PathNode& a, const PathNode& b) const {
    double d = 0.0;
    for (std::size_t i = 0; i < a.u.size(); ++i) {
      d += a.ju[i] * (b.u[i] - a.u[i]) + a.jv[i] * (b.v[i] - a.v[i]);
    }
    return d * problem_.domain().cell_volume();
  }

  /// Maximizes J on the segment from a to b given φ'(0) = d0 > 0, by a
  /// safeguarded secant on φ'.
  PathNode segment_max(const PathNode& a, const PathNode& b, double d0) const {
    double wl = 0.0, dl = d0;
    double wr = 1.0, dr = -slope_towards(b, a);
    PathNode best = a;
    for (int it = 0; it < 6; ++it) {
      double w = dr < 0.0 ? wl + dl * (wr - wl) / (dl - dr) : 0.5 * (wl + wr);
      w = std::clamp(w, wl + 0.05 * (wr - wl), wr - 0.05 * (wr - wl));
      GridField u = (1.0 - w) * a.u + w * b.u;
      GridField v = (1.0 - w) * a.v + w * b.v;
      PathNode x = make_node(std::move(u), std::move(v), &a);
      const double dw = slope_towards(x, b) / (1.0 - w);
      if (x.J > best.J) best = std::move(x);
      if (std::abs(dw) <= 1e-3 * d0) break;
      if (dw > 0.0) {
        wl = w;
        dl = dw;
      } else {
        wr = w;
        dr = dw;
      }
    }
    return best;
  }

  /// Moves the top node to the maximum of J on an adjacent segment while J
  /// still increases away from it, so it tracks the maximum of the
  /// continuous path rather than of the node set. Returns its index.
  std::size_t locate_top(std::vector<PathNode>& path) const {
    const std::size_t k = argmax(path);
    for (int round = 0; round < cfg_.refine_rounds; ++round) {
      const double dm = slope_towards(path[k], path[k - 1]);
      const double dp = slope_towards(path[k], path[k + 1]);
      if (dm <= 0.0 && dp <= 0.0) break;
      const std::size_t j = dp >= dm ? k + 1 : k - 1;
      PathNode x = segment_max(path[k], path[j], std::max(dm, dp));
      if (!(x.J > path[k].J)) break;
      x.step = path[k].step;
      path[k] = std::move(x);
    }
    return k;
  }

  static double distance(const PathNode& a, const PathNode& b) {
    return std::hypot(lp_norm(a.u - b.u, 2.0), lp_norm(a.v - b.v, 2.0));
  }

  /// Armijo-backtracked mirror step u <- u - τ e_f, v <- v - τ e_g on node k.
  /// The displacement is capped by a fraction of the distance to the nearer
  /// neighbour so the path stays resolved. Returns false when no step down
  /// to 1e-14 is accepted.
  bool try_descent(std::vector<PathNode>& path, std::size_t k) const {
    PathNode& node = path[k];
    const auto& ev = node.ev;
    const std::size_t n = node.u.size();
    GridField ef(problem_.domain()), eg(problem_.domain());
    double pred = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ef[i] = node.u[i] - ev.Kg[i];
      eg[i] = node.v[i] - ev.Kf[i];
      pred += ef[i] * node.ju[i] + eg[i] * node.jv[i];
    }
    pred *= problem_.domain().cell_volume();
    double tau = node.step;
    const double enorm = std::hypot(lp_norm(ef, 2.0), lp_norm(eg, 2.0));
    const double reach = cfg_.neighbour_fraction *
                         std::min(distance(node, path[k - 1]), distance(node, path[k + 1]));
    if (cfg_.neighbour_fraction > 0.0 && enorm > 0.0 && tau * enorm > reach) {
      tau = reach / enorm;
    }
    const double own = cfg_.size_fraction * std::hypot(lp_norm(node.u, 2.0), lp_norm(node.v, 2.0));
    if (cfg_.size_fraction > 0.0 && enorm > 0.0 && tau * enorm > own) {
      tau = own / enorm;
    }
    while (tau >= 1e-14) {
      GridField u = node.u;
      GridField v = node.v;
      u.axpy(-tau, ef);
      v.axpy(-tau, eg);
      PathNode trial = make_node(std::move(u), std::move(v), &node);
      if (trial.J <= node.J - cfg_.descent.armijo * tau * pred) {
        trial.step = std::min(cfg_.descent.initial_step, 2.0 * tau);
        node = std::move(trial);
        return true;
      }
      tau *= cfg_.descent.backtracking;
    }
    return false;
  }

  /// Redistributes interior nodes at equal L² arclength along the polygon.
  void reparametrize(std::vector<PathNode>& path) const {
    const std::size_t P = path.size();
    std::vector<double> arc(P, 0.0);
    for (std::size_t i = 1; i < P; ++i) {
      const double du = lp_norm(path[i].u - path[i - 1].u, 2.0);
      const double dv = lp_norm(path[i].v - path[i - 1].v, 2.0);
      arc[i] = arc[i - 1] + std::hypot(du, dv);
    }
    std::vector<PathNode> out;
    out.reserve(P);
    out.push_back(path.front());
    std::size_t seg = 0;
    for (std::size_t k = 1; k + 1 < P; ++k) {
      const double target = arc.back() * k / (P - 1);
      while (seg + 1 < P - 1 && arc[seg + 1] < target) ++seg;
      const double len = arc[seg + 1] - arc[seg];
      const double w = len > 0.0 ? (target - arc[seg]) / len : 0.0;
      GridField u = (1.0 - w) * path[seg].u + w * path[seg + 1].u;
      GridField v = (1.0 - w) * path[seg].v + w * path[seg + 1].v;
      out.push_back(make_node(std::move(u), std::move(v), &path[w < 0.5 ? seg : seg + 1]));
    }
    out.push_back(path.back());
    path = std::move(out);
  }

  /// R(u, v) = (u - K b(v), v - K a(u)).
  void residual(const DualProblem& pb, const std::vector<double>& z, std::vector<double>& R,
                GridField* Kg_warm, GridField* Kf_warm) const {
    const std::size_t n = z.size() / 2;
    const GridDomain& d = pb.domain();
    GridField f(d), g(d);
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = pb.a().density(z[i]);
      g[i] = pb.b().density(z[n + i]);
    }
    GridField Kg = pb.K(g, Kg_warm);
    GridField Kf = pb.K(f, Kf_warm);
    R.resize(z.size());
    for (std::size_t i = 0; i < n; ++i) {
      R[i] = z[i] - Kg[i];
      R[n + i] = z[n + i] - Kf[i];
    }
    *Kg_warm = std::move(Kg);
    *Kf_warm = std::move(Kf);
  }

  std::optional<PathNode> newton_polish(const PathNode& start, SolveReport& rep, int& it) const {
    DualProblem pb = problem_;
    pb.set_cg_tol(cfg_.polish_cg_tol);
    const GridDomain& d = pb.domain();
    const std::size_t n = start.u.size();
    const double vol = d.cell_volume();
    std::vector<double> z(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = start.u[i];
      z[n + i] = start.v[i];
    }
    GridField Kg = start.ev.Kg, Kf = start.ev.Kf;
    std::vector<double> R;
    residual(pb, z, R, &Kg, &Kf);
    double rnorm = std::sqrt(detail::vdot(R, R) * vol);
    const double target = 1e-3 * rep.grad_tol_absolute;
    for (int k = 0; k < 40 && it < cfg_.max_iters; ++k) {
      if (rnorm <= target) break;
      std::vector<double> ap(n), bp(n);
      for (std::size_t i = 0; i < n; ++i) {
        ap[i] = pb.a().density_derivative(z[i]);
        bp[i] = pb.b().density_derivative(z[n + i]);
      }
      GridField w1(d), w2(d), k1(d), k2(d);
      auto jac = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (std::size_t i = 0; i < n; ++i) {
          w1[i] = bp[i] * x[n + i];
          w2[i] = ap[i] * x[i];
        }
        k1 = pb.K(w1);
        k2 = pb.K(w2);
        y.resize(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
          y[i] = x[i] - k1[i];
          y[n + i] = x[n + i] - k2[i];
        }
      };
      std::vector<double> rhs(2 * n), delta;
      for (std::size_t i = 0; i < 2 * n; ++i) rhs[i] = -R[i];
      gmres(jac, rhs, delta, 1e-8, cfg_.gmres_restart, cfg_.gmres_max_iters);
      double lam = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 30; ++ls) {
        std::vector<double> zt(2 * n);
        for (std::size_t i = 0; i < 2 * n; ++i) zt[i] = z[i] + lam * delta[i];
        GridField Kgt = Kg, Kft = Kf;
        std::vector<double> Rt;
        residual(pb, zt, Rt, &Kgt, &Kft);
        const double rt = std::sqrt(detail::vdot(Rt, Rt) * vol);
        if (rt <= (1.0 - 1e-4 * lam) * rnorm) {
          z = std::move(zt);
          R = std::move(Rt);
          Kg = std::move(Kgt);
          Kf = std::move(Kft);
          rnorm = rt;
          accepted = true;
          break;
        }
        lam *= 0.5;
      }
      ++it;
      if (!accepted) break;
      GridField u(d), v(d);
      std::copy(z.begin(), z.begin() + n, u.values.begin());
      std::copy(z.begin() + n, z.end(), v.values.begin());
      PathNode cur = make_node_with(pb, std::move(u), std::move(v), Kf, Kg);
      rep.history.push_back({it, cur.J, cur.grad_norm, 2});
    }
    GridField u(d), v(d);
    std::copy(z.begin(), z.begin() + n, u.values.begin());
    std::copy(z.begin() + n, z.end(), v.values.begin());
    PathNode out = make_node_with(pb, std::move(u), std::move(v), Kf, Kg);
    if (!std::isfinite(out.J)) return std::nullopt;
    return out;
  }

  PathNode make_node_with(const DualProblem& pb, GridField u, GridField v, const GridField& Kf,
                          const GridField& Kg) const {
    PathNode node;
    DualState s{u.map([&](double x) { return pb.a().density(x); }),
                v.map([&](double x) { return pb.b().density(x); })};
    // Kf, Kg belong to the densities of u and v, solved at the polish tolerance.
    node.ev = DualProblem::Evaluation{std::move(s), Kf, Kg};
    node.u = std::move(u);
    node.v = std::move(v);
    fill_energy(node);
    return node;
  }

  void finalize(const PathNode& node, SolveReport& rep) const {
    DualProblem pb = problem_;
    pb.set_cg_tol(std::min(cfg_.polish_cg_tol, cfg_.cg_tol));
    rep.state = node.ev.state;
    const DualProblem::Evaluation ev = pb.evaluate(rep.state, &node.ev);
    rep.J_value = pb.J(ev);
    rep.grad_norm = pb.grad(ev).norm();
    rep.residuals = compute_residuals(pb, rep.state);
    rep.u = ev.Kg;
    rep.v = ev.Kf;
    const double mean = integrate(rep.u) / domain_volume(pb.domain());
    rep.concentration = mean != 0.0 ? max_abs(rep.u) / std::abs(mean) : 0.0;
  }

  static double domain_volume(const GridDomain& d) {
    double v = 1.0;
    for (int i = 0; i < d.dim; ++i) v *= d.length(i);
    return v;
  }

  MPConfig cfg_;
  DualProblem problem_;
  std::function<void(const StepEvent&)> observer_;
};

inline std::vector<PathNode> initial_path(const MPConfig& config, const SystemParams& params,
                                          const GridDomain& domain) {
  MountainPass mp(config, params, domain);
  const EigenPair eig = principal_eigenpair(domain, 1e-10);
  return mp.initial_path(eig.phi1);
}

inline SolveReport mp_solve(const MPConfig& config, const SystemParams& params,
                            const GridDomain& domain) {
  return MountainPass(config, params, domain).solve();
}

}  // namespace dualmp
