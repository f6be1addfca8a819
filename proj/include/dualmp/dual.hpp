#pragma once

// The dual functional J(f,g) = ∫Ã(f) + ∫B̃(g) - ½∫(f Kg + g Kf), its L²
// gradient (ã(f) - Kg, b̃(g) - Kf), Φ⁻¹ and recovery of (u, v).

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "dualmp/grid.hpp"
#include "dualmp/nfunc.hpp"
#include "dualmp/poisson.hpp"

namespace dualmp {

struct DualState {
  GridField f;
  GridField g;
};

struct GradState {
  GridField e_f;
  GridField e_g;

  /// L² norm of the pair.
  double norm() const { return std::sqrt(inner(e_f, e_f) + inner(e_g, e_g)); }
};

struct Discrepancy {
  GridField u;
  GridField v;
  double u_discrepancy = 0.0;
  double v_discrepancy = 0.0;
};

/// ‖a - b‖₂ / ‖b‖₂ with 0/0 read as 0.
inline double relative_l2(const GridField& a, const GridField& b) {
  const double den = std::sqrt(inner(b, b));
  const double num = lp_norm(a - b, 2.0);
  if (den == 0.0) {
    return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return num / den;
}

class DualProblem {
 public:
  DualProblem(const SystemParams& params, const GridDomain& domain, double cg_tol = 1e-10)
      : params_(params),
        domain_(domain),
        cg_tol_(cg_tol),
        a_(std::make_shared<const Nonlinearity>(params, Which::a)),
        b_(std::make_shared<const Nonlinearity>(params, Which::b)) {
    params_.validate();
    domain_.validate();
  }

  const SystemParams& params() const { return params_; }
  const GridDomain& domain() const { return domain_; }
  const Nonlinearity& a() const { return *a_; }
  const Nonlinearity& b() const { return *b_; }
  double cg_tol() const { return cg_tol_; }
  void set_cg_tol(double tol) { cg_tol_ = tol; }

  GridField K(const GridField& rhs, const GridField* warm = nullptr) const {
    return solve_K_detailed(rhs, cg_tol_, warm).solution;
  }

  /// One evaluation context: the state with its cached K-images.
  struct Evaluation {
    DualState state;
    GridField Kf;
    GridField Kg;
  };

  Evaluation evaluate(const DualState& s, const Evaluation* warm = nullptr) const {
    check(s);
    Evaluation e{s, K(s.f, warm ? &warm->Kf : nullptr), K(s.g, warm ? &warm->Kg : nullptr)};
    return e;
  }

  double J(const Evaluation& e) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < e.state.f.size(); ++i) {
      sum += a_->conjugate(e.state.f[i]) + b_->conjugate(e.state.g[i]);
      sum -= 0.5 * (e.state.f[i] * e.Kg[i] + e.state.g[i] * e.Kf[i]);
    }
    return sum * domain_.cell_volume();
  }

  GradState grad(const Evaluation& e) const {
    GradState gs{GridField(domain_), GridField(domain_)};
    for (std::size_t i = 0; i < e.state.f.size(); ++i) {
      gs.e_f[i] = a_->inverse(e.state.f[i]) - e.Kg[i];
      gs.e_g[i] = b_->inverse(e.state.g[i]) - e.Kf[i];
    }
    return gs;
  }

  double eval_J(const DualState& s) const { return J(evaluate(s)); }
  GradState grad_J(const DualState& s) const { return grad(evaluate(s)); }

  DualState phi_inverse(const GridField& psi1, const GridField& psi2) const {
    return {psi1.map([this](double x) { return a_->density(x); }),
            psi2.map([this](double x) { return b_->density(x); })};
  }

  /// Φ(f, g) = (ã(f), b̃(g)).
  DualState phi(const DualState& s) const {
    return {s.f.map([this](double x) { return a_->inverse(x); }),
            s.g.map([this](double x) { return b_->inverse(x); })};
  }

  double symmetry_residual(const DualState& s) const {
    const Evaluation e = evaluate(s);
    const double fkg = inner(s.f, e.Kg);
    const double gkf = inner(s.g, e.Kf);
    return std::abs(fkg - gkf) / std::max(1.0, std::abs(fkg));
  }

  Discrepancy recover_uv(const DualState& s) const {
    const Evaluation e = evaluate(s);
    Discrepancy d{e.Kg, e.Kf, 0.0, 0.0};
    const DualState inv = phi(s);
    d.u_discrepancy = relative_l2(inv.f, d.u);
    d.v_discrepancy = relative_l2(inv.g, d.v);
    return d;
  }

 private:
  void check(const DualState& s) const {
    if (!(s.f.domain == domain_) || !(s.g.domain == domain_)) {
      throw std::invalid_argument("DualState: fields must live on the problem domain");
    }
  }

  SystemParams params_;
  GridDomain domain_;
  double cg_tol_;
  std::shared_ptr<const Nonlinearity> a_;
  std::shared_ptr<const Nonlinearity> b_;
};

}  // namespace dualmp
