#pragma once

#include "rtopt/types.hpp"

#include <memory>

namespace rtopt {

/// Scalar function of one vector argument with exact gradient and Hessian.
struct ScalarQuad {
  double value = 0.0;
  Vec grad;
  Mat hess;
};

/// l(x) = sqrt(alpha + (x - x*)^T diag(w) (x - x*)). Gradient is zero
/// exactly at x*, Hessian is positive semidefinite.
ScalarQuad smooth_abs_state_cost(const Vec& x, const Vec& x_star, const Vec& w, double alpha);

/// l(u) = alpha^2 (cosh(w^T u) - 1). Rank-one PSD Hessian.
ScalarQuad cosh_control_cost(const Vec& u, const Vec& w, double alpha);

/// Quadratic model of the protagonist part c(x, u) of a stage cost.
struct NominalQuad {
  double value = 0.0;
  Vec c_x, c_u;
  Mat c_xx, c_ux, c_uu;
};

/// Quadratic model of the adversary penalty g(v) (unscaled by gamma).
struct PenaltyQuad {
  double value = 0.0;
  Vec g_v;
  Mat g_vv;
};

/// Two-player stage cost of the separable form l = c(x, u) - gamma g(v),
/// plus a terminal cost. Implementations provide exact derivatives; the
/// assembled quadraticization enforces symmetric Hessian blocks and
/// l_uv = 0.
class TwoPlayerCost {
 public:
  virtual ~TwoPlayerCost() = default;

  virtual int state_dim() const = 0;
  virtual int control_dim() const = 0;
  virtual int disturbance_dim() const = 0;
  virtual double gamma() const = 0;

  virtual NominalQuad nominal_quad(const Vec& x, const Vec& u, int t) const = 0;
  virtual PenaltyQuad adversary_quad(const Vec& v, int t) const = 0;
  virtual TerminalQuadratic terminal_quad(const Vec& x) const = 0;

  virtual double stage(const Vec& x, const Vec& u, const Vec& v, int t) const;
  virtual StageQuadratic quadraticize(const Vec& x, const Vec& u, const Vec& v, int t) const;
  double terminal_value(const Vec& x) const { return terminal_quad(x).value; }

  /// Total objective of a state/control/disturbance sequence.
  double trajectory_cost(const std::vector<Vec>& xs, const std::vector<Vec>& us,
                         const std::vector<Vec>& vs) const;
};

/// Parameters shared by the goal-reaching cost family.
struct CostParams {
  double alpha_state = 1e-4;    // curvature constant of the smooth-abs term
  double alpha_control = 1e-4;  // scale of the cosh control term
  Vec w_x;                      // state penalty; shorter vectors are zero-padded to n
  Vec w_u;
  Vec w_v;
  double gamma = 1.0;
  double terminal_multiplier = 10.0;
  Vec x_star;
};

/// Smooth-abs state cost plus cosh control cost; in the adversarial
/// variant the control block becomes
///   alpha^2 (cosh(w_u^T u) - gamma cosh(w_v^T v)).
/// Terminal cost is a multiple of the state cost.
class GoalCost : public TwoPlayerCost {
 public:
  GoalCost(CostParams params, int n, int m, int p);

  int state_dim() const override { return n_; }
  int control_dim() const override { return m_; }
  int disturbance_dim() const override { return p_; }
  double gamma() const override { return params_.gamma; }

  NominalQuad nominal_quad(const Vec& x, const Vec& u, int t) const override;
  PenaltyQuad adversary_quad(const Vec& v, int t) const override;
  TerminalQuadratic terminal_quad(const Vec& x) const override;

  const CostParams& params() const { return params_; }

 private:
  CostParams params_;
  int n_, m_, p_;
  Vec w_x_full_;  // zero-padded to n
};

/// Exact quadratic two-player cost
///   l = w_u u^T u + w_x ||x - x*||^2 - gamma v^T v,
/// constant Hessian blocks l_uu = 2 w_u I, l_vv = -2 gamma I.
class QuadraticGameCost : public TwoPlayerCost {
 public:
  QuadraticGameCost(double w_u, double w_x, double gamma, Vec x_star, int m, int p,
                    double terminal_multiplier = 1.0);

  int state_dim() const override { return static_cast<int>(x_star_.size()); }
  int control_dim() const override { return m_; }
  int disturbance_dim() const override { return p_; }
  double gamma() const override { return gamma_; }

  NominalQuad nominal_quad(const Vec& x, const Vec& u, int t) const override;
  PenaltyQuad adversary_quad(const Vec& v, int t) const override;
  TerminalQuadratic terminal_quad(const Vec& x) const override;

 private:
  double w_u_, w_x_, gamma_, terminal_multiplier_;
  Vec x_star_;
  int m_, p_;
};

/// Matrix-weighted quadratic cost for the LTI test benches:
///   l = 1/2 x^T W_x x + 1/2 u^T W_u u - 1/2 gamma v^T v,
/// terminal 1/2 x^T W_T x.
class LqCost : public TwoPlayerCost {
 public:
  LqCost(Mat W_x, Mat W_u, double gamma, Mat W_T, int p);

  int state_dim() const override { return static_cast<int>(W_x_.rows()); }
  int control_dim() const override { return static_cast<int>(W_u_.rows()); }
  int disturbance_dim() const override { return p_; }
  double gamma() const override { return gamma_; }

  NominalQuad nominal_quad(const Vec& x, const Vec& u, int t) const override;
  PenaltyQuad adversary_quad(const Vec& v, int t) const override;
  TerminalQuadratic terminal_quad(const Vec& x) const override;

 private:
  Mat W_x_, W_u_, W_T_;
  double gamma_;
  int p_;
};

}  // namespace rtopt
