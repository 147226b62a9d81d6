#include "rtopt/costs.hpp"

#include <cmath>

namespace rtopt {

ScalarQuad smooth_abs_state_cost(const Vec& x, const Vec& x_star, const Vec& w, double alpha) {
  const Vec d = x - x_star;
  const Vec wd = w.cwiseProduct(d);
  const double s = alpha + d.dot(wd);
  const double l = std::sqrt(s);
  ScalarQuad out;
  out.value = l;
  out.grad = wd / l;
  out.hess = (Mat(w.asDiagonal()) - wd * wd.transpose() / s) / l;
  out.hess = symmetrized(out.hess);
  return out;
}

ScalarQuad cosh_control_cost(const Vec& u, const Vec& w, double alpha) {
  const double a2 = alpha * alpha;
  const double z = w.dot(u);
  ScalarQuad out;
  out.value = a2 * (std::cosh(z) - 1.0);
  out.grad = a2 * std::sinh(z) * w;
  out.hess = a2 * std::cosh(z) * (w * w.transpose());
  return out;
}

double TwoPlayerCost::stage(const Vec& x, const Vec& u, const Vec& v, int t) const {
  double value = nominal_quad(x, u, t).value;
  if (disturbance_dim() > 0) value -= gamma() * adversary_quad(v, t).value;
  return value;
}

StageQuadratic TwoPlayerCost::quadraticize(const Vec& x, const Vec& u, const Vec& v,
                                           int t) const {
  const int m = control_dim();
  const int p = disturbance_dim();
  const NominalQuad c = nominal_quad(x, u, t);

  StageQuadratic q;
  q.l0 = c.value;
  q.l_x = c.c_x;
  q.l_u = c.c_u;
  q.l_xx = symmetrized(c.c_xx);
  q.l_ux = c.c_ux;
  q.l_uu = symmetrized(c.c_uu);
  q.l_v = Vec::Zero(p);
  q.l_vx = Mat::Zero(p, state_dim());
  q.l_vv = Mat::Zero(p, p);
  q.l_uv = Mat::Zero(m, p);
  if (p > 0) {
    const PenaltyQuad g = adversary_quad(v, t);
    q.l0 -= gamma() * g.value;
    q.l_v = -gamma() * g.g_v;
    q.l_vv = symmetrized(Mat(-gamma() * g.g_vv));
  }
  return q;
}

double TwoPlayerCost::trajectory_cost(const std::vector<Vec>& xs, const std::vector<Vec>& us,
                                      const std::vector<Vec>& vs) const {
  double total = 0.0;
  for (std::size_t t = 0; t < us.size(); ++t) {
    total += stage(xs[t], us[t], vs.empty() ? Vec() : vs[t], static_cast<int>(t));
  }
  return total + terminal_value(xs.back());
}

namespace {

Vec zero_pad(const Vec& w, int n) {
  Vec full = Vec::Zero(n);
  full.head(std::min<int>(n, static_cast<int>(w.size()))) =
      w.head(std::min<int>(n, static_cast<int>(w.size())));
  return full;
}

}  // namespace

GoalCost::GoalCost(CostParams params, int n, int m, int p)
    : params_(std::move(params)), n_(n), m_(m), p_(p) {
  if (params_.alpha_state <= 0) throw ConfigError("GoalCost: alpha_state must be positive");
  if (p_ > 0 && params_.gamma <= 0) {
    throw ConfigError("GoalCost: gamma must be positive when the adversary channel is active");
  }
  if (params_.x_star.size() == 0) params_.x_star = Vec::Zero(n_);
  if (params_.x_star.size() != n_) params_.x_star = zero_pad(params_.x_star, n_);
  w_x_full_ = zero_pad(params_.w_x, n_);
  if (params_.w_u.size() != m_) throw ConfigError("GoalCost: w_u length must equal control dim");
  if (p_ > 0 && params_.w_v.size() != p_) {
    throw ConfigError("GoalCost: w_v length must equal disturbance dim");
  }
  if ((w_x_full_.array() < 0).any() || (params_.w_u.array() < 0).any()) {
    throw ConfigError("GoalCost: penalties must be nonnegative");
  }
}

NominalQuad GoalCost::nominal_quad(const Vec& x, const Vec& u, int) const {
  const ScalarQuad sx = smooth_abs_state_cost(x, params_.x_star, w_x_full_, params_.alpha_state);
  const ScalarQuad su = cosh_control_cost(u, params_.w_u, params_.alpha_control);
  NominalQuad out;
  out.value = sx.value + su.value;
  // The adversarial variant drops the "-1" offset of the nominal control
  // term; the difference is a constant with no effect on any derivative.
  if (p_ > 0) out.value += params_.alpha_control * params_.alpha_control;
  out.c_x = sx.grad;
  out.c_xx = sx.hess;
  out.c_u = su.grad;
  out.c_uu = su.hess;
  out.c_ux = Mat::Zero(m_, n_);
  return out;
}

PenaltyQuad GoalCost::adversary_quad(const Vec& v, int) const {
  const double a2 = params_.alpha_control * params_.alpha_control;
  const double z = params_.w_v.dot(v);
  PenaltyQuad out;
  out.value = a2 * std::cosh(z);
  out.g_v = a2 * std::sinh(z) * params_.w_v;
  out.g_vv = a2 * std::cosh(z) * (params_.w_v * params_.w_v.transpose());
  return out;
}

TerminalQuadratic GoalCost::terminal_quad(const Vec& x) const {
  const ScalarQuad sx = smooth_abs_state_cost(x, params_.x_star, w_x_full_, params_.alpha_state);
  TerminalQuadratic out;
  out.value = params_.terminal_multiplier * sx.value;
  out.l_x = params_.terminal_multiplier * sx.grad;
  out.l_xx = params_.terminal_multiplier * sx.hess;
  return out;
}

QuadraticGameCost::QuadraticGameCost(double w_u, double w_x, double gamma, Vec x_star, int m,
                                     int p, double terminal_multiplier)
    : w_u_(w_u),
      w_x_(w_x),
      gamma_(gamma),
      terminal_multiplier_(terminal_multiplier),
      x_star_(std::move(x_star)),
      m_(m),
      p_(p) {
  if (p_ > 0 && gamma_ <= 0) throw ConfigError("QuadraticGameCost: gamma must be positive");
}

NominalQuad QuadraticGameCost::nominal_quad(const Vec& x, const Vec& u, int) const {
  const Vec d = x - x_star_;
  const int n = state_dim();
  NominalQuad out;
  out.value = w_u_ * u.squaredNorm() + w_x_ * d.squaredNorm();
  out.c_x = 2.0 * w_x_ * d;
  out.c_xx = 2.0 * w_x_ * Mat::Identity(n, n);
  out.c_u = 2.0 * w_u_ * u;
  out.c_uu = 2.0 * w_u_ * Mat::Identity(m_, m_);
  out.c_ux = Mat::Zero(m_, n);
  return out;
}

PenaltyQuad QuadraticGameCost::adversary_quad(const Vec& v, int) const {
  PenaltyQuad out;
  out.value = v.squaredNorm();
  out.g_v = 2.0 * v;
  out.g_vv = 2.0 * Mat::Identity(p_, p_);
  return out;
}

TerminalQuadratic QuadraticGameCost::terminal_quad(const Vec& x) const {
  const Vec d = x - x_star_;
  const int n = state_dim();
  TerminalQuadratic out;
  out.value = terminal_multiplier_ * w_x_ * d.squaredNorm();
  out.l_x = 2.0 * terminal_multiplier_ * w_x_ * d;
  out.l_xx = 2.0 * terminal_multiplier_ * w_x_ * Mat::Identity(n, n);
  return out;
}

LqCost::LqCost(Mat W_x, Mat W_u, double gamma, Mat W_T, int p)
    : W_x_(std::move(W_x)), W_u_(std::move(W_u)), W_T_(std::move(W_T)), gamma_(gamma), p_(p) {
  if (p_ > 0 && gamma_ <= 0) throw ConfigError("LqCost: gamma must be positive");
}

NominalQuad LqCost::nominal_quad(const Vec& x, const Vec& u, int) const {
  NominalQuad out;
  out.value = 0.5 * x.dot(W_x_ * x) + 0.5 * u.dot(W_u_ * u);
  out.c_x = W_x_ * x;
  out.c_xx = W_x_;
  out.c_u = W_u_ * u;
  out.c_uu = W_u_;
  out.c_ux = Mat::Zero(control_dim(), state_dim());
  return out;
}

PenaltyQuad LqCost::adversary_quad(const Vec& v, int) const {
  PenaltyQuad out;
  out.value = 0.5 * v.squaredNorm();
  out.g_v = v;
  out.g_vv = Mat::Identity(p_, p_);
  return out;
}

TerminalQuadratic LqCost::terminal_quad(const Vec& x) const {
  TerminalQuadratic out;
  out.value = 0.5 * x.dot(W_T_ * x);
  out.l_x = W_T_ * x;
  out.l_xx = W_T_;
  return out;
}

}  // namespace rtopt
