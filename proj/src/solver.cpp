#include "rtopt/solver.hpp"
#include "rtopt/random.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace rtopt {

RegState update_rho(RegState reg, RhoDirection direction) {
  if (direction == RhoDirection::kIncrease) {
    reg.rho = reg.up_factor * reg.rho0;
  } else {
    reg.rho = reg.down_factor * reg.rho0;
  }
  reg.rho0 = reg.rho;
  return reg;
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kConverged: return "converged";
    case StopReason::kMaxIterations: return "max_iterations";
    case StopReason::kNoProgress: return "no_progress";
  }
  return "unknown";
}

void GainSchedule::resize(int T) {
  g_u.resize(T);
  g_v.resize(T);
  G_u.resize(T);
  G_v.resize(T);
  K_u.resize(T);
  K_v.resize(T);
}

namespace {

// Contraction of a stacked Hessian tensor with the next value gradient:
// sum_k V_x[k] * slices[k].
Mat contract(const std::vector<Mat>& slices, const Vec& v_x) {
  if (slices.empty()) return Mat();
  Mat out = Mat::Zero(slices[0].rows(), slices[0].cols());
  for (std::size_t k = 0; k < slices.size(); ++k) out += v_x[static_cast<int>(k)] * slices[k];
  return out;
}

void add_second_order(const LocalDynamics& dyn, const Vec& v_x, QExpansion& q) {
  if (!dyn.has_second_order) return;
  if (!dyn.f_uu.empty()) q.Q_uu += contract(dyn.f_uu, v_x);
  if (!dyn.f_vv.empty()) q.Q_vv += contract(dyn.f_vv, v_x);
  if (!dyn.f_ux.empty()) q.Q_ux += contract(dyn.f_ux, v_x);
  if (!dyn.f_vx.empty()) q.Q_vx += contract(dyn.f_vx, v_x);
  if (!dyn.f_uv.empty()) q.Q_uv += contract(dyn.f_uv, v_x);
}

}  // namespace

QExpansion q_expansion(const LocalModel& local, const ValueExpansion& next_value,
                       bool use_second_order) {
  const LocalDynamics& d = local.dyn;
  const StageQuadratic& l = local.cost;
  const Vec& vx = next_value.V_x;
  const Mat& vxx = next_value.V_xx;

  QExpansion q;
  q.Q_x = l.l_x + d.f_x.transpose() * vx;
  q.Q_u = l.l_u + d.f_u.transpose() * vx;
  q.Q_v = l.l_v + d.f_v.transpose() * vx;
  q.Q_xx = l.l_xx + d.f_x.transpose() * vxx * d.f_x;
  q.Q_ux = l.l_ux + d.f_u.transpose() * vxx * d.f_x;
  q.Q_vx = l.l_vx + d.f_v.transpose() * vxx * d.f_x;
  q.Q_uu = l.l_uu + d.f_u.transpose() * vxx * d.f_u;
  q.Q_vv = l.l_vv + d.f_v.transpose() * vxx * d.f_v;
  q.Q_uv = l.l_uv + d.f_u.transpose() * vxx * d.f_v;
  if (use_second_order) add_second_order(d, vx, q);
  q.Q_xx = symmetrized(q.Q_xx);
  q.Q_uu = symmetrized(q.Q_uu);
  q.Q_vv = symmetrized(q.Q_vv);
  return q;
}

QExpansion improved_q_blocks(const LocalModel& local, const ValueExpansion& next_value,
                             double rho, RegRule rule, bool use_second_order) {
  QExpansion q = q_expansion(local, next_value, use_second_order);
  if (rho == 0.0) return q;

  const LocalDynamics& d = local.dyn;
  const int m = static_cast<int>(q.Q_uu.rows());
  const int p = static_cast<int>(q.Q_vv.rows());
  if (rule == RegRule::kAdditive) {
    q.Q_uu += rho * Mat::Identity(m, m);
    q.Q_vv -= rho * Mat::Identity(p, p);
    return q;
  }
  // State-penalty rule: quadratic penalty on deviations from the previous
  // policy, carried through the channel Jacobians. The sign is mirrored on
  // the maximizing channel so that larger rho always restores definiteness.
  q.Q_uu += rho * d.f_u.transpose() * d.f_u;
  q.Q_ux += rho * d.f_u.transpose() * d.f_x;
  q.Q_vv -= rho * d.f_v.transpose() * d.f_v;
  q.Q_vx -= rho * d.f_v.transpose() * d.f_x;
  q.Q_uu = symmetrized(q.Q_uu);
  q.Q_vv = symmetrized(q.Q_vv);
  return q;
}

namespace {

// Definiteness gate for an own-curvature block. Returns the (possibly
// eigenvalue-clamped) matrix, or nullopt when it is not positive definite.
std::optional<Mat> positive_definite_or_clamped(const Mat& sym, bool clamp, double rho) {
  const int n = static_cast<int>(sym.rows());
  if (n == 0) return Mat(0, 0);
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  const Vec& evals = es.eigenvalues();
  const double scale = std::max(1.0, std::abs(evals[n - 1]));
  const double floor = 1e-12 * scale;
  if (evals[0] > floor) return sym;
  if (!clamp) return std::nullopt;
  const double clamp_floor = std::max(rho, 1e-8 * scale);
  Vec clamped = evals;
  for (int i = 0; i < n; ++i) clamped[i] = std::max(clamped[i], clamp_floor);
  return Mat(es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().transpose());
}

}  // namespace

std::optional<StepGains> saddle_gains(const QExpansion& q, bool eig_clamp) {
  const int m = static_cast<int>(q.Q_uu.rows());
  const int p = static_cast<int>(q.Q_vv.rows());
  const int n = static_cast<int>(q.Q_x.size());
  const double rho_hint = 0.0;

  StepGains g;
  g.g_u = Vec::Zero(m);
  g.g_v = Vec::Zero(p);
  g.G_u = Mat::Zero(m, n);
  g.G_v = Mat::Zero(p, n);
  g.K_u = Mat::Zero(m, m);
  g.K_v = Mat::Zero(p, p);

  const auto quu = positive_definite_or_clamped(q.Q_uu, eig_clamp, rho_hint);
  if (m > 0 && !quu) return std::nullopt;
  std::optional<Mat> neg_qvv;
  if (p > 0) {
    neg_qvv = positive_definite_or_clamped(Mat(-q.Q_vv), eig_clamp, rho_hint);
    if (!neg_qvv) return std::nullopt;
  }

  if (p == 0 && m == 0) return g;

  if (p == 0) {
    const auto ldlt = quu->ldlt();
    g.g_u = -ldlt.solve(q.Q_u);
    g.G_u = -ldlt.solve(q.Q_ux);
    g.K_u = ldlt.solve(Mat::Identity(m, m));
    return g;
  }
  if (m == 0) {
    const auto ldlt = neg_qvv->ldlt();
    g.g_v = ldlt.solve(q.Q_v);
    g.G_v = ldlt.solve(q.Q_vx);
    g.K_v = -ldlt.solve(Mat::Identity(p, p));
    return g;
  }

  const Mat qvv = -(*neg_qvv);
  const auto uu_ldlt = quu->ldlt();
  const auto vv_ldlt = qvv.ldlt();

  // Schur complements of the coupled stationarity system; both stay
  // definite whenever the own-curvature gates above pass.
  const Mat S_u = *quu - q.Q_uv * vv_ldlt.solve(q.Q_uv.transpose());
  const Mat S_v = qvv - q.Q_uv.transpose() * uu_ldlt.solve(q.Q_uv);

  const auto su = positive_definite_or_clamped(S_u, eig_clamp, rho_hint);
  const auto neg_sv = positive_definite_or_clamped(Mat(-S_v), eig_clamp, rho_hint);
  if (!su || !neg_sv) return std::nullopt;

  g.K_u = su->ldlt().solve(Mat::Identity(m, m));
  g.K_v = -neg_sv->ldlt().solve(Mat::Identity(p, p));

  g.g_u = g.K_u * (q.Q_uv * vv_ldlt.solve(q.Q_v) - q.Q_u);
  g.G_u = g.K_u * (q.Q_uv * vv_ldlt.solve(q.Q_vx) - q.Q_ux);
  g.g_v = g.K_v * (q.Q_uv.transpose() * uu_ldlt.solve(q.Q_u) - q.Q_v);
  g.G_v = g.K_v * (q.Q_uv.transpose() * uu_ldlt.solve(q.Q_ux) - q.Q_vx);
  return g;
}

ValueExpansion value_recursion(const QExpansion& q, const StepGains& g) {
  ValueExpansion v;
  v.dV = g.g_u.dot(q.Q_u) + g.g_v.dot(q.Q_v) + g.g_u.dot(q.Q_uv * g.g_v) +
         0.5 * (g.g_u.dot(q.Q_uu * g.g_u) + g.g_v.dot(q.Q_vv * g.g_v));

  v.V_x = q.Q_x + g.G_u.transpose() * q.Q_u + g.G_v.transpose() * q.Q_v +
          g.G_u.transpose() * (q.Q_uu * g.g_u) + g.G_v.transpose() * (q.Q_vv * g.g_v) +
          q.Q_ux.transpose() * g.g_u + q.Q_vx.transpose() * g.g_v +
          g.G_v.transpose() * (q.Q_uv.transpose() * g.g_u) +
          g.G_u.transpose() * (q.Q_uv * g.g_v);

  Mat vxx = q.Q_xx + g.G_u.transpose() * q.Q_uu * g.G_u + g.G_v.transpose() * q.Q_vv * g.G_v;
  vxx += g.G_u.transpose() * q.Q_ux + q.Q_ux.transpose() * g.G_u;
  vxx += g.G_v.transpose() * q.Q_vx + q.Q_vx.transpose() * g.G_v;
  const Mat cross = g.G_u.transpose() * q.Q_uv * g.G_v;
  vxx += cross + cross.transpose();
  v.V_xx = symmetrized(vxx);
  return v;
}

Trajectory rollout(const DynamicsModel& model, const TwoPlayerCost& cost, const Vec& x0,
                   const std::vector<Vec>& us, const std::vector<Vec>& vs,
                   double divergence_norm) {
  const int T = static_cast<int>(us.size());
  if (!vs.empty() && static_cast<int>(vs.size()) != T) {
    throw HorizonMismatch("rollout: us and vs lengths differ");
  }
  if (!all_finite(x0)) throw NonFiniteState("rollout: non-finite initial state");

  Trajectory traj;
  traj.xs.resize(T + 1);
  traj.us = us;
  traj.vs = vs.empty() ? std::vector<Vec>(T, Vec::Zero(model.disturbance_dim())) : vs;
  traj.xs[0] = x0;
  for (int t = 0; t < T; ++t) {
    traj.xs[t + 1] = model.step(traj.xs[t], traj.us[t], traj.vs[t], t);
    if (!all_finite(traj.xs[t + 1]) || traj.xs[t + 1].norm() > divergence_norm) {
      throw DivergedRollout(t);
    }
  }
  traj.cost = cost.trajectory_cost(traj.xs, traj.us, traj.vs);
  if (!std::isfinite(traj.cost)) throw DivergedRollout(T);
  return traj;
}

TrajectoryExpansion expand_trajectory(const DynamicsModel& model, const TwoPlayerCost& cost,
                                      const Trajectory& traj, bool second_order,
                                      bool two_player) {
  const int T = traj.horizon();
  const int n = model.state_dim();
  TrajectoryExpansion out;
  out.locals.resize(T);
  for (int t = 0; t < T; ++t) {
    LocalModel& lm = out.locals[t];
    lm.dyn = model.linearize(traj.xs[t], traj.us[t], traj.vs[t], t, second_order);
    lm.cost = cost.quadraticize(traj.xs[t], traj.us[t], traj.vs[t], t);
    if (!two_player) {
      // The disturbance channel is frozen: drop its blocks so the backward
      // pass reduces to the single-player recursion.
      const int m = static_cast<int>(lm.cost.l_u.size());
      lm.dyn.f_v = Mat::Zero(n, 0);
      lm.dyn.f_vv.clear();
      lm.dyn.f_vx.clear();
      lm.dyn.f_uv.clear();
      lm.cost.l_v = Vec::Zero(0);
      lm.cost.l_vx = Mat::Zero(0, n);
      lm.cost.l_vv = Mat::Zero(0, 0);
      lm.cost.l_uv = Mat::Zero(m, 0);
    }
  }
  out.terminal = cost.terminal_quad(traj.xs[T]);
  return out;
}

BackwardPassResult backward_pass(const TrajectoryExpansion& expansion, double rho,
                                 const SolverOptions& options) {
  const int T = static_cast<int>(expansion.locals.size());
  BackwardPassResult result;
  result.gains.resize(T);
  result.values.resize(T + 1);

  ValueExpansion value;
  value.dV = 0.0;
  value.V_x = expansion.terminal.l_x;
  value.V_xx = symmetrized(expansion.terminal.l_xx);
  result.values[T] = value;

  for (int t = T - 1; t >= 0; --t) {
    const LocalModel& local = expansion.locals[t];
    const QExpansion q = q_expansion(local, value, options.second_order_dynamics);
    const QExpansion q_reg =
        improved_q_blocks(local, value, rho, options.regularization,
                          options.second_order_dynamics);
    const auto gains = saddle_gains(q_reg, options.eig_clamp);
    if (!gains) {
      result.ok = false;
      result.failed_step = t;
      return result;
    }

    // Residual of the stationarity system the gains were solved from.
    double residual = 0.0;
    if (gains->g_u.size() > 0) {
      Vec r_u = q_reg.Q_u + q_reg.Q_uu * gains->g_u;
      if (gains->g_v.size() > 0) r_u += q_reg.Q_uv * gains->g_v;
      residual = std::max(residual, r_u.lpNorm<Eigen::Infinity>());
    }
    if (gains->g_v.size() > 0) {
      Vec r_v = q_reg.Q_v + q_reg.Q_vv * gains->g_v;
      if (gains->g_u.size() > 0) r_v += q_reg.Q_uv.transpose() * gains->g_u;
      residual = std::max(residual, r_v.lpNorm<Eigen::Infinity>());
    }
    result.max_stationarity_residual = std::max(result.max_stationarity_residual, residual);

    result.sum_linear += gains->g_u.dot(q.Q_u) + gains->g_v.dot(q.Q_v);
    result.sum_quadratic +=
        gains->g_u.dot(q.Q_uu * gains->g_u) + gains->g_v.dot(q.Q_vv * gains->g_v);

    value = value_recursion(q, *gains);
    result.dV_total += value.dV;
    result.values[t] = value;
    result.gains.g_u[t] = gains->g_u;
    result.gains.g_v[t] = gains->g_v;
    result.gains.G_u[t] = gains->G_u;
    result.gains.G_v[t] = gains->G_v;
    result.gains.K_u[t] = gains->K_u;
    result.gains.K_v[t] = gains->K_v;
  }
  result.ok = true;
  return result;
}

Trajectory forward_pass(const DynamicsModel& model, const TwoPlayerCost& cost,
                        const Trajectory& traj, const GainSchedule& gains, double sigma,
                        bool two_player, double divergence_norm) {
  const int T = traj.horizon();
  if (gains.horizon() < T) throw HorizonMismatch("forward_pass: gain schedule too short");

  Trajectory out;
  out.xs.resize(T + 1);
  out.us.resize(T);
  out.vs.resize(T);
  out.xs[0] = traj.xs[0];
  for (int t = 0; t < T; ++t) {
    const Vec dx = out.xs[t] - traj.xs[t];
    out.us[t] = traj.us[t] + sigma * gains.g_u[t] + gains.G_u[t] * dx;
    if (two_player && gains.g_v[t].size() > 0) {
      out.vs[t] = traj.vs[t] + sigma * gains.g_v[t] + gains.G_v[t] * dx;
    } else {
      out.vs[t] = traj.vs[t];
    }
    out.xs[t + 1] = model.step(out.xs[t], out.us[t], out.vs[t], t);
    if (!all_finite(out.xs[t + 1]) || out.xs[t + 1].norm() > divergence_norm) {
      throw DivergedRollout(t);
    }
  }
  out.cost = cost.trajectory_cost(out.xs, out.us, out.vs);
  if (!std::isfinite(out.cost)) throw DivergedRollout(T);
  return out;
}

namespace {

double predicted_change(const BackwardPassResult& bw, double weight) {
  return weight * bw.sum_linear + 0.5 * weight * weight * bw.sum_quadratic;
}

// Weight of the expected-reduction estimate. The printed form uses rho;
// when rho is exactly zero that form is degenerate, so the line-search
// parameter takes its place.
double reduction_weight(const SolverOptions& options, double rho, double sigma) {
  if (options.expected_reduction_in == ExpectedReductionIn::kRho && rho > 0.0) return rho;
  return sigma;
}

}  // namespace

SolveResult solve_core(const DynamicsModel& model, const TwoPlayerCost& cost, const Vec& x0,
                       const std::vector<Vec>& us_init, const std::vector<Vec>& vs_init,
                       const SolverOptions& options, bool two_player) {
  SolveResult result;
  result.trajectory =
      rollout(model, cost, x0, us_init, vs_init, options.divergence_norm);
  Trajectory& traj = result.trajectory;
  SolveReport& report = result.report;

  RegState reg;
  reg.rho = options.rho_init;
  reg.rho0 = options.rho_min_mod;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    report.iterations = iter + 1;

    if (iter > 0 && options.redraw_disturbance && two_player &&
        model.disturbance_dim() > 0) {
      const auto vs = draw_disturbance_schedule(traj.horizon(), model.disturbance_dim(),
                                                mix_seed(options.seed, 1000 + iter));
      traj = rollout(model, cost, traj.xs[0], traj.us, vs, options.divergence_norm);
    }

    const TrajectoryExpansion expansion =
        expand_trajectory(model, cost, traj, options.second_order_dynamics, two_player);

    BackwardPassResult bw;
    bool backward_ok = false;
    while (true) {
      bw = backward_pass(expansion, reg.rho, options);
      if (bw.ok) {
        backward_ok = true;
        break;
      }
      if (reg.rho >= options.rho_max) break;
      reg = update_rho(reg, RhoDirection::kIncrease);
    }
    if (!backward_ok) {
      report.reason = StopReason::kNoProgress;
      break;
    }
    result.gains = bw.gains;
    report.max_stationarity_residual =
        std::max(report.max_stationarity_residual, bw.max_stationarity_residual);

    const double w_conv = reduction_weight(options, reg.rho, 1.0);
    const double pred_conv = predicted_change(bw, w_conv);
    const double chi =
        options.chi > 0.0 ? options.chi : 1e-6 * (1.0 + std::abs(traj.cost));
    report.rho_trace.push_back(reg.rho);
    report.dV_trace.push_back(bw.dV_total);
    if (std::abs(pred_conv) < chi) {
      report.cost_trace.push_back(traj.cost);
      report.eta_trace.push_back(0.0);
      report.sigma_trace.push_back(0.0);
      report.expected_trace.push_back(pred_conv);
      report.accepted.push_back(false);
      report.converged = true;
      report.reason = StopReason::kConverged;
      break;
    }

    bool accepted = false;
    double eta = 0.0;
    double sigma_used = 0.0;
    double expected_used = pred_conv;
    Trajectory candidate;
    for (double sigma = options.sigma_initial; sigma >= options.sigma_min;
         sigma *= options.sigma_factor) {
      Trajectory attempt;
      try {
        attempt = forward_pass(model, cost, traj, bw.gains, sigma, two_player,
                               options.divergence_norm);
      } catch (const DivergedRollout&) {
        continue;
      }
      const double w = reduction_weight(options, reg.rho, sigma);
      const double predicted = predicted_change(bw, w);
      const double actual = attempt.cost - traj.cost;
      eta = actual / predicted;
      sigma_used = sigma;
      expected_used = predicted;
      if (eta > options.accept_threshold) {
        accepted = true;
        candidate = std::move(attempt);
        break;
      }
    }

    report.cost_trace.push_back(accepted ? candidate.cost : traj.cost);
    report.eta_trace.push_back(eta);
    report.sigma_trace.push_back(accepted ? sigma_used : 0.0);
    report.expected_trace.push_back(expected_used);
    report.accepted.push_back(accepted);

    if (accepted) {
      traj = std::move(candidate);
      reg = update_rho(reg, RhoDirection::kReduce);
    } else {
      if (reg.rho >= options.rho_max) {
        report.reason = StopReason::kNoProgress;
        break;
      }
      reg = update_rho(reg, RhoDirection::kIncrease);
    }
  }
  return result;
}

std::vector<Vec> draw_disturbance_schedule(int T, int p, std::uint64_t seed, double variance,
                                           int filter_width) {
  Rng rng(seed);
  std::vector<Vec> vs(T);
  const double stddev = std::sqrt(variance);
  for (int t = 0; t < T; ++t) vs[t] = rng.normal_vec(p, stddev);
  return moving_average(vs, filter_width);
}

}  // namespace rtopt
