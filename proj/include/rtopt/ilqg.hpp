#pragma once

#include "rtopt/solver.hpp"

namespace rtopt::ilqg {

/// Nominal rollout under a control schedule with the disturbance channel
/// held at zero.
Trajectory rollout(const DynamicsModel& model, const TwoPlayerCost& cost, const Vec& x0,
                   const std::vector<Vec>& us, double divergence_norm = 1e8);

/// Single-player backward pass: g_u = -Quu^-1 Q_u, G_u = -Quu^-1 Q_ux with
/// the regularized curvature, and the value recursion specialized to one
/// player.
BackwardPassResult backward_pass(const TrajectoryExpansion& expansion, double rho,
                                 const SolverOptions& options = {});

/// Forward rollout updating the control channel only.
Trajectory forward_pass(const DynamicsModel& model, const TwoPlayerCost& cost,
                        const Trajectory& traj, const GainSchedule& gains, double sigma,
                        double divergence_norm = 1e8);

/// Iterative solve: linearize, backward pass, backtracking line search with
/// the eta acceptance rule, and the multiplicative rho schedule.
SolveResult solve(const DynamicsModel& model, const TwoPlayerCost& cost, const Vec& x0,
                  const std::vector<Vec>& us_init, const SolverOptions& options);

}  // namespace rtopt::ilqg
