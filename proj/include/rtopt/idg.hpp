#pragma once

#include "rtopt/solver.hpp"

namespace rtopt::idg {

/// Joint two-player backward pass over the coupled gains.
BackwardPassResult backward_pass(const TrajectoryExpansion& expansion, double rho,
                                 const SolverOptions& options = {});

/// Forward rollout updating both control channels.
Trajectory forward_pass(const DynamicsModel& model, const TwoPlayerCost& cost,
                        const Trajectory& traj, const GainSchedule& gains, double sigma,
                        double divergence_norm = 1e8);

/// Minimax solve. When vs_init is empty and the model has a disturbance
/// channel, the warm start is drawn from N(0, 2I) and smoothed with a
/// centered moving-average filter, deterministically from options.seed.
SolveResult solve(const DynamicsModel& model, const TwoPlayerCost& cost, const Vec& x0,
                  const std::vector<Vec>& us_init, const std::vector<Vec>& vs_init,
                  const SolverOptions& options);

}  // namespace rtopt::idg
