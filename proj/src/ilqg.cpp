#include "rtopt/ilqg.hpp"

namespace rtopt::ilqg {

Trajectory rollout(const DynamicsModel& model, const TwoPlayerCost& cost, const Vec& x0,
                   const std::vector<Vec>& us, double divergence_norm) {
  const std::vector<Vec> vs(us.size(), Vec::Zero(model.disturbance_dim()));
  return rtopt::rollout(model, cost, x0, us, vs, divergence_norm);
}

BackwardPassResult backward_pass(const TrajectoryExpansion& expansion, double rho,
                                 const SolverOptions& options) {
  return rtopt::backward_pass(expansion, rho, options);
}

Trajectory forward_pass(const DynamicsModel& model, const TwoPlayerCost& cost,
                        const Trajectory& traj, const GainSchedule& gains, double sigma,
                        double divergence_norm) {
  return rtopt::forward_pass(model, cost, traj, gains, sigma, /*two_player=*/false,
                             divergence_norm);
}

SolveResult solve(const DynamicsModel& model, const TwoPlayerCost& cost, const Vec& x0,
                  const std::vector<Vec>& us_init, const SolverOptions& options) {
  const std::vector<Vec> vs(us_init.size(), Vec::Zero(model.disturbance_dim()));
  return solve_core(model, cost, x0, us_init, vs, options, /*two_player=*/false);
}

}  // namespace rtopt::ilqg
