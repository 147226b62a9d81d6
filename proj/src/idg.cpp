#include "rtopt/idg.hpp"

#include "rtopt/random.hpp"

namespace rtopt::idg {

BackwardPassResult backward_pass(const TrajectoryExpansion& expansion, double rho,
                                 const SolverOptions& options) {
  return rtopt::backward_pass(expansion, rho, options);
}

Trajectory forward_pass(const DynamicsModel& model, const TwoPlayerCost& cost,
                        const Trajectory& traj, const GainSchedule& gains, double sigma,
                        double divergence_norm) {
  return rtopt::forward_pass(model, cost, traj, gains, sigma, /*two_player=*/true,
                             divergence_norm);
}

SolveResult solve(const DynamicsModel& model, const TwoPlayerCost& cost, const Vec& x0,
                  const std::vector<Vec>& us_init, const std::vector<Vec>& vs_init,
                  const SolverOptions& options) {
  std::vector<Vec> vs = vs_init;
  const int p = model.disturbance_dim();
  if (vs.empty() && p > 0) {
    vs = draw_disturbance_schedule(static_cast<int>(us_init.size()), p,
                                   mix_seed(options.seed, 0));
  }
  return solve_core(model, cost, x0, us_init, vs, options, /*two_player=*/true);
}

}  // namespace rtopt::idg
