#pragma once

#include "rtopt/costs.hpp"
#include "rtopt/dynamics.hpp"
#include "rtopt/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace rtopt {

/// Multiplicative regularization schedule. `rho` is the value applied to
/// the curvature blocks; `rho0` tracks the minimal modification value.
struct RegState {
  double rho = 0.0;
  double rho0 = 1.0;
  double up_factor = 1.1;
  double down_factor = 0.09;
};

enum class RhoDirection { kIncrease, kReduce };

/// increase: rho <- 1.1 rho0, rho0 <- rho;  reduce: rho <- 0.09 rho0,
/// rho0 <- rho.
RegState update_rho(RegState reg, RhoDirection direction);

enum class RegRule {
  kAdditive,      // Quu + rho I (mirrored as Qvv - rho I)
  kStatePenalty,  // sandwich V_xx +/- rho I through the channel Jacobians
};

enum class ExpectedReductionIn { kRho, kSigma };

enum class StopReason { kConverged, kMaxIterations, kNoProgress };

const char* to_string(StopReason reason);

struct SolverOptions {
  int max_iterations = 100;
  double accept_threshold = 0.5;  // c: accept only when eta > c
  double chi = 0.0;               // stop when |expected reduction| < chi; 0 -> 1e-6 (1 + |J|)
  double rho_init = 0.0;
  double rho_min_mod = 1.0;  // initial rho0
  double rho_max = 1e10;
  double sigma_initial = 1.0;
  double sigma_factor = 0.7;
  double sigma_min = 1e-3;
  ExpectedReductionIn expected_reduction_in = ExpectedReductionIn::kRho;
  RegRule regularization = RegRule::kAdditive;
  bool eig_clamp = false;           // clamp curvature eigenvalues instead of failing
  bool second_order_dynamics = false;
  bool redraw_disturbance = false;  // redraw the adversary warm start each iteration
  std::uint64_t seed = 0;
  double divergence_norm = 1e8;
};

struct SolveReport {
  int iterations = 0;
  std::vector<double> cost_trace;
  std::vector<double> eta_trace;
  std::vector<double> rho_trace;
  std::vector<double> sigma_trace;
  std::vector<double> expected_trace;  // signed predicted cost change per iteration
  std::vector<double> dV_trace;        // sum of per-step value constants
  std::vector<bool> accepted;
  bool converged = false;
  StopReason reason = StopReason::kMaxIterations;
  double max_stationarity_residual = 0.0;
};

/// Per-step affine control laws for both players,
///   du_t = g_u + G_u dx,   dv_t = g_v + G_v dx,
/// plus the Schur-complement intermediates K_u, K_v.
struct GainSchedule {
  std::vector<Vec> g_u, g_v;
  std::vector<Mat> G_u, G_v;
  std::vector<Mat> K_u, K_v;

  int horizon() const { return static_cast<int>(g_u.size()); }
  void resize(int T);
};

/// The ten second-order coefficients of the stage Hamiltonian expansion.
struct QExpansion {
  Vec Q_x, Q_u, Q_v;
  Mat Q_xx, Q_ux, Q_vx, Q_uu, Q_vv, Q_uv;
};

struct ValueExpansion {
  double dV = 0.0;
  Vec V_x;
  Mat V_xx;
};

/// Linearized dynamics and quadraticized cost at one step of the nominal
/// trajectory.
struct LocalModel {
  LocalDynamics dyn;
  StageQuadratic cost;
};

struct StepGains {
  Vec g_u, g_v;
  Mat G_u, G_v, K_u, K_v;
};

struct BackwardPassResult {
  bool ok = false;
  int failed_step = -1;
  GainSchedule gains;
  double sum_linear = 0.0;     // sum of g_u'Q_u + g_v'Q_v
  double sum_quadratic = 0.0;  // sum of g_u'Q_uu g_u + g_v'Q_vv g_v
  double dV_total = 0.0;
  double max_stationarity_residual = 0.0;
  std::vector<ValueExpansion> values;  // V_t for t = 0..T (diagnostics)
};

struct SolveResult {
  Trajectory trajectory;
  GainSchedule gains;
  SolveReport report;
};

/// Unregularized Q blocks from one step's local model and the next value
/// expansion. Second-order dynamics tensors contribute only when present
/// and `use_second_order` is set.
QExpansion q_expansion(const LocalModel& local, const ValueExpansion& next_value,
                       bool use_second_order = false);

/// Regularized Q blocks used for gain computation only. The additive rule
/// shifts the own-curvature blocks by +/- rho; the state-penalty rule
/// sandwiches (V_xx +/- rho I) through the channel Jacobians, with the
/// sign mirrored on the maximizing channel.
QExpansion improved_q_blocks(const LocalModel& local, const ValueExpansion& next_value,
                             double rho, RegRule rule, bool use_second_order = false);

/// Solves the coupled stationarity system
///   Q_u + Quu g_u + Quv g_v = 0,   Q_v + Qvv g_v + Quv' g_u = 0
/// (and the matching feedback equations) through the Schur complements
/// K_u = (Quu - Quv Qvv^-1 Quv')^-1 and K_v = (Qvv - Quv' Quu^-1 Quv)^-1.
/// Returns nullopt when the regularized curvature is not positive/negative
/// definite for the respective player, unless eigenvalue clamping is on.
std::optional<StepGains> saddle_gains(const QExpansion& q, bool eig_clamp = false);

/// Value coefficients after substituting both players' affine laws into
/// the quadratic stage model. Uses the unregularized blocks.
ValueExpansion value_recursion(const QExpansion& q, const StepGains& gains);

/// Rolls the model forward under fixed control and disturbance schedules
/// and fills in the total cost. Throws DivergedRollout on non-finite or
/// exploding states.
Trajectory rollout(const DynamicsModel& model, const TwoPlayerCost& cost, const Vec& x0,
                   const std::vector<Vec>& us, const std::vector<Vec>& vs,
                   double divergence_norm = 1e8);

/// Local models along a trajectory plus the terminal quadratic.
struct TrajectoryExpansion {
  std::vector<LocalModel> locals;
  TerminalQuadratic terminal;
};

TrajectoryExpansion expand_trajectory(const DynamicsModel& model, const TwoPlayerCost& cost,
                                      const Trajectory& traj, bool second_order,
                                      bool two_player);

/// Backward sweep over the expansion at a fixed regularizer.
BackwardPassResult backward_pass(const TrajectoryExpansion& expansion, double rho,
                                 const SolverOptions& options);

/// Forward rollout with both channels updated:
///   u_hat = u + sigma g_u + G_u (x_hat - x),  likewise for v.
/// sigma = 0 is allowed for identity checks.
Trajectory forward_pass(const DynamicsModel& model, const TwoPlayerCost& cost,
                        const Trajectory& traj, const GainSchedule& gains, double sigma,
                        bool two_player, double divergence_norm = 1e8);

/// Shared minimax/single-player solve loop. With two_player = false the
/// disturbance channel is held fixed (all-zero for nominal runs) and the
/// backward pass reduces to the single-player recursion.
SolveResult solve_core(const DynamicsModel& model, const TwoPlayerCost& cost, const Vec& x0,
                       const std::vector<Vec>& us_init, const std::vector<Vec>& vs_init,
                       const SolverOptions& options, bool two_player);

/// Gaussian-filtered disturbance warm start: i.i.d. N(0, variance I) per
/// step, smoothed with a centered moving average along time.
std::vector<Vec> draw_disturbance_schedule(int T, int p, std::uint64_t seed,
                                           double variance = 2.0, int filter_width = 5);

}  // namespace rtopt
