#pragma once

#include "rtopt/dynamics.hpp"
#include "rtopt/types.hpp"

#include <array>

namespace rtopt {

/// Physical parameters of the four-wheeled omnidirectional platform.
/// Units: kg, kg*m^2, m, rad, N, rad/s, s. The force gains scale the
/// generalized force componentwise (x, y, theta).
struct MecanumParams {
  double mass = 20.0;
  double inertia_z = 0.8;
  double wheel_radius = 0.05;
  double mounting_distance = 0.3;
  double zeta = M_PI / 4.0;
  std::array<double, 4> friction = {0.0, 0.0, 0.0, 0.0};
  double sign_smoothing = 0.1;  // width of the tanh surrogate for sgn
  std::array<double, 3> force_gains = {1.0, 1.0, 1.0};
  double dt = 0.05;

  void validate() const;
};

/// Wheel-coupling matrix B(theta); rows are wheels, columns couple world
/// x, y and rotation.
Mat mecanum_B_matrix(double theta, const MecanumParams& params);

/// Smoothed sign matrix S = diag(tanh(phidot_i / eps)).
Mat mecanum_S_matrix(const Vec& wheel_speeds, const MecanumParams& params);

/// Wheel speeds from the platform velocity: phidot = B(theta) qdot / r.
Vec mecanum_wheel_speeds(double theta, const Vec& qdot, const MecanumParams& params);

/// Generalized force on the platform from wheel torques and friction,
/// componentwise scaled by the force gains:
///   F = diag(k) * (B^T tau / r - B^T S f).
Vec generalized_force(const Vec& tau, const Vec& wheel_speeds, double theta,
                      const MecanumParams& params);

/// Platform accelerations [xdd, ydd, thetadd]. u and v share the wheel
/// torque channel: the effective torque is u + v.
Vec forward_dynamics(const Vec& x, const Vec& u, const Vec& v, const MecanumParams& params);

/// How the actuation channel of the platform model is interpreted.
enum class MecanumControlMode {
  kWheelTorques,       // u is the 4-vector of wheel torques
  kGeneralizedForces,  // u is the 3-vector of platform forces/torque
};

/// Omnidirectional platform with state [x, y, theta, xd, yd, thetad],
/// semi-implicit Euler integration, and a disturbance channel matched to
/// the control channel.
class MecanumModel : public DynamicsModel {
 public:
  explicit MecanumModel(MecanumParams params,
                        MecanumControlMode mode = MecanumControlMode::kWheelTorques,
                        bool disturbance_enabled = true);

  int state_dim() const override { return 6; }
  int control_dim() const override {
    return mode_ == MecanumControlMode::kWheelTorques ? 4 : 3;
  }
  int disturbance_dim() const override { return disturbance_enabled_ ? control_dim() : 0; }

  Vec step(const Vec& x, const Vec& u, const Vec& v, int t) const override;

  Vec acceleration(const Vec& x, const Vec& u, const Vec& v) const;

  const MecanumParams& params() const { return params_; }
  MecanumControlMode mode() const { return mode_; }

 private:
  MecanumParams params_;
  MecanumControlMode mode_;
  bool disturbance_enabled_;
};

/// Wraps theta into (-pi, pi]; reporting only, never used inside integration.
double wrap_angle(double theta);

}  // namespace rtopt
