#include "rtopt/mecanum.hpp"

#include <cmath>

namespace rtopt {

void MecanumParams::validate() const {
  if (mass <= 0 || inertia_z <= 0 || wheel_radius <= 0 || mounting_distance <= 0 || dt <= 0 ||
      sign_smoothing <= 0) {
    throw ConfigError("MecanumParams: mass, inertia, radius, mounting distance, dt and "
                      "sign smoothing must be strictly positive");
  }
  for (double f : friction) {
    if (f < 0) throw ConfigError("MecanumParams: friction magnitudes must be nonnegative");
  }
}

Mat mecanum_B_matrix(double theta, const MecanumParams& params) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double rot = -std::sqrt(2.0) * params.mounting_distance * std::sin(params.zeta);
  Mat B(4, 3);
  B << -(c - s), -(c + s), rot,
       -(c + s),  (c - s), rot,
        (c - s),  (c + s), rot,
        (c + s), -(c - s), rot;
  return B;
}

Mat mecanum_S_matrix(const Vec& wheel_speeds, const MecanumParams& params) {
  Mat S = Mat::Zero(4, 4);
  for (int i = 0; i < 4; ++i) S(i, i) = std::tanh(wheel_speeds[i] / params.sign_smoothing);
  return S;
}

Vec mecanum_wheel_speeds(double theta, const Vec& qdot, const MecanumParams& params) {
  return mecanum_B_matrix(theta, params) * qdot / params.wheel_radius;
}

Vec generalized_force(const Vec& tau, const Vec& wheel_speeds, double theta,
                      const MecanumParams& params) {
  const Mat B = mecanum_B_matrix(theta, params);
  const Mat S = mecanum_S_matrix(wheel_speeds, params);
  const Vec f = Eigen::Map<const Vec>(params.friction.data(), 4);
  Vec F = B.transpose() * (tau / params.wheel_radius - S * f);
  for (int i = 0; i < 3; ++i) F[i] *= params.force_gains[i];
  return F;
}

namespace {

// Inertia is diagonal; the Coriolis matrix couples the translational
// velocities through the yaw rate and is skew in that block, so it does no
// work on the rigid body.
Mat coriolis_matrix(double thetadot, const MecanumParams& params) {
  Mat C = Mat::Zero(3, 3);
  C(0, 1) = -params.mass * thetadot;
  C(1, 0) = params.mass * thetadot;
  return C;
}

Vec accel_from_force(const Vec& F, const Vec& qdot, double thetadot,
                     const MecanumParams& params) {
  const Vec coriolis = coriolis_matrix(thetadot, params) * qdot;
  Vec accel(3);
  accel[0] = (F[0] - coriolis[0]) / params.mass;
  accel[1] = (F[1] - coriolis[1]) / params.mass;
  accel[2] = (F[2] - coriolis[2]) / params.inertia_z;
  return accel;
}

}  // namespace

Vec forward_dynamics(const Vec& x, const Vec& u, const Vec& v, const MecanumParams& params) {
  if (!all_finite(x) || !all_finite(u) || !all_finite(v)) {
    throw NonFiniteState("forward_dynamics: non-finite input");
  }
  const double theta = x[2];
  const Vec qdot = x.segment(3, 3);
  Vec tau = u;
  if (v.size() == tau.size()) tau += v;
  const Vec phidot = mecanum_wheel_speeds(theta, qdot, params);
  const Vec F = generalized_force(tau, phidot, theta, params);
  return accel_from_force(F, qdot, x[5], params);
}

MecanumModel::MecanumModel(MecanumParams params, MecanumControlMode mode,
                           bool disturbance_enabled)
    : params_(std::move(params)), mode_(mode), disturbance_enabled_(disturbance_enabled) {
  params_.validate();
}

Vec MecanumModel::acceleration(const Vec& x, const Vec& u, const Vec& v) const {
  if (mode_ == MecanumControlMode::kWheelTorques) return forward_dynamics(x, u, v, params_);

  if (!all_finite(x) || !all_finite(u) || !all_finite(v)) {
    throw NonFiniteState("MecanumModel: non-finite input");
  }
  const double theta = x[2];
  const Vec qdot = x.segment(3, 3);
  const Vec phidot = mecanum_wheel_speeds(theta, qdot, params_);
  const Mat B = mecanum_B_matrix(theta, params_);
  const Mat S = mecanum_S_matrix(phidot, params_);
  const Vec fric = Eigen::Map<const Vec>(params_.friction.data(), 4);
  Vec F = -B.transpose() * (S * fric);
  Vec force = u;
  if (v.size() == force.size()) force += v;
  for (int i = 0; i < 3; ++i) F[i] += params_.force_gains[i] * force[i];
  return accel_from_force(F, qdot, x[5], params_);
}

Vec MecanumModel::step(const Vec& x, const Vec& u, const Vec& v, int) const {
  const Vec accel = acceleration(x, u, v);
  Vec next(6);
  next.segment(3, 3) = x.segment(3, 3) + params_.dt * accel;
  next.segment(0, 3) = x.segment(0, 3) + params_.dt * next.segment(3, 3);
  return next;
}

double wrap_angle(double theta) {
  double w = std::fmod(theta + M_PI, 2.0 * M_PI);
  if (w <= 0) w += 2.0 * M_PI;
  return w - M_PI;
}

}  // namespace rtopt
