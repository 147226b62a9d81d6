#pragma once

#include "rtopt/types.hpp"

namespace rtopt {

/// Discrete-time dynamics x_{t+1} = f_t(x_t, u_t, v_t) with a control
/// channel u and a disturbance channel v (either may be empty). Models are
/// immutable after construction and safe to share across threads.
class DynamicsModel {
 public:
  virtual ~DynamicsModel() = default;

  virtual int state_dim() const = 0;
  virtual int control_dim() const = 0;
  virtual int disturbance_dim() const = 0;

  virtual Vec step(const Vec& x, const Vec& u, const Vec& v, int t) const = 0;

  /// Jacobians of `step` at (x, u, v). The default uses central finite
  /// differences; models with exact Jacobians may override.
  virtual LocalDynamics linearize(const Vec& x, const Vec& u, const Vec& v, int t,
                                  bool second_order = false) const;
};

/// Central-difference Jacobians of `step` with per-coordinate step
/// h = cbrt(eps) * max(1, |z_i|).
LocalDynamics finite_difference_jacobians(const DynamicsModel& model, const Vec& x, const Vec& u,
                                          const Vec& v, int t);

/// Adds the second-order tensors (f_uu, f_vv, f_ux, f_vx, f_uv) to `local`
/// by central second differences of `step`.
void finite_difference_second_order(const DynamicsModel& model, const Vec& x, const Vec& u,
                                    const Vec& v, int t, LocalDynamics& local);

/// Linear time-invariant test system x' = A x + B u + D v. The step map is
/// the discrete dynamics itself; linearize returns (A, B, D) exactly.
class LtiModel : public DynamicsModel {
 public:
  LtiModel(Mat A, Mat B, Mat D);

  int state_dim() const override { return static_cast<int>(A_.rows()); }
  int control_dim() const override { return static_cast<int>(B_.cols()); }
  int disturbance_dim() const override { return static_cast<int>(D_.cols()); }

  Vec step(const Vec& x, const Vec& u, const Vec& v, int t) const override;
  LocalDynamics linearize(const Vec& x, const Vec& u, const Vec& v, int t,
                          bool second_order) const override;

  const Mat& A() const { return A_; }
  const Mat& B() const { return B_; }
  const Mat& D() const { return D_; }

 private:
  Mat A_, B_, D_;
};

}  // namespace rtopt
