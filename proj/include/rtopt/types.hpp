#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace rtopt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct NonFiniteState : std::runtime_error {
  explicit NonFiniteState(const std::string& what) : std::runtime_error(what) {}
};

struct DivergedRollout : std::runtime_error {
  explicit DivergedRollout(int step)
      : std::runtime_error("rollout diverged at step " + std::to_string(step)), step(step) {}
  int step;
};

struct HorizonMismatch : std::runtime_error {
  explicit HorizonMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct ConcavityViolated : std::runtime_error {
  explicit ConcavityViolated(int step)
      : std::runtime_error("stage maximization not concave at step " + std::to_string(step)),
        step(step) {}
  int step;
};

struct BoundaryHit : std::runtime_error {
  explicit BoundaryHit(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

inline bool all_finite(const Vec& v) { return v.allFinite(); }
inline bool all_finite(const Mat& m) { return m.allFinite(); }

inline Mat symmetrized(const Mat& m) { return 0.5 * (m + m.transpose()); }

/// Time-indexed state/control/disturbance sequences over a horizon T:
/// xs has T+1 entries, us and vs have T. `cost` is the total objective of
/// the stored sequences (stage costs plus terminal cost).
struct Trajectory {
  std::vector<Vec> xs;
  std::vector<Vec> us;
  std::vector<Vec> vs;
  double cost = 0.0;

  int horizon() const { return static_cast<int>(us.size()); }
};

/// Quadratic model of a stage cost around one point: value, gradients and
/// Hessian blocks with respect to (x, u, v).
struct StageQuadratic {
  double l0 = 0.0;
  Vec l_x, l_u, l_v;
  Mat l_xx, l_ux, l_vx, l_uu, l_vv, l_uv;
};

/// Quadratic model of the terminal cost.
struct TerminalQuadratic {
  double value = 0.0;
  Vec l_x;
  Mat l_xx;
};

/// Per-step linearization of the dynamics. Second-order tensors are stored
/// one Hessian slice per state coordinate and are populated only when
/// requested.
struct LocalDynamics {
  Mat f_x;  // n x n
  Mat f_u;  // n x m
  Mat f_v;  // n x p
  std::vector<Mat> f_uu;  // n slices of m x m
  std::vector<Mat> f_vv;  // n slices of p x p
  std::vector<Mat> f_ux;  // n slices of m x n
  std::vector<Mat> f_vx;  // n slices of p x n
  std::vector<Mat> f_uv;  // n slices of m x p
  bool has_second_order = false;
};

}  // namespace rtopt
