#pragma once

#include "rtopt/types.hpp"

#include <functional>
#include <vector>

namespace rtopt::oracle {

/// Finite-horizon LQ zero-sum game test bed:
///   x' = A x + B u + D v,
///   stage 1/2 (x'W_x x + u'W_u u - gamma v'v), terminal 1/2 x'W_T x.
struct LqGameSpec {
  Mat A, B, D;
  Mat W_x, W_u;
  double gamma = 1.0;
  Mat W_T;
  int horizon = 1;

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }
  int p() const { return static_cast<int>(D.cols()); }
};

/// Textbook-sign feedback laws u = -K x.
struct LqrSolution {
  std::vector<Mat> K;  // T gains
  std::vector<Mat> P;  // T+1 value matrices, P[T] = W_T
};

/// Standard finite-horizon discrete Riccati recursion (D is ignored).
LqrSolution lqr_riccati(const LqGameSpec& spec);

struct LqGameSolution {
  std::vector<Mat> K_u, K_v;  // u = -K_u x, v = -K_v x
  std::vector<Mat> P;         // T+1 value matrices
};

/// Per stage, solves the stacked stationarity system of both players in
/// one block linear solve, then propagates the value matrix through the
/// closed loop. Throws ConcavityViolated when the stage maximization is
/// not concave (gamma I - D'P D not positive definite).
LqGameSolution lq_game_recursion(const LqGameSpec& spec);

struct GridBounds {
  double u_lo = -5.0, u_hi = 5.0;
  double v_lo = -5.0, v_hi = 5.0;
};

/// Brute-force saddle of a scalar two-player stage: argmin over u of
/// (argmax over v of f), on a lattice with refinement passes around the
/// incumbent. Widens the bounds and retries when the saddle lands on the
/// search boundary; throws BoundaryHit if widening does not help.
std::pair<double, double> scalar_saddle_grid(const std::function<double(double, double)>& f,
                                             GridBounds bounds, int resolution,
                                             int refinements = 2);

}  // namespace rtopt::oracle
