#include "rtopt/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace rtopt::oracle {

LqrSolution lqr_riccati(const LqGameSpec& spec) {
  const int T = spec.horizon;
  LqrSolution sol;
  sol.K.resize(T);
  sol.P.resize(T + 1);
  sol.P[T] = symmetrized(spec.W_T);
  for (int t = T - 1; t >= 0; --t) {
    const Mat& P_next = sol.P[t + 1];
    const Mat H = spec.W_u + spec.B.transpose() * P_next * spec.B;
    sol.K[t] = H.ldlt().solve(spec.B.transpose() * P_next * spec.A);
    sol.P[t] = symmetrized(
        Mat(spec.W_x + spec.A.transpose() * P_next * spec.A -
            spec.A.transpose() * P_next * spec.B * sol.K[t]));
  }
  return sol;
}

LqGameSolution lq_game_recursion(const LqGameSpec& spec) {
  const int T = spec.horizon;
  const int m = spec.m();
  const int p = spec.p();

  LqGameSolution sol;
  sol.K_u.resize(T);
  sol.K_v.resize(T);
  sol.P.resize(T + 1);
  sol.P[T] = symmetrized(spec.W_T);

  for (int t = T - 1; t >= 0; --t) {
    const Mat& P_next = sol.P[t + 1];

    const Mat Juu = spec.W_u + spec.B.transpose() * P_next * spec.B;
    const Mat Jvv = -spec.gamma * Mat::Identity(p, p) + spec.D.transpose() * P_next * spec.D;
    const Mat Juv = spec.B.transpose() * P_next * spec.D;

    if (p > 0) {
      Eigen::SelfAdjointEigenSolver<Mat> es(Jvv);
      if (es.eigenvalues().maxCoeff() >= 0.0) throw ConcavityViolated(t);
    }

    Mat M(m + p, m + p);
    M.topLeftCorner(m, m) = Juu;
    M.topRightCorner(m, p) = Juv;
    M.bottomLeftCorner(p, m) = Juv.transpose();
    M.bottomRightCorner(p, p) = Jvv;

    Mat rhs(m + p, spec.n());
    rhs.topRows(m) = spec.B.transpose() * P_next * spec.A;
    rhs.bottomRows(p) = spec.D.transpose() * P_next * spec.A;

    const Mat X = M.fullPivLu().solve(rhs);
    sol.K_u[t] = X.topRows(m);
    sol.K_v[t] = X.bottomRows(p);

    const Mat F = spec.A - spec.B * sol.K_u[t] - spec.D * sol.K_v[t];
    Mat P = spec.W_x + sol.K_u[t].transpose() * spec.W_u * sol.K_u[t] -
            spec.gamma * sol.K_v[t].transpose() * sol.K_v[t] +
            F.transpose() * P_next * F;
    sol.P[t] = symmetrized(P);
  }
  return sol;
}

namespace {

struct GridResult {
  double u, v;
  bool u_on_boundary, v_on_boundary;
};

GridResult grid_pass(const std::function<double(double, double)>& f, const GridBounds& b,
                     int resolution) {
  const double du = (b.u_hi - b.u_lo) / (resolution - 1);
  const double dv = (b.v_hi - b.v_lo) / (resolution - 1);

  double best_outer = std::numeric_limits<double>::infinity();
  int best_iu = 0, best_iv = 0;
  for (int iu = 0; iu < resolution; ++iu) {
    const double u = b.u_lo + iu * du;
    double best_inner = -std::numeric_limits<double>::infinity();
    int inner_iv = 0;
    for (int iv = 0; iv < resolution; ++iv) {
      const double val = f(u, b.v_lo + iv * dv);
      if (val > best_inner) {
        best_inner = val;
        inner_iv = iv;
      }
    }
    if (best_inner < best_outer) {
      best_outer = best_inner;
      best_iu = iu;
      best_iv = inner_iv;
    }
  }
  GridResult out;
  out.u = b.u_lo + best_iu * du;
  out.v = b.v_lo + best_iv * dv;
  out.u_on_boundary = (best_iu == 0 || best_iu == resolution - 1);
  out.v_on_boundary = (best_iv == 0 || best_iv == resolution - 1);
  return out;
}

}  // namespace

std::pair<double, double> scalar_saddle_grid(const std::function<double(double, double)>& f,
                                             GridBounds bounds, int resolution,
                                             int refinements) {
  constexpr int kMaxWidenings = 8;
  for (int widening = 0; widening <= kMaxWidenings; ++widening) {
    GridBounds b = bounds;
    GridResult r = grid_pass(f, b, resolution);
    if (r.u_on_boundary || r.v_on_boundary) {
      const double uc = 0.5 * (bounds.u_lo + bounds.u_hi);
      const double vc = 0.5 * (bounds.v_lo + bounds.v_hi);
      const double uh = bounds.u_hi - bounds.u_lo;
      const double vh = bounds.v_hi - bounds.v_lo;
      bounds = {uc - uh, uc + uh, vc - vh, vc + vh};
      continue;
    }
    for (int pass = 0; pass < refinements; ++pass) {
      const double du = 2.0 * (b.u_hi - b.u_lo) / (resolution - 1);
      const double dv = 2.0 * (b.v_hi - b.v_lo) / (resolution - 1);
      b = {r.u - du, r.u + du, r.v - dv, r.v + dv};
      r = grid_pass(f, b, resolution);
    }
    return {r.u, r.v};
  }
  throw BoundaryHit("scalar_saddle_grid: saddle stayed on the boundary after widening");
}

}  // namespace rtopt::oracle
