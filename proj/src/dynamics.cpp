#include "rtopt/dynamics.hpp"

#include <cmath>
#include <limits>

namespace rtopt {

namespace {

constexpr double kCbrtEps = 6.0554544523933429e-6;  // cbrt(machine epsilon)

double fd_step(double value) { return kCbrtEps * std::max(1.0, std::abs(value)); }

}  // namespace

LocalDynamics DynamicsModel::linearize(const Vec& x, const Vec& u, const Vec& v, int t,
                                       bool second_order) const {
  LocalDynamics local = finite_difference_jacobians(*this, x, u, v, t);
  if (second_order) finite_difference_second_order(*this, x, u, v, t, local);
  return local;
}

LocalDynamics finite_difference_jacobians(const DynamicsModel& model, const Vec& x, const Vec& u,
                                          const Vec& v, int t) {
  if (!all_finite(x) || !all_finite(u) || !all_finite(v)) {
    throw NonFiniteState("linearize: non-finite input");
  }
  const int n = model.state_dim();
  const int m = model.control_dim();
  const int p = model.disturbance_dim();

  LocalDynamics local;
  local.f_x.resize(n, n);
  local.f_u.resize(n, m);
  local.f_v.resize(n, p);

  Vec xp = x, xm = x;
  for (int i = 0; i < n; ++i) {
    const double h = fd_step(x[i]);
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    local.f_x.col(i) = (model.step(xp, u, v, t) - model.step(xm, u, v, t)) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  Vec up = u, um = u;
  for (int i = 0; i < m; ++i) {
    const double h = fd_step(u[i]);
    up[i] = u[i] + h;
    um[i] = u[i] - h;
    local.f_u.col(i) = (model.step(x, up, v, t) - model.step(x, um, v, t)) / (2.0 * h);
    up[i] = u[i];
    um[i] = u[i];
  }
  Vec vp = v, vm = v;
  for (int i = 0; i < p; ++i) {
    const double h = fd_step(v[i]);
    vp[i] = v[i] + h;
    vm[i] = v[i] - h;
    local.f_v.col(i) = (model.step(x, u, vp, t) - model.step(x, u, vm, t)) / (2.0 * h);
    vp[i] = v[i];
    vm[i] = v[i];
  }
  if (!all_finite(local.f_x) || !all_finite(local.f_u) || !all_finite(local.f_v)) {
    throw NonFiniteState("linearize: non-finite Jacobian");
  }
  return local;
}

namespace {

// d^2 step / (da db) for one coordinate pair via the four-point stencil.
Vec second_diff(const DynamicsModel& model, Vec x, Vec u, Vec v, int t, Vec* a, int i, Vec* b,
                int j) {
  const double ha = fd_step((*a)[i]);
  const double hb = fd_step((*b)[j]);
  const double ai = (*a)[i];
  const double bj = (*b)[j];

  (*a)[i] = ai + ha;
  (*b)[j] = bj + hb;
  const Vec fpp = model.step(x, u, v, t);
  (*b)[j] = bj - hb;
  const Vec fpm = model.step(x, u, v, t);
  (*a)[i] = ai - ha;
  const Vec fmm = model.step(x, u, v, t);
  (*b)[j] = bj + hb;
  const Vec fmp = model.step(x, u, v, t);
  (*a)[i] = ai;
  (*b)[j] = bj;
  return (fpp - fpm - fmp + fmm) / (4.0 * ha * hb);
}

}  // namespace

void finite_difference_second_order(const DynamicsModel& model, const Vec& x, const Vec& u,
                                    const Vec& v, int t, LocalDynamics& local) {
  const int n = model.state_dim();
  const int m = model.control_dim();
  const int p = model.disturbance_dim();
  Vec xw = x, uw = u, vw = v;

  local.f_uu.assign(n, Mat::Zero(m, m));
  local.f_vv.assign(n, Mat::Zero(p, p));
  local.f_ux.assign(n, Mat::Zero(m, n));
  local.f_vx.assign(n, Mat::Zero(p, n));
  local.f_uv.assign(n, Mat::Zero(m, p));

  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= i; ++j) {
      const Vec d = second_diff(model, x, u, v, t, &uw, i, &uw, j);
      for (int k = 0; k < n; ++k) {
        local.f_uu[k](i, j) = d[k];
        local.f_uu[k](j, i) = d[k];
      }
    }
    for (int j = 0; j < n; ++j) {
      const Vec d = second_diff(model, x, u, v, t, &uw, i, &xw, j);
      for (int k = 0; k < n; ++k) local.f_ux[k](i, j) = d[k];
    }
    for (int j = 0; j < p; ++j) {
      const Vec d = second_diff(model, x, u, v, t, &uw, i, &vw, j);
      for (int k = 0; k < n; ++k) local.f_uv[k](i, j) = d[k];
    }
  }
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j <= i; ++j) {
      const Vec d = second_diff(model, x, u, v, t, &vw, i, &vw, j);
      for (int k = 0; k < n; ++k) {
        local.f_vv[k](i, j) = d[k];
        local.f_vv[k](j, i) = d[k];
      }
    }
    for (int j = 0; j < n; ++j) {
      const Vec d = second_diff(model, x, u, v, t, &vw, i, &xw, j);
      for (int k = 0; k < n; ++k) local.f_vx[k](i, j) = d[k];
    }
  }
  local.has_second_order = true;
}

LtiModel::LtiModel(Mat A, Mat B, Mat D) : A_(std::move(A)), B_(std::move(B)), D_(std::move(D)) {
  const auto n = A_.rows();
  if (A_.cols() != n || B_.rows() != n) throw ConfigError("LtiModel: inconsistent A/B shapes");
  if (D_.size() == 0) D_ = Mat::Zero(n, 0);
  if (D_.rows() != n) throw ConfigError("LtiModel: inconsistent D shape");
}

Vec LtiModel::step(const Vec& x, const Vec& u, const Vec& v, int) const {
  if (!all_finite(x) || !all_finite(u) || !all_finite(v)) {
    throw NonFiniteState("LtiModel::step: non-finite input");
  }
  return A_ * x + B_ * u + D_ * v;
}

LocalDynamics LtiModel::linearize(const Vec&, const Vec&, const Vec&, int, bool) const {
  LocalDynamics local;
  local.f_x = A_;
  local.f_u = B_;
  local.f_v = D_;
  return local;
}

}  // namespace rtopt
