#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mfatt/errors.hpp"
#include "mfatt/so3.hpp"

namespace mfatt {

/** Rigid-body truth model: principal inertia, optional constant-gravity pendulum torque. */
template <typename T>
struct RigidBodyParams {
  Vec3<T> inertia{T(1), T(1), T(1)};           // principal moments, kg m^2
  bool pendulum = false;
  Vec3<T> mgl{T(0), T(0), T(0)};               // mass * gravity * lever vector, N m
  Vec3<T> gravity_dir{T(0), T(0), T(-1)};      // unit gravity direction, inertial frame
};

/** True states sampled at the step grid: R_k and body rate Omega_k, k = 0..K. */
template <typename T>
struct TruthTrajectory {
  T h = T(0);
  std::vector<Mat3<T>> R;
  std::vector<Vec3<T>> omega;
};

namespace detail {

/** Inverse right-trivialized derivative of exp, truncated to the order RK4 needs. */
template <typename T>
Vec3<T> dexpinv(const Vec3<T>& u, const Vec3<T>& w) {
  const Vec3<T> c = u.cross(w);
  return w - T(0.5) * c + (T(1) / T(12)) * u.cross(c);
}

template <typename T>
Vec3<T> body_accel(const RigidBodyParams<T>& p, const Mat3<T>& r, const Vec3<T>& om) {
  Vec3<T> tau = Vec3<T>::Zero();
  if (p.pendulum) tau = p.mgl.cross(Vec3<T>(r.transpose() * p.gravity_dir));
  const Vec3<T> jw = p.inertia.cwiseProduct(om);
  return (jw.cross(om) + tau).cwiseQuotient(p.inertia);
}

}  // namespace detail

/**
 * @brief One Munthe-Kaas RK4 step of the coupled attitude/rate dynamics
 * Rdot = R hat(Omega), J Omegadot = (J Omega) x Omega + torque(R).
 *
 * The attitude increment is composed through exact exponentials, so R stays
 * on SO(3) up to roundoff regardless of step size.
 */
template <typename T>
void rigid_body_step(const RigidBodyParams<T>& p, T h, Mat3<T>& r, Vec3<T>& om) {
  const Vec3<T> zero = Vec3<T>::Zero();

  const Vec3<T> w1 = h * om;
  const Vec3<T> a1 = h * detail::body_accel(p, r, om);
  const Vec3<T> t1 = detail::dexpinv(zero, w1);

  const Vec3<T> u2 = T(0.5) * t1;
  const Mat3<T> r2 = r * exp_rot(u2);
  const Vec3<T> om2 = om + T(0.5) * a1;
  const Vec3<T> w2 = h * om2;
  const Vec3<T> a2 = h * detail::body_accel(p, r2, om2);
  const Vec3<T> t2 = detail::dexpinv(u2, w2);

  const Vec3<T> u3 = T(0.5) * t2;
  const Mat3<T> r3 = r * exp_rot(u3);
  const Vec3<T> om3 = om + T(0.5) * a2;
  const Vec3<T> w3 = h * om3;
  const Vec3<T> a3 = h * detail::body_accel(p, r3, om3);
  const Vec3<T> t3 = detail::dexpinv(u3, w3);

  const Vec3<T> u4 = t3;
  const Mat3<T> r4 = r * exp_rot(u4);
  const Vec3<T> om4 = om + a3;
  const Vec3<T> w4 = h * om4;
  const Vec3<T> a4 = h * detail::body_accel(p, r4, om4);
  const Vec3<T> t4 = detail::dexpinv(u4, w4);

  r = r * exp_rot<T>((t1 + T(2) * t2 + T(2) * t3 + t4) / T(6));
  om += (a1 + T(2) * a2 + T(2) * a3 + a4) / T(6);
}

/**
 * @brief Integrate the truth over steps of length h with 4th-order substeps.
 *
 * The attitude is re-projected onto SO(3) every 1000 substeps to bound
 * orthonormality drift over long trajectories.
 */
template <typename T>
TruthTrajectory<T> generate_truth(const RigidBodyParams<T>& p, const Mat3<T>& r0, const Vec3<T>& om0, T duration,
                                  T h, int substeps = 10) {
  if (h <= T(0) || duration <= T(0) || substeps < 1) throw ConfigError("generate_truth: bad time grid");
  if (p.inertia.minCoeff() <= T(0)) throw ConfigError("generate_truth: inertia must be positive");
  const long steps = std::lround(duration / h);
  TruthTrajectory<T> out;
  out.h = h;
  out.R.reserve(steps + 1);
  out.omega.reserve(steps + 1);
  Mat3<T> r = r0;
  Vec3<T> om = om0;
  out.R.push_back(r);
  out.omega.push_back(om);
  const T hs = h / T(substeps);
  long products = 0;
  for (long k = 0; k < steps; ++k) {
    for (int s = 0; s < substeps; ++s) {
      rigid_body_step(p, hs, r, om);
      if (++products % 1000 == 0) r = project_to_so3(r);
    }
    out.R.push_back(r);
    out.omega.push_back(om);
  }
  return out;
}

}  // namespace mfatt
