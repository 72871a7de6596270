#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "mfatt/errors.hpp"

namespace mfatt {

template <typename T>
using Vec3 = Eigen::Matrix<T, 3, 1>;
template <typename T>
using Mat3 = Eigen::Matrix<T, 3, 3>;

/** @brief Skew-symmetric matrix such that hat(v) * y = v x y. */
template <typename T>
Mat3<T> hat(const Vec3<T>& v) {
  Mat3<T> m;
  m << T(0), -v.z(), v.y(),
       v.z(), T(0), -v.x(),
      -v.y(), v.x(), T(0);
  return m;
}

/** @brief Inverse of hat; the antisymmetric part of m is used. */
template <typename T>
Vec3<T> vee(const Mat3<T>& m) {
  Mat3<T> a = T(0.5) * (m - m.transpose());
  return Vec3<T>(a(2, 1), a(0, 2), a(1, 0));
}

/** @brief Rotation matrix exponential (Rodrigues), series-expanded near zero. */
template <typename T>
Mat3<T> exp_rot(const Vec3<T>& v) {
  const T th2 = v.squaredNorm();
  const T th = std::sqrt(th2);
  T a, b;  // sin(th)/th and (1-cos(th))/th^2
  if (th < T(1e-4)) {
    a = T(1) - th2 / T(6) + th2 * th2 / T(120);
    b = T(0.5) - th2 / T(24) + th2 * th2 / T(720);
  } else {
    a = std::sin(th) / th;
    b = (T(1) - std::cos(th)) / th2;
  }
  const Mat3<T> k = hat(v);
  return Mat3<T>::Identity() + a * k + b * k * k;
}

/**
 * @brief Rotation logarithm, three-branch form.
 *
 * Branches: small-angle series below 1e-4 rad, generic atan2-based middle
 * branch, and a symmetric-part branch approaching pi. Angles within tol_pi of
 * pi throw AngleNearPi; the result norm lies in [0, pi).
 */
template <typename T>
Vec3<T> log_rot(const Mat3<T>& r, T tol_pi = T(1e-6)) {
  const Vec3<T> w = vee(r);  // sin(th) * axis
  const T s = w.norm();
  const T c = T(0.5) * (r.trace() - T(1));
  const T th = std::atan2(s, c);
  if (th >= T(M_PI) - tol_pi) throw AngleNearPi();
  if (th < T(1e-4)) {
    const T th2 = th * th;
    return (T(1) + th2 / T(6) + T(7) / T(360) * th2 * th2) * w;
  }
  if (th < T(M_PI) - T(1e-4)) return (th / s) * w;
  // Near pi the skew part cancels; recover the axis from the symmetric part
  // R + R^T = 2I + 2(1 - cos th) (a a^T - I).
  const Mat3<T> b = (T(0.5) / (T(1) - c)) * (T(0.5) * (r + r.transpose()) - c * Mat3<T>::Identity());
  int j;
  b.diagonal().maxCoeff(&j);
  Vec3<T> axis = b.col(j) / std::sqrt(b(j, j));
  axis.normalize();
  if (axis.dot(w) < T(0)) axis = -axis;
  return th * axis;
}

/** Proper singular value decomposition: U, V in SO(3), s1 >= s2 >= |s3|. */
template <typename T>
struct ProperSvd {
  Mat3<T> U;
  Vec3<T> s;
  Mat3<T> V;

  Mat3<T> reconstruct() const { return U * s.asDiagonal() * V.transpose(); }
};

/**
 * @brief Proper SVD of a 3x3 matrix.
 *
 * Built from a standard SVD by flipping the third columns of U and V (and the
 * sign of s3) until det U = det V = +1; sign(s3) = sign(det F).
 */
template <typename T>
ProperSvd<T> proper_svd(const Mat3<T>& f) {
  Eigen::JacobiSVD<Mat3<T>> svd(f, Eigen::ComputeFullU | Eigen::ComputeFullV);
  ProperSvd<T> out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  if (out.U.determinant() < T(0)) {
    out.U.col(2) *= T(-1);
    out.s(2) *= T(-1);
  }
  if (out.V.determinant() < T(0)) {
    out.V.col(2) *= T(-1);
    out.s(2) *= T(-1);
  }
  return out;
}

/** @brief Right polar factors F = M * K with M in SO(3), K = V S V^T symmetric. */
template <typename T>
std::pair<Mat3<T>, Mat3<T>> polar_right(const Mat3<T>& f) {
  const ProperSvd<T> p = proper_svd(f);
  return {p.U * p.V.transpose(), p.V * p.s.asDiagonal() * p.V.transpose()};
}

/** @brief Left polar factors F = K' * M' with K' = U S U^T symmetric, M' in SO(3). */
template <typename T>
std::pair<Mat3<T>, Mat3<T>> polar_left(const Mat3<T>& f) {
  const ProperSvd<T> p = proper_svd(f);
  return {p.U * p.s.asDiagonal() * p.U.transpose(), p.U * p.V.transpose()};
}

/** @brief Nearest rotation matrix (proper SVD projection). */
template <typename T>
Mat3<T> project_to_so3(const Mat3<T>& m) {
  const ProperSvd<T> p = proper_svd(m);
  return p.U * p.V.transpose();
}

/**
 * @brief Geodesic distance ||log(R1^T R2)|| in [0, pi].
 *
 * Uses atan2 of the skew and trace parts directly, so it is well-defined and
 * accurate at every angle including exactly pi.
 */
template <typename T>
T geodesic_angle(const Mat3<T>& r1, const Mat3<T>& r2) {
  const Mat3<T> e = r1.transpose() * r2;
  const T s = vee(e).norm();
  const T c = T(0.5) * (e.trace() - T(1));
  return std::atan2(s, c);
}

/** @brief Wrap an angle to [-pi, pi). */
template <typename T>
T wrap_angle(T a) {
  a = std::fmod(a + T(M_PI), T(2) * T(M_PI));
  if (a < T(0)) a += T(2) * T(M_PI);
  return a - T(M_PI);
}

}  // namespace mfatt
