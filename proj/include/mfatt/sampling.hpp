#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <iostream>
#include <random>

#include "mfatt/matrix_fisher.hpp"
#include "mfatt/so3.hpp"

namespace mfatt {

namespace detail {

/** Hamilton quaternion (w, x, y, z) on S^3 to rotation matrix. */
template <typename T>
Mat3<T> quat_to_rot(const Eigen::Matrix<T, 4, 1>& q) {
  const T w = q(0), x = q(1), y = q(2), z = q(3);
  Mat3<T> r;
  r << T(1) - T(2) * (y * y + z * z), T(2) * (x * y - w * z), T(2) * (x * z + w * y),
       T(2) * (x * y + w * z), T(1) - T(2) * (x * x + z * z), T(2) * (y * z - w * x),
       T(2) * (x * z - w * y), T(2) * (y * z + w * x), T(1) - T(2) * (x * x + y * y);
  return r;
}

/** Solve sum_i 1/(b + 2 lam_i) = 1 for b in (0, 4]; the root is unique. */
template <typename T>
T acg_envelope_b(const Eigen::Matrix<T, 4, 1>& lam) {
  auto g = [&](T b) {
    T s = T(0);
    for (int i = 0; i < 4; ++i) s += T(1) / (b + T(2) * lam(i));
    return s;
  };
  T lo = T(1e-12), hi = T(4);
  for (int it = 0; it < 200; ++it) {
    const T mid = T(0.5) * (lo + hi);
    (g(mid) > T(1) ? lo : hi) = mid;
  }
  return T(0.5) * (lo + hi);
}

}  // namespace detail

/**
 * @brief Exact draw from M(F) by quaternion rejection sampling.
 *
 * In the singular frame of F the density becomes an antipodally symmetric
 * quadratic exponential on unit quaternions, exp(-q^T A q) with
 * A = diag(0, 2(s2+s3), 2(s1+s3), 2(s1+s2)). Proposals come from the angular
 * central Gaussian with concentration matched through the envelope parameter
 * b; acceptance uses the exact log ratio, so no approximation is involved for
 * any F including rank-deficient ones. A diagnostic line is written to stderr
 * if a single draw rejects 10^4 times (acceptance rate below the 1e-4 floor).
 */
template <typename T, typename Rng>
Mat3<T> sample_mfd(const MatrixFisher<T>& mf, Rng& rng) {
  const ProperSvd<T> svd = proper_svd(mf.F);
  const Vec3<T>& s = svd.s;
  const Eigen::Matrix<T, 4, 1> lam(T(0), T(2) * (s(1) + s(2)), T(2) * (s(0) + s(2)), T(2) * (s(0) + s(1)));
  const T b = detail::acg_envelope_b(lam);
  const T log_mstar = -(T(4) - b) / T(2) + T(2) * std::log(T(4) / b);

  std::normal_distribution<T> normal(T(0), T(1));
  std::uniform_real_distribution<T> unif(T(0), T(1));
  Eigen::Matrix<T, 4, 1> scale;
  for (int i = 0; i < 4; ++i) scale(i) = T(1) / std::sqrt(T(1) + T(2) * lam(i) / b);

  long tries = 0;
  for (;;) {
    Eigen::Matrix<T, 4, 1> q;
    for (int i = 0; i < 4; ++i) q(i) = normal(rng) * scale(i);
    q.normalize();
    const T u = lam.dot(q.cwiseProduct(q));
    const T log_ratio = -u + T(2) * std::log1p(T(2) * u / b) - log_mstar;
    if (std::log(unif(rng)) < log_ratio) {
      return svd.U * detail::quat_to_rot(q) * svd.V.transpose();
    }
    if (++tries == 10000) {
      std::cerr << "sample_mfd: acceptance rate below 1e-4 floor, still sampling exactly\n";
    }
  }
}

/** @brief Draw xi ~ N(0, P) through the (robust) eigenvalue square root of P. */
template <typename T, typename Rng>
Vec3<T> sample_gaussian_vec3(const Mat3<T>& p, Rng& rng) {
  Eigen::SelfAdjointEigenSolver<Mat3<T>> es(p);
  std::normal_distribution<T> normal(T(0), T(1));
  Vec3<T> z(normal(rng), normal(rng), normal(rng));
  return es.eigenvectors() * es.eigenvalues().cwiseMax(T(0)).cwiseSqrt().asDiagonal() * z;
}

}  // namespace mfatt
