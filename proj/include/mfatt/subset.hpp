#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "mfatt/errors.hpp"
#include "mfatt/matrix_fisher.hpp"
#include "mfatt/so3.hpp"

namespace mfatt {

/** Single-axis subset of SO(3): rotations M0 * exp_rot(theta * w0). */
template <typename T>
struct Subset {
  Mat3<T> M0;
  Vec3<T> w0;
};

/** One-dimensional distribution parameters on a subset: density prop. to exp(kappa cos(theta - theta_bar)). */
template <typename T>
struct SubsetParams {
  T theta_bar;
  T kappa;
};

/**
 * @brief Subset through two attitudes: base M1, axis log_rot(M1^T M2) normalized.
 *
 * Throws CoincidentAttitudes when the attitudes agree within 1e-9 rad; the
 * axis is undefined there and the caller must supply a conventional one.
 */
template <typename T>
Subset<T> connecting_subset(const Mat3<T>& m1, const Mat3<T>& m2) {
  if (geodesic_angle(m1, m2) <= T(1e-9)) throw CoincidentAttitudes();
  const Vec3<T> v = log_rot<T>(m1.transpose() * m2);
  return {m1, v.normalized()};
}

/** @brief Signed angle of M along the subset axis; MeanNotInSubset when M is off-axis. */
template <typename T>
T subset_angle(const Mat3<T>& m, const Subset<T>& subset, T tol = T(1e-6)) {
  const Mat3<T> rel = subset.M0.transpose() * m;
  if (geodesic_angle(Mat3<T>::Identity().eval(), rel) <= tol) return T(0);
  const Vec3<T> v = log_rot(rel);
  const T theta = subset.w0.dot(v);
  if ((v - theta * subset.w0).norm() > tol * (T(1) + v.norm())) throw MeanNotInSubset();
  return theta;
}

/**
 * @brief Restriction of M(F) to a single-axis subset containing its mean.
 *
 * kappa = tr(K) - w0^T K w0 with K the right elliptical factor of F;
 * theta_bar is the signed subset angle of the mean attitude.
 */
template <typename T>
SubsetParams<T> mfd_subset_params(const MatrixFisher<T>& mf, const Subset<T>& subset) {
  const auto [m, k] = polar_right(mf.F);
  const T kappa = k.trace() - subset.w0.dot(k * subset.w0);
  return {subset_angle(m, subset), kappa};
}

/** @brief Restriction of a concentrated Gaussian to a subset: concentration w0^T P^{-1} w0. */
template <typename T>
SubsetParams<T> cgd_subset_params(const Cgd<T>& cgd, const Subset<T>& subset) {
  if (!is_symmetric(cgd.P)) throw NotSymmetric();
  Eigen::LLT<Mat3<T>> llt(cgd.P);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite();
  const T kappa = subset.w0.dot(llt.solve(subset.w0));
  return {subset_angle(cgd.mean, subset), kappa};
}

}  // namespace mfatt
