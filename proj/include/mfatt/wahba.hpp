#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mfatt/errors.hpp"
#include "mfatt/so3.hpp"

namespace mfatt {

/** One weighted vector observation: inertial reference e, measured body vector, noise covariance, weight. */
template <typename T>
struct VectorMeas {
  Vec3<T> e;
  Vec3<T> b_meas;
  Mat3<T> G;
  T w = T(1);
};

template <typename T>
using VectorMeasSet = std::vector<VectorMeas<T>>;

/** @brief Set weights to 1/tr(G_i), normalized to sum 1. */
template <typename T>
void apply_default_weights(VectorMeasSet<T>& meas) {
  T sum = T(0);
  for (auto& m : meas) {
    m.w = T(1) / m.G.trace();
    sum += m.w;
  }
  for (auto& m : meas) m.w /= sum;
}

/**
 * @brief Weighted least-squares attitude fit from vector pairs.
 *
 * R_hat = U V^T of the proper SVD of the profile matrix L = sum w e b^T; this
 * maximizes tr(L R^T), i.e. minimizes the weighted squared residual of
 * b_meas vs R^T e. Throws NonUniqueSolution when s2 + s3 of L is not above
 * uniqueness_tol (the fit has a one-parameter family of minimizers).
 */
template <typename T>
std::pair<Mat3<T>, ProperSvd<T>> wahba_svd(const VectorMeasSet<T>& meas, T uniqueness_tol = T(1e-8)) {
  if (meas.empty()) throw EmptyInput("wahba_svd: no measurements");
  Mat3<T> l = Mat3<T>::Zero();
  for (const auto& m : meas) l += m.w * m.e * m.b_meas.transpose();
  const ProperSvd<T> svd = proper_svd(l);
  if (svd.s(1) + svd.s(2) <= uniqueness_tol) throw NonUniqueSolution();
  return {svd.U * svd.V.transpose(), svd};
}

/**
 * @brief First-order covariance of the attitude fit error.
 *
 * Right side: ties the right-invariant error xi (R = exp_rot(xi) R_hat) to
 * the measurement perturbations through A xi = sum w e^ R_hat db with
 * A = tr(L R_hat^T) I - L R_hat^T, giving
 * P = sum w^2 (A^{-1} e^ R_hat) G (A^{-1} e^ R_hat)^T.
 * Left side: same construction for the left-invariant error with
 * B = tr(R_hat^T L) I - R_hat^T L and body-frame axes (R_hat^T e)^.
 * det A = (s1+s2)(s1+s3)(s2+s3) of the proper singular values of L, so the
 * uniqueness condition also guards invertibility here.
 */
template <typename T>
Mat3<T> meas_covariance(const VectorMeasSet<T>& meas, const Mat3<T>& r_hat, const ProperSvd<T>& svd, Side side,
                        T uniqueness_tol = T(1e-8)) {
  const Vec3<T>& s = svd.s;
  if ((s(0) + s(1)) * (s(0) + s(2)) * (s(1) + s(2)) <= uniqueness_tol) throw NonUniqueSolution();
  Mat3<T> l = Mat3<T>::Zero();
  for (const auto& m : meas) l += m.w * m.e * m.b_meas.transpose();
  Mat3<T> p = Mat3<T>::Zero();
  if (side == Side::Right) {
    const Mat3<T> a = (l * r_hat.transpose()).trace() * Mat3<T>::Identity() - l * r_hat.transpose();
    const Mat3<T> ai = a.inverse();
    for (const auto& m : meas) {
      const Mat3<T> j = m.w * ai * hat(m.e) * r_hat;
      p += j * m.G * j.transpose();
    }
  } else {
    const Mat3<T> b = (r_hat.transpose() * l).trace() * Mat3<T>::Identity() - r_hat.transpose() * l;
    const Mat3<T> bi = b.inverse();
    for (const auto& m : meas) {
      const Mat3<T> j = m.w * bi * hat<T>(r_hat.transpose() * m.e);
      p += j * m.G * j.transpose();
    }
  }
  return T(0.5) * (p + p.transpose());
}

}  // namespace mfatt
