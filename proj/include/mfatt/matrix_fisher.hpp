#pragma once

#include <Eigen/Dense>

#include "mfatt/errors.hpp"
#include "mfatt/so3.hpp"

namespace mfatt {

/** Matrix Fisher distribution on SO(3) with density proportional to etr(F^T R). */
template <typename T>
struct MatrixFisher {
  Mat3<T> F;
};

enum class Side { Left, Right };

/**
 * Attitude belief with invariant error: R = dR * central (Right side,
 * dR ~ M(N)) or R = central * dR (Left side). N is the symmetric error
 * parameter of the matrix Fisher error distribution.
 */
template <typename T>
struct InvariantBelief {
  Side side;
  Mat3<T> central;
  Mat3<T> N;
};

/** Concentrated Gaussian on SO(3): R = mean * exp_rot(xi) (Left) with xi ~ N(0, P). */
template <typename T>
struct Cgd {
  Side side;
  Mat3<T> mean;
  Mat3<T> P;
};

template <typename T>
bool is_symmetric(const Mat3<T>& m, T tol = T(1e-9)) {
  return (m - m.transpose()).template lpNorm<Eigen::Infinity>() <= tol * (T(1) + m.template lpNorm<Eigen::Infinity>());
}

/** @brief Mean (modal) attitude of M(F): the rotation factor of the polar decomposition. */
template <typename T>
Mat3<T> mean_attitude(const MatrixFisher<T>& mf) {
  const ProperSvd<T> p = proper_svd(mf.F);
  return p.U * p.V.transpose();
}

/** @brief Parameter of the rotated distribution: if R ~ M(F) then Rl R Rr ~ M(Rl F Rr). */
template <typename T>
MatrixFisher<T> rotate_mfd(const MatrixFisher<T>& mf, const Mat3<T>& rl, const Mat3<T>& rr) {
  return {rl * mf.F * rr};
}

/** @brief Parameter of the transposed variable: if dR ~ M(N), N symmetric, then dR^T ~ M(N). */
template <typename T>
MatrixFisher<T> transpose_mfd(const Mat3<T>& n) {
  if (!is_symmetric(n)) throw NotSymmetric();
  return {n};
}

template <typename T>
T unnormalized_log_density(const MatrixFisher<T>& mf, const Mat3<T>& r) {
  return (mf.F.transpose() * r).trace();
}

/**
 * @brief Covariance of the tangent-space Gaussian matched to the MFD error M(N).
 *
 * P = V (tr(S) I - S)^{-1} V^T from the proper SVD N = U S V^T. Requires
 * s_j + s_k > tol for every pair. The matched Gaussian degrades for weak
 * concentration; `low_concentration`, when given, is set when s2 + s3 < 5.
 */
template <typename T>
Mat3<T> mfd_to_covariance(const Mat3<T>& n, T tol = T(1e-12), bool* low_concentration = nullptr) {
  const ProperSvd<T> p = proper_svd(n);
  const Vec3<T> d(p.s(1) + p.s(2), p.s(0) + p.s(2), p.s(0) + p.s(1));
  if (d.minCoeff() <= tol) throw DegenerateConcentration();
  if (low_concentration) *low_concentration = p.s(1) + p.s(2) < T(5);
  return p.V * d.cwiseInverse().asDiagonal() * p.V.transpose();
}

/**
 * @brief Inverse of mfd_to_covariance.
 *
 * N = U (0.5 tr(L^{-1}) I - L^{-1}) U^T from the proper SVD P = U L U^T.
 * The smallest proper singular value of N may legitimately be <= 0 for
 * strongly anisotropic P.
 */
template <typename T>
Mat3<T> covariance_to_mfd(const Mat3<T>& p) {
  if (!is_symmetric(p)) throw NotSymmetric();
  const ProperSvd<T> svd = proper_svd(p);
  if (svd.s.minCoeff() <= T(0)) throw NotPositiveDefinite();
  const Vec3<T> li = svd.s.cwiseInverse();
  const Vec3<T> nd = Vec3<T>::Constant(T(0.5) * li.sum()) - li;
  return svd.U * nd.asDiagonal() * svd.U.transpose();
}

}  // namespace mfatt
