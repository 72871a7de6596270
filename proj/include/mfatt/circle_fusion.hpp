#pragma once

#include <cmath>

#include "mfatt/subset.hpp"

namespace mfatt {

/**
 * @brief Bayes fusion of two matrix Fisher factors restricted to one axis.
 *
 * Inputs are the prior concentration, the measurement concentration, and the
 * measurement mean angle relative to the prior mean (dtheta in [-pi, pi)).
 * Returns the posterior concentration and mean angle relative to the prior:
 *   kappa+ = |kp + km e^{i dtheta}|, theta+ = arg(kp + km e^{i dtheta}).
 * The phasor form equals the signed-arccos closed form and stays accurate
 * near dtheta = 0 and near full cancellation. kappa+ = 0 gives theta+ = 0 by
 * convention (uniform posterior on the subset).
 */
template <typename T>
SubsetParams<T> fuse_mfd_1d(T kappa_prior, T kappa_meas, T dtheta) {
  const T re = kappa_prior + kappa_meas * std::cos(dtheta);
  const T im = kappa_meas * std::sin(dtheta);
  const T kappa = std::hypot(re, im);
  const T theta = kappa > T(0) ? std::atan2(im, re) : T(0);
  return {theta, kappa};
}

/**
 * @brief Fusion of two concentrated Gaussian factors on one axis.
 *
 * Information add: kappa+ = kp + km; mean shifts by the information-weighted
 * fraction of dtheta. Angles relative to the prior mean.
 */
template <typename T>
SubsetParams<T> fuse_cgd_1d(T kappa_prior, T kappa_meas, T dtheta) {
  const T kappa = kappa_prior + kappa_meas;
  const T theta = kappa > T(0) ? (kappa_meas / kappa) * dtheta : T(0);
  return {theta, kappa};
}

/**
 * @brief Posterior mean-angle difference theta+_mfd - theta+_cgd.
 *
 * k is the measurement-to-prior concentration ratio kappa_meas / kappa_prior.
 * Odd in dtheta; zero for k in {0, 1} and at dtheta = 0; positive for k > 1
 * on (0, pi], negative for 0 < k < 1. The k = 1 case returns exactly 0 (both
 * posteriors sit at the half angle), which also fixes the continuous
 * extension at (k, dtheta) = (1, pi) where the phasor cancels.
 */
template <typename T>
T delta_theta_plus(T k, T dtheta) {
  if (k == T(1)) return T(0);
  const T mfd = fuse_mfd_1d(T(1), k, dtheta).theta_bar;
  const T cgd = fuse_cgd_1d(T(1), k, dtheta).theta_bar;
  return mfd - cgd;
}

}  // namespace mfatt
