#pragma once

#include <Eigen/Dense>

#include "mfatt/errors.hpp"
#include "mfatt/matrix_fisher.hpp"
#include "mfatt/so3.hpp"
#include "mfatt/wahba.hpp"

namespace mfatt {

/** One gyro reading over a step: measured rate, step length, discrete noise covariance. */
template <typename T>
struct GyroSample {
  Vec3<T> omega_meas;
  T dt;
  Mat3<T> Q;
};

/** Direct attitude measurement with a matrix Fisher error model on the given side. */
template <typename T>
struct AttitudeMeasurement {
  Mat3<T> R_meas;
  Mat3<T> N_meas;
  Side side;
};

namespace detail {
template <typename T>
inline Mat3<T> sym(const Mat3<T>& m) {
  return T(0.5) * (m + m.transpose());
}
}  // namespace detail

/**
 * @brief Gyro propagation of a right-error belief.
 *
 * Central attitude advances by the exact exponential; the matched covariance
 * picks up R Q R^T expressed at the pre-increment central, then maps back to
 * the matrix Fisher error parameter.
 */
template <typename T>
InvariantBelief<T> mf_right_predict(const InvariantBelief<T>& belief, const GyroSample<T>& gyro) {
  if (belief.side != Side::Right) throw ConfigError("mf_right_predict: belief side must be Right");
  Mat3<T> p = mfd_to_covariance(belief.N);
  p = detail::sym<T>(p + belief.central * gyro.Q * belief.central.transpose());
  return {Side::Right, belief.central * exp_rot<T>(gyro.dt * gyro.omega_meas), covariance_to_mfd(p)};
}

/**
 * @brief Bayes update of a right-error belief with a right-side attitude measurement.
 *
 * The posterior parameter is F = N_meas R_meas + N_prior R_prior; its proper
 * left polar factors give the posterior (N, central) in closed form.
 */
template <typename T>
InvariantBelief<T> mf_right_update(const InvariantBelief<T>& belief, const AttitudeMeasurement<T>& meas) {
  if (belief.side != Side::Right || meas.side != Side::Right)
    throw ConfigError("mf_right_update: sides must both be Right");
  const Mat3<T> f = meas.N_meas * meas.R_meas + belief.N * belief.central;
  const auto [kp, mp] = polar_left(f);
  return {Side::Right, mp, kp};
}

/** @brief Gyro propagation of a left-error belief: P <- Phi^T P Phi + Q with Phi = exp_rot(h w). */
template <typename T>
InvariantBelief<T> mf_left_predict(const InvariantBelief<T>& belief, const GyroSample<T>& gyro) {
  if (belief.side != Side::Left) throw ConfigError("mf_left_predict: belief side must be Left");
  const Mat3<T> phi = exp_rot<T>(gyro.dt * gyro.omega_meas);
  const Mat3<T> p = detail::sym<T>(phi.transpose() * mfd_to_covariance(belief.N) * phi + gyro.Q);
  return {Side::Left, belief.central * phi, covariance_to_mfd(p)};
}

/** @brief Bayes update of a left-error belief: F = R_meas N_meas + R_prior N_prior, proper right polar. */
template <typename T>
InvariantBelief<T> mf_left_update(const InvariantBelief<T>& belief, const AttitudeMeasurement<T>& meas) {
  if (belief.side != Side::Left || meas.side != Side::Left)
    throw ConfigError("mf_left_update: sides must both be Left");
  const Mat3<T> f = meas.R_meas * meas.N_meas + belief.central * belief.N;
  const auto [m, k] = polar_right(f);
  return {Side::Left, m, k};
}

/** Invariant-EKF baseline state: attitude estimate and right-invariant error covariance. */
template <typename T>
struct IekfState {
  Mat3<T> R_hat;
  Mat3<T> P;
};

template <typename T>
IekfState<T> iekf_predict(const IekfState<T>& st, const GyroSample<T>& gyro) {
  return {st.R_hat * exp_rot<T>(gyro.dt * gyro.omega_meas),
          detail::sym<T>(st.P + st.R_hat * gyro.Q * st.R_hat.transpose())};
}

/**
 * @brief Stacked-vector measurement update for the right-invariant error
 * R = exp_rot(xi) R_hat: per vector H_i = R_hat^T hat(e_i) and
 * z_i = b_meas_i - R_hat^T e_i.
 */
template <typename T>
IekfState<T> iekf_update(const IekfState<T>& st, const VectorMeasSet<T>& meas) {
  if (meas.empty()) throw EmptyInput("iekf_update: no measurements");
  const int n = static_cast<int>(meas.size());
  Eigen::Matrix<T, Eigen::Dynamic, 3> h(3 * n, 3);
  Eigen::Matrix<T, Eigen::Dynamic, 1> z(3 * n);
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> g =
      Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>::Zero(3 * n, 3 * n);
  for (int i = 0; i < n; ++i) {
    h.template block<3, 3>(3 * i, 0) = st.R_hat.transpose() * hat(meas[i].e);
    z.template segment<3>(3 * i) = meas[i].b_meas - st.R_hat.transpose() * meas[i].e;
    g.template block<3, 3>(3 * i, 3 * i) = meas[i].G;
  }
  const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> s = h * st.P * h.transpose() + g;
  Eigen::LLT<Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>> llt(s);
  if (llt.info() != Eigen::Success) throw SingularInnovation();
  const Eigen::Matrix<T, 3, Eigen::Dynamic> k = st.P * h.transpose() * llt.solve(
      Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>::Identity(3 * n, 3 * n));
  const Vec3<T> xi = k * z;
  return {exp_rot(xi) * st.R_hat, detail::sym<T>((Mat3<T>::Identity() - k * h) * st.P)};
}

template <typename T>
IekfState<T> iekf_step(const IekfState<T>& st, const GyroSample<T>& gyro, const VectorMeasSet<T>& meas) {
  return iekf_update(iekf_predict(st, gyro), meas);
}

}  // namespace mfatt
