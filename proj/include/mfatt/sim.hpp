#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "mfatt/errors.hpp"
#include "mfatt/filters.hpp"
#include "mfatt/matrix_fisher.hpp"
#include "mfatt/rigid_body.hpp"
#include "mfatt/sampling.hpp"
#include "mfatt/so3.hpp"
#include "mfatt/wahba.hpp"

namespace mfatt {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/**
 * @brief Independent generator for (run, sensor) pairs derived from one base seed.
 *
 * Streams are decorrelated by splitmix64 mixing, so adding runs or sensors
 * never shifts the noise another stream sees.
 */
inline std::mt19937_64 rng_stream(std::uint64_t base_seed, std::uint64_t run_index, std::uint64_t sensor_id) {
  std::uint64_t s = detail::splitmix64(base_seed);
  s = detail::splitmix64(s ^ (0x632be59bd9b4e019ULL * (run_index + 1)));
  s = detail::splitmix64(s ^ (0x9e3779b97f4a7c15ULL * (sensor_id + 1)));
  return std::mt19937_64(s);
}

/**
 * @brief Gyro measurements consistent with the sampled truth increments.
 *
 * The measured rate satisfies exp_rot(h w_meas + n) = R_{k-1}^T R_k exactly,
 * with n drawn from N(0, Q) and Q = h sigma^2 I. A filter that propagates by
 * the exponential of the measured rate therefore sees exactly the modeled
 * error, with no discretization residue on top.
 *
 * @param sigma  rate noise density, rad / sqrt(s)
 * @return one sample per step k = 1..K; sample i propagates R_{i} -> R_{i+1}.
 */
template <typename T>
std::vector<GyroSample<T>> simulate_gyro(const TruthTrajectory<T>& truth, T sigma, std::mt19937_64& rng) {
  if (truth.R.size() < 2) throw EmptyInput("simulate_gyro: trajectory has no steps");
  const T h = truth.h;
  const Mat3<T> q = (h * sigma * sigma) * Mat3<T>::Identity();
  std::normal_distribution<T> gauss(T(0), T(1));
  std::vector<GyroSample<T>> out;
  out.reserve(truth.R.size() - 1);
  const T sn = std::sqrt(h) * sigma;
  for (std::size_t k = 1; k < truth.R.size(); ++k) {
    const Vec3<T> v = log_rot<T>(truth.R[k - 1].transpose() * truth.R[k]);
    const Vec3<T> n(sn * gauss(rng), sn * gauss(rng), sn * gauss(rng));
    out.push_back(GyroSample<T>{(v - n) / h, h, q});
  }
  return out;
}

/** Epoch schedule: measurement at every step k with k % every_n == 0, k >= every_n. */
struct EpochSchedule {
  long every_n = 1;
  bool contains(long k) const { return k >= every_n && k % every_n == 0; }
};

/**
 * @brief Per-epoch reference-vector measurements b = R^T e + v, v ~ N(0, G_i).
 *
 * Weights are left at the shared default (see apply_default_weights).
 */
template <typename T>
std::vector<VectorMeasSet<T>> simulate_vectors(const TruthTrajectory<T>& truth,
                                               const std::vector<Vec3<T>>& references,
                                               const std::vector<Mat3<T>>& noise_cov, EpochSchedule epochs,
                                               std::mt19937_64& rng) {
  if (references.empty()) throw EmptyInput("simulate_vectors: no reference directions");
  if (references.size() != noise_cov.size()) throw ConfigError("simulate_vectors: references/noise size mismatch");
  std::vector<VectorMeasSet<T>> out(truth.R.size());
  for (std::size_t k = 0; k < truth.R.size(); ++k) {
    if (!epochs.contains(static_cast<long>(k))) continue;
    VectorMeasSet<T> set;
    set.reserve(references.size());
    for (std::size_t i = 0; i < references.size(); ++i) {
      const Vec3<T> b = truth.R[k].transpose() * references[i] + sample_gaussian_vec3(noise_cov[i], rng);
      set.push_back(VectorMeas<T>{references[i], b, noise_cov[i], T(1)});
    }
    apply_default_weights(set);
    out[k] = std::move(set);
  }
  return out;
}

/** How a direct attitude sensor is corrupted and which invariant side that matches. */
template <typename T>
struct DirectAttitudeModel {
  Side side = Side::Left;
  bool gaussian = false;     // false: R_m from a matrix Fisher perturbation, true: exponential of a Gaussian
  Mat3<T> N = Mat3<T>::Identity();  // perturbation concentration (matrix Fisher case)
  Mat3<T> P = Mat3<T>::Identity();  // perturbation covariance (Gaussian case)
};

/**
 * @brief Noisy whole-attitude measurements at the given epochs.
 *
 * Left side composes the perturbation on the body side (R_m = R dR), right
 * side on the inertial side (R_m = dR R). The reported concentration is the
 * model's N for the matrix Fisher case and covariance_to_mfd(P) otherwise,
 * with proper values clamped to 1e6 so near-exact sensors stay invertible
 * downstream.
 */
template <typename T>
std::vector<AttitudeMeasurement<T>> simulate_direct_attitude(const TruthTrajectory<T>& truth,
                                                             const DirectAttitudeModel<T>& model,
                                                             EpochSchedule epochs, std::mt19937_64& rng) {
  constexpr T kappa_cap = T(1e6);
  Mat3<T> n_meas;
  if (model.gaussian) {
    n_meas = covariance_to_mfd<T>(model.P);
  } else {
    n_meas = model.N;
  }
  {
    const ProperSvd<T> dec = proper_svd<T>(n_meas);
    const Vec3<T> s = dec.s.cwiseMin(kappa_cap);
    n_meas = dec.U * s.asDiagonal() * dec.V.transpose();
  }
  std::vector<AttitudeMeasurement<T>> out(truth.R.size(),
                                          AttitudeMeasurement<T>{Mat3<T>::Identity(), n_meas, model.side});
  for (std::size_t k = 0; k < truth.R.size(); ++k) {
    if (!epochs.contains(static_cast<long>(k))) {
      out[k].R_meas.setZero();  // no measurement at this step
      continue;
    }
    Mat3<T> dr;
    if (model.gaussian) {
      dr = exp_rot<T>(sample_gaussian_vec3(model.P, rng));
    } else {
      dr = sample_mfd(MatrixFisher<T>{model.N}, rng);
    }
    out[k].R_meas = model.side == Side::Left ? Mat3<T>(truth.R[k] * dr) : Mat3<T>(dr * truth.R[k]);
  }
  return out;
}

/**
 * @brief Concentration of the projected-Gaussian direction x/|x|, x ~ N(mu, Sigma),
 * matched so that a vector sensor can be summarized by a single kappa.
 */
template <typename T>
T gaussian_dir_kappa(const Vec3<T>& mu, const Mat3<T>& sigma) {
  const T tr = sigma.trace();
  if (tr <= T(0)) throw NotPositiveDefinite("gaussian_dir_kappa: covariance trace must be positive");
  return T(3) * mu.squaredNorm() / tr;
}

}  // namespace mfatt
