#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "mfatt/circle_fusion.hpp"
#include "mfatt/errors.hpp"
#include "mfatt/so3.hpp"

namespace mfatt {

/** One-dimensional filter state for rotation about a fixed body axis. */
template <typename T>
struct UniaxialState {
  T theta_hat;    // estimated angle, rad, in [-pi, pi)
  T kappa;        // in-plane concentration
  T kappa_star;   // off-axis concentration
};

/**
 * @brief Gyro propagation of the one-dimensional filter.
 *
 * theta advances by omega*h; kappa contracts harmonically; kappa_star follows
 * the closed-form residual of the joint contraction and can legitimately go
 * negative (kappa + kappa_star stays positive).
 */
template <typename T>
UniaxialState<T> uniaxial_predict(const UniaxialState<T>& s, T omega_tilde, T h, T sigma, T sigma_star) {
  const T sum = s.kappa + s.kappa_star;
  return {wrap_angle(s.theta_hat + omega_tilde * h),
          s.kappa / (T(1) + T(2) * s.kappa * sigma),
          sum / (T(1) + sigma_star * sum) - s.kappa / (T(1) + T(2) * s.kappa * sigma)};
}

/** @brief Measurement update: the single-axis Bayes fusion with additive kappa_star. */
template <typename T>
UniaxialState<T> uniaxial_update(const UniaxialState<T>& s, T theta_m, T kappa_m, T kappa_m_star) {
  const SubsetParams<T> post = fuse_mfd_1d(s.kappa, kappa_m, wrap_angle(theta_m - s.theta_hat));
  return {wrap_angle(s.theta_hat + post.theta_bar), post.kappa, s.kappa_star + kappa_m_star};
}

/** @brief Lyapunov value V = kappa (1 - cos(theta - theta_hat)). */
template <typename T>
T lyapunov(const UniaxialState<T>& s, T theta_true) {
  return s.kappa * (T(1) - std::cos(theta_true - s.theta_hat));
}

/**
 * Bounds on the per-step noise parameters of a single-axis run plus the
 * allowed initial-error margin epsilon; carries the derived certificate
 * constants.
 */
template <typename T>
struct StabilityConstants {
  T alpha1, alpha2;  // sigma_k in (alpha1, alpha2)
  T beta1, beta2;    // kappa_m in (beta1, beta2)
  T epsilon;         // initial Frobenius-style error <= 4 - epsilon

  T gamma1() const { return beta1 * std::sqrt(epsilon - epsilon * epsilon / T(4)); }

  T gamma2() const {
    const T a = T(1) / (T(2) * alpha1);
    const T gb1 = std::sqrt((a - beta1) * (a - beta1) + beta1 * epsilon * a);
    const T gb2 = std::sqrt((a - beta2) * (a - beta2) + beta2 * epsilon * a);
    return std::max({beta2, gb1, gb2});
  }

  /** Contraction factor 1 + 2 a2 b1 sqrt(eps - eps^2/4) of the exponential bound. */
  T rate() const { return T(1) + T(2) * alpha2 * beta1 * std::sqrt(epsilon - epsilon * epsilon / T(4)); }
};

/** A recorded single-axis run: posterior states, truth angles, and the sigma draws. */
template <typename T>
struct CertificateRun {
  std::vector<UniaxialState<T>> states;  // k = 0..K, state 0 is the prior
  std::vector<T> theta_true;             // k = 0..K
  std::vector<T> sigma;                  // sigma_k for k = 1..K
};

/** Per-step certificate record; bound is the exponential envelope on the error e = 2(1 - cos). */
template <typename T>
struct CertificateStep {
  long k;
  T theta_err;
  T kappa;
  T V;
  T bound;
};

template <typename T>
struct CertificateReport {
  std::vector<CertificateStep<T>> steps;
  bool pass = true;
  long first_violation = -1;
  std::string first_violation_kind;
  long gamma1_bound_violations = 0;  // reported only, never asserted
  T gamma1 = T(0), gamma2 = T(0), rate = T(0);
};

/**
 * @brief Check the exponential-stability certificate over a recorded run.
 *
 * Asserts, for every step k, the printed envelope
 *   e_k <= (kappa0 / gamma2) rate^{-k} e_0    with e = 2(1 - cos(theta - theta_hat)),
 * monotone decrease of e across updates, and the Lyapunov chain
 *   V_k <= V_{k-1} / (1 + 2 kappa_{k-1} sigma_k).
 * The gamma1 variant of the envelope is tallied in the report but not
 * asserted (the two constants disagree in the source analysis; the printed
 * one is checked).
 */
template <typename T>
CertificateReport<T> stability_certificate(const CertificateRun<T>& run, const StabilityConstants<T>& c) {
  if (run.states.empty() || run.states.size() != run.theta_true.size() ||
      run.sigma.size() + 1 != run.states.size())
    throw ConfigError("stability_certificate: inconsistent run lengths");
  CertificateReport<T> rep;
  rep.gamma1 = c.gamma1();
  rep.gamma2 = c.gamma2();
  rep.rate = c.rate();
  const T kappa0 = run.states[0].kappa;
  auto err = [&](size_t k) { return T(2) * (T(1) - std::cos(run.theta_true[k] - run.states[k].theta_hat)); };
  const T e0 = err(0);
  if (e0 > T(4) - c.epsilon + T(1e-12)) throw ConfigError("stability_certificate: initial error exceeds 4 - epsilon");

  const T slack = T(1e-9);
  T decay = T(1);
  for (size_t k = 0; k < run.states.size(); ++k) {
    const T e = err(k);
    const T v = lyapunov(run.states[k], run.theta_true[k]);
    const T bound = (kappa0 / rep.gamma2) * decay * e0;
    rep.steps.push_back({static_cast<long>(k), wrap_angle(run.theta_true[k] - run.states[k].theta_hat),
                         run.states[k].kappa, v, bound});
    auto fail = [&](const char* kind) {
      if (rep.pass) {
        rep.pass = false;
        rep.first_violation = static_cast<long>(k);
        rep.first_violation_kind = kind;
      }
    };
    if (e > bound * (T(1) + slack) + T(1e-15)) fail("exponential_bound");
    if (e > (kappa0 / rep.gamma1) * decay * e0 * (T(1) + slack) + T(1e-15)) ++rep.gamma1_bound_violations;
    if (k > 0) {
      const T e_prev = err(k - 1);
      if (e > e_prev * (T(1) + slack) + T(1e-15)) fail("monotone_error");
      const T v_prev = lyapunov(run.states[k - 1], run.theta_true[k - 1]);
      const T v_chain = v_prev / (T(1) + T(2) * run.states[k - 1].kappa * run.sigma[k - 1]);
      if (v > v_chain * (T(1) + slack) + T(1e-15)) fail("lyapunov_chain");
    }
    decay /= rep.rate;
  }
  return rep;
}

/** @brief Throwing wrapper: CertificateViolation with the first failing step. */
template <typename T>
void assert_certificate(const CertificateReport<T>& rep) {
  if (!rep.pass)
    throw CertificateViolation("certificate violated at step " + std::to_string(rep.first_violation) + " (" +
                               rep.first_violation_kind + ")");
}

/**
 * @brief Draw a random noise-free-measurement run satisfying the certificate
 * preconditions.
 *
 * sigma_k and kappa_m are uniform over their open intervals; the initial
 * angle error is uniform over the full admissible range
 * |d0| <= arccos(-1 + eps/2). kappa0 is drawn in [3, 6] * gamma2: the printed
 * envelope prefactor kappa0/gamma2 must be >= 1 at k = 0, and sweeping shows
 * transient violations up to roughly 2*gamma2, so the generator stays above
 * that with margin.
 */
template <typename T, typename Rng>
CertificateRun<T> generate_certificate_run(const StabilityConstants<T>& c, long steps, Rng& rng, T h = T(0.02)) {
  std::uniform_real_distribution<T> u01(T(0), T(1));
  const T g2 = c.gamma2();
  const T kappa0 = (T(3) + T(3) * u01(rng)) * g2;
  const T d_max = std::acos(T(-1) + c.epsilon / T(2));
  const T d0 = (T(2) * u01(rng) - T(1)) * d_max;

  CertificateRun<T> run;
  T theta = wrap_angle(T(2) * T(M_PI) * u01(rng) - T(M_PI));
  run.theta_true.push_back(theta);
  run.states.push_back({wrap_angle(theta - d0), kappa0, kappa0});
  for (long k = 1; k <= steps; ++k) {
    const T omega = T(2) * u01(rng) - T(1);
    const T sigma = c.alpha1 + (c.alpha2 - c.alpha1) * u01(rng);
    const T kappa_m = c.beta1 + (c.beta2 - c.beta1) * u01(rng);
    theta = wrap_angle(theta + omega * h);
    UniaxialState<T> s = uniaxial_predict(run.states.back(), omega, h, sigma, sigma);
    s = uniaxial_update(s, theta, kappa_m, kappa_m);
    run.states.push_back(s);
    run.theta_true.push_back(theta);
    run.sigma.push_back(sigma);
  }
  return run;
}

}  // namespace mfatt
