#pragma once

#include <cmath>
#include <vector>

#include "mfatt/circle_fusion.hpp"
#include "mfatt/matrix_fisher.hpp"
#include "mfatt/subset.hpp"

namespace mfatt {

template <typename T>
struct FusionReportRow {
  int step;          // fusion count, 1 or 2
  bool mfd;          // false: coordinate-Gaussian recurrence
  T kappa;
  T theta_abs;       // posterior mean angle from the measured attitude, rad, >= 0
};

/**
 * @brief Two successive fusions of one weak prior with a repeated confident
 * measurement at the identity, reported as subset parameters.
 *
 * The matrix rows fuse the full 3x3 parameters (F <- F + K_m) and read the
 * posterior angle off the connecting subset; the Gaussian rows run the 1-D
 * recurrence on the rounded subset parameters of the same setup. The two
 * models start from the same geometry but disagree after fusion, which is
 * the point of the comparison.
 */
template <typename T>
std::vector<FusionReportRow<T>> two_step_fusion_report() {
  const Vec3<T> w0 = Vec3<T>(T(0.54), T(0.54), T(0.65)).normalized();
  const Subset<T> subset{Mat3<T>::Identity(), w0};
  const T prior_angle = T(35) * T(M_PI) / T(36);

  Mat3<T> f = T(55) * exp_rot<T>(prior_angle * w0);
  const Mat3<T> k_meas = T(60) * Mat3<T>::Identity();

  std::vector<FusionReportRow<T>> rows;
  for (int step = 1; step <= 2; ++step) {
    f += k_meas;
    const SubsetParams<T> p = mfd_subset_params(MatrixFisher<T>{f}, subset);
    rows.push_back({step, true, p.kappa, std::abs(p.theta_bar)});
  }

  // Subset parameters of the same prior and measurement, rounded as tabulated.
  SubsetParams<T> c{prior_angle, T(110)};
  const T kappa_m = T(120);
  for (int step = 1; step <= 2; ++step) {
    const SubsetParams<T> rel = fuse_cgd_1d(c.kappa, kappa_m, wrap_angle(-c.theta_bar));
    c = SubsetParams<T>{c.theta_bar + rel.theta_bar, rel.kappa};
    rows.push_back({step, false, c.kappa, std::abs(c.theta_bar)});
  }
  return rows;
}

}  // namespace mfatt
