#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "mfatt/errors.hpp"

namespace mfatt {

template <typename T>
struct ErrorSummary {
  T ae_deg = T(0);  // grand mean of per-step errors across runs
  T sd_deg = T(0);  // dispersion of the per-run means
};

/**
 * @brief Averaged error and its across-run standard deviation, in degrees.
 *
 * Input is one series per run of per-step errors in radians, all series the
 * same length K >= 1 (step 0 is excluded by the caller; the summary weights
 * every retained step equally). With M runs,
 *
 *   AE   = (1 / (M K)) sum_i sum_k E_ik
 *   SD   = sqrt( (1 / (M - 1)) sum_i (AE_i - AE)^2 ),  AE_i the run means,
 *
 * and SD = 0 when M = 1.
 */
template <typename T>
ErrorSummary<T> compute_metrics(const std::vector<std::vector<T>>& runs_rad) {
  if (runs_rad.empty()) throw EmptyInput("compute_metrics: no runs");
  const std::size_t steps = runs_rad.front().size();
  if (steps == 0) throw EmptyInput("compute_metrics: no steps");
  for (const auto& r : runs_rad)
    if (r.size() != steps) throw ConfigError("compute_metrics: ragged run lengths");

  const T to_deg = T(180) / T(M_PI);
  std::vector<T> run_means;
  run_means.reserve(runs_rad.size());
  T grand = T(0);
  for (const auto& r : runs_rad) {
    T acc = T(0);
    for (T e : r) acc += e;
    const T mean = acc / T(steps) * to_deg;
    run_means.push_back(mean);
    grand += mean;
  }
  ErrorSummary<T> out;
  out.ae_deg = grand / T(run_means.size());
  if (run_means.size() > 1) {
    T ss = T(0);
    for (T m : run_means) ss += (m - out.ae_deg) * (m - out.ae_deg);
    out.sd_deg = std::sqrt(ss / T(run_means.size() - 1));
  }
  return out;
}

/** Linear-interpolation percentile of an unsorted sample, q in [0, 1]. */
template <typename T>
T percentile(std::vector<T> x, T q) {
  if (x.empty()) throw EmptyInput("percentile: empty sample");
  std::sort(x.begin(), x.end());
  const T pos = q * T(x.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const T frac = pos - T(lo);
  return x[lo] + frac * (x[hi] - x[lo]);
}

template <typename T>
struct SeriesPoint {
  T t_s = T(0);
  T mean_err_deg = T(0);
  T p025_deg = T(0);
  T p975_deg = T(0);
  T mean_uncertainty_deg = T(0);
};

/**
 * @brief Per-step across-run aggregation of error series (degrees) with a
 * central 95% band, plus the mean of a per-run uncertainty series.
 *
 * errs_rad[i][k] is run i's error at times[k]; unc_rad may be empty when the
 * estimator reports no covariance, in which case the column is zero.
 */
template <typename T>
std::vector<SeriesPoint<T>> aggregate_series(const std::vector<T>& times, const std::vector<std::vector<T>>& errs_rad,
                                             const std::vector<std::vector<T>>& unc_rad) {
  if (errs_rad.empty()) throw EmptyInput("aggregate_series: no runs");
  const T to_deg = T(180) / T(M_PI);
  std::vector<SeriesPoint<T>> out(times.size());
  std::vector<T> column(errs_rad.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (std::size_t i = 0; i < errs_rad.size(); ++i) column[i] = errs_rad[i][k] * to_deg;
    SeriesPoint<T>& p = out[k];
    p.t_s = times[k];
    T acc = T(0);
    for (T v : column) acc += v;
    p.mean_err_deg = acc / T(column.size());
    p.p025_deg = percentile(column, T(0.025));
    p.p975_deg = percentile(column, T(0.975));
    if (!unc_rad.empty()) {
      T u = T(0);
      for (std::size_t i = 0; i < unc_rad.size(); ++i) u += unc_rad[i][k];
      p.mean_uncertainty_deg = u / T(unc_rad.size()) * to_deg;
    }
  }
  return out;
}

}  // namespace mfatt
