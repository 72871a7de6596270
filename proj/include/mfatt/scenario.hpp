#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mfatt/config.hpp"
#include "mfatt/metrics.hpp"
#include "mfatt/rigid_body.hpp"
#include "mfatt/sim.hpp"

namespace mfatt {

/** Everything a benchmark run needs, parsed out of a config file. */
struct Scenario {
  RigidBodyParams<double> body;
  Mat3<double> R0 = Mat3<double>::Identity();
  Vec3<double> omega0 = Vec3<double>::Zero();
  double duration_s = 60.0;
  double step_s = 0.02;
  int substeps = 10;

  double gyro_rate_hz = 50.0;
  double gyro_sigma = 0.0;  // rad / sqrt(s)

  // Vector-measurement sensor (mutually exclusive with the direct sensor).
  bool use_vectors = true;
  double meas_rate_hz = 10.0;
  std::vector<Vec3<double>> references;
  std::vector<Mat3<double>> noise_cov;

  DirectAttitudeModel<double> direct;

  std::vector<std::string> filters;  // any of: mf_right, mf_left, iekf, wahba
  double init_angle = 0.0;           // initial estimate offset, rad, about init_axis
  Vec3<double> init_axis = Vec3<double>::UnitX();
  double init_f = 10.0;              // initial concentration, F0 = init_f * exp_rot(init_angle * init_axis)

  long runs = 1;
  std::uint64_t seed = 0;
};

/** Parses and validates a scenario; rejects unknown keys. */
Scenario load_scenario(const Config& cfg);

struct FilterOutcome {
  std::string name;
  ErrorSummary<double> summary;
  double cpu_s_mean = 0.0;
  std::vector<double> t_s;  // time grid of the series rows
  std::vector<SeriesPoint<double>> series;
  long skipped_updates = 0;  // epochs dropped by the solution-uniqueness guard
  long failed_runs = 0;
};

struct MonteCarloResult {
  std::vector<FilterOutcome> outcomes;
  std::vector<std::string> failures;  // "run 12 mf_left: <reason>", batch continues past these
};

/**
 * @brief Simulate the scenario's truth once, then M noise realizations, and
 * score every configured filter on each.
 *
 * Deterministic for a fixed scenario and seed: every run draws from its own
 * counter-derived streams, and aggregation reduces in run order, so results
 * do not depend on how runs are scheduled. Per-run estimator exceptions mark
 * that run failed for that filter and the batch continues.
 */
MonteCarloResult run_monte_carlo(const Scenario& scn);

/** Writes summary.csv and series_<filter>.csv into out_dir (created if absent). */
void write_outputs(const MonteCarloResult& result, const std::string& out_dir);

}  // namespace mfatt
