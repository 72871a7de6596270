#include "mfatt/scenario.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <thread>

#include "mfatt/csv.hpp"
#include "mfatt/filters.hpp"
#include "mfatt/wahba.hpp"

namespace mfatt {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

// Wahba solutions with s2 + s3 this far below s1 are treated as non-unique
// and the epoch is skipped rather than folded into the posterior.
constexpr double kUniqueRelTol = 1e-8;

Vec3<double> get_vec3(const Config& cfg, const std::string& sec, const std::string& key) {
  const std::vector<double> v = cfg.get_doubles(sec, key);
  if (v.size() != 3) throw ConfigError(sec + "." + key + ": expected 3 numbers");
  return Vec3<double>(v[0], v[1], v[2]);
}

Vec3<double> get_vec3(const Config& cfg, const std::string& sec, const std::string& key, const Vec3<double>& dflt) {
  return cfg.has(sec, key) ? get_vec3(cfg, sec, key) : dflt;
}

Vec3<double> parse_reference(const std::string& tok) {
  if (tok == "e1") return Vec3<double>::UnitX();
  if (tok == "e2") return Vec3<double>::UnitY();
  if (tok == "e3") return Vec3<double>::UnitZ();
  Vec3<double> v;
  if (std::sscanf(tok.c_str(), "%lf,%lf,%lf", &v.x(), &v.y(), &v.z()) != 3)
    throw ConfigError("vectors.references: expected e1|e2|e3 or x,y,z triple, got: " + tok);
  const double n = v.norm();
  if (n <= 0.0) throw ConfigError("vectors.references: zero direction");
  return v / n;
}

}  // namespace

Scenario load_scenario(const Config& cfg) {
  Scenario s;

  const std::string dyn = cfg.get_string("truth", "dynamics", "torque_free");
  if (dyn != "torque_free" && dyn != "pendulum") throw ConfigError("truth.dynamics: torque_free or pendulum");
  s.body.pendulum = dyn == "pendulum";
  const Vec3<double> inertia = get_vec3(cfg, "truth", "inertia", Vec3<double>(1.0, 2.0, 2.5));
  s.body.inertia = inertia;
  if (s.body.pendulum) {
    s.body.mgl = get_vec3(cfg, "truth", "mgl");
    s.body.gravity_dir = get_vec3(cfg, "truth", "gravity_dir", Vec3<double>(0, 0, -1)).normalized();
  }
  const Vec3<double> r0_axis = get_vec3(cfg, "truth", "r0_axis", Vec3<double>::UnitX());
  const double r0_angle = cfg.get_double("truth", "r0_angle_deg", 0.0) * kDegToRad;
  s.R0 = exp_rot<double>(r0_angle * r0_axis.normalized());
  s.omega0 = get_vec3(cfg, "truth", "omega0", Vec3<double>::Zero());
  s.duration_s = cfg.get_double("truth", "duration_s", 60.0);
  s.step_s = cfg.get_double("truth", "step_s", 0.02);
  s.substeps = static_cast<int>(cfg.get_long("truth", "substeps", 10));

  s.gyro_rate_hz = cfg.get_double("gyro", "rate_hz", 1.0 / s.step_s);
  if (std::abs(s.gyro_rate_hz * s.step_s - 1.0) > 1e-9)
    throw ConfigError("gyro.rate_hz must equal 1 / truth.step_s");
  s.gyro_sigma = cfg.get_double("gyro", "sigma_deg", 1.0) * kDegToRad;

  if (cfg.has_section("vectors") && cfg.has_section("direct_attitude"))
    throw ConfigError("configure either [vectors] or [direct_attitude], not both");
  s.use_vectors = !cfg.has_section("direct_attitude");
  if (s.use_vectors) {
    s.meas_rate_hz = cfg.get_double("vectors", "rate_hz", 10.0);
    std::vector<std::string> toks{"e1", "e2"};
    if (cfg.has("vectors", "references")) toks = cfg.get_tokens("vectors", "references");
    for (const auto& t : toks) s.references.push_back(parse_reference(t));
    Mat3<double> g;
    if (cfg.has("vectors", "noise_diag")) {
      if (cfg.has("vectors", "noise_var")) throw ConfigError("vectors: give noise_var or noise_diag, not both");
      g = get_vec3(cfg, "vectors", "noise_diag").asDiagonal();
    } else {
      g = cfg.get_double("vectors", "noise_var", 0.0) * Mat3<double>::Identity();
    }
    s.noise_cov.assign(s.references.size(), g);
  } else {
    s.meas_rate_hz = cfg.get_double("direct_attitude", "rate_hz", 10.0);
    const std::string side = cfg.get_string("direct_attitude", "side", "left");
    if (side != "left" && side != "right") throw ConfigError("direct_attitude.side: left or right");
    s.direct.side = side == "left" ? Side::Left : Side::Right;
    const bool has_nm = cfg.has("direct_attitude", "nm_diag");
    const bool has_pm = cfg.has("direct_attitude", "pm_diag");
    if (has_nm == has_pm) throw ConfigError("direct_attitude: give exactly one of nm_diag, pm_diag");
    s.direct.gaussian = has_pm;
    if (has_nm) s.direct.N = get_vec3(cfg, "direct_attitude", "nm_diag").asDiagonal();
    if (has_pm) s.direct.P = get_vec3(cfg, "direct_attitude", "pm_diag").asDiagonal();
  }
  const double ratio = s.gyro_rate_hz / s.meas_rate_hz;
  if (s.meas_rate_hz > s.gyro_rate_hz || std::abs(ratio - std::round(ratio)) > 1e-9)
    throw ConfigError("measurement rate must divide gyro.rate_hz");

  s.filters = {"mf_right", "mf_left", "iekf", "wahba"};
  if (cfg.has("filters", "run")) s.filters = cfg.get_tokens("filters", "run");
  for (const auto& f : s.filters) {
    if (f != "mf_right" && f != "mf_left" && f != "iekf" && f != "wahba")
      throw ConfigError("filters.run: unknown filter " + f);
    if (!s.use_vectors) {
      if (f == "iekf" || f == "wahba")
        throw ConfigError("filters.run: " + f + " needs vector measurements, not direct attitude");
      const Side want = f == "mf_right" ? Side::Right : Side::Left;
      if (want != s.direct.side) throw ConfigError("filters.run: " + f + " does not match direct_attitude.side");
    }
  }
  s.init_angle = cfg.get_double("filters", "init_angle_deg", 0.0) * kDegToRad;
  s.init_axis = get_vec3(cfg, "filters", "init_axis", Vec3<double>::UnitX()).normalized();
  s.init_f = cfg.get_double("filters", "init_f", 10.0);

  s.runs = cfg.get_long("montecarlo", "runs", 1);
  if (s.runs < 1) throw ConfigError("montecarlo.runs must be >= 1");
  s.seed = static_cast<std::uint64_t>(cfg.get_long("montecarlo", "seed", 0));

  cfg.check_consumed();
  return s;
}

namespace {

struct RunData {
  std::vector<GyroSample<double>> gyro;
  std::vector<VectorMeasSet<double>> vecs;
  std::vector<AttitudeMeasurement<double>> att;
};

struct Trace {
  std::vector<double> err;  // rad; one entry per recorded time
  std::vector<double> unc;  // sqrt of first diagonal covariance term, inertial frame, rad
  double wall_s = 0.0;
  bool failed = false;
  std::string what;
  long skipped = 0;
};

struct RunOutputs {
  std::vector<Trace> traces;  // parallel to scenario filter list
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double inertial_sigma1(const InvariantBelief<double>& b) {
  const Mat3<double> p = mfd_to_covariance<double>(b.N);
  if (b.side == Side::Right) return std::sqrt(p(0, 0));
  const Mat3<double> pi = b.central * p * b.central.transpose();
  return std::sqrt(pi(0, 0));
}

Trace run_mf(Side side, const Scenario& scn, const TruthTrajectory<double>& truth, const RunData& data,
             long every_n) {
  Trace tr;
  try {
    InvariantBelief<double> b{side, exp_rot<double>(scn.init_angle * scn.init_axis),
                              scn.init_f * Mat3<double>::Identity()};
    tr.err.push_back(geodesic_angle<double>(b.central, truth.R[0]));
    tr.unc.push_back(inertial_sigma1(b));
    const auto t0 = Clock::now();
    for (std::size_t k = 1; k < truth.R.size(); ++k) {
      b = side == Side::Right ? mf_right_predict(b, data.gyro[k - 1]) : mf_left_predict(b, data.gyro[k - 1]);
      if (EpochSchedule{every_n}.contains(static_cast<long>(k))) {
        if (scn.use_vectors) {
          const auto [rm, dec] = wahba_svd(data.vecs[k], 0.0);
          if (dec.s(1) + dec.s(2) <= kUniqueRelTol * dec.s(0)) {
            ++tr.skipped;
          } else {
            const Mat3<double> pm = meas_covariance(data.vecs[k], rm, dec, side);
            const AttitudeMeasurement<double> m{rm, covariance_to_mfd<double>(pm), side};
            b = side == Side::Right ? mf_right_update(b, m) : mf_left_update(b, m);
          }
        } else {
          b = side == Side::Right ? mf_right_update(b, data.att[k]) : mf_left_update(b, data.att[k]);
        }
      }
      tr.err.push_back(geodesic_angle<double>(b.central, truth.R[k]));
      tr.unc.push_back(inertial_sigma1(b));
    }
    tr.wall_s = seconds_since(t0);
  } catch (const std::exception& e) {
    tr.failed = true;
    tr.what = e.what();
  }
  return tr;
}

Trace run_iekf(const Scenario& scn, const TruthTrajectory<double>& truth, const RunData& data, long every_n) {
  Trace tr;
  try {
    IekfState<double> st{exp_rot<double>(scn.init_angle * scn.init_axis),
                         mfd_to_covariance<double>(scn.init_f * Mat3<double>::Identity())};
    tr.err.push_back(geodesic_angle<double>(st.R_hat, truth.R[0]));
    tr.unc.push_back(std::sqrt(st.P(0, 0)));
    const auto t0 = Clock::now();
    for (std::size_t k = 1; k < truth.R.size(); ++k) {
      st = iekf_predict(st, data.gyro[k - 1]);
      if (EpochSchedule{every_n}.contains(static_cast<long>(k))) st = iekf_update(st, data.vecs[k]);
      tr.err.push_back(geodesic_angle<double>(st.R_hat, truth.R[k]));
      tr.unc.push_back(std::sqrt(st.P(0, 0)));
    }
    tr.wall_s = seconds_since(t0);
  } catch (const std::exception& e) {
    tr.failed = true;
    tr.what = e.what();
  }
  return tr;
}

Trace run_wahba(const Scenario& scn, const TruthTrajectory<double>& truth, const RunData& data, long every_n) {
  Trace tr;
  try {
    // Held across skipped epochs so every epoch still gets a row.
    Mat3<double> r_hat = exp_rot<double>(scn.init_angle * scn.init_axis);
    Mat3<double> pm = Mat3<double>::Zero();
    const auto t0 = Clock::now();
    for (std::size_t k = 1; k < truth.R.size(); ++k) {
      if (!EpochSchedule{every_n}.contains(static_cast<long>(k))) continue;
      const auto [rm, dec] = wahba_svd(data.vecs[k], 0.0);
      if (dec.s(1) + dec.s(2) <= kUniqueRelTol * dec.s(0)) {
        ++tr.skipped;
      } else {
        r_hat = rm;
        pm = meas_covariance(data.vecs[k], rm, dec, Side::Right);
      }
      tr.err.push_back(geodesic_angle<double>(r_hat, truth.R[k]));
      tr.unc.push_back(std::sqrt(pm(0, 0)));
    }
    tr.wall_s = seconds_since(t0);
  } catch (const std::exception& e) {
    tr.failed = true;
    tr.what = e.what();
  }
  return tr;
}

RunOutputs do_run(const Scenario& scn, const TruthTrajectory<double>& truth, long run_index, long every_n) {
  RunData data;
  {
    auto rng = rng_stream(scn.seed, run_index, 0);
    data.gyro = simulate_gyro(truth, scn.gyro_sigma, rng);
  }
  if (scn.use_vectors) {
    auto rng = rng_stream(scn.seed, run_index, 1);
    data.vecs = simulate_vectors(truth, scn.references, scn.noise_cov, EpochSchedule{every_n}, rng);
  } else {
    auto rng = rng_stream(scn.seed, run_index, 2);
    data.att = simulate_direct_attitude(truth, scn.direct, EpochSchedule{every_n}, rng);
  }
  RunOutputs out;
  out.traces.reserve(scn.filters.size());
  for (const auto& f : scn.filters) {
    if (f == "mf_right")
      out.traces.push_back(run_mf(Side::Right, scn, truth, data, every_n));
    else if (f == "mf_left")
      out.traces.push_back(run_mf(Side::Left, scn, truth, data, every_n));
    else if (f == "iekf")
      out.traces.push_back(run_iekf(scn, truth, data, every_n));
    else
      out.traces.push_back(run_wahba(scn, truth, data, every_n));
  }
  return out;
}

}  // namespace

MonteCarloResult run_monte_carlo(const Scenario& scn) {
  const TruthTrajectory<double> truth =
      generate_truth(scn.body, scn.R0, scn.omega0, scn.duration_s, scn.step_s, scn.substeps);
  const long every_n = std::lround(scn.gyro_rate_hz / scn.meas_rate_hz);
  const long steps = static_cast<long>(truth.R.size()) - 1;

  std::vector<RunOutputs> per_run(scn.runs);
  {
    const unsigned hw = std::thread::hardware_concurrency();
    const unsigned workers = std::max(1u, std::min<unsigned>(hw ? hw : 1u, static_cast<unsigned>(scn.runs)));
    std::atomic<long> next{0};
    auto work = [&] {
      for (long i; (i = next.fetch_add(1)) < scn.runs;) per_run[i] = do_run(scn, truth, i, every_n);
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
  }

  MonteCarloResult result;
  for (std::size_t fi = 0; fi < scn.filters.size(); ++fi) {
    FilterOutcome out;
    out.name = scn.filters[fi];
    const bool epochs_only = out.name == "wahba";
    if (epochs_only) {
      for (long k = every_n; k <= steps; k += every_n) out.t_s.push_back(k * scn.step_s);
    } else {
      for (long k = 0; k <= steps; ++k) out.t_s.push_back(k * scn.step_s);
    }
    std::vector<std::vector<double>> errs, uncs, err_for_ae;
    double wall = 0.0;
    for (long i = 0; i < scn.runs; ++i) {
      const Trace& tr = per_run[i].traces[fi];
      out.skipped_updates += tr.skipped;
      if (tr.failed) {
        ++out.failed_runs;
        result.failures.push_back("run " + std::to_string(i) + " " + out.name + ": " + tr.what);
        continue;
      }
      // The averaged error starts at the first post-initialization step.
      err_for_ae.push_back(epochs_only ? tr.err : std::vector<double>(tr.err.begin() + 1, tr.err.end()));
      errs.push_back(tr.err);
      uncs.push_back(tr.unc);
      wall += tr.wall_s;
    }
    if (!errs.empty()) {
      out.summary = compute_metrics(err_for_ae);
      out.cpu_s_mean = wall / static_cast<double>(errs.size());
      out.series = aggregate_series(out.t_s, errs, uncs);
    } else {
      out.summary.ae_deg = std::numeric_limits<double>::quiet_NaN();
      out.summary.sd_deg = std::numeric_limits<double>::quiet_NaN();
      out.t_s.clear();
    }
    result.outcomes.push_back(std::move(out));
  }
  return result;
}

void write_outputs(const MonteCarloResult& result, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  CsvWriter summary(out_dir + "/summary.csv", {"filter", "AE_deg", "SD_deg", "cpu_s_mean"});
  for (const auto& out : result.outcomes) {
    summary.field(out.name).field(out.summary.ae_deg).field(out.summary.sd_deg).field(out.cpu_s_mean);
    summary.endrow();
    CsvWriter series(out_dir + "/series_" + out.name + ".csv",
                     {"t_s", "mean_err_deg", "p2.5_deg", "p97.5_deg", "mean_uncertainty_deg"});
    for (const auto& p : out.series) {
      series.field(p.t_s).field(p.mean_err_deg).field(p.p025_deg).field(p.p975_deg).field(p.mean_uncertainty_deg);
      series.endrow();
    }
  }
}

}  // namespace mfatt
