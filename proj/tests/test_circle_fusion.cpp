#include <cmath>
#include <random>

#include "doctest.h"
#include "mfatt/circle_fusion.hpp"
#include "mfatt/fusion_report.hpp"
#include "support/oracles.hpp"
#include "support/random_inputs.hpp"

using namespace mfatt;
using testsupport::random_rot;

namespace {

const double kDeg = M_PI / 180.0;

// Elliptical factor that commutes with rotations about w0; placed on the body
// side of a subset attitude it is the right polar factor of the result.
Mat3<double> axial_elliptical(double a, double b, const Vec3<double>& w0) {
  return a * Mat3<double>::Identity() + b * w0 * w0.transpose();
}

}  // namespace

TEST_SUITE("circle_fusion") {

TEST_CASE("connecting_subset basics") {
  const Vec3<double> w = Vec3<double>(3, -1, 2).normalized();
  const Subset<double> s = connecting_subset<double>(Mat3<double>::Identity(), exp_rot<double>(M_PI / 4 * w));
  CHECK((s.M0 - Mat3<double>::Identity()).norm() == 0.0);
  CHECK((s.w0 - w).norm() < 1e-12);

  std::mt19937_64 rng(41);
  for (int i = 0; i < 100; ++i) {
    const Mat3<double> m1 = random_rot(rng), m2 = random_rot(rng);
    const Subset<double> c = connecting_subset(m1, m2);
    const double th = geodesic_angle(m1, m2);
    // w0 points from M1 toward M2, so the positive angle reaches M2.
    CHECK((m1 * exp_rot<double>(th * c.w0) - m2).norm() < 1e-9);
  }

  const Mat3<double> m = random_rot(rng);
  CHECK_THROWS_AS((void)connecting_subset(m, m), CoincidentAttitudes);
}

TEST_CASE("mfd_subset_params on the three reference parameters") {
  const Vec3<double> w0(0, 1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
  const Subset<double> s{Mat3<double>::Identity(), w0};

  const SubsetParams<double> p1 = mfd_subset_params<double>({50.0 * Mat3<double>::Identity()}, s);
  CHECK(p1.kappa == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(p1.theta_bar == doctest::Approx(0.0));

  Mat3<double> f2;
  f2 << 2, 0, 0, 0, 74, 72, 0, 72, 74;
  const SubsetParams<double> p2 = mfd_subset_params<double>({f2}, s);
  CHECK(p2.kappa == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(p2.theta_bar == doctest::Approx(0.0));

  const SubsetParams<double> p3 = mfd_subset_params<double>({exp_rot<double>(M_PI / 4 * w0) * 50.0}, s);
  CHECK(p3.kappa == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(p3.theta_bar == doctest::Approx(M_PI / 4));
}

TEST_CASE("subset membership is enforced") {
  const Vec3<double> w0 = Vec3<double>::UnitZ();
  const Subset<double> s{Mat3<double>::Identity(), w0};
  const Vec3<double> off = Vec3<double>(1, 1, 0).normalized();
  CHECK_THROWS_AS((void)mfd_subset_params<double>({50.0 * exp_rot<double>(0.5 * off)}, s), MeanNotInSubset);
}

TEST_CASE("cgd_subset_params concentrations") {
  const Subset<double> s2{Mat3<double>::Identity(), Vec3<double>::UnitY()};
  const Cgd<double> iso{Side::Left, Mat3<double>::Identity(), 0.04 * Mat3<double>::Identity()};
  CHECK(cgd_subset_params(iso, s2).kappa == doctest::Approx(25.0));

  const Cgd<double> diag{Side::Left, Mat3<double>::Identity(), Vec3<double>(0.5, 0.2, 0.1).asDiagonal()};
  CHECK(cgd_subset_params(diag, s2).kappa == doctest::Approx(5.0));

  Mat3<double> notpd = Vec3<double>(1, -0.1, 1).asDiagonal();
  CHECK_THROWS_AS((void)cgd_subset_params(Cgd<double>{Side::Left, Mat3<double>::Identity(), notpd}, s2),
                  NotPositiveDefinite);
}

TEST_CASE("cgd restriction curvature matches a second difference of the log density") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 20; ++i) {
    const Mat3<double> p = testsupport::random_spd(rng, 0.05, 2.0);
    const Vec3<double> w0 = testsupport::random_vec3(rng).normalized();
    const Mat3<double> m0 = random_rot(rng);
    const Subset<double> s{m0, w0};
    const Cgd<double> cgd{Side::Left, m0, p};
    const double kappa = cgd_subset_params(cgd, s).kappa;
    // Restricted log density along the subset through the mean:
    // l(t) = -0.5 * (t w0)^T P^{-1} (t w0), exactly quadratic in t.
    const Eigen::LLT<Mat3<double>> llt(p);
    auto logdens = [&](double t) {
      const Vec3<double> xi = log_rot<double>(cgd.mean.transpose() * m0 * exp_rot<double>(t * w0));
      return -0.5 * xi.dot(llt.solve(xi));
    };
    const double h = 1e-2;
    const double second = (logdens(h) - 2.0 * logdens(0.0) + logdens(-h)) / (h * h);
    CHECK(std::abs(-second - kappa) < 1e-6 * kappa);
  }
}

TEST_CASE("two-concentration fusion reference values") {
  const SubsetParams<double> mfd = fuse_mfd_1d(110.0, 120.0, -175.0 * kDeg);
  CHECK(std::abs(mfd.kappa - 14.16) < 0.01);
  // theta_bar is relative to the prior mean at +175 deg.
  CHECK(std::abs(std::abs(wrap_angle(175.0 * kDeg + mfd.theta_bar)) - 42.62 * kDeg) < 0.02 * kDeg);

  const SubsetParams<double> cgd = fuse_cgd_1d(110.0, 120.0, -175.0 * kDeg);
  CHECK(cgd.kappa == 230.0);
  CHECK(std::abs(std::abs(wrap_angle(175.0 * kDeg + cgd.theta_bar)) - 83.70 * kDeg) < 0.02 * kDeg);

  // Chaining the Gaussian recurrence once more.
  const double abs1 = 175.0 * kDeg + cgd.theta_bar;
  const SubsetParams<double> cgd2 = fuse_cgd_1d(cgd.kappa, 120.0, wrap_angle(-abs1));
  CHECK(cgd2.kappa == 350.0);
  CHECK(std::abs(std::abs(wrap_angle(abs1 + cgd2.theta_bar)) - 55.0 * kDeg) < 0.1 * kDeg);
}

TEST_CASE("fusion degenerate cases") {
  const SubsetParams<double> aligned = fuse_mfd_1d(30.0, 12.0, 0.0);
  CHECK(aligned.kappa == 42.0);
  CHECK(aligned.theta_bar == 0.0);

  const SubsetParams<double> cancel = fuse_mfd_1d(100.0, 100.0, M_PI);
  CHECK(std::abs(cancel.kappa) < 1e-10);

  // At full disagreement the concentrations subtract.
  const SubsetParams<double> sub = fuse_mfd_1d(110.0, 40.0, -M_PI);
  CHECK(std::abs(sub.kappa - 70.0) < 1e-9);

  CHECK(fuse_mfd_1d(0.0, 0.0, 1.0).theta_bar == 0.0);
  CHECK(fuse_cgd_1d(0.0, 0.0, 1.0).theta_bar == 0.0);
}

TEST_CASE("fusion matches the quadrature oracle at spot points") {
  const double pts[][3] = {{110, 120, -175 * kDeg}, {0.5, 500, 2.9},    {500, 500, 3.0},
                           {0.5, 0.5, -3.0},        {250, 30, -0.7},    {5, 5, M_PI / 2},
                           {480, 499, -3.14},       {1.0, 1.0, 0.0001}, {200, 200, 3.1}};
  for (const auto& p : pts) {
    const SubsetParams<double> x = fuse_mfd_1d(p[0], p[1], p[2]);
    const support::CircleFit o = support::grid_fuse_oracle(p[0], p[1], p[2]);
    CHECK(std::abs(x.kappa - o.kappa) / std::max(o.kappa, 1e-6) < 1e-6);
    CHECK(std::abs(wrap_angle(x.theta_bar - o.theta_bar)) / std::max(std::abs(o.theta_bar), 1e-6) < 1e-6);
  }
}

TEST_CASE("concentration ordering against the Gaussian recurrence") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> uk(0.1, 300.0), ud(-M_PI, M_PI);
  for (int i = 0; i < 2000; ++i) {
    const double kp = uk(rng), km = uk(rng), dt = ud(rng);
    const double mfd = fuse_mfd_1d(kp, km, dt).kappa;
    const double cgd = fuse_cgd_1d(kp, km, dt).kappa;
    CHECK(mfd <= cgd + 1e-9);
    if (dt != 0.0) CHECK(mfd < cgd);
  }
  CHECK(fuse_mfd_1d(17.0, 5.0, 0.0).kappa == 22.0);
}

TEST_CASE("delta_theta_plus zeros, sign and oddness") {
  CHECK(delta_theta_plus(1.0, 2.3) == 0.0);
  CHECK(delta_theta_plus(1.0, M_PI) == 0.0);
  CHECK(std::abs(delta_theta_plus(0.0, 1.0)) < 1e-12);
  CHECK(delta_theta_plus(2.0, M_PI / 2) > 0.0);
  // Independent dual evaluation of the k = 2, pi/2 point.
  const double mfd = std::atan2(2.0 * std::sin(M_PI / 2), 1.0 + 2.0 * std::cos(M_PI / 2));
  const double cgd = (2.0 / 3.0) * (M_PI / 2);
  CHECK(delta_theta_plus(2.0, M_PI / 2) == doctest::Approx(mfd - cgd).epsilon(1e-12));

  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> ukk(0.0, 10.0), ud(0.0, M_PI);
  for (int i = 0; i < 500; ++i) {
    const double k = ukk(rng), d = ud(rng);
    CHECK(delta_theta_plus(k, -d) == -delta_theta_plus(k, d));
  }
}

TEST_CASE("one-axis fusion agrees with full-matrix Bayes fusion") {
  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> ua(5.0, 80.0), ub(0.0, 30.0), ut(-1.2, 1.2);
  for (int i = 0; i < 200; ++i) {
    const Vec3<double> w0 = testsupport::random_vec3(rng).normalized();
    const Mat3<double> m0 = random_rot(rng);
    const Subset<double> s{m0, w0};
    const double ap = ua(rng), bp = ub(rng), tp = ut(rng);
    const double am = ua(rng), bm = ub(rng), tm = ut(rng);

    // F = M * K with K axial about w0: K is the right polar factor, so the
    // subset kappa is tr(K) - w0^T K w0 = 2a exactly.
    const Mat3<double> f_prior = m0 * exp_rot<double>(tp * w0) * axial_elliptical(ap, bp, w0);
    const Mat3<double> f_meas = m0 * exp_rot<double>(tm * w0) * axial_elliptical(am, bm, w0);
    const SubsetParams<double> prior = mfd_subset_params<double>({f_prior}, s);
    CHECK(prior.kappa == doctest::Approx(2.0 * ap).epsilon(1e-10));
    CHECK(prior.theta_bar == doctest::Approx(tp).epsilon(1e-10));

    const SubsetParams<double> fused = mfd_subset_params<double>({f_prior + f_meas}, s);
    const SubsetParams<double> rel = fuse_mfd_1d(2.0 * ap, 2.0 * am, wrap_angle(tm - tp));
    CHECK(std::abs(fused.kappa - rel.kappa) < 1e-9 * (1.0 + rel.kappa));
    CHECK(std::abs(wrap_angle(fused.theta_bar - (tp + rel.theta_bar))) < 1e-9);
  }
}

TEST_CASE("two-step fusion report reproduces the tabulated comparison") {
  const auto rows = two_step_fusion_report<double>();
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].mfd);
  CHECK(std::abs(rows[0].kappa - 14.16) < 0.01);
  CHECK(std::abs(rows[0].theta_abs - 42.62 * kDeg) < 0.02 * kDeg);
  CHECK(std::abs(rows[1].kappa - 130.77) < 0.01);
  CHECK(std::abs(rows[1].theta_abs - 4.21 * kDeg) < 0.02 * kDeg);
  CHECK_FALSE(rows[2].mfd);
  CHECK(rows[2].kappa == 230.0);
  CHECK(std::abs(rows[2].theta_abs - 83.70 * kDeg) < 0.02 * kDeg);
  CHECK(rows[3].kappa == 350.0);
  CHECK(std::abs(rows[3].theta_abs - 55.0 * kDeg) < 0.1 * kDeg);
}

}  // TEST_SUITE
