#include <cmath>
#include <random>

#include "doctest.h"
#include "mfatt/so3.hpp"
#include "support/random_inputs.hpp"

using namespace mfatt;
using testsupport::random_mat3;
using testsupport::random_rot;
using testsupport::random_vec3;

namespace {

double frob(const Mat3<double>& m) { return m.norm(); }

}  // namespace

TEST_SUITE("so3") {

TEST_CASE("hat of e3 and the vee round trip") {
  Mat3<double> expect;
  expect << 0, -1, 0, 1, 0, 0, 0, 0, 0;
  CHECK(frob(hat<double>({0, 0, 1}) - expect) == 0.0);
  const Vec3<double> v(1, 2, 3);
  CHECK((vee<double>(hat<double>(v)) - v).norm() == 0.0);
}

TEST_CASE("hat acts as the cross product") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const Vec3<double> x = random_vec3(rng), y = random_vec3(rng);
    CHECK((hat(x) * y - x.cross(y)).lpNorm<Eigen::Infinity>() < 1e-14);
  }
}

TEST_CASE("algebra identities on random inputs") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const Vec3<double> a = random_vec3(rng), b = random_vec3(rng);
    const Mat3<double> m = random_mat3(rng);
    const Mat3<double> r = random_rot(rng);
    // R hat(v) R^T = hat(R v)
    CHECK(frob(r * hat(a) * r.transpose() - hat<double>(r * a)) < 1e-12);
    // a^ A + A^T a^ = ((tr(A) I - A) a)^
    CHECK(frob(hat(a) * m + m.transpose() * hat(a) - hat<double>((m.trace() * Mat3<double>::Identity() - m) * a)) <
          1e-12);
    // vee(b a^T - a b^T) = a x b
    CHECK((vee<double>(b * a.transpose() - a * b.transpose()) - a.cross(b)).norm() < 1e-12);
  }
}

TEST_CASE("exp_rot at zero and at a quarter turn") {
  CHECK(frob(exp_rot<double>({0, 0, 0}) - Mat3<double>::Identity()) == 0.0);
  Mat3<double> expect;
  expect << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  CHECK(frob(exp_rot<double>({0, 0, M_PI / 2}) - expect) < 1e-15);
}

TEST_CASE("log_rot inverts exp_rot below pi") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> mag(0.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec3<double> v = mag(rng) * random_vec3(rng).normalized();
    worst = std::max(worst, (log_rot(exp_rot(v)) - v).norm());
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("log_rot small and near-pi branches") {
  // Tiny angles exercise the series branch.
  const Vec3<double> tiny(3e-6, -2e-6, 1e-6);
  CHECK((log_rot(exp_rot(tiny)) - tiny).norm() < 1e-18);
  // Just inside the allowed range the symmetric-part branch is used.
  const Vec3<double> near = (M_PI - 1e-4) * Vec3<double>(1, 2, 2).normalized();
  CHECK((log_rot(exp_rot(near)) - near).norm() < 1e-9);
  // Within tol of pi the log must refuse.
  const Vec3<double> at = (M_PI - 1e-9) * Vec3<double>(0, 0, 1);
  CHECK_THROWS_AS((void)log_rot(exp_rot(at)), AngleNearPi);
  // A wider tolerance rejects earlier.
  CHECK_THROWS_AS((void)log_rot(exp_rot(near), 1e-3), AngleNearPi);
}

TEST_CASE("proper_svd of the identity and of diag(5,2,-1)") {
  const ProperSvd<double> pi_ = proper_svd<double>(Mat3<double>::Identity());
  CHECK((pi_.s - Vec3<double>(1, 1, 1)).norm() < 1e-12);
  CHECK(frob(pi_.reconstruct() - Mat3<double>::Identity()) < 1e-12);

  const Mat3<double> f = Vec3<double>(5, 2, -1).asDiagonal();
  const ProperSvd<double> p = proper_svd(f);
  CHECK(p.s(0) == doctest::Approx(5.0));
  CHECK(p.s(1) == doctest::Approx(2.0));
  CHECK(p.s(2) == doctest::Approx(-1.0));  // det F = -10 forces s3 < 0
  CHECK(p.U.determinant() == doctest::Approx(1.0));
  CHECK(p.V.determinant() == doctest::Approx(1.0));
  CHECK(frob(p.reconstruct() - f) < 1e-12);
}

TEST_CASE("proper_svd invariants on random, negative-determinant and rank-deficient inputs") {
  std::mt19937_64 rng(14);
  auto check_invariants = [](const Mat3<double>& f) {
    const ProperSvd<double> p = proper_svd(f);
    CHECK(p.s(0) >= p.s(1));
    CHECK(p.s(1) >= std::abs(p.s(2)));
    CHECK(std::abs(p.U.determinant() - 1.0) < 1e-9);
    CHECK(std::abs(p.V.determinant() - 1.0) < 1e-9);
    CHECK(frob(p.U.transpose() * p.U - Mat3<double>::Identity()) < 1e-9);
    CHECK(frob(p.V.transpose() * p.V - Mat3<double>::Identity()) < 1e-9);
    CHECK(frob(p.reconstruct() - f) < 1e-9 * (1.0 + frob(f)));
    if (f.determinant() < -1e-9) CHECK(p.s(2) < 0);
  };
  for (int i = 0; i < 1000; ++i) check_invariants(random_mat3(rng, 3.0));
  for (int i = 0; i < 200; ++i) {
    Mat3<double> f = random_mat3(rng);
    f.col(2) = f.col(0) + f.col(1);  // rank <= 2
    check_invariants(f);
  }
}

TEST_CASE("polar factorizations") {
  std::mt19937_64 rng(15);
  const Vec3<double> w = Vec3<double>(1, -1, 2).normalized();
  const Mat3<double> m = exp_rot<double>(0.7 * w);
  const auto [mr, kr] = polar_right<double>(50.0 * m);
  CHECK(frob(mr - m) < 1e-12);
  CHECK(frob(kr - 50.0 * Mat3<double>::Identity()) < 1e-12);

  const auto [mi, ki] = polar_right<double>(Mat3<double>::Identity());
  CHECK(frob(mi - Mat3<double>::Identity()) < 1e-12);
  CHECK(frob(ki - Mat3<double>::Identity()) < 1e-12);

  for (int i = 0; i < 200; ++i) {
    const Mat3<double> f = random_mat3(rng, 2.0);
    const auto [mf, kf] = polar_right(f);
    CHECK(frob(mf * kf - f) < 1e-9 * (1.0 + frob(f)));
    CHECK(frob(kf - kf.transpose()) < 1e-9);
    const auto [kp, mp] = polar_left(f);
    CHECK(frob(kp * mp - f) < 1e-9 * (1.0 + frob(f)));
    CHECK(frob(kp - kp.transpose()) < 1e-9);
    CHECK(frob(mp - mf) < 1e-12);  // both polar rotations are U V^T
  }
}

TEST_CASE("project_to_so3 recovers a rotation from a perturbed one") {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 100; ++i) {
    const Mat3<double> r = random_rot(rng);
    const Mat3<double> p = project_to_so3<double>(r + 1e-4 * random_mat3(rng));
    CHECK(frob(p.transpose() * p - Mat3<double>::Identity()) < 1e-12);
    CHECK(geodesic_angle(p, r) < 1e-3);
  }
}

TEST_CASE("geodesic_angle basics and the triangle inequality") {
  std::mt19937_64 rng(17);
  const Mat3<double> r = random_rot(rng);
  CHECK(geodesic_angle(r, r) < 1e-12);
  CHECK(geodesic_angle<double>(Mat3<double>::Identity(), exp_rot<double>({0, 0, M_PI / 2})) ==
        doctest::Approx(M_PI / 2));
  // Exactly pi is representable (log_rot is not needed here).
  CHECK(geodesic_angle<double>(Mat3<double>::Identity(), exp_rot<double>({0, 0, M_PI})) == doctest::Approx(M_PI));
  for (int i = 0; i < 100; ++i) {
    const Mat3<double> a = random_rot(rng), b = random_rot(rng), c = random_rot(rng);
    CHECK(geodesic_angle(a, c) <= geodesic_angle(a, b) + geodesic_angle(b, c) + 1e-12);
    CHECK(geodesic_angle(a, b) == doctest::Approx(geodesic_angle(b, a)));
  }
}

TEST_CASE("wrap_angle maps onto [-pi, pi)") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(M_PI) == doctest::Approx(-M_PI));
  CHECK(wrap_angle(-M_PI) == doctest::Approx(-M_PI));
  CHECK(wrap_angle(3 * M_PI / 2) == doctest::Approx(-M_PI / 2));
  CHECK(wrap_angle(-7.0) == doctest::Approx(-7.0 + 2 * M_PI));
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), w = wrap_angle(a);
    CHECK(w >= -M_PI);
    CHECK(w < M_PI);
    CHECK(std::remainder(a - w, 2 * M_PI) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

}  // TEST_SUITE
