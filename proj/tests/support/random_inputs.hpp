#pragma once

// Shared random input generators for the unit suites. All draws take the
// caller's engine so every test pins its own seed.

#include <random>

#include "mfatt/so3.hpp"

namespace testsupport {

inline mfatt::Vec3<double> random_vec3(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return {n(rng), n(rng), n(rng)};
}

inline mfatt::Mat3<double> random_mat3(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  mfatt::Mat3<double> m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = n(rng);
  return m;
}

/** Rotation with angle uniform in (0, max_angle), axis uniform on the sphere. */
inline mfatt::Mat3<double> random_rot(std::mt19937_64& rng, double max_angle = 3.0) {
  std::uniform_real_distribution<double> u(1e-6, max_angle);
  return mfatt::exp_rot<double>(u(rng) * random_vec3(rng).normalized());
}

/** Random symmetric matrix with eigenvalues of either sign. */
inline mfatt::Mat3<double> random_symmetric(std::mt19937_64& rng, double scale = 1.0) {
  const mfatt::Mat3<double> m = random_mat3(rng, scale);
  return 0.5 * (m + m.transpose());
}

/** Random symmetric positive-definite matrix with eigenvalues in [lo, hi]. */
inline mfatt::Mat3<double> random_spd(std::mt19937_64& rng, double lo, double hi) {
  const mfatt::Mat3<double> r = random_rot(rng);
  std::uniform_real_distribution<double> u(lo, hi);
  mfatt::Vec3<double> d(u(rng), u(rng), u(rng));
  return r * d.asDiagonal() * r.transpose();
}

}  // namespace testsupport
