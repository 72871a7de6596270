#pragma once

#include <stdexcept>
#include <string>

namespace mfatt {

/** Base class for all library errors. */
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/** Rotation logarithm requested within tolerance of the pi cut. */
struct AngleNearPi : Error {
  explicit AngleNearPi(const std::string& what = "rotation angle within tolerance of pi; log is ill-conditioned")
      : Error(what) {}
};

/** A matrix that must be symmetric is not. */
struct NotSymmetric : Error {
  explicit NotSymmetric(const std::string& what = "matrix is not symmetric") : Error(what) {}
};

/** A matrix that must be positive-definite is not. */
struct NotPositiveDefinite : Error {
  explicit NotPositiveDefinite(const std::string& what = "matrix is not positive-definite") : Error(what) {}
};

/** Concentration parameter degenerate: some pair sum s_j + s_k is not positive. */
struct DegenerateConcentration : Error {
  explicit DegenerateConcentration(const std::string& what = "degenerate concentration: s_j + s_k <= tol")
      : Error(what) {}
};

/** Two attitudes coincide; the connecting axis is undefined. */
struct CoincidentAttitudes : Error {
  explicit CoincidentAttitudes(const std::string& what = "attitudes coincide; connecting axis undefined")
      : Error(what) {}
};

/** Distribution mean does not lie in the requested single-axis subset. */
struct MeanNotInSubset : Error {
  explicit MeanNotInSubset(const std::string& what = "mean attitude not in subset") : Error(what) {}
};

/** Weighted vector-fit attitude is not unique (s2 + s3 of the profile matrix ~ 0). */
struct NonUniqueSolution : Error {
  explicit NonUniqueSolution(const std::string& what = "attitude solution not unique") : Error(what) {}
};

/** Innovation covariance is numerically singular. */
struct SingularInnovation : Error {
  explicit SingularInnovation(const std::string& what = "innovation covariance singular") : Error(what) {}
};

/** A stability-certificate assertion failed at some step. */
struct CertificateViolation : Error {
  explicit CertificateViolation(const std::string& what = "stability certificate violated") : Error(what) {}
};

/** Invalid or inconsistent configuration. */
struct ConfigError : Error {
  explicit ConfigError(const std::string& what = "invalid configuration") : Error(what) {}
};

/** An operation received an empty input sequence. */
struct EmptyInput : Error {
  explicit EmptyInput(const std::string& what = "empty input") : Error(what) {}
};

}  // namespace mfatt
