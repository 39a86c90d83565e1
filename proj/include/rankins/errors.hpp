// errors.hpp
// Exception types used across the library. Every failure mode a caller can
// act on gets its own type; all derive from rankins::Error.

#pragma once

#include <stdexcept>
#include <string>

namespace rankins {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input row: wrong column count, unparsable field. Message names
// the file and 1-based line number.
struct IngestError : Error {
  using Error::Error;
};

// A row references an id that does not exist (paper, venue).
struct ReferentialError : Error {
  using Error::Error;
};

// Invalid configuration value (zero venues, zero authors, bad drift rate).
struct ConfigError : Error {
  using Error::Error;
};

// A required prior-year table or matrix is absent.
struct MissingHistoryError : Error {
  using Error::Error;
};

// Every history year of a smoothing window is missing or zero, so the
// final scores cannot be normalized.
struct DegenerateHistoryError : Error {
  using Error::Error;
};

// Normal-equation system is singular or too ill-conditioned to solve.
// Carries the 1-norm condition estimate of the Gram matrix.
struct SingularSystemError : Error {
  double condition_estimate;
  SingularSystemError(const std::string& msg, double cond)
      : Error(msg), condition_estimate(cond) {}
};

// Matrix or vector dimensions do not agree.
struct ShapeError : Error {
  using Error::Error;
};

// Invalid argument value (e.g. cutoff n = 0).
struct ArgumentError : Error {
  using Error::Error;
};

// Prediction refers to an institution the truth does not cover.
struct MismatchError : Error {
  using Error::Error;
};

// Model training cannot proceed (e.g. empty training set).
struct TrainingError : Error {
  using Error::Error;
};

}  // namespace rankins
