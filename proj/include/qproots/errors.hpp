#pragma once

#include <stdexcept>
#include <string>

namespace qproots {

/// Base class for all qproots numeric errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// |Re(lambda)*h| exceeds the range where e^{-lambda h} stays inside double precision.
struct OverflowGuardError : Error {
  using Error::Error;
};

/// A NaN or Inf appeared where a finite value is required.
struct NonFiniteError : Error {
  using Error::Error;
};

/// Argument outside an operation's mathematical domain.
struct DomainError : Error {
  using Error::Error;
};

/// A zero lies within the guard band of a contour; the contour must be perturbed.
struct BoundaryTooCloseError : Error {
  using Error::Error;
};

/// Subdivision depth exhausted; suspected multiple root.
struct SubdivisionLimitError : Error {
  using Error::Error;
};

/// Rouche hypothesis margin is not positive on the certification circle.
struct MarginNonPositiveError : Error {
  double margin;
  MarginNonPositiveError(double margin_value, const std::string& msg)
      : Error(msg), margin(margin_value) {}
};

/// Certification disk does not contain exactly one zero.
struct WindingMismatchError : Error {
  int count;
  WindingMismatchError(int zero_count, const std::string& msg)
      : Error(msg), count(zero_count) {}
};

/// Principal-branch logarithm sampled on the negative real axis.
struct BranchCutError : Error {
  using Error::Error;
};

/// Sign change absent on the bracketing interval.
struct NoBracketError : Error {
  using Error::Error;
};

/// dt does not divide the delay h into at least 50 uniform steps.
struct GridMismatchError : Error {
  using Error::Error;
};

/// History function produced a non-finite value on [-h, 0].
struct NonFiniteHistoryError : Error {
  using Error::Error;
};

/// Too few envelope peaks in the fit window for a growth estimate.
struct TooFewPeaksError : Error {
  using Error::Error;
};

}  // namespace qproots
