#pragma once

#include <stdexcept>
#include <string>

namespace anonaudit {

/// Base class for all library errors. The three subcategories map onto the
/// CLI exit-code contract: usage (1), data (2), soundness alarm (3).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : Error {
  using Error::Error;
};

/// Raised when an internal consistency guarantee is violated. Reaching one of
/// these means the attack machinery itself is wrong, not the input.
struct SoundnessError : Error {
  using Error::Error;
};

// -- hierarchy / segment construction ---------------------------------------

struct InvalidHeight : DataError {
  using DataError::DataError;
};
struct NonDivisibleDomain : DataError {
  using DataError::DataError;
};
struct GridMismatch : DataError {
  using DataError::DataError;
};
struct NotCompound : DataError {
  using DataError::DataError;
};
struct OutOfDomain : DataError {
  using DataError::DataError;
};
struct InvalidLayer : DataError {
  using DataError::DataError;
};

// -- dataset -----------------------------------------------------------------

struct EmptyDataset : DataError {
  using DataError::DataError;
};
struct DuplicateValues : DataError {
  using DataError::DataError;
};
struct DomainTooSmall : DataError {
  using DataError::DataError;
};

// -- attack / enumeration ----------------------------------------------------

struct NoOutliers : DataError {
  using DataError::DataError;
};
struct BoxTooLarge : DataError {
  using DataError::DataError;
};
struct SizeExceedsVolume : DataError {
  using DataError::DataError;
};
struct NotExhausted : DataError {
  using DataError::DataError;
};

/// cra_solutions() == 0 means the truth itself was excluded somewhere.
struct ZeroCra : SoundnessError {
  using SoundnessError::SoundnessError;
};
struct NoValidAssignment : SoundnessError {
  using SoundnessError::SoundnessError;
};
struct MultipleValid : SoundnessError {
  using SoundnessError::SoundnessError;
};

// -- file I/O ----------------------------------------------------------------

struct IoError : DataError {
  using DataError::DataError;
};
struct ParseError : DataError {
  using DataError::DataError;
};
struct UnknownInterval : DataError {
  using DataError::DataError;
};
struct MalformedRow : DataError {
  using DataError::DataError;
};

}  // namespace anonaudit
