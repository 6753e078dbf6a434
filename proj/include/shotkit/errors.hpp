#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace shotkit {

// Every failure the library can raise, as a closed enum so callers can
// branch on the condition instead of matching message text.
enum class ErrorCode {
    // tensor container / file format
    BadMagic,
    UnsupportedVersion,
    UnsupportedDtype,
    TruncatedPayload,
    TrailingData,
    ShapeMismatch,
    NonFiniteValue,
    // stream / timeline validation
    NonMonotonicTimestamps,
    NonMonotonic,
    OutOfRange,
    NegativeTime,
    // parameter validation
    InvalidK,
    InvalidRho,
    InvalidL,
    InvalidN,
    InvalidTau,
    InconsistentInputs,
    // sequence assembly
    EmptyVisual,
    EmptyQuery,
    InvalidText,
    // moment parsing
    ParseError,
    Unrecoverable,
    // evaluation / batch runs
    EmptyDataset,
    MissingPredictions,
    // io and configuration
    IoError,
    BadManifest,
    BadConfig,
};

const char* error_code_name(ErrorCode code);

// Single exception type for the whole library.  what() carries the code
// name plus a human-readable message.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

// Non-throwing validation result: which condition failed and where.
// index is the flat offset (or element index) of the first offender.
struct Issue {
    ErrorCode code;
    std::int64_t index = -1;
    std::string message;
};

// Convert a validation issue into the equivalent exception.
[[noreturn]] inline void raise(const Issue& issue) {
    throw Error(issue.code, issue.message);
}

}  // namespace shotkit
