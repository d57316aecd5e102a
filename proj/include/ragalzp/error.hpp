// Error codes and the library exception type.

#pragma once

#include <stdexcept>
#include <string>

namespace ragalzp {

enum class ErrorCode {
  kUnknownRaga,
  kBadScaleDatabase,
  kUnknownToken,
  kAmbiguousSvara,
  kSvaraNotInScale,
  kEmptyComposition,
  kZeroDurationMeasure,
  kEmptyPool,
  kMinLengthZero,
  kWindowTooLong,
  kNegativeSymbol,
  kEmptySequence,
  kLengthMismatch,
  kNoCrossPairs,
  kCorpusTooShort,
  kOrderUnsupported,
  kNonConvergence,
  kGenerationStalled,
  kEmptyExperiment,
  kBadConfig,
  kIoError,
};

const char* errorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(errorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ragalzp
