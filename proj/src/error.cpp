#include "ragalzp/error.hpp"

namespace ragalzp {

const char* errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownRaga: return "UnknownRaga";
    case ErrorCode::kBadScaleDatabase: return "BadScaleDatabase";
    case ErrorCode::kUnknownToken: return "UnknownToken";
    case ErrorCode::kAmbiguousSvara: return "AmbiguousSvara";
    case ErrorCode::kSvaraNotInScale: return "SvaraNotInScale";
    case ErrorCode::kEmptyComposition: return "EmptyComposition";
    case ErrorCode::kZeroDurationMeasure: return "ZeroDurationMeasure";
    case ErrorCode::kEmptyPool: return "EmptyPool";
    case ErrorCode::kMinLengthZero: return "MinLengthZero";
    case ErrorCode::kWindowTooLong: return "WindowTooLong";
    case ErrorCode::kNegativeSymbol: return "NegativeSymbol";
    case ErrorCode::kEmptySequence: return "EmptySequence";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNoCrossPairs: return "NoCrossPairs";
    case ErrorCode::kCorpusTooShort: return "CorpusTooShort";
    case ErrorCode::kOrderUnsupported: return "OrderUnsupported";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kGenerationStalled: return "GenerationStalled";
    case ErrorCode::kEmptyExperiment: return "EmptyExperiment";
    case ErrorCode::kBadConfig: return "BadConfig";
    case ErrorCode::kIoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace ragalzp
