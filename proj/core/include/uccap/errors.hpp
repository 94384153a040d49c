#pragma once

#include <stdexcept>
#include <string>

namespace uccap {

enum class ErrorCode {
  DegenerateSample,
  MissingSpec,
  QuantileCollapse,
  TooFewSamples,
  NoFeasibleFamily,
  NonpositiveSE,
  TooFewBoot,
  DegenerateBootstrap,
  EmptyTrainingSet,
  SchemaMismatch,
  LengthMismatch,
  NonfiniteLoss,
  EmptyValidation,
  SchemaVersionMismatch,
  CorruptFile,
  NonpositiveCost,
  InfeasibleSpec,
  GroupTooLarge,
  EmptyInput,
  InconsistentSpec,
  ParseError,
  EmptyDimension,
  InvalidConfig,
};

const char* error_code_name(ErrorCode code);

/// Single exception type for the whole library; tests and the CLI
/// dispatch on code() rather than on a class hierarchy.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::MissingSpec: return "MissingSpec";
    case ErrorCode::QuantileCollapse: return "QuantileCollapse";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NoFeasibleFamily: return "NoFeasibleFamily";
    case ErrorCode::NonpositiveSE: return "NonpositiveSE";
    case ErrorCode::TooFewBoot: return "TooFewBoot";
    case ErrorCode::DegenerateBootstrap: return "DegenerateBootstrap";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonfiniteLoss: return "NonfiniteLoss";
    case ErrorCode::EmptyValidation: return "EmptyValidation";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::NonpositiveCost: return "NonpositiveCost";
    case ErrorCode::InfeasibleSpec: return "InfeasibleSpec";
    case ErrorCode::GroupTooLarge: return "GroupTooLarge";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InconsistentSpec: return "InconsistentSpec";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyDimension: return "EmptyDimension";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "UnknownError";
}

}  // namespace uccap
