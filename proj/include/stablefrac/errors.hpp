#pragma once

#include <stdexcept>
#include <string>

namespace sf {

enum class ErrorKind {
  DegenerateMeasure,
  BadAlpha,
  AsymmetricMeasure,
  SingularSigmaMatrix,
  SizeMismatch,
  NonHermitianOutput,
  NegativeTime,
  BadExponent,
  MeanNotZero,
  UnsupportedMeasure,
  BadSpec,
  UnsupportedDim,
  OriginSingularity,
  UnsupportedModel,
  ShapeTooLarge,
  UnsupportedShape,
  ResolutionGuard,
  FitDiverged,
  UnknownCheck,
  UnsupportedModelForCheck,
  ZeroField,
  BadExponents,
  Stalled,
  SchemaViolation,
};

const char* kind_name(ErrorKind k);

// Input-validation errors map to CLI exit code 3; the rest are runtime failures.
bool is_validation(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg, std::string pointer = {})
      : std::runtime_error(std::string(kind_name(kind)) + ": " + msg),
        kind_(kind),
        pointer_(std::move(pointer)) {}
  ErrorKind kind() const { return kind_; }
  // JSON pointer into the offending config document (SchemaViolation only).
  const std::string& pointer() const { return pointer_; }

 private:
  ErrorKind kind_;
  std::string pointer_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

}  // namespace sf
