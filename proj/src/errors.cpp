#include "stablefrac/errors.hpp"

namespace sf {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::DegenerateMeasure: return "DegenerateMeasure";
    case ErrorKind::BadAlpha: return "BadAlpha";
    case ErrorKind::AsymmetricMeasure: return "AsymmetricMeasure";
    case ErrorKind::SingularSigmaMatrix: return "SingularSigmaMatrix";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::NonHermitianOutput: return "NonHermitianOutput";
    case ErrorKind::NegativeTime: return "NegativeTime";
    case ErrorKind::BadExponent: return "BadExponent";
    case ErrorKind::MeanNotZero: return "MeanNotZero";
    case ErrorKind::UnsupportedMeasure: return "UnsupportedMeasure";
    case ErrorKind::BadSpec: return "BadSpec";
    case ErrorKind::UnsupportedDim: return "UnsupportedDim";
    case ErrorKind::OriginSingularity: return "OriginSingularity";
    case ErrorKind::UnsupportedModel: return "UnsupportedModel";
    case ErrorKind::ShapeTooLarge: return "ShapeTooLarge";
    case ErrorKind::UnsupportedShape: return "UnsupportedShape";
    case ErrorKind::ResolutionGuard: return "ResolutionGuard";
    case ErrorKind::FitDiverged: return "FitDiverged";
    case ErrorKind::UnknownCheck: return "UnknownCheck";
    case ErrorKind::UnsupportedModelForCheck: return "UnsupportedModelForCheck";
    case ErrorKind::ZeroField: return "ZeroField";
    case ErrorKind::BadExponents: return "BadExponents";
    case ErrorKind::Stalled: return "Stalled";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
  }
  return "Unknown";
}

bool is_validation(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonHermitianOutput:
    case ErrorKind::FitDiverged:
    case ErrorKind::Stalled:
    case ErrorKind::SingularSigmaMatrix:
      return false;
    default:
      return true;
  }
}

}  // namespace sf
