#include "reenact/error.hpp"

namespace reenact {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return "io";
    case ErrorKind::Format: return "format";
    case ErrorKind::SequenceGap: return "sequence-gap";
    case ErrorKind::EmptySequence: return "empty-sequence";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::CountMismatch: return "count-mismatch";
    case ErrorKind::Config: return "config";
    case ErrorKind::SingularFit: return "singular-fit";
    case ErrorKind::Triangulation: return "triangulation";
    case ErrorKind::DegenerateTile: return "degenerate-tile";
    case ErrorKind::ErosionTooAggressive: return "erosion-too-aggressive";
    case ErrorKind::DegenerateOverlap: return "degenerate-overlap";
    case ErrorKind::BorderContact: return "border-contact";
    case ErrorKind::SolverFailure: return "solver-failure";
    case ErrorKind::CacheMissing: return "cache-missing";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

}  // namespace reenact
