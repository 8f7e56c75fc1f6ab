#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reenact {

enum class ErrorKind {
  Io,
  Format,
  SequenceGap,
  EmptySequence,
  DimensionMismatch,
  CountMismatch,
  Config,
  SingularFit,
  Triangulation,
  DegenerateTile,
  ErosionTooAggressive,
  DegenerateOverlap,
  BorderContact,
  SolverFailure,
  CacheMissing,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace reenact
