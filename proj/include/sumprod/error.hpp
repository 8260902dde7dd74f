#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sumprod {

enum class ErrorKind {
  CompositeModulus,
  EvenModulus,
  ModulusTooLarge,
  SpecSyntax,
  ElementOutOfRange,
  SizeExceedsField,
  FieldMismatch,
  InvalidArgument,
  UniverseTooLarge,
  BudgetExceeded,
  NonDegenerateRequired,
  FormRequired,
  GeneratorNotUnit,
  ProgressionCollision,
  SizeAboveSqrtP,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::CompositeModulus: return "CompositeModulus";
    case ErrorKind::EvenModulus: return "EvenModulus";
    case ErrorKind::ModulusTooLarge: return "ModulusTooLarge";
    case ErrorKind::SpecSyntax: return "SpecSyntax";
    case ErrorKind::ElementOutOfRange: return "ElementOutOfRange";
    case ErrorKind::SizeExceedsField: return "SizeExceedsField";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UniverseTooLarge: return "UniverseTooLarge";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NonDegenerateRequired: return "NonDegenerateRequired";
    case ErrorKind::FormRequired: return "FormRequired";
    case ErrorKind::GeneratorNotUnit: return "GeneratorNotUnit";
    case ErrorKind::ProgressionCollision: return "ProgressionCollision";
    case ErrorKind::SizeAboveSqrtP: return "SizeAboveSqrtP";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for resource caps (budget, universe size, sqrt(p) guard).
  bool is_limit() const noexcept {
    return kind_ == ErrorKind::BudgetExceeded || kind_ == ErrorKind::UniverseTooLarge ||
           kind_ == ErrorKind::SizeAboveSqrtP;
  }

 private:
  ErrorKind kind_;
};

}  // namespace sumprod
