#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bch {

enum class ErrorKind {
  Domain,
  NotInExistenceSet,
  QuadratureFailure,
  ConvergenceFailure,
  RouteMismatch,
  MarginTooSmall,
  FDUnreliable,
  CoefficientInconsistency,
  DiscretizationNotConverged,
  PositivityLost,
  BlowUp,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::NotInExistenceSet: return "NotInExistenceSet";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::RouteMismatch: return "RouteMismatch";
    case ErrorKind::MarginTooSmall: return "MarginTooSmall";
    case ErrorKind::FDUnreliable: return "FDUnreliable";
    case ErrorKind::CoefficientInconsistency: return "CoefficientInconsistency";
    case ErrorKind::DiscretizationNotConverged: return "DiscretizationNotConverged";
    case ErrorKind::PositivityLost: return "PositivityLost";
    case ErrorKind::BlowUp: return "BlowUp";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a kind so front ends can map
/// it to an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Domain rejections (bad input) versus numerical non-convergence.
constexpr bool is_domain_rejection(ErrorKind kind) noexcept {
  return kind == ErrorKind::Domain || kind == ErrorKind::NotInExistenceSet ||
         kind == ErrorKind::MarginTooSmall;
}

constexpr bool is_numerical_failure(ErrorKind kind) noexcept {
  return kind == ErrorKind::QuadratureFailure || kind == ErrorKind::ConvergenceFailure ||
         kind == ErrorKind::RouteMismatch || kind == ErrorKind::FDUnreliable ||
         kind == ErrorKind::CoefficientInconsistency ||
         kind == ErrorKind::DiscretizationNotConverged || kind == ErrorKind::PositivityLost ||
         kind == ErrorKind::BlowUp;
}

}  // namespace bch
