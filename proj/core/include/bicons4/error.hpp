#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bicons4 {

enum class ErrorKind {
  NullVector,
  SingularMetric,
  DivisionNearZero,
  DomainError,
  OrderOverflow,
  DegenerateMetric,
  NullNormal,
  NonDiagonalizable,
  UmbilicPoint,
  BadParams,
  NoConvergence,
  SingularEndpoint,
  GuardHit,
  NoBracket,
  IntervalMismatch,
  EmptyDomain,
  GradTooSmall,
  UnknownFamily,
  MissingParam,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Library error. `location` carries the offending chart coordinate or
/// profile abscissa when one exists (e.g. the s at which a guard was hit).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::optional<double> location = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what), location_(location) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<double> location() const noexcept { return location_; }
  /// what() without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
  std::optional<double> location_;
};

}  // namespace bicons4
