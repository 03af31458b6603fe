#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace frachill {

enum class ErrorKind {
  Domain,
  Pole,
  Accuracy,
  NonDiagonalizable,
  Schema,
  Symmetry,
  DimensionMismatch,
  OutOfDomain,
  Kink,
  Divergence,
  SingularForcing,
  NonFiniteState,
  QuadratureFailure,
  IterationFailure,
  InvalidClassification,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace frachill
