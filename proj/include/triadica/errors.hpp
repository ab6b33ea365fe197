#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace triadica {

/// Base of every typed failure raised by the library. Report-valued checks
/// never throw; these are reserved for broken preconditions and the
/// explicitly typed error outcomes of individual operations.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define TRIADICA_ERROR(Name)                                              \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

TRIADICA_ERROR(ParseError);
TRIADICA_ERROR(UnresolvedReference);
TRIADICA_ERROR(DimensionMismatch);
TRIADICA_ERROR(PreconditionViolation);
TRIADICA_ERROR(NotSplit);
TRIADICA_ERROR(NotFunctional);
TRIADICA_ERROR(NotADerivation);
TRIADICA_ERROR(FactorizationFailed);
TRIADICA_ERROR(BoundExceeded);

#undef TRIADICA_ERROR

/// Raised when a supposed presheaf morphism fails the sections-over-subset
/// commutativity square. Carries the offending open and basis index.
class DiagramTwoViolation : public Error {
 public:
  DiagramTwoViolation(std::size_t open, std::size_t basis_index,
                      const std::string& message)
      : Error("DiagramTwoViolation", message),
        open_(open),
        basis_index_(basis_index) {}

  std::size_t open() const noexcept { return open_; }
  std::size_t basis_index() const noexcept { return basis_index_; }

 private:
  std::size_t open_;
  std::size_t basis_index_;
};

}  // namespace triadica
