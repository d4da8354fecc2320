#pragma once

#include <stdexcept>
#include <string>

namespace biphoton {

// Base class of every domain error thrown by this library. kind() is a stable
// machine-readable name used by sweep error columns and CLI exit-code mapping.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
  virtual const char* kind() const noexcept { return "Error"; }
};

#define BIPHOTON_DEFINE_ERROR(NAME)                           \
  class NAME : public Error {                                 \
   public:                                                    \
    explicit NAME(const std::string& msg) : Error(msg) {}     \
    const char* kind() const noexcept override { return #NAME; } \
  }

// Wavelength outside the Sellmeier validity window.
BIPHOTON_DEFINE_ERROR(OutOfValidityWindow);
// The collinear mismatch has no root on (0, pi/2).
BIPHOTON_DEFINE_ERROR(NoPhaseMatching);
// A quantity that must be a positive magnitude is not.
BIPHOTON_DEFINE_ERROR(NonPositiveInput);
// First-order mismatch coefficients absent or not finite.
BIPHOTON_DEFINE_ERROR(MissingDispersion);
// Semantically inconsistent configuration (energy conservation, ranges, ...).
BIPHOTON_DEFINE_ERROR(InvalidConfig);
// A matrix that must be positive definite failed its Cholesky factorization.
BIPHOTON_DEFINE_ERROR(NotPositiveDefinite);
// Partial trace impossible: either the discarded block is not negative
// definite or the reduced kernel is not normalizable.
BIPHOTON_DEFINE_ERROR(DiscardedBlockNotDefinite);
// A hand-built kernel whose diagonal (or square) is not integrable.
BIPHOTON_DEFINE_ERROR(NotTraceClass);
// An observable requested for a configuration whose defining integrals diverge.
BIPHOTON_DEFINE_ERROR(UnnormalizableConfiguration);
// Malformed grid request (too few points, non-finite range, ...).
BIPHOTON_DEFINE_ERROR(InvalidGrid);
// Quadrature result still drifting when the grid resolution is doubled.
BIPHOTON_DEFINE_ERROR(GridTooCoarse);
// File-system level failure reading or writing a document.
BIPHOTON_DEFINE_ERROR(IoError);

#undef BIPHOTON_DEFINE_ERROR

// Structural schema violation (unknown key, wrong type). Carries the
// JSON-pointer path of the offending node.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& pointer, const std::string& msg)
      : Error(msg + " (at " + (pointer.empty() ? "/" : pointer) + ")"),
        pointer_(pointer) {}
  const char* kind() const noexcept override { return "SchemaError"; }
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

// A well-formed field whose magnitude is outside its physical range.
class UnitError : public Error {
 public:
  explicit UnitError(const std::string& msg) : Error(msg) {}
  UnitError(const std::string& pointer, const std::string& msg)
      : Error(msg + " (at " + pointer + ")"), pointer_(pointer) {}
  const char* kind() const noexcept override { return "UnitError"; }
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace biphoton
