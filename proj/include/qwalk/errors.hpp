#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qwalk {

// Raised when a simulation leaves its numerical contract: norm drift, an
// amplitude reaching the edge of the lattice, an invalid density matrix.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Amplitude would be shifted off the lattice window.
class BoundaryError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// The quasienergy gap closes, so no winding number exists for these angles.
class GaplessError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// A run configuration field failed validation.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace qwalk
