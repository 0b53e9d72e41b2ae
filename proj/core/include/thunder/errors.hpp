#pragma once

#include <stdexcept>
#include <string>

namespace thunder {

/// Raised when a user-facing parameter falls outside its documented range.
/// `field()` names the offending parameter so front ends can report it.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Raised for malformed or unreadable audio files.
class WavError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace thunder
