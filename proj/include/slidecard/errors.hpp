#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace slidecard {

// Caller broke an operation's precondition (index out of range, bad k', ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Rejected parameters: pool geometry, estimator or generator settings.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed trace or snapshot input. `position` is a 1-based line number for
// text input and a byte offset for binary input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::uint64_t position)
      : std::runtime_error(what + " (at " + std::to_string(position) + ")"),
        position_(position) {}

  std::uint64_t position() const noexcept { return position_; }

 private:
  std::uint64_t position_;
};

// Timestamps went backwards within a trace.
class OrderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slidecard
