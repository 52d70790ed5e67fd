#pragma once

#include <stdexcept>
#include <string>

namespace chshq {

// Parameters outside an operation's domain (non-prime p, t not dividing s, ...).
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// A checked mathematical identity failed at runtime.
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

// The requested size exceeds what an exhaustive routine is allowed to enumerate.
class CapExceeded : public std::length_error {
 public:
  explicit CapExceeded(const std::string& what) : std::length_error(what) {}
};

}  // namespace chshq
