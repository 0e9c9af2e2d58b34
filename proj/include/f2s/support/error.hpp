#pragma once

#include <stdexcept>
#include <string>

namespace f2s {

/// Root of every exception thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller passed a value that violates an operation's precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Configuration is missing or inconsistent.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace f2s
