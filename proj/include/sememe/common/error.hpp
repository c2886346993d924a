#pragma once

#include <stdexcept>
#include <string>

namespace sememe {

// Base of every error raised by the toolkit. The subclass decides the
// process exit code used by the command line front end.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad invocation or bad configuration value (exit code 1).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

// Non-finite values, diverged training, failed gradient checks (exit code 3).
class NumericError : public Error {
 public:
  using Error::Error;
};

// Tensor operands that do not conform to an op's shape rule.
class ShapeError : public Error {
 public:
  using Error::Error;
};

enum class ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kNumeric = 3,
};

ExitCode exit_code_for(const std::exception& e) noexcept;

}  // namespace sememe
