#pragma once

#include <stdexcept>
#include <string>

namespace spintomo {

/// Violated precondition on a library call (bad spin, bad outcome, bad config).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or inconsistent input data (record files, state files).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what, long line = -1)
      : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

/// A numerical check (group identity, normalization) failed its tolerance.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spintomo
