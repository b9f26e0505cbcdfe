#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eventdistill {

// Broad failure category; the CLI maps each one to an exit status.
enum class ErrorCategory { usage, data, backend };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorCategory::usage, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorCategory::data, what) {}
};

// Malformed input at a specific 1-based line of a line-oriented file.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class BackendError : public Error {
 public:
  enum class Kind { transport, timeout, malformed_response, script_exhausted, config };

  BackendError(Kind kind, const std::string& what)
      : Error(ErrorCategory::backend, what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace eventdistill
