#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tpa {

enum class ErrorKind {
  invalid_parameter,
  unsupported_input,
  window_overflow,
  precondition,
  size_limit,
  excluded_graph,
  regularity,
  parse,
  missing_ingredient,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base error for every contract violation raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a Stein window would leave the representable range.
/// largest_safe() is the biggest window_max that can still be tabulated,
/// or -1 when even j = 0 is out of range.
class WindowOverflowError : public Error {
 public:
  WindowOverflowError(const std::string& message, long largest_safe)
      : Error(ErrorKind::window_overflow, message), largest_safe_(largest_safe) {}

  long largest_safe() const noexcept { return largest_safe_; }

 private:
  long largest_safe_;
};

/// Raised when an exact computation is requested beyond its size limit.
class SizeLimitError : public Error {
 public:
  SizeLimitError(const std::string& message, long limit)
      : Error(ErrorKind::size_limit, message), limit_(limit) {}

  long limit() const noexcept { return limit_; }

 private:
  long limit_;
};

/// Parse failure in a graph file; line() is 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, long line)
      : Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + message), line_(line) {}

  long line() const noexcept { return line_; }

 private:
  long line_;
};

}  // namespace tpa
