#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eagle {

enum class ErrorKind {
  ArgumentRange,
  MalformedRow,
  IntervalError,
  CoordinateRange,
  NonMonotonicTime,
  OutOfRange,
  EmptyTrajectory,
  NoOverlap,
  UnknownStep,
  AuthMissing,
  RateLimited,
  ReplayMiss,
  TransportError,
  LayoutError,
  DanglingReference,
  SchemaVersionMismatch,
  MalformedLine,
  MissingMetric,
  EmptyInput,
  UsageError,
};

const char* to_string(ErrorKind kind);

/// Toolkit-wide error. `kind` names the violated contract; `line_no` is
/// 1-based and set by row/line parsers (0 when not applicable).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  Error(ErrorKind kind, std::size_t line_no, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + " at line " +
                           std::to_string(line_no) + ": " + message),
        kind_(kind),
        line_no_(line_no) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t line_no() const noexcept { return line_no_; }

 private:
  ErrorKind kind_;
  std::size_t line_no_ = 0;
};

}  // namespace eagle
