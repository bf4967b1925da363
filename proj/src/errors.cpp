#include "eagle/errors.hpp"

namespace eagle {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ArgumentRange: return "ArgumentRange";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::IntervalError: return "IntervalError";
    case ErrorKind::CoordinateRange: return "CoordinateRange";
    case ErrorKind::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::EmptyTrajectory: return "EmptyTrajectory";
    case ErrorKind::NoOverlap: return "NoOverlap";
    case ErrorKind::UnknownStep: return "UnknownStep";
    case ErrorKind::AuthMissing: return "AuthMissing";
    case ErrorKind::RateLimited: return "RateLimited";
    case ErrorKind::ReplayMiss: return "ReplayMiss";
    case ErrorKind::TransportError: return "TransportError";
    case ErrorKind::LayoutError: return "LayoutError";
    case ErrorKind::DanglingReference: return "DanglingReference";
    case ErrorKind::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorKind::MalformedLine: return "MalformedLine";
    case ErrorKind::MissingMetric: return "MissingMetric";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::UsageError: return "UsageError";
  }
  return "UnknownError";
}

}  // namespace eagle
