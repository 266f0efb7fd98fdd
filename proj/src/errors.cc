#include "evgen/errors.h"

namespace evgen {

namespace {

std::string WithLine(const std::string& message, std::size_t line) {
  if (line == 0) return message;
  return "line " + std::to_string(line) + ": " + message;
}

}  // namespace

const char* CategoryName(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kIo:
      return "io";
    case ErrorCategory::kFormat:
      return "format";
    case ErrorCategory::kSchema:
      return "schema";
    case ErrorCategory::kConstraint:
      return "constraint";
    case ErrorCategory::kDecode:
      return "decode";
  }
  return "unknown";
}

FormatError::FormatError(const std::string& message, std::size_t line)
    : Error(ErrorCategory::kFormat, WithLine(message, line)), line_(line) {}

SchemaError::SchemaError(const std::string& message, std::size_t line)
    : Error(ErrorCategory::kSchema, WithLine(message, line)), line_(line) {}

ParseError::ParseError(const std::string& what, std::size_t position)
    : Error(ErrorCategory::kFormat, what + " at position " + std::to_string(position)),
      reason_(what),
      position_(position) {}

}  // namespace evgen
