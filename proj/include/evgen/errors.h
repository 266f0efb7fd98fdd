#ifndef EVGEN_ERRORS_H_
#define EVGEN_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evgen {

/// Failure classes. The CLI maps each one to its own exit status.
enum class ErrorCategory {
  kIo,
  kFormat,
  kSchema,
  kConstraint,
  kDecode,
};

const char* CategoryName(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(ErrorCategory::kIo, message) {}
};

/// Malformed document. `line` is 1-based; 0 when the document has no lines.
class FormatError : public Error {
 public:
  FormatError(const std::string& message, std::size_t line = 0);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public Error {
 public:
  SchemaError(const std::string& message, std::size_t line = 0);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Rejected linearized sequence. `position` indexes the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const { return position_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string reason_;
  std::size_t position_;
};

/// A token outside the legal candidate set, or a record that breaks the schema.
class ConstraintError : public Error {
 public:
  explicit ConstraintError(const std::string& message)
      : Error(ErrorCategory::kConstraint, message) {}
};

/// Truncation or a misbehaving scorer during decoding.
class DecodeError : public Error {
 public:
  explicit DecodeError(const std::string& message) : Error(ErrorCategory::kDecode, message) {}
};

}  // namespace evgen

#endif  // EVGEN_ERRORS_H_
