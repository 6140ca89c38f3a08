#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dalert {

enum class ErrorCode {
  IllegalTransition,
  InvariantViolation,
  MalformedXml,
  SchemaViolation,
  MissingLocation,
  OutOfCoverage,
  DegenerateRing,
  UnknownRegion,
  UnknownReport,
  UnknownSubscriber,
  DuplicateVerification,
  ReportClosed,
  ValidationFailed,
  Forbidden,
  MergeCycle,
  CorruptLog,
  Unreachable,
  AbortedByUser,
  InvalidInput,
};

std::string_view to_string(ErrorCode code);
ErrorCode error_code_from_string(std::string_view name);

// Every failure raised by the library. `subject` names the offending
// element, field, report id or region, whichever applies.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string subject, const std::string& message);
  Error(ErrorCode code, std::string subject);

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }
  // The message without the code and subject prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string subject_;
  std::string detail_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

}  // namespace dalert
