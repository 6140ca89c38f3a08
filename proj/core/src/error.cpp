#include "dalert/error.hpp"

#include <array>
#include <utility>

namespace dalert {
namespace {

constexpr std::array<std::pair<ErrorCode, std::string_view>, 19> kNames{{
    {ErrorCode::IllegalTransition, "IllegalTransition"},
    {ErrorCode::InvariantViolation, "InvariantViolation"},
    {ErrorCode::MalformedXml, "MalformedXml"},
    {ErrorCode::SchemaViolation, "SchemaViolation"},
    {ErrorCode::MissingLocation, "MissingLocation"},
    {ErrorCode::OutOfCoverage, "OutOfCoverage"},
    {ErrorCode::DegenerateRing, "DegenerateRing"},
    {ErrorCode::UnknownRegion, "UnknownRegion"},
    {ErrorCode::UnknownReport, "UnknownReport"},
    {ErrorCode::UnknownSubscriber, "UnknownSubscriber"},
    {ErrorCode::DuplicateVerification, "DuplicateVerification"},
    {ErrorCode::ReportClosed, "ReportClosed"},
    {ErrorCode::ValidationFailed, "ValidationFailed"},
    {ErrorCode::Forbidden, "Forbidden"},
    {ErrorCode::MergeCycle, "MergeCycle"},
    {ErrorCode::CorruptLog, "CorruptLog"},
    {ErrorCode::Unreachable, "Unreachable"},
    {ErrorCode::AbortedByUser, "AbortedByUser"},
    {ErrorCode::InvalidInput, "InvalidInput"},
}};

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += "; ";
    out += item;
  }
  return out;
}

}  // namespace

std::string_view to_string(ErrorCode code) {
  for (const auto& [c, name] : kNames) {
    if (c == code) return name;
  }
  return "Unknown";
}

ErrorCode error_code_from_string(std::string_view name) {
  for (const auto& [c, n] : kNames) {
    if (n == name) return c;
  }
  throw Error(ErrorCode::InvalidInput, std::string(name), "unknown error code");
}

Error::Error(ErrorCode code, std::string subject, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + "(" + subject + "): " + message),
      code_(code),
      subject_(std::move(subject)),
      detail_(message) {}

Error::Error(ErrorCode code, std::string subject)
    : std::runtime_error(std::string(to_string(code)) + "(" + subject + ")"),
      code_(code),
      subject_(std::move(subject)) {}

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error(ErrorCode::ValidationFailed, "report", join(violations)),
      violations_(std::move(violations)) {}

}  // namespace dalert
