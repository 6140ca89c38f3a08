#include "dalert/verification.hpp"

#include "dalert/error.hpp"

namespace dalert {

const VerificationRecord& VerificationLedger::verify(const DisasterReport& report, const Actor& verifier, UtcTime at,
                                                     std::string note) {
  if (is_terminal(report.state)) {
    throw Error(ErrorCode::ReportClosed, report.id, std::string("report is ") + std::string(to_string(report.state)));
  }
  return append(VerificationRecord{report.id, verifier.id, verifier.role, at, std::move(note)});
}

const VerificationRecord& VerificationLedger::append(VerificationRecord record) {
  if (has(record.report_id, record.verifier)) {
    throw Error(ErrorCode::DuplicateVerification, record.report_id, record.verifier + " already verified");
  }
  by_report_[record.report_id].push_back(records_.size());
  records_.push_back(std::move(record));
  return records_.back();
}

bool VerificationLedger::has(std::string_view report_id, std::string_view verifier) const {
  auto it = by_report_.find(std::string(report_id));
  if (it == by_report_.end()) return false;
  for (std::size_t i : it->second) {
    if (records_[i].verifier == verifier) return true;
  }
  return false;
}

std::vector<VerificationRecord> VerificationLedger::records_for(std::string_view report_id) const {
  std::vector<VerificationRecord> out;
  if (auto it = by_report_.find(std::string(report_id)); it != by_report_.end()) {
    for (std::size_t i : it->second) out.push_back(records_[i]);
  }
  return out;
}

Reliability VerificationLedger::reliability(std::string_view report_id, const VerificationWeights& weights) const {
  Reliability r;
  if (auto it = by_report_.find(std::string(report_id)); it != by_report_.end()) {
    for (std::size_t i : it->second) {
      if (is_institutional(records_[i].verifier_role)) ++r.official_count;
      else ++r.user_count;
    }
  }
  r.score = weights.official * static_cast<double>(r.official_count) + weights.user * static_cast<double>(r.user_count);
  return r;
}

bool VerificationLedger::auto_distribution_eligible(std::string_view report_id, double threshold,
                                                    const VerificationWeights& weights) const {
  return reliability(report_id, weights).score >= threshold;
}

std::vector<VerificationRecord> VerificationLedger::carry_over(std::string_view from, std::string_view into) const {
  std::vector<VerificationRecord> out;
  for (auto rec : records_for(from)) {
    if (has(into, rec.verifier)) continue;
    rec.report_id = std::string(into);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace dalert
