#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dalert/domain.hpp"

namespace dalert {

struct VerificationRecord {
  std::string report_id;
  ActorId verifier;
  Role verifier_role = Role::Villager;
  UtcTime timestamp{};
  std::string note;

  friend bool operator==(const VerificationRecord&, const VerificationRecord&) = default;
};

struct VerificationWeights {
  double official = 3.0;
  double user = 1.0;
};

struct Reliability {
  std::int64_t official_count = 0;
  std::int64_t user_count = 0;
  double score = 0.0;

  friend bool operator==(const Reliability&, const Reliability&) = default;
};

// Append-only store of verification acts. Not internally synchronized;
// the owning service serializes writers.
class VerificationLedger {
 public:
  // Records `verifier` vouching for `report`. Throws Error(ReportClosed) when
  // the report is Merged or Resolved and Error(DuplicateVerification) when
  // this verifier already vouched for it.
  const VerificationRecord& verify(const DisasterReport& report, const Actor& verifier, UtcTime at,
                                   std::string note = {});

  // Raw append with the uniqueness check only.
  const VerificationRecord& append(VerificationRecord record);

  bool has(std::string_view report_id, std::string_view verifier) const;
  std::vector<VerificationRecord> records_for(std::string_view report_id) const;
  const std::vector<VerificationRecord>& records() const { return records_; }

  // Counts are recomputed from the stored records on every call. INGOs count
  // as official verifiers alongside MAF, PAFO and DAFO.
  Reliability reliability(std::string_view report_id, const VerificationWeights& weights = {}) const;
  bool auto_distribution_eligible(std::string_view report_id, double threshold,
                                  const VerificationWeights& weights = {}) const;

  // Records of `from` re-addressed to `into`, skipping verifiers `into`
  // already has. Used when merging duplicate reports.
  std::vector<VerificationRecord> carry_over(std::string_view from, std::string_view into) const;

 private:
  std::vector<VerificationRecord> records_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_report_;
};

}  // namespace dalert
