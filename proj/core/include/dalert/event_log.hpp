#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dalert/domain.hpp"

namespace dalert {

enum class AuditAction { Submit, Distribute, Review, Verify, Assign, Merge, Resolve, Update, AttachDocument, Notify };

std::string_view to_string(AuditAction action);
AuditAction parse_audit_action(std::string_view name);

// One append-only record of a state change. The payload carries the full
// effect of the change, so replaying events needs nothing else.
struct AuditEvent {
  std::uint64_t seq = 0;
  ActorId actor;
  AuditAction action = AuditAction::Submit;
  std::string report_id;
  UtcTime timestamp{};
  nlohmann::json payload = nlohmann::json::object();

  friend bool operator==(const AuditEvent&, const AuditEvent&) = default;
};

// "<seq> <json>" without the trailing newline.
std::string encode_event(const AuditEvent& event);
// Throws Error(CorruptLog).
AuditEvent decode_event(std::string_view line);

// Reads every line of a log. Blank lines are skipped. Sequence numbers must
// run gaplessly from `first_seq`. Throws Error(CorruptLog).
std::vector<AuditEvent> read_events(std::istream& in, std::uint64_t first_seq = 1);
std::vector<AuditEvent> read_event_file(const std::filesystem::path& path, std::uint64_t first_seq = 1);

// Line-per-event file sink, flushed after every append.
class EventLogWriter {
 public:
  explicit EventLogWriter(const std::filesystem::path& path);
  void append(const AuditEvent& event);

 private:
  std::ofstream out_;
};

}  // namespace dalert
