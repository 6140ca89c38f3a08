#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dalert/domain.hpp"
#include "dalert/routing.hpp"

namespace dalert {

inline constexpr std::size_t kMaxPushBytes = 512;
inline constexpr std::size_t kMaxHeadlineBytes = 160;

struct AlertSummary {
  std::string report_id;
  DisasterKind kind = DisasterKind::Flood;
  Severity severity = Severity::Minor;
  GeoPoint location;
  LifecycleState state = LifecycleState::Submitted;
  std::string headline;
  // Document reference distributed with this push, if any.
  std::optional<std::string> document;

  friend bool operator==(const AlertSummary&, const AlertSummary&) = default;
};

AlertSummary summarize(const DisasterReport& report, std::optional<std::string> document = std::nullopt);

struct PushMessage {
  Topic topic;
  std::uint64_t seq = 0;
  AlertSummary summary;

  friend bool operator==(const PushMessage&, const PushMessage&) = default;
};

// Compact JSON, at most kMaxPushBytes. The headline is shortened first, then
// the document reference, always on UTF-8 boundaries.
std::string encode_push(const PushMessage& message);
// Throws Error(InvalidInput) for undecodable input.
PushMessage decode_push(std::string_view encoded);

// Per-topic append-only message logs. Sequence numbers start at 1 and are
// gapless within a topic. Not internally synchronized.
class TopicLogs {
 public:
  // Stores the message exactly as a subscriber will decode it.
  const PushMessage& publish(const Topic& topic, const AlertSummary& summary);

  // Re-inserts a stored message; its seq must continue the topic's log.
  void restore(const PushMessage& message);

  std::uint64_t latest(const Topic& topic) const;
  std::vector<PushMessage> since(const Topic& topic, std::uint64_t cursor) const;
  // Topics that carry at least one message about `report_id`.
  std::set<Topic> topics_holding(std::string_view report_id) const;
  const std::map<Topic, std::vector<PushMessage>>& logs() const { return logs_; }

 private:
  std::map<Topic, std::vector<PushMessage>> logs_;
};

}  // namespace dalert
