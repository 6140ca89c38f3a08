#include "dalert/push.hpp"

#include <nlohmann/json.hpp>

#include "dalert/error.hpp"

namespace dalert {

using nlohmann::json;

namespace {

// Largest prefix of `s` no longer than `max` bytes that ends on a UTF-8
// boundary.
std::string utf8_prefix(const std::string& s, std::size_t max) {
  if (s.size() <= max) return s;
  std::size_t cut = max;
  while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) --cut;
  return s.substr(0, cut);
}

std::string dump(const PushMessage& m) {
  const AlertSummary& s = m.summary;
  json j{{"t", m.topic.str()},
         {"q", m.seq},
         {"r", s.report_id},
         {"k", to_string(s.kind)},
         {"s", to_string(s.severity)},
         {"p", {s.location.lat, s.location.lon}},
         {"st", to_string(s.state)},
         {"h", s.headline}};
  if (s.document) j["d"] = *s.document;
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace

AlertSummary summarize(const DisasterReport& report, std::optional<std::string> document) {
  return AlertSummary{report.id,    report.kind,  report.severity, report.location,
                      report.state, utf8_prefix(report.description, kMaxHeadlineBytes), std::move(document)};
}

std::string encode_push(const PushMessage& message) {
  PushMessage m = message;
  std::string out = dump(m);
  while (out.size() > kMaxPushBytes) {
    std::size_t excess = out.size() - kMaxPushBytes;
    if (!m.summary.headline.empty()) {
      std::size_t keep = m.summary.headline.size() > excess ? m.summary.headline.size() - excess : 0;
      m.summary.headline = utf8_prefix(m.summary.headline, keep);
    } else if (m.summary.document && !m.summary.document->empty()) {
      std::size_t keep = m.summary.document->size() > excess ? m.summary.document->size() - excess : 0;
      m.summary.document = utf8_prefix(*m.summary.document, keep);
    } else {
      throw Error(ErrorCode::InvariantViolation, message.topic.str(), "push message identifiers exceed 512 bytes");
    }
    out = dump(m);
  }
  return out;
}

PushMessage decode_push(std::string_view encoded) {
  try {
    json j = json::parse(encoded);
    PushMessage m;
    m.topic = Topic::parse(j.at("t").get<std::string>());
    m.seq = j.at("q").get<std::uint64_t>();
    AlertSummary& s = m.summary;
    s.report_id = j.at("r").get<std::string>();
    s.kind = parse_kind(j.at("k").get<std::string>());
    s.severity = parse_severity(j.at("s").get<std::string>());
    s.location = GeoPoint{j.at("p").at(0).get<double>(), j.at("p").at(1).get<double>()};
    s.state = parse_state(j.at("st").get<std::string>());
    s.headline = j.at("h").get<std::string>();
    if (j.contains("d")) s.document = j["d"].get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, "push", e.what());
  }
}

const PushMessage& TopicLogs::publish(const Topic& topic, const AlertSummary& summary) {
  auto& log = logs_[topic];
  PushMessage m{topic, log.size() + 1, summary};
  log.push_back(decode_push(encode_push(m)));
  return log.back();
}

void TopicLogs::restore(const PushMessage& message) {
  auto& log = logs_[message.topic];
  if (message.seq != log.size() + 1) {
    throw Error(ErrorCode::InvalidInput, message.topic.str(), "restored message breaks the topic sequence");
  }
  log.push_back(message);
}

std::uint64_t TopicLogs::latest(const Topic& topic) const {
  auto it = logs_.find(topic);
  return it == logs_.end() ? 0 : it->second.size();
}

std::vector<PushMessage> TopicLogs::since(const Topic& topic, std::uint64_t cursor) const {
  auto it = logs_.find(topic);
  if (it == logs_.end() || cursor >= it->second.size()) return {};
  return {it->second.begin() + static_cast<std::ptrdiff_t>(cursor), it->second.end()};
}

std::set<Topic> TopicLogs::topics_holding(std::string_view report_id) const {
  std::set<Topic> out;
  for (const auto& [topic, log] : logs_) {
    for (const auto& m : log) {
      if (m.summary.report_id == report_id) {
        out.insert(topic);
        break;
      }
    }
  }
  return out;
}

}  // namespace dalert
