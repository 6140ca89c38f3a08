#include "dalert/event_log.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <utility>

#include "dalert/error.hpp"

namespace dalert {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<AuditAction, std::string_view>, 10> kActions{{
    {AuditAction::Submit, "Submit"},
    {AuditAction::Distribute, "Distribute"},
    {AuditAction::Review, "Review"},
    {AuditAction::Verify, "Verify"},
    {AuditAction::Assign, "Assign"},
    {AuditAction::Merge, "Merge"},
    {AuditAction::Resolve, "Resolve"},
    {AuditAction::Update, "Update"},
    {AuditAction::AttachDocument, "AttachDocument"},
    {AuditAction::Notify, "Notify"},
}};

}  // namespace

std::string_view to_string(AuditAction action) {
  for (const auto& [a, name] : kActions) {
    if (a == action) return name;
  }
  return "?";
}

AuditAction parse_audit_action(std::string_view name) {
  for (const auto& [a, n] : kActions) {
    if (n == name) return a;
  }
  throw Error(ErrorCode::InvalidInput, std::string(name), "unknown audit action");
}

std::string encode_event(const AuditEvent& e) {
  json body{{"actor", e.actor},
            {"action", to_string(e.action)},
            {"report", e.report_id},
            {"ts", format_utc(e.timestamp)},
            {"payload", e.payload}};
  return std::to_string(e.seq) + " " + body.dump();
}

AuditEvent decode_event(std::string_view line) {
  auto space = line.find(' ');
  if (space == std::string_view::npos) throw Error(ErrorCode::CorruptLog, std::string(line.substr(0, 32)), "no seq prefix");
  AuditEvent e;
  auto [end, ec] = std::from_chars(line.data(), line.data() + space, e.seq);
  if (ec != std::errc() || end != line.data() + space || e.seq == 0) {
    throw Error(ErrorCode::CorruptLog, std::string(line.substr(0, space)), "bad sequence number");
  }
  try {
    json body = json::parse(line.substr(space + 1));
    e.actor = body.at("actor").get<std::string>();
    e.action = parse_audit_action(body.at("action").get<std::string>());
    e.report_id = body.at("report").get<std::string>();
    e.timestamp = parse_datetime(body.at("ts").get<std::string>()).utc;
    e.payload = body.at("payload");
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::CorruptLog, std::to_string(e.seq), ex.what());
  } catch (const Error& ex) {
    throw Error(ErrorCode::CorruptLog, std::to_string(e.seq), ex.what());
  }
  return e;
}

std::vector<AuditEvent> read_events(std::istream& in, std::uint64_t first_seq) {
  std::vector<AuditEvent> events;
  std::string line;
  std::uint64_t expected = first_seq;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    AuditEvent e = decode_event(line);
    if (e.seq != expected) {
      throw Error(ErrorCode::CorruptLog, std::to_string(e.seq), "expected seq " + std::to_string(expected));
    }
    ++expected;
    events.push_back(std::move(e));
  }
  return events;
}

std::vector<AuditEvent> read_event_file(const std::filesystem::path& path, std::uint64_t first_seq) {
  std::ifstream in(path);
  if (!in) return {};
  return read_events(in, first_seq);
}

EventLogWriter::EventLogWriter(const std::filesystem::path& path) : out_(path, std::ios::app) {
  if (!out_) throw Error(ErrorCode::InvalidInput, path.string(), "cannot open event log for append");
}

void EventLogWriter::append(const AuditEvent& event) {
  out_ << encode_event(event) << '\n';
  out_.flush();
}

}  // namespace dalert
