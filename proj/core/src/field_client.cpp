#include "dalert/field_client.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "dalert/api.hpp"
#include "dalert/error.hpp"
#include "dalert/serialization.hpp"

namespace dalert {

using nlohmann::json;

// --- link ---------------------------------------------------------------------------

namespace {

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

}  // namespace

LinkProfile LinkProfile::parse(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() != 3) throw Error(ErrorCode::InvalidInput, std::string(text), "expected drop:latency:jitter");
  auto drop = parse_number<double>(parts[0]);
  auto latency = parse_number<std::int64_t>(parts[1]);
  auto jitter = parse_number<std::int64_t>(parts[2]);
  if (!drop || !latency || !jitter) {
    throw Error(ErrorCode::InvalidInput, std::string(text), "expected drop:latency:jitter");
  }
  LinkProfile p{*drop, *latency, *jitter};
  p.check();
  return p;
}

void LinkProfile::check() const {
  if (!(drop_probability >= 0.0 && drop_probability <= 1.0)) {
    throw Error(ErrorCode::InvalidInput, "drop_probability", "must lie in [0, 1]");
  }
  if (latency_ms < 0) throw Error(ErrorCode::InvalidInput, "latency_ms", "must not be negative");
  if (jitter_ms < 0) throw Error(ErrorCode::InvalidInput, "jitter_ms", "must not be negative");
}

void real_sleep(std::chrono::milliseconds duration) { std::this_thread::sleep_for(duration); }

std::chrono::milliseconds backoff_delay(int failures) {
  constexpr std::int64_t base = 250;
  constexpr std::int64_t cap = 8000;
  std::int64_t delay = base;
  for (int i = 1; i < failures && delay < cap; ++i) delay *= 2;
  return std::chrono::milliseconds(std::min(delay, cap));
}

LossyLink::LossyLink(Transport& inner, LinkProfile profile, std::uint64_t seed, Sleeper sleeper)
    : inner_(inner), profile_(profile), rng_(seed), sleeper_(std::move(sleeper)) {
  profile_.check();
}

ApiResponse LossyLink::send(const ApiRequest& request) {
  ++requests_;
  std::bernoulli_distribution drop(profile_.drop_probability);
  std::int64_t delay = profile_.latency_ms;
  if (profile_.jitter_ms > 0) delay += std::uniform_int_distribution<std::int64_t>(0, profile_.jitter_ms)(rng_);
  if (delay > 0) sleeper_(std::chrono::milliseconds(delay));
  if (drop(rng_)) {
    ++dropped_;
    throw Error(ErrorCode::Unreachable, request.path, "request lost on the link");
  }
  ApiResponse response = inner_.send(request);
  if (drop(rng_)) {
    ++dropped_;
    throw Error(ErrorCode::Unreachable, request.path, "response lost on the link");
  }
  return response;
}

// --- answers -----------------------------------------------------------------------------

FileAnswers::FileAnswers(json answers) : answers_(std::move(answers)) {
  if (!answers_.is_object()) throw Error(ErrorCode::InvalidInput, "answers", "answer file must hold a JSON object");
}

FileAnswers FileAnswers::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, path.string(), "cannot open answer file");
  try {
    return FileAnswers(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, path.string(), e.what());
  }
}

std::optional<std::string> FileAnswers::ask(const std::string& step, const std::string&, bool optional) {
  auto it = answers_.find(step);
  if (it == answers_.end() || it->is_null()) {
    if (optional) return std::nullopt;
    throw Error(ErrorCode::InvalidInput, step, "answer file is missing step '" + step + "'");
  }
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number()) return it->dump();
  throw Error(ErrorCode::InvalidInput, step, "answer must be a string or a number");
}

bool FileAnswers::reject(const std::string& step, const std::string& reason) {
  throw Error(ErrorCode::InvalidInput, step, "invalid answer for step '" + step + "': " + reason);
}

std::optional<Ring> FileAnswers::geometry() {
  auto it = answers_.find("geometry");
  if (it == answers_.end() || it->is_null()) return std::nullopt;
  return decode_json<Ring>(*it, "geometry");
}

std::optional<std::string> InteractiveAnswers::ask(const std::string& step, const std::string& prompt,
                                                   bool optional) {
  for (;;) {
    out_ << prompt << (optional ? " (blank to skip)" : "") << ": " << std::flush;
    std::string line;
    if (!std::getline(in_, line)) throw Error(ErrorCode::AbortedByUser, step, "input ended");
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line == "abort") throw Error(ErrorCode::AbortedByUser, step);
    if (!line.empty()) return line;
    if (optional) return std::nullopt;
    out_ << "  an answer is required\n";
  }
}

bool InteractiveAnswers::reject(const std::string&, const std::string& reason) {
  out_ << "  " << reason << ", try again\n";
  return true;
}

namespace {

// Asks until `convert` accepts the answer. `convert` returns an error
// message or the value.
template <typename T, typename Convert>
std::optional<T> ask_until(AnswerSource& src, const std::string& step, const std::string& prompt, bool optional,
                           Convert convert) {
  for (;;) {
    auto raw = src.ask(step, prompt, optional);
    if (!raw) return std::nullopt;
    std::string why;
    if (auto value = convert(*raw, why)) return value;
    src.reject(step, why);
  }
}

auto int_in(std::int64_t lo, std::int64_t hi) {
  return [lo, hi](const std::string& s, std::string& why) -> std::optional<std::int64_t> {
    auto v = parse_number<std::int64_t>(s);
    if (!v) {
      why = "not a whole number";
    } else if (*v < lo || *v > hi) {
      why = "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
    } else {
      return v;
    }
    return std::nullopt;
  };
}

auto degrees_in(double limit) {
  return [limit](const std::string& s, std::string& why) -> std::optional<double> {
    auto v = parse_number<double>(s);
    if (!v) {
      why = "not a number";
    } else if (!(*v >= -limit && *v <= limit)) {
      why = "must lie in [-" + std::to_string(static_cast<int>(limit)) + ", " + std::to_string(static_cast<int>(limit)) + "]";
    } else {
      return v;
    }
    return std::nullopt;
  };
}

auto non_empty() {
  return [](const std::string& s, std::string& why) -> std::optional<std::string> {
    if (s.empty()) {
      why = "must not be empty";
      return std::nullopt;
    }
    return s;
  };
}

template <typename Enum, std::size_t N>
auto one_of(const Enum (&all)[N]) {
  return [&all](const std::string& s, std::string& why) -> std::optional<Enum> {
    for (std::size_t i = 0; i < N; ++i) {
      if (s == to_string(all[i]) || s == std::to_string(i + 1)) return all[i];
    }
    why = "choose one of the listed options";
    return std::nullopt;
  };
}

template <typename Enum, std::size_t N>
std::string menu(const std::string& title, const Enum (&all)[N]) {
  std::string out = title + " [";
  for (std::size_t i = 0; i < N; ++i) {
    if (i) out += ", ";
    out += std::to_string(i + 1) + "=" + std::string(to_string(all[i]));
  }
  return out + "]";
}

}  // namespace

DisasterReport build_report(AnswerSource& src, const ReporterInfo& info, const AdminHierarchy* hierarchy) {
  DisasterReport r;
  r.kind = *ask_until<DisasterKind>(src, "kind", menu("Disaster kind", kAllKinds), false,
                                    one_of(kAllKinds));

  switch (r.kind) {
    case DisasterKind::Flood:
      r.details = KindDetails::flood(*ask_until<std::int64_t>(src, "water_level_cm", "Water level in cm", false,
                                                              int_in(0, kMaxWaterLevelCm)));
      break;
    case DisasterKind::BushFire:
      r.details = KindDetails::bush_fire(ask_until<std::int64_t>(src, "area_estimate_m2", "Burnt area estimate in m2",
                                                                 true, int_in(0, INT64_MAX)));
      break;
    case DisasterKind::Infrastructure:
      r.details = KindDetails::infrastructure(
          *ask_until<std::string>(src, "facility", "Affected facility", false, non_empty()));
      break;
    default: {
      auto name = *ask_until<std::string>(src, "disease_name", "Disease name", false, non_empty());
      auto count = *ask_until<std::int64_t>(src, "affected_count", "Number affected", false, int_in(0, INT64_MAX));
      r.details = KindDetails::disease(r.kind, std::move(name), count);
    }
  }

  if (auto ring = src.geometry()) {
    if (ring->size() > 1 && ring->front() == ring->back()) ring->pop_back();
    r.geometry = *ring;
    r.location = ring_centroid(*ring);
  } else {
    r.location.lat = *ask_until<double>(src, "lat", "Latitude", false, degrees_in(90));
    r.location.lon = *ask_until<double>(src, "lon", "Longitude", false, degrees_in(180));
  }

  r.severity = ask_until<Severity>(src, "severity", menu("Severity", kAllSeverities), true, one_of(kAllSeverities))
                   .value_or(Severity::Moderate);
  r.description = *ask_until<std::string>(src, "description", "Short description", false, non_empty());

  r.reporter = info.reporter;
  if (r.reporter.empty()) r.reporter = *ask_until<std::string>(src, "reporter", "Your user id", false, non_empty());
  r.reporter_phone = info.phone;
  if (r.reporter_phone.empty()) {
    r.reporter_phone = ask_until<std::string>(src, "reporter_phone", "Phone number", true, non_empty()).value_or("");
  }

  if (hierarchy) {
    if (auto path = hierarchy->try_locate(r.location)) {
      r.province_id = path->province_id;
      r.district_id = path->district_id;
      r.kumban_id = path->kumban_id;
    }
    if (auto result = validate_report(r, *hierarchy); !result.ok()) throw ValidationError(result.violations);
  }
  return r;
}

// --- cursors ---------------------------------------------------------------------------------

CursorStore::CursorStore(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.empty() || !std::filesystem::exists(path_)) return;
  std::ifstream in(path_);
  try {
    json doc = json::parse(in);
    for (const auto& [topic, seq] : doc.items()) cursors_[Topic::parse(topic)] = seq.get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, path_.string(), std::string("unreadable cursor file: ") + e.what());
  }
}

std::uint64_t CursorStore::get(const Topic& topic) const {
  auto it = cursors_.find(topic);
  return it == cursors_.end() ? 0 : it->second;
}

void CursorStore::set(const Topic& topic, std::uint64_t seq) {
  cursors_[topic] = seq;
  save();
}

void CursorStore::save() const {
  if (path_.empty()) return;
  json doc = json::object();
  for (const auto& [topic, seq] : cursors_) doc[topic.str()] = seq;
  auto tmp = path_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidInput, tmp.string(), "cannot write cursor file");
    out << doc.dump() << '\n';
  }
  std::filesystem::rename(tmp, path_);
}

// --- client ------------------------------------------------------------------------------------

namespace {

std::string shortest(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string format_push(const PushMessage& m) {
  const AlertSummary& s = m.summary;
  std::ostringstream out;
  out << '[' << m.topic.str() << " #" << m.seq << "] " << s.report_id << ' ' << to_string(s.kind) << ' '
      << to_string(s.severity) << ' ' << to_string(s.state) << " @" << shortest(s.location.lat) << ','
      << shortest(s.location.lon);
  if (!s.headline.empty()) out << ": " << s.headline;
  if (s.document) out << " (doc: " << *s.document << ')';
  return out.str();
}

FieldClient::FieldClient(Transport& transport, Sleeper sleeper) : transport_(transport), sleeper_(std::move(sleeper)) {}

ApiResponse FieldClient::call(const ApiRequest& request) {
  ApiResponse response = transport_.send(request);
  if (response.status >= 400) rethrow_error_body(response.status, response.body);
  return response;
}

namespace {

json response_json(const ApiResponse& r) {
  try {
    return json::parse(r.body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, "response", e.what());
  }
}

}  // namespace

std::string FieldClient::submit(const DisasterReport& report, const std::string& key) {
  json body{{"report", report}, {"idempotency_key", key}};
  return response_json(call({"POST", "/reports", {}, body.dump()})).at("id").get<std::string>();
}

SubmitResult FieldClient::submit_with_retry(const DisasterReport& report, const std::string& key, int max_attempts) {
  if (max_attempts < 1) throw Error(ErrorCode::InvalidInput, "max_attempts", "must be at least 1");
  for (int attempt = 1;; ++attempt) {
    try {
      return SubmitResult{submit(report, key), attempt};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Unreachable) throw;
      if (attempt >= max_attempts) {
        throw Error(ErrorCode::Unreachable, key, "gave up after " + std::to_string(attempt) + " attempts");
      }
      sleeper_(backoff_delay(attempt));
    }
  }
}

DisasterReport FieldClient::get_report(const std::string& id) {
  return decode_json<DisasterReport>(response_json(call({"GET", "/reports/" + id, {}, {}})).at("report"), "report");
}

VerificationRecord FieldClient::verify(const std::string& id, const ActorId& verifier, const std::string& note) {
  json body{{"verifier", verifier}, {"note", note}};
  return decode_json<VerificationRecord>(response_json(call({"POST", "/reports/" + id + "/verify", {}, body.dump()})),
                                         "record");
}

json FieldClient::reliability(const std::string& id) {
  return response_json(call({"GET", "/reports/" + id + "/reliability", {}, {}}));
}

std::string FieldClient::export_cap(const std::string& id, std::optional<ActorId> sender) {
  ApiRequest req{"GET", "/reports/" + id + "/cap", {}, {}};
  if (sender) req.query["sender"] = *sender;
  return call(req).body;
}

std::map<Topic, std::uint64_t> FieldClient::subscribe(const ActorId& subscriber, const std::set<Topic>& topics) {
  json list = json::array();
  for (const auto& t : topics) list.push_back(t.str());
  json body{{"subscriber", subscriber}, {"topics", list}};
  std::map<Topic, std::uint64_t> latest;
  for (const auto& [t, seq] : response_json(call({"POST", "/subscriptions", {}, body.dump()})).at("latest").items()) {
    latest[Topic::parse(t)] = seq.get<std::uint64_t>();
  }
  return latest;
}

std::vector<PushMessage> FieldClient::poll(const ActorId& subscriber, const std::map<Topic, std::uint64_t>& cursors,
                                           std::chrono::milliseconds timeout) {
  json c = json::object();
  for (const auto& [t, seq] : cursors) c[t.str()] = seq;
  json body{{"subscriber", subscriber}, {"cursors", c}, {"timeout_ms", timeout.count()}};
  return decode_json<std::vector<PushMessage>>(response_json(call({"POST", "/poll", {}, body.dump()})).at("messages"),
                                               "messages");
}

std::uint64_t FieldClient::watch(const ActorId& subscriber, const std::set<Topic>& topics, CursorStore& cursors,
                                 const std::function<void(const PushMessage&)>& on_message,
                                 const WatchOptions& options) {
  int failures = 0;
  auto failed = [&](const Error& e) {
    if (e.code() != ErrorCode::Unreachable) throw e;
    ++failures;
    if (options.max_consecutive_failures > 0 && failures >= options.max_consecutive_failures) {
      throw Error(ErrorCode::Unreachable, subscriber, "server unreachable, giving up");
    }
    sleeper_(backoff_delay(failures));
  };

  for (bool subscribed = false; !subscribed;) {
    try {
      subscribe(subscriber, topics);
      subscribed = true;
      failures = 0;
    } catch (const Error& e) {
      failed(e);
    }
  }

  std::uint64_t delivered = 0;
  std::uint64_t polls = 0;
  while (!(options.stop && options.stop()) && !(options.max_polls && polls >= options.max_polls)) {
    std::map<Topic, std::uint64_t> positions;
    for (const auto& t : topics) positions[t] = cursors.get(t);
    std::vector<PushMessage> batch;
    try {
      batch = poll(subscriber, positions, options.poll_timeout);
      failures = 0;
    } catch (const Error& e) {
      failed(e);
      continue;
    }
    ++polls;
    for (const auto& m : batch) {
      if (!topics.count(m.topic) || m.seq <= cursors.get(m.topic)) continue;
      on_message(m);
      cursors.set(m.topic, m.seq);
      ++delivered;
    }
  }
  return delivered;
}

}  // namespace dalert
