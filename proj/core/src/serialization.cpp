#include "dalert/serialization.hpp"

#include "dalert/error.hpp"

namespace dalert {

using nlohmann::json;

void throw_invalid(const char* what, const char* why) { throw Error(ErrorCode::InvalidInput, what, why); }

namespace {

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? json(*v) : json(nullptr);
}

// Absent keeps `fallback`; explicit null clears.
template <typename T>
std::optional<T> get_optional(const json& j, const char* key, std::optional<T> fallback = std::nullopt) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (it->is_null()) return std::nullopt;
  return it->get<T>();
}

template <typename E, E (*Parse)(std::string_view)>
E get_enum(const json& j, const char* key) {
  return Parse(j.at(key).get<std::string>());
}

json time_json(const OffsetTime& t) { return json{{"at", format_utc(t.utc)}, {"offset_minutes", t.offset_minutes}}; }

UtcTime parse_utc(const std::string& text) { return parse_datetime(text).utc; }

}  // namespace

void to_json(json& j, const GeoPoint& p) { j = json::array({p.lat, p.lon}); }

void from_json(const json& j, GeoPoint& p) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::InvalidInput, "point", "must be [lat, lon]");
  p.lat = j[0].get<double>();
  p.lon = j[1].get<double>();
}

void to_json(json& j, const KindDetails& d) {
  j = json{{"kind", to_string(d.kind)}};
  std::visit(
      [&j](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FloodDetails>) {
          j["water_level_cm"] = v.water_level_cm;
        } else if constexpr (std::is_same_v<T, BushFireDetails>) {
          put_optional(j, "area_estimate_m2", v.area_estimate_m2);
        } else if constexpr (std::is_same_v<T, InfrastructureDetails>) {
          j["facility"] = v.facility;
        } else {
          j["disease_name"] = v.disease_name;
          j["affected_count"] = v.affected_count;
        }
      },
      d.data);
}

void from_json(const json& j, KindDetails& d) {
  d.kind = get_enum<DisasterKind, parse_kind>(j, "kind");
  // The payload shape follows the fields present, so a mismatched tag is
  // representable and caught by validation rather than here.
  if (j.contains("water_level_cm")) {
    d.data = FloodDetails{j["water_level_cm"].get<std::int64_t>()};
  } else if (j.contains("facility")) {
    d.data = InfrastructureDetails{j["facility"].get<std::string>()};
  } else if (j.contains("disease_name") || j.contains("affected_count")) {
    d.data = DiseaseDetails{j.value("disease_name", std::string()), j.value("affected_count", std::int64_t{0})};
  } else if (j.contains("area_estimate_m2")) {
    d.data = BushFireDetails{get_optional<std::int64_t>(j, "area_estimate_m2")};
  } else {
    d.data = KindDetails::defaults_for(d.kind).data;
  }
}

void to_json(json& j, const AlertEnvelope& e) {
  j = json{{"status", e.status},
           {"scope", e.scope},
           {"urgency", e.urgency},
           {"certainty", e.certainty},
           {"sent_offset_minutes", e.sent_offset_minutes}};
  put_optional(j, "source", e.source);
  put_optional(j, "language", e.language);
  put_optional(j, "response_type", e.response_type);
  j["effective"] = e.effective ? time_json(*e.effective) : json(nullptr);
  json params = json::array();
  for (const auto& p : e.foreign_parameters) params.push_back({{"name", p.name}, {"value", p.value}});
  j["foreign_parameters"] = params;
}

void from_json(const json& j, AlertEnvelope& e) {
  AlertEnvelope d;
  e.status = j.value("status", d.status);
  e.scope = j.value("scope", d.scope);
  e.urgency = j.value("urgency", d.urgency);
  e.certainty = j.value("certainty", d.certainty);
  e.sent_offset_minutes = j.value("sent_offset_minutes", 0);
  e.source = get_optional<std::string>(j, "source", d.source);
  e.language = get_optional<std::string>(j, "language", d.language);
  e.response_type = get_optional<std::string>(j, "response_type", d.response_type);
  e.effective.reset();
  if (auto it = j.find("effective"); it != j.end() && !it->is_null()) {
    e.effective = OffsetTime{parse_utc(it->at("at").get<std::string>()), it->value("offset_minutes", 0)};
  }
  e.foreign_parameters.clear();
  if (auto it = j.find("foreign_parameters"); it != j.end()) {
    for (const auto& p : *it) e.foreign_parameters.push_back({p.at("name").get<std::string>(), p.at("value").get<std::string>()});
  }
}

void to_json(json& j, const DisasterReport& r) {
  j = json{{"id", r.id},
           {"kind", to_string(r.kind)},
           {"details", r.details},
           {"location", r.location},
           {"province", r.province_id},
           {"district", r.district_id},
           {"reporter", r.reporter},
           {"reporter_phone", r.reporter_phone},
           {"description", r.description},
           {"created_at", format_utc(r.created_at)},
           {"state", to_string(r.state)},
           {"severity", to_string(r.severity)},
           {"attachments", r.attachments},
           {"envelope", r.envelope}};
  put_optional(j, "geometry", r.geometry);
  put_optional(j, "kumban", r.kumban_id);
  put_optional(j, "merged_into", r.merged_into);
}

void from_json(const json& j, DisasterReport& r) {
  r.id = j.value("id", std::string());
  r.kind = get_enum<DisasterKind, parse_kind>(j, "kind");
  r.details = j.contains("details") ? j["details"].get<KindDetails>() : KindDetails::defaults_for(r.kind);
  r.location = j.at("location").get<GeoPoint>();
  r.geometry = get_optional<std::vector<GeoPoint>>(j, "geometry");
  r.province_id = j.value("province", std::string());
  r.district_id = j.value("district", std::string());
  r.kumban_id = get_optional<std::string>(j, "kumban");
  r.reporter = j.value("reporter", std::string());
  r.reporter_phone = j.value("reporter_phone", std::string());
  r.description = j.value("description", std::string());
  r.created_at = j.contains("created_at") ? parse_utc(j["created_at"].get<std::string>()) : UtcTime{};
  r.state = j.contains("state") ? get_enum<LifecycleState, parse_state>(j, "state") : LifecycleState::Submitted;
  r.severity = j.contains("severity") ? get_enum<Severity, parse_severity>(j, "severity") : Severity::Minor;
  r.merged_into = get_optional<std::string>(j, "merged_into");
  r.attachments = j.value("attachments", std::vector<std::string>{});
  r.envelope = j.contains("envelope") ? j["envelope"].get<AlertEnvelope>() : AlertEnvelope{};
}

void to_json(json& j, const Actor& a) {
  j = json{{"id", a.id}, {"role", to_string(a.role)}, {"unit", a.unit_id}, {"phone", a.phone}};
}

void from_json(const json& j, Actor& a) {
  a.id = j.at("id").get<std::string>();
  a.role = get_enum<Role, parse_role>(j, "role");
  a.unit_id = j.value("unit", std::string());
  a.phone = j.value("phone", std::string());
}

void to_json(json& j, const VerificationRecord& v) {
  j = json{{"report_id", v.report_id},
           {"verifier", v.verifier},
           {"role", to_string(v.verifier_role)},
           {"timestamp", format_utc(v.timestamp)},
           {"note", v.note}};
}

void from_json(const json& j, VerificationRecord& v) {
  v.report_id = j.at("report_id").get<std::string>();
  v.verifier = j.at("verifier").get<std::string>();
  v.verifier_role = get_enum<Role, parse_role>(j, "role");
  v.timestamp = parse_utc(j.at("timestamp").get<std::string>());
  v.note = j.value("note", std::string());
}

void to_json(json& j, const AlertSummary& s) {
  j = json{{"report_id", s.report_id},
           {"kind", to_string(s.kind)},
           {"severity", to_string(s.severity)},
           {"location", s.location},
           {"state", to_string(s.state)},
           {"headline", s.headline}};
  put_optional(j, "document", s.document);
}

void from_json(const json& j, AlertSummary& s) {
  s.report_id = j.at("report_id").get<std::string>();
  s.kind = get_enum<DisasterKind, parse_kind>(j, "kind");
  s.severity = get_enum<Severity, parse_severity>(j, "severity");
  s.location = j.at("location").get<GeoPoint>();
  s.state = get_enum<LifecycleState, parse_state>(j, "state");
  s.headline = j.value("headline", std::string());
  s.document = get_optional<std::string>(j, "document");
}

void to_json(json& j, const PushMessage& m) {
  j = json{{"topic", m.topic.str()}, {"seq", m.seq}, {"summary", m.summary}};
}

void from_json(const json& j, PushMessage& m) {
  m.topic = Topic::parse(j.at("topic").get<std::string>());
  m.seq = j.at("seq").get<std::uint64_t>();
  m.summary = j.at("summary").get<AlertSummary>();
}

void to_json(json& j, const Reliability& r) {
  j = json{{"official_count", r.official_count}, {"user_count", r.user_count}, {"score", r.score}};
}

}  // namespace dalert
