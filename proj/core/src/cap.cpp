#include "dalert/cap.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "dalert/error.hpp"
#include "dalert/geo.hpp"
#include "dalert/xml.hpp"

namespace dalert {
namespace {

using namespace std::string_view_literals;

constexpr std::array kStatus{"Actual"sv, "Exercise"sv, "System"sv, "Test"sv, "Draft"sv};
constexpr std::array kMsgType{"Alert"sv, "Update"sv, "Cancel"sv, "Ack"sv, "Error"sv};
constexpr std::array kScope{"Public"sv, "Restricted"sv, "Private"sv};
constexpr std::array kCategory{"Geo"sv,    "Met"sv,    "Safety"sv,    "Security"sv, "Rescue"sv, "Fire"sv,
                               "Health"sv, "Env"sv,    "Transport"sv, "Infra"sv,    "CBRNE"sv,  "Other"sv};
constexpr std::array kResponseType{"Shelter"sv, "Evacuate"sv, "Prepare"sv, "Execute"sv,
                                   "Monitor"sv, "Assess"sv,   "None"sv};
constexpr std::array kUrgency{"Immediate"sv, "Expected"sv, "Future"sv, "Past"sv, "Unknown"sv};
constexpr std::array kSeverity{"Extreme"sv, "Severe"sv, "Moderate"sv, "Minor"sv, "Unknown"sv};
constexpr std::array kCertainty{"Observed"sv, "Likely"sv, "Possible"sv, "Unlikely"sv, "Unknown"sv};

template <std::size_t N>
bool one_of(std::string_view value, const std::array<std::string_view, N>& allowed) {
  return std::find(allowed.begin(), allowed.end(), value) != allowed.end();
}

struct EnumCheck {
  std::string_view element;
  const std::string* value;
  bool ok;
};

std::vector<EnumCheck> enum_checks(const CapAlert& a) {
  std::vector<EnumCheck> checks{
      {"status", &a.status, one_of(a.status, kStatus)},
      {"msgType", &a.msg_type, one_of(a.msg_type, kMsgType)},
      {"scope", &a.scope, one_of(a.scope, kScope)},
      {"category", &a.info.category, one_of(a.info.category, kCategory)},
      {"urgency", &a.info.urgency, one_of(a.info.urgency, kUrgency)},
      {"severity", &a.info.severity, one_of(a.info.severity, kSeverity)},
      {"certainty", &a.info.certainty, one_of(a.info.certainty, kCertainty)},
  };
  if (a.info.response_type) {
    checks.push_back({"responseType", &*a.info.response_type, one_of(*a.info.response_type, kResponseType)});
  }
  return checks;
}

// --- number formatting -----------------------------------------------------

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string format_point(GeoPoint p) { return format_double(p.lat) + "," + format_double(p.lon); }

[[noreturn]] void bad_param(std::string_view name, const std::string& why) {
  throw Error(ErrorCode::SchemaViolation, std::string(name), why);
}

double parse_double(std::string_view text, std::string_view param) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(v)) {
    bad_param(param, "not a number: " + std::string(text));
  }
  return v;
}

std::int64_t parse_int(std::string_view text, std::string_view param) {
  std::int64_t v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) bad_param(param, "not an integer: " + std::string(text));
  return v;
}

GeoPoint parse_point(std::string_view text, std::string_view param) {
  auto comma = text.find(',');
  if (comma == std::string_view::npos) bad_param(param, "expected lat,lon");
  GeoPoint p{parse_double(text.substr(0, comma), param), parse_double(text.substr(comma + 1), param)};
  if (!p.in_range()) bad_param(param, "coordinate out of range");
  return p;
}

std::string format_ring(const std::vector<GeoPoint>& ring) {
  std::string out;
  for (const auto& p : ring) {
    if (!out.empty()) out += ' ';
    out += format_point(p);
  }
  return out;
}

std::vector<GeoPoint> parse_ring(std::string_view text) {
  std::vector<GeoPoint> ring;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto space = text.find(' ', pos);
    if (space == std::string_view::npos) space = text.size();
    ring.push_back(parse_point(text.substr(pos, space - pos), cap_param::kGeometry));
    pos = space + 1;
  }
  if (ring.size() < 3) bad_param(cap_param::kGeometry, "needs at least 3 vertices");
  return ring;
}

// --- parse helpers ------------------------------------------------------------

const xml::Element* single(const xml::Element& parent, std::string_view name, bool required) {
  auto found = parent.children_named(name);
  if (found.size() > 1) throw Error(ErrorCode::SchemaViolation, std::string(name), "element repeated");
  if (found.empty()) {
    if (required) throw Error(ErrorCode::SchemaViolation, std::string(name), "required element missing");
    return nullptr;
  }
  return found.front();
}

std::string required_text(const xml::Element& parent, std::string_view name) {
  return single(parent, name, true)->text;
}

std::optional<std::string> optional_text(const xml::Element& parent, std::string_view name) {
  if (const auto* el = single(parent, name, false)) return el->text;
  return std::nullopt;
}

OffsetTime parse_time_element(const std::string& text, std::string_view name) {
  try {
    return parse_datetime(text);
  } catch (const Error& e) {
    throw Error(ErrorCode::SchemaViolation, std::string(name), e.what());
  }
}

}  // namespace

std::string_view cap_category_for(DisasterKind kind) {
  switch (kind) {
    case DisasterKind::Flood: return "Met";
    case DisasterKind::BushFire: return "Fire";
    case DisasterKind::Infrastructure: return "Infra";
    default: return "Health";
  }
}

std::string disaster_type_value(DisasterKind kind) { return std::string(to_string(kind)) + "Info"; }

void check_cap_invariants(const CapAlert& alert) {
  for (const auto& check : enum_checks(alert)) {
    if (!check.ok) {
      throw Error(ErrorCode::InvariantViolation, std::string(check.element), "illegal value '" + *check.value + "'");
    }
  }
  if (alert.identifier.empty()) throw Error(ErrorCode::InvariantViolation, "identifier", "must not be empty");
  if (alert.sender.empty()) throw Error(ErrorCode::InvariantViolation, "sender", "must not be empty");
}

CapAlert parse_cap(std::string_view xml_text) {
  xml::Element root = xml::parse(xml_text);
  if (root.name != "alert" || root.ns != kCapNamespace) {
    throw Error(ErrorCode::SchemaViolation, "alert", "root must be <alert> in namespace " + std::string(kCapNamespace));
  }

  CapAlert a;
  a.identifier = required_text(root, "identifier");
  a.sender = required_text(root, "sender");
  a.sent = parse_time_element(required_text(root, "sent"), "sent");
  a.status = required_text(root, "status");
  a.msg_type = required_text(root, "msgType");
  a.source = optional_text(root, "source");
  a.scope = required_text(root, "scope");
  if (a.identifier.empty()) throw Error(ErrorCode::SchemaViolation, "identifier", "must not be empty");
  if (a.sender.empty()) throw Error(ErrorCode::SchemaViolation, "sender", "must not be empty");

  const xml::Element* info = single(root, "info", true);
  a.info.language = optional_text(*info, "language");
  a.info.category = required_text(*info, "category");
  a.info.event = required_text(*info, "event");
  a.info.response_type = optional_text(*info, "responseType");
  a.info.urgency = required_text(*info, "urgency");
  a.info.severity = required_text(*info, "severity");
  a.info.certainty = required_text(*info, "certainty");
  if (auto eff = optional_text(*info, "effective")) a.info.effective = parse_time_element(*eff, "effective");
  for (const auto* p : info->children_named("parameter")) {
    const auto* name = single(*p, "valueName", false);
    const auto* value = single(*p, "value", false);
    if (!name || !value) throw Error(ErrorCode::SchemaViolation, "parameter", "needs valueName and value");
    a.info.parameters.push_back(Parameter{name->text, value->text});
  }

  for (const auto& check : enum_checks(a)) {
    if (!check.ok) {
      throw Error(ErrorCode::SchemaViolation, std::string(check.element), "illegal value '" + *check.value + "'");
    }
  }
  return a;
}

std::string serialize_cap(const CapAlert& a) {
  check_cap_invariants(a);
  xml::Writer w;
  w.declaration();
  w.open("alert", {{"xmlns", std::string(kCapNamespace)}});
  w.leaf("identifier", a.identifier);
  w.leaf("sender", a.sender);
  w.leaf("sent", format_datetime(a.sent));
  w.leaf("status", a.status);
  w.leaf("msgType", a.msg_type);
  if (a.source) w.leaf("source", *a.source);
  w.leaf("scope", a.scope);
  w.open("info");
  if (a.info.language) w.leaf("language", *a.info.language);
  w.leaf("category", a.info.category);
  w.leaf("event", a.info.event);
  if (a.info.response_type) w.leaf("responseType", *a.info.response_type);
  w.leaf("urgency", a.info.urgency);
  w.leaf("severity", a.info.severity);
  w.leaf("certainty", a.info.certainty);
  if (a.info.effective) w.leaf("effective", format_datetime(*a.info.effective));
  for (const auto& p : a.info.parameters) {
    w.open("parameter");
    w.leaf("valueName", p.name);
    w.leaf("value", p.value);
    w.close("parameter");
  }
  w.close("info");
  w.close("alert");
  return w.str();
}

CapAlert report_to_cap(const DisasterReport& r, const ActorId& sender, std::string_view msg_type) {
  namespace P = cap_param;
  const AlertEnvelope& env = r.envelope;

  CapAlert a;
  a.identifier = r.id;
  a.sender = sender;
  a.sent = OffsetTime{r.created_at, env.sent_offset_minutes};
  a.status = env.status;
  a.msg_type = std::string(msg_type);
  a.source = env.source;
  a.scope = env.scope;

  CapInfo& info = a.info;
  info.language = env.language;
  info.category = std::string(cap_category_for(r.kind));
  info.event = r.description;
  info.response_type = env.response_type;
  info.urgency = env.urgency;
  info.severity = std::string(to_string(r.severity));
  info.certainty = env.certainty;
  info.effective = env.effective;

  auto& params = info.parameters;
  auto add = [&params](std::string_view name, std::string value) {
    params.push_back(Parameter{std::string(name), std::move(value)});
  };
  add(P::kLocation, format_point(r.location));
  add(P::kDisasterType, disaster_type_value(r.kind));
  if (!r.province_id.empty()) add(P::kProvince, r.province_id);
  if (!r.district_id.empty()) add(P::kDistrict, r.district_id);
  if (r.kumban_id) add(P::kKumban, *r.kumban_id);

  if (const auto* flood = std::get_if<FloodDetails>(&r.details.data)) {
    add(P::kWaterLevelCm, std::to_string(flood->water_level_cm));
  } else if (const auto* fire = std::get_if<BushFireDetails>(&r.details.data)) {
    if (fire->area_estimate_m2) add(P::kAreaEstimateM2, std::to_string(*fire->area_estimate_m2));
  } else if (const auto* infra = std::get_if<InfrastructureDetails>(&r.details.data)) {
    if (!infra->facility.empty()) add(P::kFacility, infra->facility);
  } else if (const auto* disease = std::get_if<DiseaseDetails>(&r.details.data)) {
    if (!disease->disease_name.empty()) add(P::kDiseaseName, disease->disease_name);
    if (disease->affected_count != 0) add(P::kAffectedCount, std::to_string(disease->affected_count));
  }

  if (r.geometry) add(P::kGeometry, format_ring(*r.geometry));
  if (r.reporter != sender) add(P::kReporter, r.reporter);
  if (!r.reporter_phone.empty()) add(P::kReporterPhone, r.reporter_phone);
  if (r.state != LifecycleState::Submitted) add(P::kLifecycleState, std::string(to_string(r.state)));
  if (r.merged_into) add(P::kMergedInto, *r.merged_into);
  for (const auto& doc : r.attachments) add(P::kAttachment, doc);
  for (const auto& p : env.foreign_parameters) params.push_back(p);
  return a;
}

DisasterReport cap_to_report(const CapAlert& a, const AdminHierarchy* hierarchy) {
  namespace P = cap_param;

  std::optional<GeoPoint> location;
  std::optional<DisasterKind> kind;
  std::optional<std::string> province, district, kumban, reporter, phone, merged_into, facility, disease_name;
  std::optional<std::int64_t> water_level, area, affected;
  std::optional<std::vector<GeoPoint>> geometry;
  std::optional<LifecycleState> state;
  std::vector<std::string> attachments;
  std::vector<Parameter> foreign;

  auto take_string = [](std::optional<std::string>& slot, const Parameter& p) {
    if (slot) return false;
    slot = p.value;
    return true;
  };
  auto take_int = [](std::optional<std::int64_t>& slot, const Parameter& p) {
    if (slot) return false;
    slot = parse_int(p.value, p.name);
    return true;
  };

  for (const auto& p : a.info.parameters) {
    bool used = false;
    if (p.name == P::kLocation) {
      if (!location) location = parse_point(p.value, P::kLocation), used = true;
    } else if (p.name == P::kDisasterType) {
      if (!kind) {
        for (DisasterKind k : kAllKinds) {
          if (p.value == disaster_type_value(k)) kind = k;
        }
        if (!kind) bad_param(P::kDisasterType, "unknown disaster type " + p.value);
        used = true;
      }
    } else if (p.name == P::kProvince) {
      used = take_string(province, p);
    } else if (p.name == P::kDistrict) {
      used = take_string(district, p);
    } else if (p.name == P::kKumban) {
      used = take_string(kumban, p);
    } else if (p.name == P::kWaterLevelCm) {
      used = take_int(water_level, p);
    } else if (p.name == P::kAreaEstimateM2) {
      used = take_int(area, p);
    } else if (p.name == P::kFacility) {
      used = take_string(facility, p);
    } else if (p.name == P::kDiseaseName) {
      used = take_string(disease_name, p);
    } else if (p.name == P::kAffectedCount) {
      used = take_int(affected, p);
    } else if (p.name == P::kGeometry) {
      if (!geometry) geometry = parse_ring(p.value), used = true;
    } else if (p.name == P::kReporter) {
      used = take_string(reporter, p);
    } else if (p.name == P::kReporterPhone) {
      used = take_string(phone, p);
    } else if (p.name == P::kLifecycleState) {
      if (!state) {
        try {
          state = parse_state(p.value);
        } catch (const Error&) {
          bad_param(P::kLifecycleState, "unknown state " + p.value);
        }
        used = true;
      }
    } else if (p.name == P::kMergedInto) {
      used = take_string(merged_into, p);
    } else if (p.name == P::kAttachment) {
      attachments.push_back(p.value);
      used = true;
    }
    if (!used) foreign.push_back(p);
  }

  if (!location) {
    if (!geometry) throw Error(ErrorCode::MissingLocation, a.identifier, "no location parameter and no geometry");
    location = ring_centroid(*geometry);
  }
  if (!kind) {
    if (a.info.category == "Health") kind = DisasterKind::HumanDisease;
    else if (a.info.category == "Fire") kind = DisasterKind::BushFire;
    else kind = DisasterKind::Infrastructure;
  }

  DisasterReport r;
  r.id = a.identifier;
  r.kind = *kind;
  switch (*kind) {
    case DisasterKind::Flood:
      r.details = KindDetails::flood(water_level.value_or(0));
      break;
    case DisasterKind::BushFire:
      r.details = KindDetails::bush_fire(area);
      break;
    case DisasterKind::Infrastructure:
      r.details = KindDetails::infrastructure(facility.value_or(""));
      break;
    default:
      r.details = KindDetails::disease(*kind, disease_name.value_or(""), affected.value_or(0));
  }
  r.location = *location;
  r.geometry = std::move(geometry);

  if (!province && !district && hierarchy) {
    if (auto path = hierarchy->try_locate(r.location)) {
      province = path->province_id;
      district = path->district_id;
      if (!kumban) kumban = path->kumban_id;
    }
  }
  r.province_id = province.value_or("");
  r.district_id = district.value_or("");
  r.kumban_id = std::move(kumban);

  r.reporter = reporter.value_or(a.sender);
  r.reporter_phone = phone.value_or("");
  r.description = a.info.event;
  r.created_at = a.sent.utc;
  r.state = state.value_or(LifecycleState::Submitted);
  // CAP "Unknown" has no counterpart on the four-level scale.
  r.severity = a.info.severity == "Unknown" ? Severity::Moderate : parse_severity(a.info.severity);
  r.merged_into = std::move(merged_into);
  r.attachments = std::move(attachments);

  AlertEnvelope& env = r.envelope;
  env.status = a.status;
  env.scope = a.scope;
  env.source = a.source;
  env.language = a.info.language;
  env.response_type = a.info.response_type;
  env.urgency = a.info.urgency;
  env.certainty = a.info.certainty;
  env.sent_offset_minutes = a.sent.offset_minutes;
  env.effective = a.info.effective;
  env.foreign_parameters = std::move(foreign);
  return r;
}

}  // namespace dalert
