#include "dalert/api.hpp"

#include "dalert/serialization.hpp"

namespace dalert {

using nlohmann::json;

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedXml:
    case ErrorCode::SchemaViolation:
    case ErrorCode::MissingLocation:
    case ErrorCode::DegenerateRing:
    case ErrorCode::InvalidInput:
      return 400;
    case ErrorCode::Forbidden:
      return 403;
    case ErrorCode::UnknownReport:
    case ErrorCode::UnknownSubscriber:
    case ErrorCode::UnknownRegion:
      return 404;
    case ErrorCode::IllegalTransition:
    case ErrorCode::DuplicateVerification:
    case ErrorCode::ReportClosed:
    case ErrorCode::MergeCycle:
      return 409;
    case ErrorCode::ValidationFailed:
    case ErrorCode::OutOfCoverage:
    case ErrorCode::InvariantViolation:
      return 422;
    case ErrorCode::Unreachable:
      return 503;
    case ErrorCode::CorruptLog:
    case ErrorCode::AbortedByUser:
      return 500;
  }
  return 500;
}

json error_body(const Error& error) {
  json body{{"error", to_string(error.code())}, {"subject", error.subject()}, {"message", error.detail()}};
  if (const auto* v = dynamic_cast<const ValidationError*>(&error)) body["violations"] = v->violations();
  return body;
}

void rethrow_error_body(int status, const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_object() && j.contains("error") && j["error"].is_string()) {
    ErrorCode code = ErrorCode::InvalidInput;
    try {
      code = error_code_from_string(j["error"].get<std::string>());
    } catch (const Error&) {
      throw Error(ErrorCode::InvalidInput, "response", "unknown error code " + j["error"].get<std::string>());
    }
    if (code == ErrorCode::ValidationFailed && j.contains("violations")) {
      throw ValidationError(j["violations"].get<std::vector<std::string>>());
    }
    throw Error(code, j.value("subject", std::string()), j.value("message", std::string()));
  }
  throw Error(ErrorCode::InvalidInput, "response", "HTTP " + std::to_string(status) + ": " + body);
}

AdminAction parse_admin_action(const json& body) {
  const std::string name = body.at("action").get<std::string>();
  switch (parse_audit_action(name)) {
    case AuditAction::Review:
      return Review{};
    case AuditAction::Resolve:
      return Resolve{};
    case AuditAction::Assign:
      return Assign{AdminUnit::parse(body.at("target").get<std::string>())};
    case AuditAction::Merge:
      return Merge{body.at("target").get<std::string>(), body.value("keep_older", false)};
    case AuditAction::AttachDocument:
      return AttachDocument{body.at("ref").get<std::string>()};
    case AuditAction::Update: {
      Update u;
      if (body.contains("severity")) u.severity = parse_severity(body["severity"].get<std::string>());
      if (body.contains("description")) u.description = body["description"].get<std::string>();
      if (body.contains("details")) u.details = body["details"].get<KindDetails>();
      if (body.contains("reporter_phone")) u.reporter_phone = body["reporter_phone"].get<std::string>();
      return u;
    }
    default:
      throw Error(ErrorCode::InvalidInput, name, "not an administrative action");
  }
}

json admin_action_to_json(const AdminAction& action) {
  json j{{"action", to_string(audit_action_of(action))}};
  if (const auto* a = std::get_if<Assign>(&action)) j["target"] = a->target.id();
  if (const auto* m = std::get_if<Merge>(&action)) {
    j["target"] = m->target;
    j["keep_older"] = m->keep_older;
  }
  if (const auto* d = std::get_if<AttachDocument>(&action)) j["ref"] = d->ref;
  if (const auto* u = std::get_if<Update>(&action)) {
    if (u->severity) j["severity"] = to_string(*u->severity);
    if (u->description) j["description"] = *u->description;
    if (u->details) j["details"] = *u->details;
    if (u->reporter_phone) j["reporter_phone"] = *u->reporter_phone;
  }
  return j;
}

namespace {

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    if (path[i] == '/') {
      ++i;
      continue;
    }
    std::size_t j = path.find('/', i);
    if (j == std::string_view::npos) j = path.size();
    parts.emplace_back(path.substr(i, j - i));
    i = j;
  }
  return parts;
}

ApiResponse json_response(const json& body, int status = 200) { return {status, body.dump(), "application/json"}; }

json parse_body(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, "body", e.what());
  }
}

std::optional<std::string> query_value(const ApiRequest& r, const std::string& key) {
  auto it = r.query.find(key);
  if (it == r.query.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

double parse_number(std::string_view text, const char* what) {
  try {
    std::size_t used = 0;
    double v = std::stod(std::string(text), &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidInput, what, "not a number: " + std::string(text));
  }
}

BoundingBox parse_bbox(const std::string& text) {
  std::vector<double> v;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    v.push_back(parse_number(std::string_view(text).substr(start, comma - start), "bbox"));
    start = comma + 1;
  }
  if (v.size() != 4) throw Error(ErrorCode::InvalidInput, "bbox", "expected min_lat,min_lon,max_lat,max_lon");
  return BoundingBox{v[0], v[1], v[2], v[3]};
}

json entry_json(const ReportEntry& e) {
  json topics = json::array();
  for (const auto& t : e.topics) topics.push_back(t.str());
  return json{{"report", e.report},
              {"responsible", e.responsible.id()},
              {"topics", topics},
              {"reporter_notified", e.reporter_notified}};
}

json event_json(const AuditEvent& e) {
  return json{{"seq", e.seq},
              {"actor", e.actor},
              {"action", to_string(e.action)},
              {"report", e.report_id},
              {"ts", format_utc(e.timestamp)},
              {"payload", e.payload}};
}

json action_names(const std::vector<AuditAction>& actions) {
  json out = json::array();
  for (auto a : actions) out.push_back(to_string(a));
  return out;
}

}  // namespace

ApiResponse ApiRouter::handle(const ApiRequest& request) const {
  try {
    return dispatch(request);
  } catch (const Error& e) {
    return json_response(error_body(e), http_status(e.code()));
  } catch (const json::exception& e) {
    return json_response(error_body(Error(ErrorCode::InvalidInput, "body", e.what())), 400);
  } catch (const std::exception& e) {
    return json_response(json{{"error", "Internal"}, {"subject", ""}, {"message", e.what()}}, 500);
  }
}

ApiResponse ApiRouter::dispatch(const ApiRequest& req) const {
  const auto parts = split_path(req.path);
  const bool get = req.method == "GET";
  const bool post = req.method == "POST";
  auto not_found = [&]() -> ApiResponse {
    return json_response(json{{"error", "NotFound"}, {"subject", req.path}, {"message", "no such endpoint"}}, 404);
  };
  if (parts.empty()) return not_found();

  if (parts[0] == "reports") {
    if (parts.size() == 1 && post) {
      json body = parse_body(req.body);
      auto report = decode_json<DisasterReport>(body.at("report"), "report");
      std::string id = service_.submit_report(std::move(report), body.value("idempotency_key", std::string()));
      return json_response(json{{"id", id}});
    }
    if (parts.size() == 1 && get) {
      ReportFilter f;
      f.province = query_value(req, "province");
      f.district = query_value(req, "district");
      if (auto s = query_value(req, "state")) f.state = parse_state(*s);
      if (auto k = query_value(req, "kind")) f.kind = parse_kind(*k);
      if (auto b = query_value(req, "bbox")) f.bbox = parse_bbox(*b);
      json reports = json::array();
      for (const auto& r : service_.list_reports(f)) reports.push_back(r);
      return json_response(json{{"reports", reports}});
    }
    const std::string& id = parts.size() > 1 ? parts[1] : std::string();
    if (parts.size() == 2 && get) return json_response(entry_json(service_.get_entry(id)));
    if (parts.size() == 3) {
      const std::string& sub = parts[2];
      if (sub == "actions" && post) {
        json body = parse_body(req.body);
        AdminAction action = parse_admin_action(body);
        return json_response(service_.process_report(id, body.at("actor").get<std::string>(), action));
      }
      if (sub == "actions" && get) {
        auto actor_id = query_value(req, "actor");
        if (!actor_id) throw Error(ErrorCode::InvalidInput, "actor", "query parameter required");
        const Actor* actor = service_.directory().find(*actor_id);
        Role role = actor ? actor->role : Role::Villager;
        return json_response(json{{"actions", action_names(permitted_actions(role, service_.get_report(id).state))}});
      }
      if (sub == "verify" && post) {
        json body = parse_body(req.body);
        return json_response(
            service_.verify(id, body.at("verifier").get<std::string>(), body.value("note", std::string())));
      }
      if (sub == "reliability" && get) {
        json j = service_.reliability_score(id);
        j["auto_distribution_eligible"] = service_.auto_distribution_eligible(id);
        return json_response(j);
      }
      if (sub == "cap" && get) {
        std::string msg_type = query_value(req, "msg_type").value_or("Alert");
        return {200, service_.export_cap(id, query_value(req, "sender"), msg_type), "application/xml"};
      }
    }
    return not_found();
  }

  if (parts[0] == "cap" && parts.size() == 1 && post) {
    return json_response(json{{"id", service_.import_cap(req.body, query_value(req, "key").value_or(""))}});
  }

  if (parts[0] == "subscriptions" && parts.size() == 1 && post) {
    json body = parse_body(req.body);
    std::set<Topic> topics;
    for (const auto& t : body.at("topics")) topics.insert(Topic::parse(t.get<std::string>()));
    service_.register_subscriber(body.at("subscriber").get<std::string>(), topics);
    json latest = json::object();
    for (const auto& t : topics) latest[t.str()] = service_.latest_seq(t);
    return json_response(json{{"latest", latest}});
  }

  if (parts[0] == "poll" && parts.size() == 1 && post) {
    json body = parse_body(req.body);
    Subscription sub{body.at("subscriber").get<std::string>(), {}};
    if (body.contains("cursors")) {
      for (const auto& [topic, seq] : body["cursors"].items()) sub.cursors[Topic::parse(topic)] = seq.get<std::uint64_t>();
    }
    int timeout = body.value("timeout_ms", 0);
    if (timeout < 0) throw Error(ErrorCode::InvalidInput, "timeout_ms", "must not be negative");
    timeout = std::min(timeout, kMaxPollTimeoutMs);
    json messages = json::array();
    for (const auto& m : service_.poll(sub, std::chrono::milliseconds(timeout))) messages.push_back(m);
    return json_response(json{{"messages", messages}});
  }

  if (parts[0] == "directory" && get) {
    if (parts.size() == 1) return json_response(service_.directory().to_json());
    if (parts.size() == 2) {
      const Actor* a = service_.directory().find(parts[1]);
      if (!a) return json_response(error_body(Error(ErrorCode::InvalidInput, parts[1], "no such actor")), 404);
      return json_response(*a);
    }
  }

  if (parts[0] == "audit" && parts.size() == 1 && get) {
    auto report = query_value(req, "report");
    std::uint64_t since = 0;
    if (auto s = query_value(req, "since")) since = static_cast<std::uint64_t>(parse_number(*s, "since"));
    json events = json::array();
    for (const auto& e : report ? service_.events_for(*report) : service_.events()) {
      if (e.seq > since) events.push_back(event_json(e));
    }
    return json_response(json{{"events", events}});
  }

  if (parts[0] == "permissions" && parts.size() == 1 && get) {
    auto role = query_value(req, "role");
    auto state = query_value(req, "state");
    if (!role || !state) throw Error(ErrorCode::InvalidInput, "permissions", "role and state are required");
    return json_response(json{{"actions", action_names(permitted_actions(parse_role(*role), parse_state(*state)))}});
  }

  return not_found();
}

}  // namespace dalert
