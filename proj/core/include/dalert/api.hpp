#pragma once

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "dalert/alert_service.hpp"
#include "dalert/error.hpp"

namespace dalert {

// Transport-neutral request/response pair. Bodies are JSON except for the
// CAP endpoints, which carry XML.
struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// HTTP status for an error code.
int http_status(ErrorCode code);

// JSON error body: {"error", "subject", "message"[, "violations"]}.
nlohmann::json error_body(const Error& error);

// Rebuilds the typed error from an error body; used by clients.
[[noreturn]] void rethrow_error_body(int status, const std::string& body);

// Upper bound on a single long-poll wait.
inline constexpr int kMaxPollTimeoutMs = 60000;

// Routes requests to the service.
//
//   POST /reports                    {"report", "idempotency_key"} -> {"id"}
//   GET  /reports                    ?province&district&state&kind&bbox=minlat,minlon,maxlat,maxlon
//   GET  /reports/{id}               -> {"report", "responsible", "topics", "reporter_notified"}
//   POST /reports/{id}/actions       {"actor", "action", ...action fields} -> report
//   GET  /reports/{id}/actions       ?actor -> {"actions"}
//   POST /reports/{id}/verify        {"verifier", "note"} -> record
//   GET  /reports/{id}/reliability   -> {"official_count", "user_count", "score", "auto_distribution_eligible"}
//   GET  /reports/{id}/cap           ?sender&msg_type -> CAP XML
//   POST /cap                        CAP XML, ?key -> {"id"}
//   POST /subscriptions              {"subscriber", "topics"} -> {"latest": {topic: seq}}
//   POST /poll                       {"subscriber", "cursors", "timeout_ms"} -> {"messages"}
//   GET  /directory, /directory/{id}
//   GET  /audit                      ?report&since
//   GET  /permissions                ?role&state -> {"actions"}
class ApiRouter {
 public:
  explicit ApiRouter(AlertService& service) : service_(service) {}

  // Never throws; errors become JSON error responses.
  ApiResponse handle(const ApiRequest& request) const;

 private:
  ApiResponse dispatch(const ApiRequest& request) const;

  AlertService& service_;
};

// Parses the action body of POST /reports/{id}/actions.
AdminAction parse_admin_action(const nlohmann::json& body);
nlohmann::json admin_action_to_json(const AdminAction& action);

}  // namespace dalert
