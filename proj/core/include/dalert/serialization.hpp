#pragma once

// JSON forms of the domain types, used by the HTTP API, the event log and
// the state snapshots. Readers throw Error(InvalidInput) on malformed input.

#include <nlohmann/json.hpp>

#include "dalert/domain.hpp"
#include "dalert/push.hpp"
#include "dalert/verification.hpp"

namespace dalert {

void to_json(nlohmann::json& j, const GeoPoint& p);
void from_json(const nlohmann::json& j, GeoPoint& p);

void to_json(nlohmann::json& j, const KindDetails& d);
void from_json(const nlohmann::json& j, KindDetails& d);

void to_json(nlohmann::json& j, const AlertEnvelope& e);
void from_json(const nlohmann::json& j, AlertEnvelope& e);

void to_json(nlohmann::json& j, const DisasterReport& r);
void from_json(const nlohmann::json& j, DisasterReport& r);

void to_json(nlohmann::json& j, const Actor& a);
void from_json(const nlohmann::json& j, Actor& a);

void to_json(nlohmann::json& j, const VerificationRecord& v);
void from_json(const nlohmann::json& j, VerificationRecord& v);

void to_json(nlohmann::json& j, const AlertSummary& s);
void from_json(const nlohmann::json& j, AlertSummary& s);

void to_json(nlohmann::json& j, const PushMessage& m);
void from_json(const nlohmann::json& j, PushMessage& m);

void to_json(nlohmann::json& j, const Reliability& r);

[[noreturn]] void throw_invalid(const char* what, const char* why);

// Converts `j`, turning nlohmann exceptions into Error(InvalidInput). Enum
// and timestamp problems already arrive as Error(InvalidInput).
template <typename T>
T decode_json(const nlohmann::json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw_invalid(what, e.what());
  }
}

}  // namespace dalert
