#include "dalert/domain.hpp"

#include <cmath>

#include "dalert/error.hpp"
#include "dalert/geo.hpp"

namespace dalert {

bool GeoPoint::in_range() const {
  return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 && lon >= -180.0 &&
         lon <= 180.0;
}

bool is_disease(DisasterKind kind) {
  return kind == DisasterKind::HumanDisease || kind == DisasterKind::AnimalDisease ||
         kind == DisasterKind::PlantDisease;
}

bool is_terminal(LifecycleState state) {
  return state == LifecycleState::Resolved || state == LifecycleState::Merged;
}

bool is_legal_transition(LifecycleState from, LifecycleState to) {
  using S = LifecycleState;
  switch (from) {
    case S::Submitted:
      return to == S::Distributed;
    case S::Distributed:
      return to == S::UnderReview;
    case S::UnderReview:
      return to == S::Verified || to == S::Resolved || to == S::Merged;
    case S::Verified:
      return to == S::Resolved || to == S::Merged;
    case S::Resolved:
    case S::Merged:
      return false;
  }
  return false;
}

bool is_office(Role role) {
  return role == Role::Ministry || role == Role::ProvinceOffice || role == Role::DistrictOffice;
}

bool is_institutional(Role role) { return is_office(role) || role == Role::INGO; }

KindDetails KindDetails::flood(std::int64_t water_level_cm) {
  return {DisasterKind::Flood, FloodDetails{water_level_cm}};
}

KindDetails KindDetails::bush_fire(std::optional<std::int64_t> area_estimate_m2) {
  return {DisasterKind::BushFire, BushFireDetails{area_estimate_m2}};
}

KindDetails KindDetails::infrastructure(std::string facility) {
  return {DisasterKind::Infrastructure, InfrastructureDetails{std::move(facility)}};
}

KindDetails KindDetails::disease(DisasterKind kind, std::string disease_name, std::int64_t affected_count) {
  return {kind, DiseaseDetails{std::move(disease_name), affected_count}};
}

KindDetails KindDetails::defaults_for(DisasterKind kind) {
  switch (kind) {
    case DisasterKind::Flood:
      return flood(0);
    case DisasterKind::BushFire:
      return bush_fire();
    case DisasterKind::Infrastructure:
      return infrastructure("");
    default:
      return disease(kind, "", 0);
  }
}

bool KindDetails::tag_consistent() const {
  switch (kind) {
    case DisasterKind::Flood:
      return std::holds_alternative<FloodDetails>(data);
    case DisasterKind::BushFire:
      return std::holds_alternative<BushFireDetails>(data);
    case DisasterKind::Infrastructure:
      return std::holds_alternative<InfrastructureDetails>(data);
    default:
      return std::holds_alternative<DiseaseDetails>(data);
  }
}

namespace {

void check_details(const KindDetails& details, std::vector<std::string>& out) {
  if (const auto* flood = std::get_if<FloodDetails>(&details.data)) {
    if (flood->water_level_cm < 0) out.emplace_back("water level negative");
    if (flood->water_level_cm > kMaxWaterLevelCm) out.emplace_back("water level above 10000 cm");
  } else if (const auto* fire = std::get_if<BushFireDetails>(&details.data)) {
    if (fire->area_estimate_m2 && *fire->area_estimate_m2 < 0) out.emplace_back("area estimate negative");
  } else if (const auto* disease = std::get_if<DiseaseDetails>(&details.data)) {
    if (disease->affected_count < 0) out.emplace_back("affected count negative");
  }
}

}  // namespace

ValidationResult validate_report(const DisasterReport& report, const AdminHierarchy& hierarchy) {
  ValidationResult result;
  auto& v = result.violations;

  if (report.id.size() > kMaxIdLength) v.emplace_back("id longer than 64 bytes");
  if (report.reporter.empty()) v.emplace_back("reporter missing");
  if (report.reporter.size() > kMaxIdLength) v.emplace_back("reporter id longer than 64 bytes");

  if (report.details.kind != report.kind || !report.details.tag_consistent()) {
    v.emplace_back("details tag mismatch");
  }
  check_details(report.details, v);

  if (report.geometry) {
    if (report.geometry->size() < 3) v.emplace_back("geometry needs at least 3 vertices");
    for (const auto& p : *report.geometry) {
      if (!p.in_range()) {
        v.emplace_back("geometry vertex out of range");
        break;
      }
    }
  }

  if (report.merged_into.has_value() != (report.state == LifecycleState::Merged)) {
    v.emplace_back("merged_into must be set exactly when state is Merged");
  }

  if (!report.location.in_range()) {
    v.emplace_back("location out of range");
  } else if (auto path = hierarchy.try_locate(report.location); !path) {
    v.emplace_back("location outside coverage");
  } else if (path->province_id != report.province_id || path->district_id != report.district_id ||
             path->kumban_id != report.kumban_id) {
    v.emplace_back("region inconsistency: location resolves to " + path->province_id + "/" +
                   path->district_id + "/" + path->kumban_id.value_or("-"));
  }
  return result;
}

DisasterReport transition(const DisasterReport& report, LifecycleState target,
                          std::optional<std::string> merged_into) {
  if (!is_legal_transition(report.state, target)) {
    throw Error(ErrorCode::IllegalTransition, report.id,
                std::string(to_string(report.state)) + " -> " + std::string(to_string(target)));
  }
  if ((target == LifecycleState::Merged) != merged_into.has_value()) {
    throw Error(ErrorCode::InvariantViolation, report.id, "merged_into must accompany exactly the Merged state");
  }
  DisasterReport next = report;
  next.state = target;
  next.merged_into = std::move(merged_into);
  return next;
}

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view name, const Enum (&all)[N], const char* what) {
  for (Enum e : all) {
    if (to_string(e) == name) return e;
  }
  throw Error(ErrorCode::InvalidInput, std::string(name), std::string("unknown ") + what);
}

}  // namespace

std::string_view to_string(DisasterKind kind) {
  switch (kind) {
    case DisasterKind::Flood: return "Flood";
    case DisasterKind::BushFire: return "BushFire";
    case DisasterKind::Infrastructure: return "Infrastructure";
    case DisasterKind::HumanDisease: return "HumanDisease";
    case DisasterKind::AnimalDisease: return "AnimalDisease";
    case DisasterKind::PlantDisease: return "PlantDisease";
  }
  return "?";
}

std::string_view to_string(Severity severity) {
  switch (severity) {
    case Severity::Minor: return "Minor";
    case Severity::Moderate: return "Moderate";
    case Severity::Severe: return "Severe";
    case Severity::Extreme: return "Extreme";
  }
  return "?";
}

std::string_view to_string(LifecycleState state) {
  switch (state) {
    case LifecycleState::Submitted: return "Submitted";
    case LifecycleState::Distributed: return "Distributed";
    case LifecycleState::UnderReview: return "UnderReview";
    case LifecycleState::Verified: return "Verified";
    case LifecycleState::Resolved: return "Resolved";
    case LifecycleState::Merged: return "Merged";
  }
  return "?";
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Ministry: return "Ministry";
    case Role::ProvinceOffice: return "ProvinceOffice";
    case Role::DistrictOffice: return "DistrictOffice";
    case Role::INGO: return "INGO";
    case Role::Villager: return "Villager";
  }
  return "?";
}

DisasterKind parse_kind(std::string_view name) { return parse_enum(name, kAllKinds, "disaster kind"); }
Severity parse_severity(std::string_view name) { return parse_enum(name, kAllSeverities, "severity"); }
LifecycleState parse_state(std::string_view name) { return parse_enum(name, kAllStates, "lifecycle state"); }
Role parse_role(std::string_view name) { return parse_enum(name, kAllRoles, "role"); }

}  // namespace dalert
