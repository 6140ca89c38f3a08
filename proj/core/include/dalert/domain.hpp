#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dalert/time.hpp"

namespace dalert {

class AdminHierarchy;

/// WGS84 position in decimal degrees.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  bool in_range() const;
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

enum class DisasterKind { Flood, BushFire, Infrastructure, HumanDisease, AnimalDisease, PlantDisease };
inline constexpr DisasterKind kAllKinds[] = {DisasterKind::Flood,        DisasterKind::BushFire,
                                             DisasterKind::Infrastructure, DisasterKind::HumanDisease,
                                             DisasterKind::AnimalDisease,  DisasterKind::PlantDisease};

bool is_disease(DisasterKind kind);

enum class Severity { Minor, Moderate, Severe, Extreme };
inline constexpr Severity kAllSeverities[] = {Severity::Minor, Severity::Moderate, Severity::Severe,
                                              Severity::Extreme};

enum class LifecycleState { Submitted, Distributed, UnderReview, Verified, Resolved, Merged };
inline constexpr LifecycleState kAllStates[] = {LifecycleState::Submitted,   LifecycleState::Distributed,
                                                LifecycleState::UnderReview, LifecycleState::Verified,
                                                LifecycleState::Resolved,    LifecycleState::Merged};

bool is_terminal(LifecycleState state);
bool is_legal_transition(LifecycleState from, LifecycleState to);

enum class Role { Ministry, ProvinceOffice, DistrictOffice, INGO, Villager };
inline constexpr Role kAllRoles[] = {Role::Ministry, Role::ProvinceOffice, Role::DistrictOffice, Role::INGO,
                                     Role::Villager};

// MAF, PAFO and DAFO staff.
bool is_office(Role role);
// Offices and INGOs; their verifications count as official stamps.
bool is_institutional(Role role);

using ActorId = std::string;

struct Actor {
  ActorId id;
  Role role = Role::Villager;
  // Region administered by an office role, or home village for a villager.
  std::string unit_id;
  std::string phone;

  friend bool operator==(const Actor&, const Actor&) = default;
};

struct FloodDetails {
  std::int64_t water_level_cm = 0;
  friend bool operator==(const FloodDetails&, const FloodDetails&) = default;
};
struct BushFireDetails {
  std::optional<std::int64_t> area_estimate_m2;
  friend bool operator==(const BushFireDetails&, const BushFireDetails&) = default;
};
struct InfrastructureDetails {
  std::string facility;
  friend bool operator==(const InfrastructureDetails&, const InfrastructureDetails&) = default;
};
struct DiseaseDetails {
  std::string disease_name;
  std::int64_t affected_count = 0;
  friend bool operator==(const DiseaseDetails&, const DiseaseDetails&) = default;
};

// Kind-specific payload. `kind` is the tag; the three disease kinds share
// DiseaseDetails.
struct KindDetails {
  DisasterKind kind = DisasterKind::Flood;
  std::variant<FloodDetails, BushFireDetails, InfrastructureDetails, DiseaseDetails> data;

  static KindDetails flood(std::int64_t water_level_cm);
  static KindDetails bush_fire(std::optional<std::int64_t> area_estimate_m2 = std::nullopt);
  static KindDetails infrastructure(std::string facility);
  static KindDetails disease(DisasterKind kind, std::string disease_name, std::int64_t affected_count);
  // Zero-valued payload for a kind.
  static KindDetails defaults_for(DisasterKind kind);

  // True when the payload alternative is the one `kind` calls for.
  bool tag_consistent() const;

  friend bool operator==(const KindDetails&, const KindDetails&) = default;
};

struct Parameter {
  std::string name;
  std::string value;
  friend bool operator==(const Parameter&, const Parameter&) = default;
};

// CAP attributes a report carries that have no domain meaning of their own.
// Native reports use the defaults; imported alerts keep what they arrived with
// so that re-export reproduces them.
struct AlertEnvelope {
  std::string status = "Actual";
  std::string scope = "Public";
  std::optional<std::string> source;
  std::optional<std::string> language = std::string("en-US");
  std::optional<std::string> response_type = std::string("None");
  std::string urgency = "Immediate";
  std::string certainty = "Observed";
  int sent_offset_minutes = 0;
  std::optional<OffsetTime> effective;
  // Parameters this system does not interpret, in arrival order.
  std::vector<Parameter> foreign_parameters;

  friend bool operator==(const AlertEnvelope&, const AlertEnvelope&) = default;
};

struct DisasterReport {
  std::string id;
  DisasterKind kind = DisasterKind::Flood;
  KindDetails details;
  GeoPoint location;
  // Open ring (closing edge implicit), at least three vertices.
  std::optional<std::vector<GeoPoint>> geometry;
  std::string province_id;
  std::string district_id;
  std::optional<std::string> kumban_id;
  ActorId reporter;
  std::string reporter_phone;
  std::string description;
  UtcTime created_at{};
  LifecycleState state = LifecycleState::Submitted;
  Severity severity = Severity::Minor;
  std::optional<std::string> merged_into;
  std::vector<std::string> attachments;
  AlertEnvelope envelope;

  friend bool operator==(const DisasterReport&, const DisasterReport&) = default;
};

inline constexpr std::int64_t kMaxWaterLevelCm = 10000;
inline constexpr std::size_t kMaxIdLength = 64;

struct ValidationResult {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every report invariant, including that the region ids agree with
// what the hierarchy resolves for the location. Never throws for bad data.
ValidationResult validate_report(const DisasterReport& report, const AdminHierarchy& hierarchy);

// Returns a copy moved to `target`. Merged requires `merged_into`; any other
// target forbids it. Throws Error(IllegalTransition) for edges outside the
// lifecycle graph.
DisasterReport transition(const DisasterReport& report, LifecycleState target,
                          std::optional<std::string> merged_into = std::nullopt);

std::string_view to_string(DisasterKind kind);
std::string_view to_string(Severity severity);
std::string_view to_string(LifecycleState state);
std::string_view to_string(Role role);

// Inverse of to_string. Throw Error(InvalidInput) for unknown names.
DisasterKind parse_kind(std::string_view name);
Severity parse_severity(std::string_view name);
LifecycleState parse_state(std::string_view name);
Role parse_role(std::string_view name);

}  // namespace dalert
