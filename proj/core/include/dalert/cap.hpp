#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dalert/domain.hpp"
#include "dalert/time.hpp"

namespace dalert {

class AdminHierarchy;

inline constexpr std::string_view kCapNamespace = "urn:oasis:names:tc:emergency:cap:1.1";

// Extension parameter names written into <info><parameter>.
namespace cap_param {
inline constexpr std::string_view kLocation = "location";
inline constexpr std::string_view kDisasterType = "disasterType";
inline constexpr std::string_view kProvince = "province";
inline constexpr std::string_view kDistrict = "district";
inline constexpr std::string_view kKumban = "kumban";
inline constexpr std::string_view kWaterLevelCm = "waterLevelCm";
inline constexpr std::string_view kAreaEstimateM2 = "areaEstimateM2";
inline constexpr std::string_view kFacility = "facility";
inline constexpr std::string_view kDiseaseName = "diseaseName";
inline constexpr std::string_view kAffectedCount = "affectedCount";
inline constexpr std::string_view kGeometry = "geometry";
inline constexpr std::string_view kReporter = "reporter";
inline constexpr std::string_view kReporterPhone = "reporterPhone";
inline constexpr std::string_view kLifecycleState = "lifecycleState";
inline constexpr std::string_view kMergedInto = "mergedInto";
inline constexpr std::string_view kAttachment = "attachment";
}  // namespace cap_param

struct CapInfo {
  std::optional<std::string> language;
  std::string category;
  std::string event;
  std::optional<std::string> response_type;
  std::string urgency;
  std::string severity;
  std::string certainty;
  std::optional<OffsetTime> effective;
  std::vector<Parameter> parameters;

  friend bool operator==(const CapInfo&, const CapInfo&) = default;
};

struct CapAlert {
  std::string identifier;
  std::string sender;
  OffsetTime sent;
  std::string status;
  std::string msg_type;
  std::optional<std::string> source;
  std::string scope;
  CapInfo info;

  friend bool operator==(const CapAlert&, const CapAlert&) = default;
};

// Throws Error(InvariantViolation) naming the first element whose value is
// outside its CAP 1.1 enumeration or that is empty but required.
void check_cap_invariants(const CapAlert& alert);

// Throws Error(MalformedXml) for ill-formed input and Error(SchemaViolation)
// naming the element for a missing, duplicated or out-of-enumeration value.
CapAlert parse_cap(std::string_view xml_text);

// CAP 1.1 document, elements in canonical order. Throws InvariantViolation.
std::string serialize_cap(const CapAlert& alert);

// Native fields go to their CAP counterparts; everything else becomes an
// extension parameter. Optional extensions are omitted when they hold their
// default, which cap_to_report restores.
CapAlert report_to_cap(const DisasterReport& report, const ActorId& sender, std::string_view msg_type = "Alert");

// Inverse of report_to_cap. Alerts from other systems get their kind from
// the category and, when `hierarchy` is given, regions from the location.
// Throws Error(MissingLocation) when neither a location nor a geometry
// parameter is present, Error(SchemaViolation) for unreadable extensions.
DisasterReport cap_to_report(const CapAlert& alert, const AdminHierarchy* hierarchy = nullptr);

std::string_view cap_category_for(DisasterKind kind);
// "PlantDisease" -> "PlantDiseaseInfo".
std::string disaster_type_value(DisasterKind kind);

}  // namespace dalert
