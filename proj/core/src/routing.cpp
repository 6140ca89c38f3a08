#include "dalert/routing.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "dalert/error.hpp"
#include "dalert/geo.hpp"

namespace dalert {

using nlohmann::json;

AdminUnit AdminUnit::parse(std::string_view text) {
  if (text == "MAF") return ministry();
  if (text.size() > 5 && text.substr(0, 5) == "PAFO-") return province_office(std::string(text.substr(5)));
  if (text.size() > 5 && text.substr(0, 5) == "DAFO-") return district_office(std::string(text.substr(5)));
  throw Error(ErrorCode::InvalidInput, std::string(text), "not an administrative unit id");
}

std::string AdminUnit::id() const {
  switch (tier) {
    case Tier::Ministry: return "MAF";
    case Tier::Province: return "PAFO-" + region_id;
    case Tier::District: return "DAFO-" + region_id;
  }
  return {};
}

Topic Topic::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos || slash + 1 == text.size()) {
    throw Error(ErrorCode::InvalidInput, std::string(text), "topic must look like kind/id");
  }
  std::string_view kind = text.substr(0, slash);
  std::string id(text.substr(slash + 1));
  if (kind == "unit") return {Kind::Unit, AdminUnit::parse(id).id()};
  if (kind == "actor") return {Kind::Actor, id};
  if (kind == "village") return {Kind::Village, id};
  throw Error(ErrorCode::InvalidInput, std::string(text), "unknown topic kind");
}

std::string Topic::str() const {
  switch (kind) {
    case Kind::Unit: return "unit/" + id;
    case Kind::Actor: return "actor/" + id;
    case Kind::Village: return "village/" + id;
  }
  return {};
}

ActorDirectory::ActorDirectory(std::vector<Actor> actors) : actors_(std::move(actors)) {
  std::unordered_set<std::string> seen;
  for (const auto& a : actors_) {
    if (a.id.empty()) throw Error(ErrorCode::InvalidInput, "actor", "empty actor id");
    if (!seen.insert(a.id).second) throw Error(ErrorCode::InvalidInput, a.id, "duplicate actor id");
  }
}

ActorDirectory ActorDirectory::from_json(const json& doc) {
  std::vector<Actor> actors;
  if (!doc.is_object() || !doc.contains("actors") || !doc["actors"].is_array()) {
    throw Error(ErrorCode::InvalidInput, "directory", "expected {\"actors\": [...]}");
  }
  try {
    for (const auto& a : doc["actors"]) {
      actors.push_back(Actor{a.at("id").get<std::string>(), parse_role(a.at("role").get<std::string>()),
                             a.value("unit", std::string()), a.value("phone", std::string())});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, "directory", e.what());
  }
  return ActorDirectory(std::move(actors));
}

ActorDirectory ActorDirectory::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, path.string(), "cannot open directory file");
  try {
    return from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, path.string(), e.what());
  }
}

json ActorDirectory::to_json() const {
  json arr = json::array();
  for (const auto& a : actors_) {
    arr.push_back({{"id", a.id}, {"role", to_string(a.role)}, {"unit", a.unit_id}, {"phone", a.phone}});
  }
  return json{{"actors", arr}};
}

const Actor* ActorDirectory::find(std::string_view id) const {
  for (const auto& a : actors_) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

std::vector<const Actor*> ActorDirectory::ingos_for_province(std::string_view province_id) const {
  std::vector<const Actor*> out;
  for (const auto& a : actors_) {
    if (a.role == Role::INGO && a.unit_id == province_id) out.push_back(&a);
  }
  std::sort(out.begin(), out.end(), [](const Actor* x, const Actor* y) { return x->id < y->id; });
  return out;
}

std::vector<const Actor*> ActorDirectory::staff_of(const AdminUnit& unit) const {
  std::vector<const Actor*> out;
  for (const auto& a : actors_) {
    if (auto u = unit_of(a); u && *u == unit) out.push_back(&a);
  }
  return out;
}

std::optional<AdminUnit> unit_of(const Actor& actor) {
  switch (actor.role) {
    case Role::Ministry: return AdminUnit::ministry();
    case Role::ProvinceOffice: return AdminUnit::province_office(actor.unit_id);
    case Role::DistrictOffice: return AdminUnit::district_office(actor.unit_id);
    default: return std::nullopt;
  }
}

std::set<Topic> RoutingDecision::all_topics() const {
  std::set<Topic> out = notified;
  for (const auto& v : neighbor_villages) out.insert(Topic::village(v));
  return out;
}

namespace {

void require_regions(const DisasterReport& report, const AdminHierarchy& hierarchy) {
  if (!hierarchy.find_province(report.province_id)) {
    throw Error(ErrorCode::UnknownRegion, report.province_id.empty() ? "<none>" : report.province_id,
                "province not in hierarchy");
  }
  auto owner = hierarchy.province_of_district(report.district_id);
  if (!owner) {
    throw Error(ErrorCode::UnknownRegion, report.district_id.empty() ? "<none>" : report.district_id,
                "district not in hierarchy");
  }
  if (*owner != report.province_id) {
    throw Error(ErrorCode::UnknownRegion, report.district_id, "district belongs to province " + *owner);
  }
}

}  // namespace

AdminUnit responsible_unit(const DisasterReport& report, const AdminHierarchy& hierarchy) {
  require_regions(report, hierarchy);
  const auto district = AdminUnit::district_office(report.district_id);
  const auto province = AdminUnit::province_office(report.province_id);
  switch (report.kind) {
    case DisasterKind::Infrastructure:
      return district;
    case DisasterKind::HumanDisease:
    case DisasterKind::AnimalDisease:
    case DisasterKind::PlantDisease:
      return report.severity >= Severity::Severe ? province : district;
    case DisasterKind::Flood:
    case DisasterKind::BushFire:
      return report.severity == Severity::Extreme ? AdminUnit::ministry() : province;
  }
  return province;
}

RoutingDecision notification_set(const DisasterReport& report, const AdminHierarchy& hierarchy,
                                 const ActorDirectory& directory, double neighbor_radius_m) {
  RoutingDecision decision;
  decision.responsible = responsible_unit(report, hierarchy);
  decision.notified.insert(Topic::unit(AdminUnit::ministry()));
  decision.notified.insert(Topic::unit(AdminUnit::province_office(report.province_id)));
  decision.notified.insert(Topic::unit(AdminUnit::district_office(report.district_id)));
  for (const Actor* ingo : directory.ingos_for_province(report.province_id)) {
    decision.notified.insert(Topic::actor(ingo->id));
  }
  for (const auto& hit : hierarchy.neighbors(report.location, neighbor_radius_m)) {
    decision.neighbor_villages.push_back(hit.id);
  }
  return decision;
}

}  // namespace dalert
