#pragma once

#include <compare>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dalert/domain.hpp"

namespace dalert {

class AdminHierarchy;

enum class Tier { Ministry, Province, District };

// An administrative office: the ministry, or the PAFO/DAFO of one region.
// Text form: "MAF", "PAFO-<province id>", "DAFO-<district id>".
struct AdminUnit {
  Tier tier = Tier::Ministry;
  std::string region_id;

  static AdminUnit ministry() { return {Tier::Ministry, {}}; }
  static AdminUnit province_office(std::string province_id) { return {Tier::Province, std::move(province_id)}; }
  static AdminUnit district_office(std::string district_id) { return {Tier::District, std::move(district_id)}; }
  static AdminUnit parse(std::string_view text);

  std::string id() const;
  friend auto operator<=>(const AdminUnit&, const AdminUnit&) = default;
};

// Push-delivery address. Offices listen on their unit topic, INGOs and
// reporters on their actor topic, residents on their village topic.
struct Topic {
  enum class Kind { Unit, Actor, Village };
  Kind kind = Kind::Unit;
  std::string id;

  static Topic unit(const AdminUnit& u) { return {Kind::Unit, u.id()}; }
  static Topic actor(std::string actor_id) { return {Kind::Actor, std::move(actor_id)}; }
  static Topic village(std::string village_id) { return {Kind::Village, std::move(village_id)}; }
  // "unit/PAFO-x", "actor/ingo-1", "village/V3".
  static Topic parse(std::string_view text);

  std::string str() const;
  friend auto operator<=>(const Topic&, const Topic&) = default;
};

// Known actors with their role and administered unit.
class ActorDirectory {
 public:
  ActorDirectory() = default;
  // Throws Error(InvalidInput) for duplicate ids.
  explicit ActorDirectory(std::vector<Actor> actors);

  static ActorDirectory from_json(const nlohmann::json& doc);
  static ActorDirectory load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  const std::vector<Actor>& actors() const { return actors_; }
  const Actor* find(std::string_view id) const;
  // INGOs subscribed to a province, sorted by id.
  std::vector<const Actor*> ingos_for_province(std::string_view province_id) const;
  // Staff of an office unit.
  std::vector<const Actor*> staff_of(const AdminUnit& unit) const;

 private:
  std::vector<Actor> actors_;
};

// The unit an office actor belongs to; nullopt for INGOs and villagers.
std::optional<AdminUnit> unit_of(const Actor& actor);

struct RoutingDecision {
  AdminUnit responsible;
  // Every office over the report's region plus subscribed INGOs. These
  // recipients process the report, so review applies to them.
  std::set<Topic> notified;
  // Villages that get the alert immediately, before any review.
  std::vector<std::string> neighbor_villages;
  bool requires_review = true;

  // notified plus the village topics.
  std::set<Topic> all_topics() const;
};

// Escalation table. Infrastructure goes to the district office; diseases to
// the province office from Severe upwards, else the district office; floods
// and bush fires to the ministry when Extreme, else the province office.
// Throws Error(UnknownRegion) when the report's province or district is not
// in the hierarchy.
AdminUnit responsible_unit(const DisasterReport& report, const AdminHierarchy& hierarchy);

RoutingDecision notification_set(const DisasterReport& report, const AdminHierarchy& hierarchy,
                                 const ActorDirectory& directory, double neighbor_radius_m);

}  // namespace dalert
