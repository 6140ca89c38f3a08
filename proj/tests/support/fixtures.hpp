#pragma once

#include <atomic>
#include <filesystem>
#include <string>

#include "dalert/alert_service.hpp"
#include "dalert/geo.hpp"
#include "dalert/routing.hpp"

namespace dalert::test {

std::filesystem::path data_path(const std::string& name);
std::string read_file(const std::filesystem::path& path);

// Luang Prabang area: provinces Louangphabang and Xaignabouli, districts
// Louangprabang and Chompet, kumbans Sangkalok, Pakxuang, ChompetCentre.
AdminHierarchy north_regions();
ActorDirectory north_actors();

// The alert listing used as the CAP reference document.
std::string listing_xml();

inline constexpr GeoPoint kListingPoint{19.845519, 102.078652};

// Deterministic clock advancing one second per reading.
class StepClock {
 public:
  explicit StepClock(UtcTime start = UtcTime(std::chrono::milliseconds(1700000000000LL))) : next_(start.time_since_epoch().count()) {}
  UtcTime operator()() { return UtcTime(std::chrono::milliseconds(next_.fetch_add(1000))); }

 private:
  std::atomic<std::int64_t> next_;
};

AlertService::Clock step_clock();

// Flood in Sangkalok at the listing point, reported by villager "89".
DisasterReport sangkalok_flood(std::int64_t water_level_cm = 150, Severity severity = Severity::Severe);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace dalert::test

namespace dalert::test {

// Collapses whitespace runs to one space and drops whitespace next to tag
// delimiters, so documents compare on content rather than layout.
std::string normalize_xml_whitespace(std::string_view doc);

}  // namespace dalert::test
