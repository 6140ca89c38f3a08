#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dalert/domain.hpp"

namespace dalert {

inline constexpr double kEarthRadiusM = 6371000.0;
inline constexpr double kDefaultNeighborRadiusM = 10000.0;

// Vertices of a polygon, closing edge implicit.
using Ring = std::vector<GeoPoint>;

struct BoundingBox {
  double min_lat = 0.0;
  double min_lon = 0.0;
  double max_lat = 0.0;
  double max_lon = 0.0;

  static BoundingBox of(const std::vector<Ring>& rings);
  bool contains(GeoPoint p) const;
  bool contains(const BoundingBox& other) const;
};

struct Region {
  std::string id;
  std::vector<Ring> rings;
  BoundingBox bbox;

  // Inside any ring; points on an edge or vertex count as inside.
  bool contains(GeoPoint p) const;
};

struct Village {
  std::string id;
  GeoPoint location;
  friend bool operator==(const Village&, const Village&) = default;
};

struct Kumban {
  Region region;
  std::vector<Village> villages;
};

struct District {
  Region region;
  std::vector<Kumban> kumbans;
};

struct Province {
  Region region;
  std::vector<District> districts;
};

struct RegionPath {
  std::string province_id;
  std::string district_id;
  std::optional<std::string> kumban_id;
  friend bool operator==(const RegionPath&, const RegionPath&) = default;
};

struct NeighborVillage {
  std::string id;
  GeoPoint location;
  double distance_m = 0.0;
};

// Province -> district -> kumban -> village containment tree. Immutable once
// constructed, so every query is safe to run concurrently.
class AdminHierarchy {
 public:
  AdminHierarchy() = default;
  // Checks id uniqueness per level and that each child's bounding box sits
  // inside its parent's. Throws Error(InvalidInput).
  explicit AdminHierarchy(std::vector<Province> provinces);

  static AdminHierarchy from_json(const nlohmann::json& doc);
  static AdminHierarchy load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  const std::vector<Province>& provinces() const { return provinces_; }
  const std::vector<Village>& villages() const { return villages_; }

  // Innermost regions containing `point`; first match in file order wins
  // where siblings overlap. Throws Error(OutOfCoverage) when no province, or
  // no district inside the province, contains the point.
  RegionPath locate(GeoPoint point) const;
  std::optional<RegionPath> try_locate(GeoPoint point) const;

  // Villages within `radius_m` (haversine), nearest first, ties by id.
  std::vector<NeighborVillage> neighbors(GeoPoint center, double radius_m) const;

  const Province* find_province(std::string_view id) const;
  const District* find_district(std::string_view id) const;
  const Kumban* find_kumban(std::string_view id) const;
  // Id of the province holding district `district_id`, if any.
  std::optional<std::string> province_of_district(std::string_view district_id) const;

 private:
  struct Path {
    std::size_t province = 0;
    std::size_t district = 0;
    std::size_t kumban = 0;
  };

  std::vector<Province> provinces_;
  std::vector<Village> villages_;
  std::unordered_map<std::string, Path> province_index_;
  std::unordered_map<std::string, Path> district_index_;
  std::unordered_map<std::string, Path> kumban_index_;
};

double haversine_m(GeoPoint a, GeoPoint b);

// Crossing-number test with an explicit on-edge check.
bool ring_contains(const Ring& ring, GeoPoint p);

// Area centroid in the lat/lon plane. Throws Error(DegenerateRing) for
// fewer than three vertices or zero area.
GeoPoint ring_centroid(const Ring& ring);

// Sets the affected area, moves the location to its centroid and re-resolves
// the regions from there. A repeated closing vertex is dropped.
DisasterReport attach_geometry(const DisasterReport& report, Ring ring, const AdminHierarchy& hierarchy);

}  // namespace dalert
