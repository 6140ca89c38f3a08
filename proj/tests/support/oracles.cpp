#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace dalert::oracle {

namespace {

// Twice the signed area of (a, b, p); > 0 when p is left of a->b.
double orient(GeoPoint a, GeoPoint b, GeoPoint p) {
  return (b.lon - a.lon) * (p.lat - a.lat) - (p.lon - a.lon) * (b.lat - a.lat);
}

bool on_segment(GeoPoint a, GeoPoint b, GeoPoint p) {
  const double scale = std::max({std::abs(b.lon - a.lon), std::abs(b.lat - a.lat), 1e-300});
  if (std::abs(orient(a, b, p)) > 1e-12 * scale) return false;
  return p.lon >= std::min(a.lon, b.lon) - 1e-12 && p.lon <= std::max(a.lon, b.lon) + 1e-12 &&
         p.lat >= std::min(a.lat, b.lat) - 1e-12 && p.lat <= std::max(a.lat, b.lat) + 1e-12;
}

bool region_contains(const Region& region, GeoPoint p) {
  // Rings are disjoint parts of one region.
  for (const auto& ring : region.rings) {
    if (winding_contains(ring, p)) return true;
  }
  return false;
}

}  // namespace

bool winding_contains(const Ring& ring, GeoPoint p) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  int wn = 0;
  for (std::size_t i = 0; i < n; ++i) {
    GeoPoint a = ring[i];
    GeoPoint b = ring[(i + 1) % n];
    if (on_segment(a, b, p)) return true;
    if (a.lat <= p.lat) {
      if (b.lat > p.lat && orient(a, b, p) > 0) ++wn;
    } else {
      if (b.lat <= p.lat && orient(a, b, p) < 0) --wn;
    }
  }
  return wn != 0;
}

std::optional<RegionPath> locate(const AdminHierarchy& hierarchy, GeoPoint p) {
  for (const auto& province : hierarchy.provinces()) {
    if (!region_contains(province.region, p)) continue;
    for (const auto& district : province.districts) {
      if (!region_contains(district.region, p)) continue;
      RegionPath path{province.region.id, district.region.id, std::nullopt};
      for (const auto& kumban : district.kumbans) {
        if (region_contains(kumban.region, p)) {
          path.kumban_id = kumban.region.id;
          break;
        }
      }
      return path;
    }
    return std::nullopt;
  }
  return std::nullopt;
}

double chord_distance_m(GeoPoint a, GeoPoint b) {
  constexpr double kRad = 3.14159265358979323846 / 180.0;
  auto unit = [&](GeoPoint g) {
    const double la = g.lat * kRad;
    const double lo = g.lon * kRad;
    return std::array<double, 3>{std::cos(la) * std::cos(lo), std::cos(la) * std::sin(lo), std::sin(la)};
  };
  auto u = unit(a);
  auto v = unit(b);
  const double c = std::sqrt((u[0] - v[0]) * (u[0] - v[0]) + (u[1] - v[1]) * (u[1] - v[1]) +
                             (u[2] - v[2]) * (u[2] - v[2]));
  return 2.0 * 6371000.0 * std::asin(std::min(1.0, c / 2.0));
}

std::set<std::string> villages_within(const AdminHierarchy& hierarchy, GeoPoint center, double radius_m) {
  std::set<std::string> out;
  for (const auto& province : hierarchy.provinces()) {
    for (const auto& district : province.districts) {
      for (const auto& kumban : district.kumbans) {
        for (const auto& village : kumban.villages) {
          if (chord_distance_m(center, village.location) <= radius_m) out.insert(village.id);
        }
      }
    }
  }
  return out;
}

std::string responsible_unit_id(DisasterKind kind, Severity severity, const std::string& province,
                                const std::string& district) {
  const std::string maf = "MAF";
  const std::string pafo = "PAFO-" + province;
  const std::string dafo = "DAFO-" + district;
  using K = DisasterKind;
  using S = Severity;
  struct Row {
    K kind;
    S severity;
    int tier;  // 0 MAF, 1 PAFO, 2 DAFO
  };
  static const Row table[] = {
      {K::Flood, S::Minor, 1},          {K::Flood, S::Moderate, 1},          {K::Flood, S::Severe, 1},
      {K::Flood, S::Extreme, 0},        {K::BushFire, S::Minor, 1},          {K::BushFire, S::Moderate, 1},
      {K::BushFire, S::Severe, 1},      {K::BushFire, S::Extreme, 0},        {K::Infrastructure, S::Minor, 2},
      {K::Infrastructure, S::Moderate, 2}, {K::Infrastructure, S::Severe, 2}, {K::Infrastructure, S::Extreme, 2},
      {K::HumanDisease, S::Minor, 2},   {K::HumanDisease, S::Moderate, 2},   {K::HumanDisease, S::Severe, 1},
      {K::HumanDisease, S::Extreme, 1}, {K::AnimalDisease, S::Minor, 2},     {K::AnimalDisease, S::Moderate, 2},
      {K::AnimalDisease, S::Severe, 1}, {K::AnimalDisease, S::Extreme, 1},   {K::PlantDisease, S::Minor, 2},
      {K::PlantDisease, S::Moderate, 2}, {K::PlantDisease, S::Severe, 1},   {K::PlantDisease, S::Extreme, 1},
  };
  for (const auto& row : table) {
    if (row.kind == kind && row.severity == severity) return row.tier == 0 ? maf : row.tier == 1 ? pafo : dafo;
  }
  return {};
}

std::set<std::string> recipient_topics(const DisasterReport& report, const AdminHierarchy& hierarchy,
                                       const ActorDirectory& directory, double radius_m) {
  std::set<std::string> out{"unit/MAF", "unit/PAFO-" + report.province_id, "unit/DAFO-" + report.district_id};
  for (const auto& actor : directory.actors()) {
    if (actor.role == Role::INGO && actor.unit_id == report.province_id) out.insert("actor/" + actor.id);
  }
  for (const auto& v : villages_within(hierarchy, report.location, radius_m)) out.insert("village/" + v);
  return out;
}

}  // namespace dalert::oracle
