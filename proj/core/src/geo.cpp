#include "dalert/geo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "dalert/error.hpp"

namespace dalert {

using nlohmann::json;

BoundingBox BoundingBox::of(const std::vector<Ring>& rings) {
  BoundingBox box{90.0, 180.0, -90.0, -180.0};
  for (const auto& ring : rings) {
    for (const auto& p : ring) {
      box.min_lat = std::min(box.min_lat, p.lat);
      box.max_lat = std::max(box.max_lat, p.lat);
      box.min_lon = std::min(box.min_lon, p.lon);
      box.max_lon = std::max(box.max_lon, p.lon);
    }
  }
  return box;
}

bool BoundingBox::contains(GeoPoint p) const {
  return p.lat >= min_lat && p.lat <= max_lat && p.lon >= min_lon && p.lon <= max_lon;
}

bool BoundingBox::contains(const BoundingBox& o) const {
  return o.min_lat >= min_lat && o.max_lat <= max_lat && o.min_lon >= min_lon && o.max_lon <= max_lon;
}

namespace {

constexpr double kEdgeTolerance = 1e-12;

bool on_segment(GeoPoint a, GeoPoint b, GeoPoint p) {
  double dx = b.lon - a.lon;
  double dy = b.lat - a.lat;
  double cross = dx * (p.lat - a.lat) - dy * (p.lon - a.lon);
  double len = std::hypot(dx, dy);
  if (std::fabs(cross) > kEdgeTolerance * std::max(len, 1.0)) return false;
  return p.lon >= std::min(a.lon, b.lon) - kEdgeTolerance && p.lon <= std::max(a.lon, b.lon) + kEdgeTolerance &&
         p.lat >= std::min(a.lat, b.lat) - kEdgeTolerance && p.lat <= std::max(a.lat, b.lat) + kEdgeTolerance;
}

}  // namespace

bool ring_contains(const Ring& ring, GeoPoint p) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[j];
    if (on_segment(a, b, p)) return true;
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      double x = (b.lon - a.lon) * (p.lat - a.lat) / (b.lat - a.lat) + a.lon;
      if (p.lon < x) inside = !inside;
    }
  }
  return inside;
}

bool Region::contains(GeoPoint p) const {
  if (!bbox.contains(p)) return false;
  return std::any_of(rings.begin(), rings.end(), [&](const Ring& r) { return ring_contains(r, p); });
}

GeoPoint ring_centroid(const Ring& ring) {
  if (ring.size() < 3) throw Error(ErrorCode::DegenerateRing, "ring", "fewer than 3 vertices");
  // Shoelace relative to the first vertex keeps cancellation small.
  const GeoPoint origin = ring.front();
  double twice_area = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  double span = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[(i + 1) % ring.size()];
    double x0 = a.lon - origin.lon, y0 = a.lat - origin.lat;
    double x1 = b.lon - origin.lon, y1 = b.lat - origin.lat;
    double cross = x0 * y1 - x1 * y0;
    twice_area += cross;
    cx += (x0 + x1) * cross;
    cy += (y0 + y1) * cross;
    span = std::max({span, std::fabs(x0), std::fabs(y0)});
  }
  if (span == 0.0 || std::fabs(twice_area) <= 1e-12 * span * span) {
    throw Error(ErrorCode::DegenerateRing, "ring", "vertices are collinear");
  }
  return GeoPoint{origin.lat + cy / (3.0 * twice_area), origin.lon + cx / (3.0 * twice_area)};
}

double haversine_m(GeoPoint a, GeoPoint b) {
  constexpr double to_rad = std::numbers::pi / 180.0;
  double dlat = (b.lat - a.lat) * to_rad;
  double dlon = (b.lon - a.lon) * to_rad;
  double s_lat = std::sin(dlat / 2.0);
  double s_lon = std::sin(dlon / 2.0);
  double h = s_lat * s_lat + std::cos(a.lat * to_rad) * std::cos(b.lat * to_rad) * s_lon * s_lon;
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(std::min(1.0, h)));
}

DisasterReport attach_geometry(const DisasterReport& report, Ring ring, const AdminHierarchy& hierarchy) {
  if (ring.size() >= 2 && ring.front() == ring.back()) ring.pop_back();
  for (const auto& p : ring) {
    if (!p.in_range()) throw Error(ErrorCode::DegenerateRing, "ring", "vertex out of range");
  }
  GeoPoint center = ring_centroid(ring);
  RegionPath path = hierarchy.locate(center);

  DisasterReport out = report;
  out.geometry = std::move(ring);
  out.location = center;
  out.province_id = std::move(path.province_id);
  out.district_id = std::move(path.district_id);
  out.kumban_id = std::move(path.kumban_id);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void invalid(const std::string& subject, const std::string& why) {
  throw Error(ErrorCode::InvalidInput, subject, why);
}

void finish_region(Region& region) {
  for (auto& ring : region.rings) {
    if (ring.size() >= 2 && ring.front() == ring.back()) ring.pop_back();
    if (ring.size() < 3) invalid(region.id, "polygon ring needs at least 3 vertices");
    for (const auto& p : ring) {
      if (!p.in_range()) invalid(region.id, "polygon vertex out of range");
    }
  }
  if (region.rings.empty()) invalid(region.id, "region has no polygon");
  region.bbox = BoundingBox::of(region.rings);
}

GeoPoint point_from_json(const json& pair, const std::string& subject) {
  if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
    invalid(subject, "expected [lat, lon]");
  }
  return GeoPoint{pair[0].get<double>(), pair[1].get<double>()};
}

Ring ring_from_json(const json& arr, const std::string& subject) {
  if (!arr.is_array()) invalid(subject, "polygon must be an array of [lat, lon] pairs");
  Ring ring;
  ring.reserve(arr.size());
  for (const auto& pair : arr) ring.push_back(point_from_json(pair, subject));
  return ring;
}

Region region_from_json(const json& obj) {
  if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string()) invalid("region", "missing id");
  Region region;
  region.id = obj["id"].get<std::string>();
  if (auto it = obj.find("polygon"); it != obj.end()) region.rings.push_back(ring_from_json(*it, region.id));
  if (auto it = obj.find("rings"); it != obj.end()) {
    if (!it->is_array()) invalid(region.id, "rings must be an array");
    for (const auto& r : *it) region.rings.push_back(ring_from_json(r, region.id));
  }
  finish_region(region);
  return region;
}

json ring_to_json(const Ring& ring) {
  json arr = json::array();
  for (const auto& p : ring) arr.push_back({p.lat, p.lon});
  return arr;
}

json region_to_json(const Region& region) {
  json obj;
  obj["id"] = region.id;
  if (region.rings.size() == 1) {
    obj["polygon"] = ring_to_json(region.rings.front());
  } else {
    json rings = json::array();
    for (const auto& r : region.rings) rings.push_back(ring_to_json(r));
    obj["rings"] = rings;
  }
  return obj;
}

const json& children(const json& obj, const char* key) {
  static const json empty = json::array();
  auto it = obj.find(key);
  if (it == obj.end()) return empty;
  if (!it->is_array()) invalid(key, "expected an array");
  return *it;
}

}  // namespace

AdminHierarchy::AdminHierarchy(std::vector<Province> provinces) : provinces_(std::move(provinces)) {
  std::unordered_map<std::string, bool> village_ids;
  for (std::size_t pi = 0; pi < provinces_.size(); ++pi) {
    auto& province = provinces_[pi];
    finish_region(province.region);
    if (!province_index_.emplace(province.region.id, Path{pi, 0, 0}).second) {
      invalid(province.region.id, "duplicate province id");
    }
    for (std::size_t di = 0; di < province.districts.size(); ++di) {
      auto& district = province.districts[di];
      finish_region(district.region);
      if (!district_index_.emplace(district.region.id, Path{pi, di, 0}).second) {
        invalid(district.region.id, "duplicate district id");
      }
      if (!province.region.bbox.contains(district.region.bbox)) {
        invalid(district.region.id, "district extends beyond its province");
      }
      for (std::size_t ki = 0; ki < district.kumbans.size(); ++ki) {
        auto& kumban = district.kumbans[ki];
        finish_region(kumban.region);
        if (!kumban_index_.emplace(kumban.region.id, Path{pi, di, ki}).second) {
          invalid(kumban.region.id, "duplicate kumban id");
        }
        if (!district.region.bbox.contains(kumban.region.bbox)) {
          invalid(kumban.region.id, "kumban extends beyond its district");
        }
        for (const auto& village : kumban.villages) {
          if (!village.location.in_range()) invalid(village.id, "village location out of range");
          if (!village_ids.emplace(village.id, true).second) invalid(village.id, "duplicate village id");
          villages_.push_back(village);
        }
      }
    }
  }
}

AdminHierarchy AdminHierarchy::from_json(const json& doc) {
  if (!doc.is_object()) invalid("regions", "region file must be an object");
  std::vector<Province> provinces;
  for (const auto& p : children(doc, "provinces")) {
    Province province{region_from_json(p), {}};
    for (const auto& d : children(p, "districts")) {
      District district{region_from_json(d), {}};
      for (const auto& k : children(d, "kumbans")) {
        Kumban kumban{region_from_json(k), {}};
        for (const auto& v : children(k, "villages")) {
          if (!v.is_object() || !v.contains("id") || !v["id"].is_string()) invalid("village", "missing id");
          std::string id = v["id"].get<std::string>();
          auto loc_it = v.find("location");
          if (loc_it == v.end()) invalid(id, "village needs a location");
          kumban.villages.push_back(Village{id, point_from_json(*loc_it, id)});
        }
        district.kumbans.push_back(std::move(kumban));
      }
      province.districts.push_back(std::move(district));
    }
    provinces.push_back(std::move(province));
  }
  return AdminHierarchy(std::move(provinces));
}

AdminHierarchy AdminHierarchy::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) invalid(path.string(), "cannot open region file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    invalid(path.string(), e.what());
  }
  return from_json(doc);
}

json AdminHierarchy::to_json() const {
  json provinces = json::array();
  for (const auto& p : provinces_) {
    json pj = region_to_json(p.region);
    json districts = json::array();
    for (const auto& d : p.districts) {
      json dj = region_to_json(d.region);
      json kumbans = json::array();
      for (const auto& k : d.kumbans) {
        json kj = region_to_json(k.region);
        json villages = json::array();
        for (const auto& v : k.villages) villages.push_back({{"id", v.id}, {"location", {v.location.lat, v.location.lon}}});
        kj["villages"] = villages;
        kumbans.push_back(kj);
      }
      dj["kumbans"] = kumbans;
      districts.push_back(dj);
    }
    pj["districts"] = districts;
    provinces.push_back(pj);
  }
  return json{{"provinces", provinces}};
}

std::optional<RegionPath> AdminHierarchy::try_locate(GeoPoint point) const {
  for (const auto& province : provinces_) {
    if (!province.region.contains(point)) continue;
    for (const auto& district : province.districts) {
      if (!district.region.contains(point)) continue;
      RegionPath path{province.region.id, district.region.id, std::nullopt};
      for (const auto& kumban : district.kumbans) {
        if (kumban.region.contains(point)) {
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

RegionPath AdminHierarchy::locate(GeoPoint point) const {
  if (auto path = try_locate(point)) return *std::move(path);
  throw Error(ErrorCode::OutOfCoverage, std::to_string(point.lat) + "," + std::to_string(point.lon));
}

std::vector<NeighborVillage> AdminHierarchy::neighbors(GeoPoint center, double radius_m) const {
  if (!(radius_m > 0.0)) throw Error(ErrorCode::InvalidInput, "radius_m", "radius must be positive");
  std::vector<NeighborVillage> hits;
  for (const auto& village : villages_) {
    double d = haversine_m(center, village.location);
    if (d <= radius_m) hits.push_back(NeighborVillage{village.id, village.location, d});
  }
  std::sort(hits.begin(), hits.end(), [](const NeighborVillage& a, const NeighborVillage& b) {
    return a.distance_m != b.distance_m ? a.distance_m < b.distance_m : a.id < b.id;
  });
  return hits;
}

const Province* AdminHierarchy::find_province(std::string_view id) const {
  auto it = province_index_.find(std::string(id));
  return it == province_index_.end() ? nullptr : &provinces_[it->second.province];
}

const District* AdminHierarchy::find_district(std::string_view id) const {
  auto it = district_index_.find(std::string(id));
  if (it == district_index_.end()) return nullptr;
  return &provinces_[it->second.province].districts[it->second.district];
}

const Kumban* AdminHierarchy::find_kumban(std::string_view id) const {
  auto it = kumban_index_.find(std::string(id));
  if (it == kumban_index_.end()) return nullptr;
  return &provinces_[it->second.province].districts[it->second.district].kumbans[it->second.kumban];
}

std::optional<std::string> AdminHierarchy::province_of_district(std::string_view district_id) const {
  auto it = district_index_.find(std::string(district_id));
  if (it == district_index_.end()) return std::nullopt;
  return provinces_[it->second.province].region.id;
}

}  // namespace dalert
