#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "dalert/geo.hpp"
#include "dalert/routing.hpp"

namespace bench {

inline std::string read_data(const std::string& name) {
  std::ifstream in(std::string(DALERT_BENCH_DATA_DIR) + "/" + name);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline dalert::AdminHierarchy north_regions() {
  return dalert::AdminHierarchy::load(std::string(DALERT_BENCH_DATA_DIR) + "/regions_north.json");
}

inline dalert::ActorDirectory north_actors() {
  return dalert::ActorDirectory::load(std::string(DALERT_BENCH_DATA_DIR) + "/actors.json");
}

// Grid of square provinces, each split into `districts` strips with one
// kumban holding `villages` villages.
inline dalert::AdminHierarchy grid(int provinces, int districts, int villages) {
  using dalert::GeoPoint;
  using dalert::Ring;
  auto box = [](double la0, double lo0, double la1, double lo1) {
    Ring r{{la0, lo0}, {la0, lo1}, {la1, lo1}, {la1, lo0}};
    return dalert::Region{"", {r}, dalert::BoundingBox::of({r})};
  };
  std::vector<dalert::Province> out;
  int vn = 0;
  for (int p = 0; p < provinces; ++p) {
    double la0 = 14.0 + (p / 5) * 1.5, lo0 = 100.0 + (p % 5) * 1.5;
    dalert::Province prov{box(la0, lo0, la0 + 1.2, lo0 + 1.2), {}};
    prov.region.id = "P" + std::to_string(p);
    double w = 1.2 / districts;
    for (int d = 0; d < districts; ++d) {
      dalert::District dist{box(la0, lo0 + d * w, la0 + 1.2, lo0 + (d + 1) * w), {}};
      dist.region.id = prov.region.id + "-D" + std::to_string(d);
      dalert::Kumban k{box(la0 + 0.1, lo0 + d * w + w * 0.1, la0 + 1.1, lo0 + (d + 1) * w - w * 0.1), {}};
      k.region.id = dist.region.id + "-K";
      for (int v = 0; v < villages; ++v) {
        k.villages.push_back({"V" + std::to_string(vn++), GeoPoint{la0 + 0.1 + v * (1.0 / villages), lo0 + d * w + w / 2}});
      }
      dist.kumbans.push_back(std::move(k));
      prov.districts.push_back(std::move(dist));
    }
    out.push_back(std::move(prov));
  }
  return dalert::AdminHierarchy(std::move(out));
}

}  // namespace bench
