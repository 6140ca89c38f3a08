#include <gtest/gtest.h>

#include <cmath>

#include "dalert/error.hpp"
#include "dalert/geo.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace dalert;
using nlohmann::json;

TEST(Geo, LocatesListingPoint) {
  auto h = test::north_regions();
  RegionPath p = h.locate(test::kListingPoint);
  EXPECT_EQ(p.province_id, "Louangphabang");
  EXPECT_EQ(p.district_id, "Louangprabang");
  EXPECT_EQ(p.kumban_id, "Sangkalok");
}

TEST(Geo, PointOutsideAnyKumbanHasNoKumban) {
  auto h = test::north_regions();
  RegionPath p = h.locate({19.65, 102.25});
  EXPECT_EQ(p.district_id, "Louangprabang");
  EXPECT_FALSE(p.kumban_id);
}

TEST(Geo, SharedBorderGoesToFirstDistrictInFileOrder) {
  auto h = test::north_regions();
  // lon 101.9 is the border between Louangprabang (listed first) and Chompet.
  EXPECT_EQ(h.locate({19.8, 101.9}).district_id, "Louangprabang");
  EXPECT_EQ(h.locate({19.8, 101.8999}).district_id, "Chompet");
}

TEST(Geo, BoundaryVerticesAreInside) {
  auto h = test::north_regions();
  EXPECT_EQ(h.locate({19.80, 102.03}).kumban_id, "Sangkalok");
  // Corner shared by both districts; file order decides.
  EXPECT_EQ(h.locate({19.6, 101.9}).district_id, "Louangprabang");
  EXPECT_EQ(h.locate({19.6, 101.6}).district_id, "Chompet");
}

TEST(Geo, OutOfCoverage) {
  auto h = test::north_regions();
  try {
    h.locate({0.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfCoverage);
  }
  // Inside the province outline but in no district.
  EXPECT_FALSE(h.try_locate({20.5, 102.8}));
}

TEST(Geo, ConcaveRing) {
  // U shape opening north.
  Ring u{{0, 0}, {0, 3}, {3, 3}, {3, 2}, {1, 2}, {1, 1}, {3, 1}, {3, 0}};
  EXPECT_TRUE(ring_contains(u, {0.5, 1.5}));
  EXPECT_FALSE(ring_contains(u, {2, 1.5}));
  EXPECT_TRUE(ring_contains(u, {2, 2.5}));
  EXPECT_TRUE(ring_contains(u, {1, 1.5}));  // on the inner edge
}

TEST(Geo, HaversineMatchesArcLength) {
  const double one_degree = 2 * 3.14159265358979323846 * kEarthRadiusM / 360.0;
  EXPECT_NEAR(haversine_m({0, 0}, {0, 1}), one_degree, 1e-6);
  EXPECT_NEAR(haversine_m({0, 0}, {1, 0}), one_degree, 1e-6);
  EXPECT_NEAR(haversine_m({90, 0}, {-90, 0}), 180 * one_degree, 1e-4);
  EXPECT_EQ(haversine_m({19.8, 102.1}, {19.8, 102.1}), 0.0);
}

TEST(Geo, NeighborsSortedAndBounded) {
  auto h = test::north_regions();
  auto hits = h.neighbors(test::kListingPoint, 10000);
  std::vector<std::string> ids;
  for (const auto& n : hits) ids.push_back(n.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"BanSangkalok", "BanXiengmene"}));
  EXPECT_LE(hits[0].distance_m, hits[1].distance_m);
  EXPECT_EQ(h.neighbors(test::kListingPoint, 40000).size(), 4u);
  EXPECT_THROW(h.neighbors(test::kListingPoint, 0), Error);
}

TEST(Geo, NeighborsAgreeWithChordOracle) {
  gen::Rng rng(21);
  auto h = gen::hierarchy(rng, {17, 10, 2, 5});
  for (int i = 0; i < 200; ++i) {
    GeoPoint c = gen::probe_point(rng, h);
    double r = gen::uniform(rng, 100, 60000);
    std::set<std::string> got;
    for (const auto& n : h.neighbors(c, r)) got.insert(n.id);
    EXPECT_EQ(got, oracle::villages_within(h, c, r));
  }
}

TEST(Geo, LocateAgreesWithWindingOracle) {
  gen::Rng rng(22);
  for (int round = 0; round < 5; ++round) {
    auto h = gen::hierarchy(rng);
    for (int i = 0; i < 200; ++i) {
      GeoPoint p = gen::probe_point(rng, h);
      EXPECT_EQ(h.try_locate(p), oracle::locate(h, p)) << p.lat << "," << p.lon;
    }
  }
}

TEST(Geo, CentroidOfSquareAndTriangle) {
  GeoPoint c = ring_centroid({{0, 0}, {0, 2}, {2, 2}, {2, 0}});
  EXPECT_NEAR(c.lat, 1, 1e-12);
  EXPECT_NEAR(c.lon, 1, 1e-12);
  c = ring_centroid({{0, 0}, {0, 3}, {3, 0}});
  EXPECT_NEAR(c.lat, 1, 1e-12);
  EXPECT_NEAR(c.lon, 1, 1e-12);
}

TEST(Geo, DegenerateRings) {
  for (const Ring& r : {Ring{{0, 0}, {1, 1}}, Ring{{0, 0}, {1, 1}, {2, 2}}, Ring{{5, 5}, {5, 5}, {5, 5}}}) {
    try {
      ring_centroid(r);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::DegenerateRing);
    }
  }
}

TEST(Geo, AttachGeometryRelocates) {
  auto h = test::north_regions();
  DisasterReport r = test::sangkalok_flood();
  // A field in Chompet, closed ring as drawn by the user.
  Ring ring{{19.79, 101.84}, {19.79, 101.86}, {19.81, 101.86}, {19.81, 101.84}, {19.79, 101.84}};
  DisasterReport out = attach_geometry(r, ring, h);
  ASSERT_TRUE(out.geometry);
  EXPECT_EQ(out.geometry->size(), 4u);
  EXPECT_NEAR(out.location.lat, 19.80, 1e-9);
  EXPECT_NEAR(out.location.lon, 101.85, 1e-9);
  EXPECT_EQ(out.district_id, "Chompet");
  EXPECT_EQ(out.kumban_id, "ChompetCentre");
  EXPECT_TRUE(validate_report(out, h).ok());
}

TEST(Geo, HierarchyRejectsBadFiles) {
  json dup = json::parse(R"({"provinces":[{"id":"A","polygon":[[0,0],[0,1],[1,1]]},
                                          {"id":"A","polygon":[[2,2],[2,3],[3,3]]}]})");
  EXPECT_THROW(AdminHierarchy::from_json(dup), Error);
  json escape = json::parse(R"({"provinces":[{"id":"A","polygon":[[0,0],[0,1],[1,1],[1,0]],
      "districts":[{"id":"D","polygon":[[0,0],[0,2],[1,2],[1,0]]}]}]})");
  EXPECT_THROW(AdminHierarchy::from_json(escape), Error);
  json bad_point = json::parse(R"({"provinces":[{"id":"A","polygon":[[0,0],[0,1],"x"]}]})");
  EXPECT_THROW(AdminHierarchy::from_json(bad_point), Error);
}

TEST(Geo, HierarchyJsonRoundTrip) {
  gen::Rng rng(23);
  auto h = gen::hierarchy(rng);
  auto again = AdminHierarchy::from_json(h.to_json());
  EXPECT_EQ(again.to_json(), h.to_json());
  EXPECT_EQ(again.villages().size(), h.villages().size());
}
