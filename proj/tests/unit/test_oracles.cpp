#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dalert;

// The oracles are checked against hand-computed values so a shared bug
// with the library cannot hide.

TEST(Oracles, WindingNumberBasics) {
  Ring square{{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  EXPECT_TRUE(oracle::winding_contains(square, {0.5, 0.5}));
  EXPECT_TRUE(oracle::winding_contains(square, {0, 0.5}));
  EXPECT_TRUE(oracle::winding_contains(square, {1, 1}));
  EXPECT_FALSE(oracle::winding_contains(square, {1.0001, 0.5}));
  Ring reversed(square.rbegin(), square.rend());
  EXPECT_TRUE(oracle::winding_contains(reversed, {0.25, 0.75}));
}

TEST(Oracles, ChordDistance) {
  // Quarter of a great circle.
  EXPECT_NEAR(oracle::chord_distance_m({0, 0}, {0, 90}), 3.14159265358979323846 / 2 * 6371000.0, 1e-6);
  EXPECT_NEAR(oracle::chord_distance_m({0, 0}, {90, 0}), 3.14159265358979323846 / 2 * 6371000.0, 1e-6);
}

TEST(Oracles, RoutingTableSpotChecks) {
  EXPECT_EQ(oracle::responsible_unit_id(DisasterKind::Flood, Severity::Extreme, "P", "D"), "MAF");
  EXPECT_EQ(oracle::responsible_unit_id(DisasterKind::Flood, Severity::Severe, "P", "D"), "PAFO-P");
  EXPECT_EQ(oracle::responsible_unit_id(DisasterKind::PlantDisease, Severity::Severe, "P", "D"), "PAFO-P");
  EXPECT_EQ(oracle::responsible_unit_id(DisasterKind::PlantDisease, Severity::Moderate, "P", "D"), "DAFO-D");
  EXPECT_EQ(oracle::responsible_unit_id(DisasterKind::Infrastructure, Severity::Extreme, "P", "D"), "DAFO-D");
}

TEST(Oracles, LocateOnFixture) {
  auto h = test::north_regions();
  auto p = oracle::locate(h, test::kListingPoint);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->kumban_id, "Sangkalok");
}
