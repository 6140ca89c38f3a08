#include <gtest/gtest.h>

#include "dalert/config.hpp"
#include "dalert/error.hpp"
#include "fixtures.hpp"

using namespace dalert;
using nlohmann::json;

TEST(Config, LoadsFileAndResolvesPaths) {
  auto c = ServerConfig::load(test::data_path("server.json"));
  EXPECT_EQ(c.region_file, test::data_path("regions_north.json"));
  EXPECT_EQ(c.directory_file, test::data_path("actors.json"));
  EXPECT_EQ(c.port, 8080);
  EXPECT_DOUBLE_EQ(c.service.neighbor_radius_m, 10000);
  EXPECT_DOUBLE_EQ(c.service.auto_distribution_threshold, 5);
  EXPECT_TRUE(c.event_log.empty());
}

TEST(Config, Defaults) {
  auto c = ServerConfig::from_json(json{{"region_file", "/r.json"}, {"directory_file", "/a.json"}}, "/etc/x");
  EXPECT_EQ(c.region_file, "/r.json");
  EXPECT_EQ(c.host, "127.0.0.1");
  EXPECT_EQ(c.port, 8080);
  EXPECT_EQ(c.snapshot_every, 100u);
  EXPECT_DOUBLE_EQ(c.service.weights.official, 3.0);
  EXPECT_DOUBLE_EQ(c.service.weights.user, 1.0);
}

TEST(Config, PersistencePathsRelativeToConfig) {
  auto c = ServerConfig::from_json(
      json{{"region_file", "r.json"}, {"directory_file", "a.json"}, {"event_log", "state/e.log"}, {"snapshot", "s.json"}},
      "/srv/dalert");
  EXPECT_EQ(c.event_log, std::filesystem::path("/srv/dalert/state/e.log"));
  EXPECT_EQ(c.snapshot, std::filesystem::path("/srv/dalert/s.json"));
}

TEST(Config, RejectsBadValues) {
  json base{{"region_file", "r.json"}, {"directory_file", "a.json"}};
  auto with = [&](const char* key, json value) {
    json j = base;
    j[key] = std::move(value);
    return j;
  };
  EXPECT_THROW(ServerConfig::from_json(json::object()), Error);
  EXPECT_THROW(ServerConfig::from_json(with("neighbor_radius_m", 0)), Error);
  EXPECT_THROW(ServerConfig::from_json(with("listen", json{{"port", 70000}})), Error);
  EXPECT_THROW(ServerConfig::from_json(with("snapshot_every", 0)), Error);
  EXPECT_THROW(ServerConfig::from_json(with("neighbor_radius_m", "far")), Error);
  EXPECT_THROW(ServerConfig::load("/nonexistent/server.json"), Error);
}
