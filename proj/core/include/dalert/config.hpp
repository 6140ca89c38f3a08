#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "dalert/alert_service.hpp"

namespace dalert {

// Server configuration file (JSON). Relative paths resolve against the
// directory holding the config file.
//
//   {
//     "region_file": "regions.json",
//     "directory_file": "actors.json",
//     "neighbor_radius_m": 10000,
//     "verification": {"official_weight": 3, "user_weight": 1, "threshold": 5},
//     "listen": {"host": "127.0.0.1", "port": 8080},
//     "event_log": "state/events.log",
//     "snapshot": "state/snapshot.json",
//     "snapshot_every": 100
//   }
struct ServerConfig {
  std::filesystem::path region_file;
  std::filesystem::path directory_file;
  ServiceConfig service;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path event_log;  // empty: in-memory only
  std::filesystem::path snapshot;
  std::uint64_t snapshot_every = 100;

  static ServerConfig from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
  static ServerConfig load(const std::filesystem::path& path);
};

}  // namespace dalert
