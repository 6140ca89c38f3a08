#include "dalert/config.hpp"

#include <fstream>

#include "dalert/error.hpp"

namespace dalert {

using nlohmann::json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.empty() || path.is_absolute() || base.empty()) return path;
  return base / path;
}

}  // namespace

ServerConfig ServerConfig::from_json(const json& doc, const std::filesystem::path& base_dir) {
  ServerConfig c;
  try {
    c.region_file = resolve(base_dir, doc.at("region_file").get<std::string>());
    c.directory_file = resolve(base_dir, doc.at("directory_file").get<std::string>());
    c.service.neighbor_radius_m = doc.value("neighbor_radius_m", kDefaultNeighborRadiusM);
    if (auto it = doc.find("verification"); it != doc.end()) {
      c.service.weights.official = it->value("official_weight", c.service.weights.official);
      c.service.weights.user = it->value("user_weight", c.service.weights.user);
      c.service.auto_distribution_threshold = it->value("threshold", c.service.auto_distribution_threshold);
    }
    if (auto it = doc.find("listen"); it != doc.end()) {
      c.host = it->value("host", c.host);
      c.port = it->value("port", c.port);
    }
    c.event_log = resolve(base_dir, doc.value("event_log", std::string{}));
    c.snapshot = resolve(base_dir, doc.value("snapshot", std::string{}));
    c.snapshot_every = doc.value("snapshot_every", c.snapshot_every);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, "config", e.what());
  }
  if (!(c.service.neighbor_radius_m > 0)) throw Error(ErrorCode::InvalidInput, "neighbor_radius_m", "must be positive");
  if (c.port < 0 || c.port > 65535) throw Error(ErrorCode::InvalidInput, "listen.port", "out of range");
  if (c.snapshot_every == 0) throw Error(ErrorCode::InvalidInput, "snapshot_every", "must be at least 1");
  return c;
}

ServerConfig ServerConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, path.string(), "cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, path.string(), e.what());
  }
  return from_json(doc, path.parent_path());
}

}  // namespace dalert
