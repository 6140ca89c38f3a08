#include "fixtures.hpp"

#include <fstream>
#include <memory>
#include <random>
#include <sstream>

namespace dalert::test {

std::filesystem::path data_path(const std::string& name) { return std::filesystem::path(DALERT_TEST_DATA_DIR) / name; }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

AdminHierarchy north_regions() { return AdminHierarchy::load(data_path("regions_north.json")); }
ActorDirectory north_actors() { return ActorDirectory::load(data_path("actors.json")); }
std::string listing_xml() { return read_file(data_path("listing_plant_disease.xml")); }

AlertService::Clock step_clock() {
  auto clock = std::make_shared<StepClock>();
  return [clock] { return (*clock)(); };
}

DisasterReport sangkalok_flood(std::int64_t water_level_cm, Severity severity) {
  DisasterReport r;
  r.kind = DisasterKind::Flood;
  r.details = KindDetails::flood(water_level_cm);
  r.location = kListingPoint;
  r.province_id = "Louangphabang";
  r.district_id = "Louangprabang";
  r.kumban_id = "Sangkalok";
  r.reporter = "89";
  r.reporter_phone = "+856 1234567";
  r.description = "River over the bank near the market";
  r.severity = severity;
  return r;
}

TempDir::TempDir() {
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() / ("dalert-test-" + std::to_string(rd()) + std::to_string(rd()));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace dalert::test

namespace dalert::test {

std::string normalize_xml_whitespace(std::string_view doc) {
  std::string collapsed;
  bool in_space = false;
  for (char c : doc) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      in_space = true;
      continue;
    }
    if (in_space && !collapsed.empty() && c != '<' && collapsed.back() != '>') collapsed += ' ';
    in_space = false;
    collapsed += c;
  }
  return collapsed;
}

}  // namespace dalert::test
