#include <csignal>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dalert/api.hpp"
#include "dalert/config.hpp"
#include "dalert/http.hpp"

namespace {

dalert::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

dalert::AlertService make_service_from(const dalert::ServerConfig& cfg) {
  return dalert::AlertService(dalert::AdminHierarchy::load(cfg.region_file),
                              dalert::ActorDirectory::load(cfg.directory_file), cfg.service);
}

int serve(const dalert::ServerConfig& cfg) {
  auto service = make_service_from(cfg);
  if (!cfg.event_log.empty()) {
    service.enable_persistence({cfg.event_log, cfg.snapshot, cfg.snapshot_every});
    std::cerr << "recovered " << service.report_count() << " reports, last seq " << service.last_seq() << '\n';
  }
  dalert::ApiRouter router(service);
  dalert::HttpServer server(router);
  int port = server.bind(cfg.host, cfg.port);
  std::cerr << "listening on " << cfg.host << ':' << port << '\n';
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.run();
  g_server = nullptr;
  return 0;
}

int replay(const dalert::ServerConfig& cfg, const std::string& log_path, const std::string& snapshot_out) {
  auto service = make_service_from(cfg);
  auto events = dalert::read_event_file(log_path);
  service.replay(events);
  std::cout << "events " << events.size() << ", reports " << service.report_count() << ", last seq "
            << service.last_seq() << '\n';
  if (!snapshot_out.empty()) {
    std::ofstream out(snapshot_out);
    out << service.snapshot().dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Disaster alert server"};
  app.require_subcommand(1);

  std::string config_path;
  int port_override = -1;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--config", config_path, "Server config file")->required()->check(CLI::ExistingFile);
  serve_cmd->add_option("--port", port_override, "Override the configured port (0 picks a free one)");

  std::string log_path;
  std::string snapshot_out;
  auto* replay_cmd = app.add_subcommand("replay", "Rebuild state from an event log and report on it");
  replay_cmd->add_option("--config", config_path, "Server config file")->required()->check(CLI::ExistingFile);
  replay_cmd->add_option("--log", log_path, "Event log (defaults to the configured one)");
  replay_cmd->add_option("--snapshot-out", snapshot_out, "Write the rebuilt state snapshot here");

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = dalert::ServerConfig::load(config_path);
    if (*serve_cmd) {
      if (port_override >= 0) cfg.port = port_override;
      return serve(cfg);
    }
    if (log_path.empty()) log_path = cfg.event_log.string();
    if (log_path.empty()) throw dalert::Error(dalert::ErrorCode::InvalidInput, "--log", "no event log given");
    return replay(cfg, log_path, snapshot_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
