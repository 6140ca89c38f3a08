#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "dalert/field_client.hpp"
#include "dalert/serialization.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

std::string random_key() {
  std::random_device rd;
  std::uniform_int_distribution<std::uint64_t> dist;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(dist(rd)));
  return std::string("k-") + buf;
}

std::filesystem::path default_cursor_file(const std::string& subscriber) {
  const char* home = std::getenv("HOME");
  std::filesystem::path dir = home ? std::filesystem::path(home) / ".dalert" : std::filesystem::path(".dalert");
  std::filesystem::create_directories(dir);
  return dir / ("cursors-" + subscriber + ".json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Disaster alert field client"};
  app.require_subcommand(1);

  std::string server = "http://127.0.0.1:8080";
  std::string profile_text = "0:0:0";
  std::uint64_t seed = 1;
  app.add_option("--server", server, "Server base URL");
  app.add_option("--profile", profile_text, "Simulated link drop:latency_ms:jitter_ms");
  app.add_option("--seed", seed, "Seed for the simulated link");

  std::string answers_path;
  std::string actor;
  std::string phone;
  std::string key;
  std::string regions_path;
  int max_attempts = 20;
  auto* report_cmd = app.add_subcommand("report", "Build and submit a disaster report");
  report_cmd->add_option("--answers", answers_path, "Answer file (non-interactive)")->check(CLI::ExistingFile);
  report_cmd->add_option("--actor", actor, "Reporter id (asked for when omitted)");
  report_cmd->add_option("--phone", phone, "Reporter phone number");
  report_cmd->add_option("--key", key, "Idempotency key (random by default)");
  report_cmd->add_option("--regions", regions_path, "Region file for local validation")->check(CLI::ExistingFile);
  report_cmd->add_option("--max-attempts", max_attempts, "Submission attempts before giving up")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> topic_names;
  std::string cursor_file;
  std::uint64_t max_polls = 0;
  int poll_timeout_ms = 20000;
  auto* watch_cmd = app.add_subcommand("watch", "Print alerts on topics as they arrive");
  watch_cmd->add_option("--topics", topic_names, "Topics such as village/V1 or unit/DAFO-D1")->required();
  watch_cmd->add_option("--actor", actor, "Subscriber id")->required();
  watch_cmd->add_option("--cursor-file", cursor_file, "Where read positions are kept");
  watch_cmd->add_option("--max-polls", max_polls, "Stop after this many polls (0 = run until interrupted)");
  watch_cmd->add_option("--poll-timeout-ms", poll_timeout_ms, "Long-poll wait per request");

  std::string report_id;
  std::string note;
  auto* verify_cmd = app.add_subcommand("verify", "Vouch for a report");
  verify_cmd->add_option("--report", report_id, "Report id")->required();
  verify_cmd->add_option("--actor", actor, "Verifier id")->required();
  verify_cmd->add_option("--note", note, "Free-text note");

  std::string out_path;
  std::string sender;
  auto* export_cmd = app.add_subcommand("export", "Fetch a report as a CAP document");
  export_cmd->add_option("--report", report_id, "Report id")->required();
  export_cmd->add_option("--out", out_path, "Output file")->required();
  export_cmd->add_option("--sender", sender, "CAP sender (defaults to the reporter)");

  CLI11_PARSE(app, argc, argv);

  try {
    auto profile = dalert::LinkProfile::parse(profile_text);
    dalert::HttpTransport http(server);
    dalert::LossyLink link(http, profile, seed);
    dalert::FieldClient client(link);

    if (*report_cmd) {
      std::optional<dalert::AdminHierarchy> regions;
      if (!regions_path.empty()) regions = dalert::AdminHierarchy::load(regions_path);
      dalert::DisasterReport report;
      if (!answers_path.empty()) {
        auto answers = dalert::FileAnswers::load(answers_path);
        report = dalert::build_report(answers, {actor, phone}, regions ? &*regions : nullptr);
      } else {
        dalert::InteractiveAnswers answers(std::cin, std::cerr);
        report = dalert::build_report(answers, {actor, phone}, regions ? &*regions : nullptr);
      }
      if (key.empty()) key = random_key();
      auto result = client.submit_with_retry(report, key, max_attempts);
      std::cout << result.id << '\n';
      std::cerr << "submitted after " << result.attempts << " attempt(s)\n";
      return 0;
    }

    if (*watch_cmd) {
      std::set<dalert::Topic> topics;
      for (const auto& t : topic_names) topics.insert(dalert::Topic::parse(t));
      dalert::CursorStore cursors(cursor_file.empty() ? default_cursor_file(actor) : std::filesystem::path(cursor_file));
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      dalert::WatchOptions options;
      options.poll_timeout = std::chrono::milliseconds(poll_timeout_ms);
      options.max_polls = max_polls;
      options.stop = [] { return g_stop.load(); };
      client.watch(actor, topics, cursors, [](const dalert::PushMessage& m) {
        std::cout << dalert::format_push(m) << std::endl;
      }, options);
      return 0;
    }

    if (*verify_cmd) {
      auto record = client.verify(report_id, actor, note);
      std::cout << nlohmann::json(record).dump() << '\n';
      std::cout << client.reliability(report_id).dump() << '\n';
      return 0;
    }

    if (*export_cmd) {
      auto xml = client.export_cap(report_id, sender.empty() ? std::nullopt : std::optional<std::string>(sender));
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw dalert::Error(dalert::ErrorCode::InvalidInput, out_path, "cannot write");
      out << xml;
      return 0;
    }
  } catch (const dalert::ValidationError& e) {
    std::cerr << "error: report rejected\n";
    for (const auto& v : e.violations()) std::cerr << "  - " << v << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
