#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "dalert/domain.hpp"
#include "dalert/event_log.hpp"
#include "dalert/geo.hpp"
#include "dalert/push.hpp"
#include "dalert/routing.hpp"
#include "dalert/verification.hpp"

namespace dalert {

struct ServiceConfig {
  double neighbor_radius_m = kDefaultNeighborRadiusM;
  VerificationWeights weights;
  double auto_distribution_threshold = 5.0;
};

// Administrative actions on a report.
struct Review {};
struct Assign {
  AdminUnit target;
};
// Merges the acted-on report into `target`. With keep_older the older of
// the two survives regardless of which one was acted on.
struct Merge {
  std::string target;
  bool keep_older = false;
};
struct Resolve {};
struct Update {
  std::optional<Severity> severity;
  std::optional<std::string> description;
  std::optional<KindDetails> details;
  std::optional<std::string> reporter_phone;
};
struct AttachDocument {
  std::string ref;
};
using AdminAction = std::variant<Review, Assign, Merge, Resolve, Update, AttachDocument>;

AuditAction audit_action_of(const AdminAction& action);

// Actions a role may take on a report in `state` without being rejected for
// role or state reasons. Verify is open to everyone; the rest need an office.
std::vector<AuditAction> permitted_actions(Role role, LifecycleState state);

struct ReportEntry {
  DisasterReport report;
  AdminUnit responsible;
  // Every topic the report's pushes go to: notified offices, INGOs,
  // neighbor villages and assignment targets.
  std::set<Topic> topics;
  bool reporter_notified = false;
};

// Client-held read position. Topics without a cursor start from 0.
struct Subscription {
  ActorId subscriber;
  std::map<Topic, std::uint64_t> cursors;
};

struct ReportFilter {
  std::optional<std::string> province;
  std::optional<std::string> district;
  std::optional<LifecycleState> state;
  std::optional<DisasterKind> kind;
  std::optional<BoundingBox> bbox;
};

struct PersistenceOptions {
  std::filesystem::path event_log;
  std::filesystem::path snapshot;  // empty disables snapshots
  std::uint64_t snapshot_every = 100;
};

// The disaster management server core. Every mutation is recorded as one
// audit event (plus a Notify event on the first administrative action) whose
// payload holds the complete effect; live operation and replay apply
// payloads through the same code path.
//
// Mutations are serialized behind one writer lock, which makes per-report
// operations linearizable and gives the audit sequence a total order. Reads
// and polls share the lock.
class AlertService {
 public:
  using Clock = std::function<UtcTime()>;

  AlertService(AdminHierarchy hierarchy, ActorDirectory directory, ServiceConfig config = {},
               Clock clock = now_utc);
  ~AlertService();

  AlertService(const AlertService&) = delete;
  AlertService& operator=(const AlertService&) = delete;

  const AdminHierarchy& hierarchy() const { return hierarchy_; }
  const ActorDirectory& directory() const { return directory_; }
  const ServiceConfig& config() const { return config_; }

  // Loads snapshot and log tail, then writes every new event to the log.
  void enable_persistence(const PersistenceOptions& options);

  // Validates, stores, routes and distributes. A repeated non-empty key
  // returns the first id without touching state. Throws ValidationError.
  std::string submit_report(DisasterReport report, const std::string& idempotency_key);

  // Throws Forbidden (actor not an office), UnknownReport, IllegalTransition,
  // MergeCycle, UnknownRegion (Assign target), ValidationError (Update).
  DisasterReport process_report(const std::string& report_id, const ActorId& actor, const AdminAction& action);

  // Actors missing from the directory verify as villagers. The first office
  // verification moves the report to Verified (via UnderReview when needed).
  VerificationRecord verify(const std::string& report_id, const ActorId& verifier, std::string note = {});

  Reliability reliability_score(const std::string& report_id) const;
  bool auto_distribution_eligible(const std::string& report_id, std::optional<double> threshold = std::nullopt) const;

  void register_subscriber(const ActorId& subscriber, std::set<Topic> topics);
  // Messages after the cursors on the subscriber's registered topics, grouped
  // by topic in seq order. Blocks up to `timeout` when there are none.
  // Throws UnknownSubscriber, InvalidInput when a cursor is ahead of a topic.
  std::vector<PushMessage> poll(const Subscription& subscription, std::chrono::milliseconds timeout) const;
  std::uint64_t latest_seq(const Topic& topic) const;

  std::string export_cap(const std::string& report_id, std::optional<ActorId> sender = std::nullopt,
                         std::string_view msg_type = "Alert") const;
  // Runs the full submit pipeline. An empty key defaults to sender+identifier.
  std::string import_cap(std::string_view xml, std::string idempotency_key = {});

  DisasterReport get_report(const std::string& report_id) const;
  ReportEntry get_entry(const std::string& report_id) const;
  std::vector<DisasterReport> list_reports(const ReportFilter& filter = {}) const;
  std::size_t report_count() const;

  std::vector<AuditEvent> events() const;
  std::vector<AuditEvent> events_for(const std::string& report_id) const;
  std::uint64_t last_seq() const;

  // Canonical JSON of the whole replayable state: reports, idempotency keys,
  // ledger and topic logs.
  nlohmann::json snapshot() const;
  void restore(const nlohmann::json& snapshot);

  // Applies events that continue this service's log. Throws CorruptLog for a
  // sequence gap or an undecodable payload.
  void replay(const std::vector<AuditEvent>& events);

 private:
  struct Pending {
    AuditAction action;
    ActorId actor;
    std::string report_id;
    nlohmann::json payload;
  };

  struct State {
    std::map<std::string, ReportEntry> reports;
    std::map<std::string, std::string> idempotency;
    VerificationLedger ledger;
    TopicLogs topics;
    std::uint64_t last_seq = 0;
  };

  const ReportEntry& entry_locked(const std::string& report_id) const;
  std::string fresh_id_locked() const;
  void commit_locked(std::vector<Pending> pending, UtcTime now);
  void apply_locked(const AuditEvent& event);
  void append_admin_events_locked(std::vector<Pending>& pending, const ReportEntry& entry, const Actor& actor,
                                  AuditAction action, nlohmann::json payload);
  nlohmann::json snapshot_locked() const;
  void write_snapshot_locked() const;

  AdminHierarchy hierarchy_;
  ActorDirectory directory_;
  ServiceConfig config_;
  Clock clock_;

  mutable std::shared_mutex mutex_;
  mutable std::condition_variable_any published_;
  State state_;
  std::vector<AuditEvent> events_;
  std::map<ActorId, std::set<Topic>> subscribers_;

  std::unique_ptr<EventLogWriter> log_writer_;
  PersistenceOptions persistence_;
};

}  // namespace dalert
