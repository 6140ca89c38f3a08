#include "dalert/alert_service.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>

#include "dalert/cap.hpp"
#include "dalert/error.hpp"
#include "dalert/serialization.hpp"

namespace dalert {

using nlohmann::json;

AuditAction audit_action_of(const AdminAction& action) {
  struct Visitor {
    AuditAction operator()(const Review&) const { return AuditAction::Review; }
    AuditAction operator()(const Assign&) const { return AuditAction::Assign; }
    AuditAction operator()(const Merge&) const { return AuditAction::Merge; }
    AuditAction operator()(const Resolve&) const { return AuditAction::Resolve; }
    AuditAction operator()(const Update&) const { return AuditAction::Update; }
    AuditAction operator()(const AttachDocument&) const { return AuditAction::AttachDocument; }
  };
  return std::visit(Visitor{}, action);
}

std::vector<AuditAction> permitted_actions(Role role, LifecycleState state) {
  std::vector<AuditAction> out;
  if (is_terminal(state)) return out;
  const bool reviewed = state == LifecycleState::UnderReview || state == LifecycleState::Verified;
  if (is_office(role)) {
    if (state == LifecycleState::Distributed) out.push_back(AuditAction::Review);
    out.push_back(AuditAction::Verify);
    out.push_back(AuditAction::Assign);
    if (reviewed) out.push_back(AuditAction::Merge);
    if (reviewed) out.push_back(AuditAction::Resolve);
    out.push_back(AuditAction::Update);
    out.push_back(AuditAction::AttachDocument);
  } else {
    out.push_back(AuditAction::Verify);
  }
  return out;
}

namespace {

json topic_list(const std::set<Topic>& topics) {
  json arr = json::array();
  for (const auto& t : topics) arr.push_back(t.str());
  return arr;
}

json pushes_to(const std::set<Topic>& topics, const AlertSummary& summary) {
  json arr = json::array();
  for (const auto& t : topics) arr.push_back({{"topic", t.str()}, {"summary", summary}});
  return arr;
}

bool usable_id(std::string_view id) {
  if (id.empty() || id.size() > kMaxIdLength) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
           c == '.' || c == ':';
  });
}

}  // namespace

AlertService::AlertService(AdminHierarchy hierarchy, ActorDirectory directory, ServiceConfig config, Clock clock)
    : hierarchy_(std::move(hierarchy)),
      directory_(std::move(directory)),
      config_(config),
      clock_(std::move(clock)) {}

AlertService::~AlertService() = default;

// --- event plumbing ------------------------------------------------------------

void AlertService::commit_locked(std::vector<Pending> pending, UtcTime now) {
  for (auto& p : pending) {
    AuditEvent event{state_.last_seq + 1, std::move(p.actor), p.action, std::move(p.report_id), now,
                     std::move(p.payload)};
    if (log_writer_) log_writer_->append(event);
    apply_locked(event);
    events_.push_back(std::move(event));
    if (!persistence_.snapshot.empty() && persistence_.snapshot_every > 0 &&
        state_.last_seq % persistence_.snapshot_every == 0) {
      write_snapshot_locked();
    }
  }
  published_.notify_all();
}

void AlertService::apply_locked(const AuditEvent& event) {
  const json& p = event.payload;
  try {
    if (auto it = p.find("reports"); it != p.end()) {
      for (const auto& rj : *it) {
        DisasterReport r = rj.get<DisasterReport>();
        std::string id = r.id;
        state_.reports[id].report = std::move(r);
      }
    }
    if (auto it = p.find("responsible"); it != p.end()) {
      for (const auto& [id, unit] : it->items()) {
        state_.reports.at(id).responsible = AdminUnit::parse(unit.get<std::string>());
      }
    }
    if (auto it = p.find("topics"); it != p.end()) {
      for (const auto& [id, list] : it->items()) {
        std::set<Topic> topics;
        for (const auto& t : list) topics.insert(Topic::parse(t.get<std::string>()));
        state_.reports.at(id).topics = std::move(topics);
      }
    }
    if (auto it = p.find("idempotency_key"); it != p.end()) {
      state_.idempotency[it->get<std::string>()] = event.report_id;
    }
    if (auto it = p.find("records"); it != p.end()) {
      for (const auto& rec : *it) state_.ledger.append(rec.get<VerificationRecord>());
    }
    if (auto it = p.find("pushes"); it != p.end()) {
      for (const auto& push : *it) {
        state_.topics.publish(Topic::parse(push.at("topic").get<std::string>()),
                              push.at("summary").get<AlertSummary>());
      }
    }
    if (auto it = p.find("notified_reporter"); it != p.end()) {
      state_.reports.at(it->get<std::string>()).reporter_notified = true;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptLog, std::to_string(event.seq), e.what());
  } catch (const std::out_of_range& e) {
    throw Error(ErrorCode::CorruptLog, std::to_string(event.seq), "event refers to an unknown report");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CorruptLog) throw;
    throw Error(ErrorCode::CorruptLog, std::to_string(event.seq), e.what());
  }
  state_.last_seq = event.seq;
}

void AlertService::append_admin_events_locked(std::vector<Pending>& pending, const ReportEntry& entry,
                                              const Actor& actor, AuditAction action, json payload) {
  DisasterReport after = entry.report;
  if (auto it = payload.find("reports"); it != payload.end()) {
    for (const auto& rj : *it) {
      if (rj.at("id") == entry.report.id) after = rj.get<DisasterReport>();
    }
  }
  pending.push_back(Pending{action, actor.id, entry.report.id, std::move(payload)});
  if (!entry.reporter_notified) {
    json notify{{"notified_reporter", entry.report.id},
                {"trigger", to_string(action)},
                {"pushes", pushes_to({Topic::actor(entry.report.reporter)}, summarize(after))}};
    pending.push_back(Pending{AuditAction::Notify, actor.id, entry.report.id, std::move(notify)});
  }
}

const ReportEntry& AlertService::entry_locked(const std::string& report_id) const {
  auto it = state_.reports.find(report_id);
  if (it == state_.reports.end()) throw Error(ErrorCode::UnknownReport, report_id);
  return it->second;
}

std::string AlertService::fresh_id_locked() const {
  std::size_t n = state_.reports.size() + 1;
  std::string id = "R" + std::to_string(n);
  while (state_.reports.count(id)) id = "R" + std::to_string(++n);
  return id;
}

// --- operations ---------------------------------------------------------------------

std::string AlertService::submit_report(DisasterReport report, const std::string& idempotency_key) {
  std::unique_lock lock(mutex_);
  if (!idempotency_key.empty()) {
    if (auto it = state_.idempotency.find(idempotency_key); it != state_.idempotency.end()) return it->second;
  }
  const UtcTime now = clock_();

  report.state = LifecycleState::Submitted;
  report.merged_into.reset();
  if (!usable_id(report.id) || state_.reports.count(report.id)) report.id = fresh_id_locked();
  if (report.created_at == UtcTime{}) report.created_at = now;
  if (report.province_id.empty() && report.district_id.empty() && report.location.in_range()) {
    if (auto path = hierarchy_.try_locate(report.location)) {
      report.province_id = path->province_id;
      report.district_id = path->district_id;
      report.kumban_id = path->kumban_id;
    }
  }

  if (auto result = validate_report(report, hierarchy_); !result.ok()) throw ValidationError(result.violations);
  RoutingDecision routing = notification_set(report, hierarchy_, directory_, config_.neighbor_radius_m);
  DisasterReport distributed = transition(report, LifecycleState::Distributed);
  std::set<Topic> topics = routing.all_topics();

  json submit{{"reports", json::array({report})}};
  if (!idempotency_key.empty()) submit["idempotency_key"] = idempotency_key;

  json distribute{{"reports", json::array({distributed})},
                  {"responsible", {{report.id, routing.responsible.id()}}},
                  {"topics", {{report.id, topic_list(topics)}}},
                  {"notified", topic_list(routing.notified)},
                  {"neighbor_villages", routing.neighbor_villages},
                  {"pushes", pushes_to(topics, summarize(distributed))}};

  std::vector<Pending> pending;
  pending.push_back(Pending{AuditAction::Submit, report.reporter, report.id, std::move(submit)});
  pending.push_back(Pending{AuditAction::Distribute, report.reporter, report.id, std::move(distribute)});
  commit_locked(std::move(pending), now);
  return report.id;
}

DisasterReport AlertService::process_report(const std::string& report_id, const ActorId& actor_id,
                                            const AdminAction& action) {
  std::unique_lock lock(mutex_);
  const Actor* actor = directory_.find(actor_id);
  if (!actor || !is_office(actor->role)) {
    throw Error(ErrorCode::Forbidden, actor_id, "administrative actions need an office role");
  }
  const ReportEntry& entry = entry_locked(report_id);
  const DisasterReport& current = entry.report;
  const UtcTime now = clock_();

  auto require_open = [&](const DisasterReport& r) {
    if (is_terminal(r.state)) {
      throw Error(ErrorCode::IllegalTransition, r.id,
                  std::string(to_string(audit_action_of(action))) + " on a " + std::string(to_string(r.state)) + " report");
    }
  };

  const AuditAction kind = audit_action_of(action);
  json payload;
  const ReportEntry* subject = &entry;
  DisasterReport after = current;
  std::set<Topic> topics = entry.topics;
  std::optional<std::string> document;

  if (std::holds_alternative<Review>(action)) {
    after = transition(current, LifecycleState::UnderReview);
  } else if (std::holds_alternative<Resolve>(action)) {
    after = transition(current, LifecycleState::Resolved);
  } else if (const auto* assign = std::get_if<Assign>(&action)) {
    require_open(current);
    const AdminUnit& target = assign->target;
    bool known = target.tier == Tier::Ministry ||
                 (target.tier == Tier::Province && hierarchy_.find_province(target.region_id)) ||
                 (target.tier == Tier::District && hierarchy_.find_district(target.region_id));
    if (!known) throw Error(ErrorCode::UnknownRegion, target.id(), "assignment target not in hierarchy");
    topics.insert(Topic::unit(target));
    payload["responsible"] = {{current.id, target.id()}};
    payload["topics"] = {{current.id, topic_list(topics)}};
    payload["from"] = entry.responsible.id();
    payload["to"] = target.id();
  } else if (const auto* merge = std::get_if<Merge>(&action)) {
    if (merge->target == current.id) throw Error(ErrorCode::MergeCycle, current.id, "cannot merge a report into itself");
    const ReportEntry& other = entry_locked(merge->target);
    const ReportEntry* loser = &entry;
    const ReportEntry* winner = &other;
    if (merge->keep_older) {
      const auto& a = entry.report;
      const auto& b = other.report;
      bool acted_on_is_older = a.created_at != b.created_at ? a.created_at < b.created_at : a.id < b.id;
      if (acted_on_is_older) std::swap(loser, winner);
    }
    if (winner->report.state == LifecycleState::Merged) {
      throw Error(ErrorCode::MergeCycle, winner->report.id, "target is already merged");
    }
    subject = loser;
    after = transition(loser->report, LifecycleState::Merged, winner->report.id);
    topics = loser->topics;
    json records = json::array();
    for (const auto& rec : state_.ledger.carry_over(loser->report.id, winner->report.id)) records.push_back(rec);
    payload["records"] = records;
    payload["winner"] = winner->report.id;
  } else if (const auto* update = std::get_if<Update>(&action)) {
    require_open(current);
    if (update->severity) after.severity = *update->severity;
    if (update->description) after.description = *update->description;
    if (update->details) after.details = *update->details;
    if (update->reporter_phone) after.reporter_phone = *update->reporter_phone;
    if (auto result = validate_report(after, hierarchy_); !result.ok()) throw ValidationError(result.violations);
  } else if (const auto* attach = std::get_if<AttachDocument>(&action)) {
    require_open(current);
    if (attach->ref.empty()) throw Error(ErrorCode::InvalidInput, "ref", "document reference must not be empty");
    after.attachments.push_back(attach->ref);
    document = attach->ref;
  }

  if (std::holds_alternative<Review>(action) || std::holds_alternative<Resolve>(action)) {
    payload["from"] = to_string(current.state);
    payload["to"] = to_string(after.state);
  }
  payload["reports"] = json::array({after});
  payload["pushes"] = pushes_to(topics, summarize(after, document));

  std::vector<Pending> pending;
  append_admin_events_locked(pending, *subject, *actor, kind, std::move(payload));
  commit_locked(std::move(pending), now);
  return after;
}

VerificationRecord AlertService::verify(const std::string& report_id, const ActorId& verifier, std::string note) {
  std::unique_lock lock(mutex_);
  const ReportEntry& entry = entry_locked(report_id);
  const DisasterReport& current = entry.report;
  const UtcTime now = clock_();

  Actor actor{verifier, Role::Villager, {}, {}};
  if (const Actor* known = directory_.find(verifier)) actor = *known;

  if (is_terminal(current.state)) {
    throw Error(ErrorCode::ReportClosed, report_id, std::string("report is ") + std::string(to_string(current.state)));
  }
  if (state_.ledger.has(report_id, verifier)) {
    throw Error(ErrorCode::DuplicateVerification, report_id, verifier + " already verified");
  }
  VerificationRecord record{report_id, verifier, actor.role, now, std::move(note)};

  json payload{{"records", json::array({record})}};
  DisasterReport after = current;
  if (is_office(actor.role) && after.state != LifecycleState::Verified) {
    if (after.state == LifecycleState::Submitted) after = transition(after, LifecycleState::Distributed);
    if (after.state == LifecycleState::Distributed) after = transition(after, LifecycleState::UnderReview);
    after = transition(after, LifecycleState::Verified);
    payload["from"] = to_string(current.state);
    payload["to"] = to_string(after.state);
    payload["reports"] = json::array({after});
    payload["pushes"] = pushes_to(entry.topics, summarize(after));
  }

  std::vector<Pending> pending;
  if (is_office(actor.role)) {
    append_admin_events_locked(pending, entry, actor, AuditAction::Verify, std::move(payload));
  } else {
    pending.push_back(Pending{AuditAction::Verify, verifier, report_id, std::move(payload)});
  }
  commit_locked(std::move(pending), now);
  return record;
}

Reliability AlertService::reliability_score(const std::string& report_id) const {
  std::shared_lock lock(mutex_);
  entry_locked(report_id);
  return state_.ledger.reliability(report_id, config_.weights);
}

bool AlertService::auto_distribution_eligible(const std::string& report_id, std::optional<double> threshold) const {
  std::shared_lock lock(mutex_);
  entry_locked(report_id);
  return state_.ledger.auto_distribution_eligible(report_id, threshold.value_or(config_.auto_distribution_threshold),
                                                  config_.weights);
}

void AlertService::register_subscriber(const ActorId& subscriber, std::set<Topic> topics) {
  std::unique_lock lock(mutex_);
  subscribers_[subscriber] = std::move(topics);
}

std::vector<PushMessage> AlertService::poll(const Subscription& sub, std::chrono::milliseconds timeout) const {
  std::shared_lock lock(mutex_);
  auto it = subscribers_.find(sub.subscriber);
  if (it == subscribers_.end()) throw Error(ErrorCode::UnknownSubscriber, sub.subscriber);
  const std::set<Topic> topics = it->second;

  auto cursor_of = [&sub](const Topic& t) -> std::uint64_t {
    auto c = sub.cursors.find(t);
    return c == sub.cursors.end() ? 0 : c->second;
  };
  for (const auto& t : topics) {
    if (cursor_of(t) > state_.topics.latest(t)) {
      throw Error(ErrorCode::InvalidInput, t.str(), "cursor is ahead of the topic log");
    }
  }
  auto collect = [&] {
    std::vector<PushMessage> out;
    for (const auto& t : topics) {
      auto msgs = state_.topics.since(t, cursor_of(t));
      out.insert(out.end(), std::make_move_iterator(msgs.begin()), std::make_move_iterator(msgs.end()));
    }
    return out;
  };

  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    auto msgs = collect();
    if (!msgs.empty()) return msgs;
    if (published_.wait_until(lock, deadline) == std::cv_status::timeout) return collect();
  }
}

std::uint64_t AlertService::latest_seq(const Topic& topic) const {
  std::shared_lock lock(mutex_);
  return state_.topics.latest(topic);
}

std::string AlertService::export_cap(const std::string& report_id, std::optional<ActorId> sender,
                                     std::string_view msg_type) const {
  std::shared_lock lock(mutex_);
  const DisasterReport& r = entry_locked(report_id).report;
  return serialize_cap(report_to_cap(r, sender.value_or(r.reporter), msg_type));
}

std::string AlertService::import_cap(std::string_view xml, std::string idempotency_key) {
  CapAlert alert = parse_cap(xml);
  DisasterReport report = cap_to_report(alert, &hierarchy_);
  if (idempotency_key.empty()) idempotency_key = "cap:" + alert.sender + ":" + alert.identifier;
  return submit_report(std::move(report), idempotency_key);
}

DisasterReport AlertService::get_report(const std::string& report_id) const {
  std::shared_lock lock(mutex_);
  return entry_locked(report_id).report;
}

ReportEntry AlertService::get_entry(const std::string& report_id) const {
  std::shared_lock lock(mutex_);
  return entry_locked(report_id);
}

std::vector<DisasterReport> AlertService::list_reports(const ReportFilter& f) const {
  std::shared_lock lock(mutex_);
  std::vector<DisasterReport> out;
  for (const auto& [id, entry] : state_.reports) {
    const auto& r = entry.report;
    if (f.province && r.province_id != *f.province) continue;
    if (f.district && r.district_id != *f.district) continue;
    if (f.state && r.state != *f.state) continue;
    if (f.kind && r.kind != *f.kind) continue;
    if (f.bbox && !f.bbox->contains(r.location)) continue;
    out.push_back(r);
  }
  return out;
}

std::size_t AlertService::report_count() const {
  std::shared_lock lock(mutex_);
  return state_.reports.size();
}

std::vector<AuditEvent> AlertService::events() const {
  std::shared_lock lock(mutex_);
  return events_;
}

std::vector<AuditEvent> AlertService::events_for(const std::string& report_id) const {
  std::shared_lock lock(mutex_);
  std::vector<AuditEvent> out;
  for (const auto& e : events_) {
    if (e.report_id == report_id) out.push_back(e);
  }
  return out;
}

std::uint64_t AlertService::last_seq() const {
  std::shared_lock lock(mutex_);
  return state_.last_seq;
}

// --- snapshots, replay, persistence ----------------------------------------------------

json AlertService::snapshot_locked() const {
  json reports = json::object();
  for (const auto& [id, e] : state_.reports) {
    reports[id] = {{"report", e.report},
                   {"responsible", e.responsible.id()},
                   {"topics", topic_list(e.topics)},
                   {"reporter_notified", e.reporter_notified}};
  }
  json ledger = json::array();
  for (const auto& rec : state_.ledger.records()) ledger.push_back(rec);
  json topics = json::object();
  for (const auto& [topic, log] : state_.topics.logs()) {
    json msgs = json::array();
    for (const auto& m : log) msgs.push_back(encode_push(m));
    topics[topic.str()] = msgs;
  }
  return json{{"last_seq", state_.last_seq},
              {"reports", reports},
              {"idempotency", state_.idempotency},
              {"ledger", ledger},
              {"topics", topics}};
}

json AlertService::snapshot() const {
  std::shared_lock lock(mutex_);
  return snapshot_locked();
}

void AlertService::restore(const json& snap) {
  std::unique_lock lock(mutex_);
  State fresh;
  try {
    fresh.last_seq = snap.at("last_seq").get<std::uint64_t>();
    for (const auto& [id, ej] : snap.at("reports").items()) {
      ReportEntry e;
      e.report = ej.at("report").get<DisasterReport>();
      e.responsible = AdminUnit::parse(ej.at("responsible").get<std::string>());
      for (const auto& t : ej.at("topics")) e.topics.insert(Topic::parse(t.get<std::string>()));
      e.reporter_notified = ej.at("reporter_notified").get<bool>();
      fresh.reports.emplace(id, std::move(e));
    }
    fresh.idempotency = snap.at("idempotency").get<std::map<std::string, std::string>>();
    for (const auto& rec : snap.at("ledger")) fresh.ledger.append(rec.get<VerificationRecord>());
    for (const auto& [topic, msgs] : snap.at("topics").items()) {
      for (const auto& m : msgs) fresh.topics.restore(decode_push(m.get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptLog, "snapshot", e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptLog, "snapshot", e.what());
  }
  state_ = std::move(fresh);
  published_.notify_all();
}

void AlertService::replay(const std::vector<AuditEvent>& events) {
  std::unique_lock lock(mutex_);
  std::uint64_t expected = state_.last_seq + 1;
  for (const auto& e : events) {
    if (e.seq != expected++) {
      throw Error(ErrorCode::CorruptLog, std::to_string(e.seq), "expected seq " + std::to_string(expected - 1));
    }
  }
  for (const auto& e : events) {
    apply_locked(e);
    events_.push_back(e);
  }
  published_.notify_all();
}

void AlertService::write_snapshot_locked() const {
  auto tmp = persistence_.snapshot;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidInput, tmp.string(), "cannot write snapshot");
    out << snapshot_locked().dump();
  }
  std::filesystem::rename(tmp, persistence_.snapshot);
}

void AlertService::enable_persistence(const PersistenceOptions& options) {
  if (!options.snapshot.empty() && std::filesystem::exists(options.snapshot)) {
    std::ifstream in(options.snapshot);
    json snap;
    try {
      snap = json::parse(in);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::CorruptLog, options.snapshot.string(), e.what());
    }
    restore(snap);
  }

  std::vector<AuditEvent> all = read_event_file(options.event_log);
  std::unique_lock lock(mutex_);
  if (all.size() < state_.last_seq) {
    throw Error(ErrorCode::CorruptLog, options.event_log.string(), "log is shorter than the snapshot");
  }
  events_.clear();
  for (auto& e : all) {
    if (e.seq > state_.last_seq) apply_locked(e);
    events_.push_back(std::move(e));
  }
  persistence_ = options;
  log_writer_ = std::make_unique<EventLogWriter>(options.event_log);
}

}  // namespace dalert
