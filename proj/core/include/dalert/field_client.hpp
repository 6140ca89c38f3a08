#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dalert/domain.hpp"
#include "dalert/geo.hpp"
#include "dalert/http.hpp"
#include "dalert/push.hpp"
#include "dalert/routing.hpp"
#include "dalert/verification.hpp"

namespace dalert {

struct LinkProfile {
  double drop_probability = 0.0;
  std::int64_t latency_ms = 0;
  std::int64_t jitter_ms = 0;

  // "drop:latency:jitter", e.g. "0.3:200:50". Throws Error(InvalidInput).
  static LinkProfile parse(std::string_view text);
  void check() const;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;
void real_sleep(std::chrono::milliseconds duration);

// Delay before retry number `failures` (1 after the first failure):
// 250 ms doubling per attempt, capped at 8 s.
std::chrono::milliseconds backoff_delay(int failures);

// Simulated weak link in front of another transport. Each request waits
// latency plus uniform jitter, then may be dropped before it is sent or
// after the server answered (the response is lost). Both drops surface as
// Error(Unreachable).
class LossyLink : public Transport {
 public:
  LossyLink(Transport& inner, LinkProfile profile, std::uint64_t seed, Sleeper sleeper = real_sleep);
  ApiResponse send(const ApiRequest& request) override;

  std::uint64_t requests() const { return requests_; }
  std::uint64_t dropped() const { return dropped_; }

 private:
  Transport& inner_;
  LinkProfile profile_;
  std::mt19937_64 rng_;
  Sleeper sleeper_;
  std::uint64_t requests_ = 0;
  std::uint64_t dropped_ = 0;
};

// --- report assembly ---------------------------------------------------------

// Supplies answers for the report steps.
class AnswerSource {
 public:
  virtual ~AnswerSource() = default;
  // Raw answer for `step`. nullopt means an optional step was skipped.
  virtual std::optional<std::string> ask(const std::string& step, const std::string& prompt, bool optional) = 0;
  // Called with the reason an answer was rejected. Interactive sources
  // return true to ask again; file sources throw.
  virtual bool reject(const std::string& step, const std::string& reason) = 0;
  // Outline drawn around the object of interest, if any.
  virtual std::optional<Ring> geometry() { return std::nullopt; }
};

// Answers from a JSON object keyed by step name. A missing required step
// or an invalid answer throws Error(InvalidInput) naming the step.
class FileAnswers : public AnswerSource {
 public:
  explicit FileAnswers(nlohmann::json answers);
  static FileAnswers load(const std::filesystem::path& path);

  std::optional<std::string> ask(const std::string& step, const std::string& prompt, bool optional) override;
  bool reject(const std::string& step, const std::string& reason) override;
  std::optional<Ring> geometry() override;

 private:
  nlohmann::json answers_;
};

// Prompts on `out`, reads lines from `in`. End of input or "abort" throws
// Error(AbortedByUser).
class InteractiveAnswers : public AnswerSource {
 public:
  InteractiveAnswers(std::istream& in, std::ostream& out) : in_(in), out_(out) {}

  std::optional<std::string> ask(const std::string& step, const std::string& prompt, bool optional) override;
  bool reject(const std::string& step, const std::string& reason) override;

 private:
  std::istream& in_;
  std::ostream& out_;
};

struct ReporterInfo {
  ActorId reporter;  // asked for when empty
  std::string phone;
};

// Walks kind -> kind-specific fields -> location -> severity -> description.
// With a hierarchy the regions are filled in and the result is checked by
// validate_report (ValidationError on failure).
DisasterReport build_report(AnswerSource& answers, const ReporterInfo& reporter,
                            const AdminHierarchy* hierarchy = nullptr);

// --- server access ----------------------------------------------------------------

// Persistent per-topic read positions, written atomically.
class CursorStore {
 public:
  explicit CursorStore(std::filesystem::path path);

  const std::map<Topic, std::uint64_t>& cursors() const { return cursors_; }
  std::uint64_t get(const Topic& topic) const;
  void set(const Topic& topic, std::uint64_t seq);

 private:
  void save() const;

  std::filesystem::path path_;
  std::map<Topic, std::uint64_t> cursors_;
};

struct SubmitResult {
  std::string id;
  int attempts = 0;
};

struct WatchOptions {
  std::chrono::milliseconds poll_timeout{20000};
  // Stop after this many completed polls; 0 runs until `stop` says so.
  std::uint64_t max_polls = 0;
  // Give up with Error(Unreachable) after this many failures in a row;
  // 0 retries forever.
  int max_consecutive_failures = 0;
  std::function<bool()> stop;
};

// One line of text per push message.
std::string format_push(const PushMessage& message);

class FieldClient {
 public:
  explicit FieldClient(Transport& transport, Sleeper sleeper = real_sleep);

  // Single attempt. Server-side errors come back as the typed Error.
  std::string submit(const DisasterReport& report, const std::string& idempotency_key);
  // Retries dropped requests with backoff under the same key. Throws
  // Error(Unreachable) after max_attempts failures; server-side rejections
  // are not retried.
  SubmitResult submit_with_retry(const DisasterReport& report, const std::string& idempotency_key,
                                 int max_attempts);

  DisasterReport get_report(const std::string& id);
  VerificationRecord verify(const std::string& id, const ActorId& verifier, const std::string& note = {});
  nlohmann::json reliability(const std::string& id);
  std::string export_cap(const std::string& id, std::optional<ActorId> sender = std::nullopt);

  std::map<Topic, std::uint64_t> subscribe(const ActorId& subscriber, const std::set<Topic>& topics);
  std::vector<PushMessage> poll(const ActorId& subscriber, const std::map<Topic, std::uint64_t>& cursors,
                                std::chrono::milliseconds timeout);

  // Long-polls the topics and hands every message to `on_message` once, in
  // per-topic order, recording its seq in `cursors` right after. Dropped
  // requests are retried with backoff. Returns the number delivered.
  std::uint64_t watch(const ActorId& subscriber, const std::set<Topic>& topics, CursorStore& cursors,
                      const std::function<void(const PushMessage&)>& on_message, const WatchOptions& options = {});

 private:
  ApiResponse call(const ApiRequest& request);

  Transport& transport_;
  Sleeper sleeper_;
};

}  // namespace dalert
