#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "dalert/error.hpp"
#include "dalert/event_log.hpp"
#include "fixtures.hpp"

using namespace dalert;

namespace {

AuditEvent event(std::uint64_t seq) {
  return AuditEvent{seq, "dafo-lpb", AuditAction::Review, "R1", UtcTime(std::chrono::milliseconds(1000 * seq)),
                    nlohmann::json{{"from", "Distributed"}, {"to", "UnderReview"}}};
}

}  // namespace

TEST(EventLog, EncodeIsSeqPrefixedSingleLine) {
  std::string line = encode_event(event(12));
  EXPECT_EQ(line.rfind("12 {", 0), 0u);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_EQ(decode_event(line), event(12));
}

TEST(EventLog, ActionNames) {
  for (auto a : {AuditAction::Submit, AuditAction::Distribute, AuditAction::Review, AuditAction::Verify,
                 AuditAction::Assign, AuditAction::Merge, AuditAction::Resolve, AuditAction::Update,
                 AuditAction::AttachDocument, AuditAction::Notify}) {
    EXPECT_EQ(parse_audit_action(to_string(a)), a);
  }
}

TEST(EventLog, ReadDetectsGapsAndGarbage) {
  std::stringstream ok(encode_event(event(1)) + "\n" + encode_event(event(2)) + "\n");
  EXPECT_EQ(read_events(ok).size(), 2u);

  std::stringstream gap(encode_event(event(1)) + "\n" + encode_event(event(3)) + "\n");
  try {
    read_events(gap);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CorruptLog);
  }
  std::stringstream garbage(encode_event(event(1)) + "\nnot an event\n");
  EXPECT_THROW(read_events(garbage), Error);
  std::stringstream late(encode_event(event(1)) + "\n");
  EXPECT_THROW(read_events(late, 5), Error);
}

TEST(EventLog, WriterAppendsAndReaderLoads) {
  test::TempDir dir;
  auto path = dir / "events.log";
  EXPECT_TRUE(read_event_file(path).empty());
  {
    EventLogWriter w(path);
    w.append(event(1));
    w.append(event(2));
  }
  {
    EventLogWriter w(path);
    w.append(event(3));
  }
  auto events = read_event_file(path);
  ASSERT_EQ(events.size(), 3u);
  EXPECT_EQ(events[2], event(3));
}
