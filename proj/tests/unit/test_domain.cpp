#include <gtest/gtest.h>

#include "dalert/domain.hpp"
#include "dalert/error.hpp"
#include "fixtures.hpp"

using namespace dalert;

TEST(Domain, GeoPointRanges) {
  EXPECT_TRUE((GeoPoint{90, 180}.in_range()));
  EXPECT_TRUE((GeoPoint{-90, -180}.in_range()));
  EXPECT_FALSE((GeoPoint{90.0001, 0}.in_range()));
  EXPECT_FALSE((GeoPoint{0, -180.5}.in_range()));
}

TEST(Domain, EnumNamesRoundTrip) {
  for (auto k : kAllKinds) EXPECT_EQ(parse_kind(to_string(k)), k);
  for (auto s : kAllSeverities) EXPECT_EQ(parse_severity(to_string(s)), s);
  for (auto s : kAllStates) EXPECT_EQ(parse_state(to_string(s)), s);
  for (auto r : kAllRoles) EXPECT_EQ(parse_role(to_string(r)), r);
  EXPECT_THROW(parse_kind("Tsunami"), Error);
}

TEST(Domain, TransitionGraphIsExactlyTheLifecycle) {
  using S = LifecycleState;
  const std::set<std::pair<S, S>> legal{{S::Submitted, S::Distributed}, {S::Distributed, S::UnderReview},
                                        {S::UnderReview, S::Verified},  {S::UnderReview, S::Resolved},
                                        {S::UnderReview, S::Merged},    {S::Verified, S::Resolved},
                                        {S::Verified, S::Merged}};
  for (auto from : kAllStates) {
    for (auto to : kAllStates) {
      EXPECT_EQ(is_legal_transition(from, to), legal.count({from, to}) == 1)
          << to_string(from) << " -> " << to_string(to);
    }
  }
}

TEST(Domain, TransitionAppliesOrThrows) {
  DisasterReport r = test::sangkalok_flood();
  r.state = LifecycleState::Distributed;
  auto next = transition(r, LifecycleState::UnderReview);
  EXPECT_EQ(next.state, LifecycleState::UnderReview);
  EXPECT_EQ(r.state, LifecycleState::Distributed);

  try {
    transition(r, LifecycleState::Resolved);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IllegalTransition);
  }
  EXPECT_THROW(transition(next, LifecycleState::Merged), Error);
  auto merged = transition(next, LifecycleState::Merged, std::string("R9"));
  EXPECT_EQ(merged.merged_into, "R9");
  EXPECT_THROW(transition(merged, LifecycleState::Resolved), Error);
}

TEST(Domain, TerminalStates) {
  EXPECT_TRUE(is_terminal(LifecycleState::Resolved));
  EXPECT_TRUE(is_terminal(LifecycleState::Merged));
  EXPECT_FALSE(is_terminal(LifecycleState::Verified));
}

TEST(Domain, RoleClasses) {
  EXPECT_TRUE(is_office(Role::DistrictOffice));
  EXPECT_FALSE(is_office(Role::INGO));
  EXPECT_TRUE(is_institutional(Role::INGO));
  EXPECT_FALSE(is_institutional(Role::Villager));
}

TEST(Domain, ValidReportPasses) {
  auto h = test::north_regions();
  auto result = validate_report(test::sangkalok_flood(), h);
  EXPECT_TRUE(result.ok()) << (result.violations.empty() ? "" : result.violations.front());
}

TEST(Domain, ValidationCollectsViolations) {
  auto h = test::north_regions();
  auto r = test::sangkalok_flood(20000);
  r.reporter.clear();
  r.kind = DisasterKind::BushFire;
  auto result = validate_report(r, h);
  EXPECT_FALSE(result.ok());
  auto has = [&](const std::string& needle) {
    for (const auto& v : result.violations) {
      if (v.find(needle) != std::string::npos) return true;
    }
    return false;
  };
  EXPECT_TRUE(has("reporter missing"));
  EXPECT_TRUE(has("details tag mismatch"));
  EXPECT_TRUE(has("water level above 10000 cm"));
}

TEST(Domain, RegionMismatchAndCoverage) {
  auto h = test::north_regions();
  auto r = test::sangkalok_flood();
  r.district_id = "Chompet";
  auto result = validate_report(r, h);
  ASSERT_EQ(result.violations.size(), 1u);
  EXPECT_EQ(result.violations[0], "region inconsistency: location resolves to Louangphabang/Louangprabang/Sangkalok");

  r = test::sangkalok_flood();
  r.location = {10.0, 10.0};
  EXPECT_EQ(validate_report(r, h).violations, std::vector<std::string>{"location outside coverage"});
}

TEST(Domain, MergedIntoOnlyWithMerged) {
  auto h = test::north_regions();
  auto r = test::sangkalok_flood();
  r.merged_into = "R2";
  EXPECT_FALSE(validate_report(r, h).ok());
}

TEST(Domain, KindDetailsTagging) {
  EXPECT_TRUE(KindDetails::flood(3).tag_consistent());
  KindDetails d = KindDetails::disease(DisasterKind::AnimalDisease, "anthrax", 4);
  EXPECT_EQ(d.kind, DisasterKind::AnimalDisease);
  EXPECT_TRUE(d.tag_consistent());
  d.kind = DisasterKind::Flood;
  EXPECT_FALSE(d.tag_consistent());
  for (auto k : kAllKinds) EXPECT_TRUE(KindDetails::defaults_for(k).tag_consistent());
}
