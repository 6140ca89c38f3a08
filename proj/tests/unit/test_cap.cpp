#include <gtest/gtest.h>

#include "dalert/cap.hpp"
#include "dalert/error.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

using namespace dalert;

namespace {

std::string replace(std::string s, const std::string& from, const std::string& to) {
  auto pos = s.find(from);
  if (pos != std::string::npos) s.replace(pos, from.size(), to);
  return s;
}

Error error_of(std::string_view xml) {
  try {
    parse_cap(xml);
  } catch (const Error& e) {
    return e;
  }
  return Error(ErrorCode::InvalidInput, "none", "no error raised");
}

const char* kMinimal = R"(<alert xmlns="urn:oasis:names:tc:emergency:cap:1.1">
<identifier>1</identifier><sender>s</sender><sent>2020-01-01T00:00:00+07:00</sent>
<status>Test</status><msgType>Alert</msgType><scope>Public</scope>
<info><category>Other</category><event>e</event><urgency>Unknown</urgency><severity>Unknown</severity>
<certainty>Unknown</certainty></info></alert>)";

}  // namespace

TEST(Cap, ListingFieldsParseExactly) {
  CapAlert a = parse_cap(test::listing_xml());
  EXPECT_EQ(a.identifier, "7");
  EXPECT_EQ(a.sender, "89");
  EXPECT_EQ(format_datetime(a.sent), "2013-09-25T07:05:02.917-05:00");
  EXPECT_EQ(a.status, "Actual");
  EXPECT_EQ(a.msg_type, "Alert");
  EXPECT_EQ(a.source, "MAF office; +856 1234567; MAF");
  EXPECT_EQ(a.scope, "Public");
  EXPECT_EQ(a.info.language, "en-US");
  EXPECT_EQ(a.info.category, "Health");
  EXPECT_EQ(a.info.event, "I have seen the same thing in another \n             village nearby last year");
  EXPECT_EQ(a.info.response_type, "None");
  EXPECT_EQ(a.info.urgency, "Future");
  EXPECT_EQ(a.info.severity, "Extreme");
  EXPECT_EQ(a.info.certainty, "Possible");
  ASSERT_TRUE(a.info.effective);
  EXPECT_EQ(format_datetime(*a.info.effective), "2013-09-24T19:00:00-05:00");
  const std::vector<Parameter> expected{{"location", "19.845519,102.078652"},
                                        {"disasterType", "PlantDiseaseInfo"},
                                        {"province", "Louangphabang"},
                                        {"district", "Louangprabang"},
                                        {"kumban", "Sangkalok"}};
  EXPECT_EQ(a.info.parameters, expected);
}

TEST(Cap, ListingReserializesToSameContent) {
  const std::string listing = test::listing_xml();
  std::string out = serialize_cap(parse_cap(listing));
  EXPECT_EQ(test::normalize_xml_whitespace(out), test::normalize_xml_whitespace(listing));
  EXPECT_NE(out.find("xmlns=\"urn:oasis:names:tc:emergency:cap:1.1\""), std::string::npos);
}

TEST(Cap, BogusStatusNamesElement) {
  Error e = error_of(replace(test::listing_xml(), "<status>Actual</status>", "<status>Bogus</status>"));
  EXPECT_EQ(e.code(), ErrorCode::SchemaViolation);
  EXPECT_EQ(e.subject(), "status");
}

TEST(Cap, MissingRequiredElementNamesIt) {
  Error e = error_of(replace(test::listing_xml(), "<sender>89</sender>", ""));
  EXPECT_EQ(e.code(), ErrorCode::SchemaViolation);
  EXPECT_EQ(e.subject(), "sender");
  e = error_of(replace(test::listing_xml(), "<urgency>Future</urgency>", "<urgency>Soon</urgency>"));
  EXPECT_EQ(e.subject(), "urgency");
}

TEST(Cap, StructuralViolations) {
  EXPECT_EQ(error_of(replace(kMinimal, "cap:1.1", "cap:1.2")).code(), ErrorCode::SchemaViolation);
  EXPECT_EQ(error_of(replace(kMinimal, "<status>Test</status>", "<status>Test</status><status>Test</status>")).code(),
            ErrorCode::SchemaViolation);
  std::string two_infos = replace(kMinimal, "</info>", "</info><info><category>Geo</category><event>e</event>"
                                                      "<urgency>Past</urgency><severity>Minor</severity>"
                                                      "<certainty>Likely</certainty></info>");
  EXPECT_EQ(error_of(two_infos).subject(), "info");
  EXPECT_EQ(error_of("<alert").code(), ErrorCode::MalformedXml);
}

TEST(Cap, MinimalAlertHasNoParameters) {
  CapAlert a = parse_cap(kMinimal);
  EXPECT_TRUE(a.info.parameters.empty());
  EXPECT_FALSE(a.info.language);
  std::string out = serialize_cap(a);
  EXPECT_EQ(out.find("<parameter>"), std::string::npos);
  EXPECT_EQ(parse_cap(out), a);
}

TEST(Cap, UnknownElementsIgnored) {
  CapAlert a = parse_cap(replace(kMinimal, "<scope>Public</scope>", "<scope>Public</scope><note>x</note>"));
  EXPECT_EQ(a.scope, "Public");
}

TEST(Cap, SerializeRejectsIllegalEnum) {
  CapAlert a = parse_cap(kMinimal);
  a.msg_type = "Shout";
  try {
    serialize_cap(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvariantViolation);
    EXPECT_EQ(e.subject(), "msgType");
  }
}

TEST(Cap, ListingBecomesPlantDiseaseReport) {
  DisasterReport r = cap_to_report(parse_cap(test::listing_xml()));
  EXPECT_EQ(r.id, "7");
  EXPECT_EQ(r.kind, DisasterKind::PlantDisease);
  EXPECT_EQ(r.kumban_id, "Sangkalok");
  EXPECT_EQ(r.province_id, "Louangphabang");
  EXPECT_EQ(r.district_id, "Louangprabang");
  EXPECT_EQ(r.location.lat, 19.845519);
  EXPECT_EQ(r.location.lon, 102.078652);
  EXPECT_EQ(r.severity, Severity::Extreme);
  EXPECT_EQ(r.reporter, "89");
  EXPECT_EQ(r.envelope.source, "MAF office; +856 1234567; MAF");
  EXPECT_EQ(r.envelope.sent_offset_minutes, -300);
}

TEST(Cap, ListingImportExportIsIdentity) {
  CapAlert a = parse_cap(test::listing_xml());
  EXPECT_EQ(report_to_cap(cap_to_report(a), "89"), a);
}

TEST(Cap, NativePlantDiseaseReportMatchesListingShape) {
  DisasterReport r;
  r.id = "7";
  r.kind = DisasterKind::PlantDisease;
  r.details = KindDetails::defaults_for(DisasterKind::PlantDisease);
  r.location = test::kListingPoint;
  r.province_id = "Louangphabang";
  r.district_id = "Louangprabang";
  r.kumban_id = "Sangkalok";
  r.reporter = "89";
  r.severity = Severity::Extreme;
  CapAlert a = report_to_cap(r, "89");
  EXPECT_EQ(a.info.category, "Health");
  EXPECT_EQ(a.info.severity, "Extreme");
  EXPECT_EQ(a.info.parameters, parse_cap(test::listing_xml()).info.parameters);
}

TEST(Cap, FloodEmitsWaterLevel) {
  CapAlert a = report_to_cap(test::sangkalok_flood(150), "89");
  EXPECT_EQ(a.info.category, "Met");
  bool found = false;
  for (const auto& p : a.info.parameters) found |= p == Parameter{"waterLevelCm", "150"};
  EXPECT_TRUE(found);
}

TEST(Cap, CategoryPerKind) {
  EXPECT_EQ(cap_category_for(DisasterKind::Flood), "Met");
  EXPECT_EQ(cap_category_for(DisasterKind::BushFire), "Fire");
  EXPECT_EQ(cap_category_for(DisasterKind::Infrastructure), "Infra");
  EXPECT_EQ(cap_category_for(DisasterKind::HumanDisease), "Health");
  EXPECT_EQ(cap_category_for(DisasterKind::AnimalDisease), "Health");
  EXPECT_EQ(disaster_type_value(DisasterKind::BushFire), "BushFireInfo");
}

TEST(Cap, MissingLocation) {
  CapAlert a = parse_cap(kMinimal);
  try {
    cap_to_report(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingLocation);
  }
}

TEST(Cap, ForeignAlertInfersKindAndRegions) {
  auto h = test::north_regions();
  CapAlert a = parse_cap(kMinimal);
  a.info.parameters.push_back({"location", "19.845519,102.078652"});
  a.info.parameters.push_back({"source-system-ref", "abc"});
  a.info.category = "Fire";
  DisasterReport r = cap_to_report(a, &h);
  EXPECT_EQ(r.kind, DisasterKind::BushFire);
  EXPECT_EQ(r.district_id, "Louangprabang");
  EXPECT_EQ(r.kumban_id, "Sangkalok");
  ASSERT_EQ(r.envelope.foreign_parameters.size(), 1u);
  EXPECT_EQ(r.envelope.foreign_parameters[0].name, "source-system-ref");

  a.info.category = "Health";
  EXPECT_EQ(cap_to_report(a, &h).kind, DisasterKind::HumanDisease);
  a.info.category = "Geo";
  EXPECT_EQ(cap_to_report(a, &h).kind, DisasterKind::Infrastructure);
  // Foreign parameters come back in their original place.
  EXPECT_EQ(report_to_cap(cap_to_report(a, &h), "s").info.parameters.back(), (Parameter{"source-system-ref", "abc"}));
}

TEST(Cap, GeometryCentroidWhenNoLocation) {
  CapAlert a = parse_cap(kMinimal);
  a.info.parameters.push_back({"geometry", "0,0 0,2 2,2 2,0"});
  DisasterReport r = cap_to_report(a);
  EXPECT_NEAR(r.location.lat, 1.0, 1e-12);
  EXPECT_NEAR(r.location.lon, 1.0, 1e-12);
}

TEST(Cap, UnreadableExtensionsAreSchemaViolations) {
  CapAlert a = parse_cap(kMinimal);
  a.info.parameters.push_back({"location", "north of the river"});
  EXPECT_THROW(cap_to_report(a), Error);
  a.info.parameters.back() = {"location", "1,1"};
  a.info.parameters.push_back({"disasterType", "MeteorInfo"});
  try {
    cap_to_report(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SchemaViolation);
  }
}

TEST(Cap, GeneratedAlertsRoundTrip) {
  gen::Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    CapAlert a = gen::cap_alert(rng);
    EXPECT_EQ(parse_cap(serialize_cap(a)), a) << serialize_cap(a);
  }
}

TEST(Cap, GeneratedReportsRoundTrip) {
  gen::Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    DisasterReport r = gen::codec_report(rng);
    std::string sender = i % 3 == 0 ? r.reporter : "sender-" + std::to_string(i);
    DisasterReport back = cap_to_report(parse_cap(serialize_cap(report_to_cap(r, sender))));
    EXPECT_EQ(back, r) << serialize_cap(report_to_cap(r, sender));
  }
}
