#include <gtest/gtest.h>

#include "dalert/error.hpp"
#include "dalert/xml.hpp"

using namespace dalert;

namespace {

ErrorCode code_of(std::string_view doc) {
  try {
    xml::parse(doc);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidInput;
}

}  // namespace

TEST(Xml, ResolvesDefaultAndPrefixedNamespaces) {
  auto root = xml::parse(R"(<?xml version="1.0"?><a xmlns="urn:x" xmlns:p="urn:p"><p:b>1</p:b><c/></a>)");
  EXPECT_EQ(root.ns, "urn:x");
  EXPECT_EQ(root.name, "a");
  ASSERT_EQ(root.children.size(), 2u);
  EXPECT_EQ(root.children[0].ns, "urn:p");
  EXPECT_EQ(root.children[0].text, "1");
  EXPECT_EQ(root.children[1].ns, "urn:x");
}

TEST(Xml, TrimsLiteralWhitespaceOnly) {
  auto root = xml::parse("<a>  x \n y  </a>");
  EXPECT_EQ(root.text, "x \n y");
  root = xml::parse("<a>&#x20;x&#x20;</a>");
  EXPECT_EQ(root.text, " x ");
  root = xml::parse("<a><![CDATA[ <raw> ]]></a>");
  EXPECT_EQ(root.text, " <raw> ");
}

TEST(Xml, EntitiesAndCharacterReferences) {
  auto root = xml::parse("<a>&lt;&amp;&gt;&quot;&apos;&#65;&#x1F600;</a>");
  EXPECT_EQ(root.text, "<&>\"'A\xF0\x9F\x98\x80");
}

TEST(Xml, NormalizesLineEnds) {
  EXPECT_EQ(xml::parse("<a>x\r\ny\rz</a>").text, "x\ny\nz");
}

TEST(Xml, SkipsCommentsAndBom) {
  auto root = xml::parse("\xEF\xBB\xBF<!-- c --><a><!-- inner -->t</a><!-- tail -->");
  EXPECT_EQ(root.text, "t");
}

TEST(Xml, RejectsMalformedInput) {
  EXPECT_EQ(code_of(""), ErrorCode::MalformedXml);
  EXPECT_EQ(code_of("<a>"), ErrorCode::MalformedXml);
  EXPECT_EQ(code_of("<a></b>"), ErrorCode::MalformedXml);
  EXPECT_EQ(code_of("<a>&bogus;</a>"), ErrorCode::MalformedXml);
  EXPECT_EQ(code_of("<a/><b/>"), ErrorCode::MalformedXml);
  EXPECT_EQ(code_of("<!DOCTYPE a><a/>"), ErrorCode::MalformedXml);
  EXPECT_EQ(code_of("<p:a/>"), ErrorCode::MalformedXml);
  EXPECT_EQ(code_of("<a x='1' x='2'/>"), ErrorCode::MalformedXml);
  EXPECT_EQ(code_of("<a>\xFF</a>"), ErrorCode::MalformedXml);
  EXPECT_EQ(code_of(std::string_view("<a>\x01</a>")), ErrorCode::MalformedXml);
}

TEST(Xml, EscapeTextSurvivesParse) {
  for (std::string s : {std::string(" lead"), std::string("trail\t"), std::string("\r\n mixed \r"),
                        std::string("a & b < c > d ]]> e"), std::string("\n"), std::string("ລາວ")}) {
    auto root = xml::parse("<a>" + xml::escape_text(s) + "</a>");
    EXPECT_EQ(root.text, s);
  }
  EXPECT_THROW(xml::escape_text(std::string("bad\x02")), Error);
}

TEST(Xml, WriterIndentsWithThreeSpaces) {
  xml::Writer w;
  w.declaration();
  w.open("alert", {{"xmlns", "urn:x"}});
  w.leaf("identifier", "7");
  w.close("alert");
  EXPECT_EQ(w.str(),
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<alert xmlns=\"urn:x\">\n   <identifier>7</identifier>\n"
            "</alert>\n");
}
