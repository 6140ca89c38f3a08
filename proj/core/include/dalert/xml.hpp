#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dalert::xml {

// A parsed element. Only what alert documents need: namespaces, attributes,
// character data and child elements. Comments and processing instructions
// are dropped.
struct Element {
  std::string ns;    // resolved namespace URI, empty when unqualified
  std::string name;  // local name
  std::vector<std::pair<std::string, std::string>> attributes;
  // Character data with literal leading/trailing whitespace removed.
  // Whitespace written as a character reference or inside CDATA is kept.
  std::string text;
  std::vector<Element> children;

  const Element* child(std::string_view local_name) const;
  std::vector<const Element*> children_named(std::string_view local_name) const;
};

// Parses a complete document and returns its root element. DOCTYPE
// declarations are rejected. Throws Error(MalformedXml) with the byte
// offset of the problem as subject.
Element parse(std::string_view document);

// Escapes character data so that parse() returns it unchanged: markup
// characters, CR, and whitespace at either end become references. Throws
// Error(InvariantViolation) for characters XML 1.0 cannot carry.
std::string escape_text(std::string_view text);
std::string escape_attribute(std::string_view value);

// Indenting serializer for leaf-text documents.
class Writer {
 public:
  explicit Writer(int indent = 3) : indent_(indent) {}

  void declaration();
  void open(std::string_view name, const std::vector<std::pair<std::string, std::string>>& attributes = {});
  void leaf(std::string_view name, std::string_view text);
  void close(std::string_view name);

  const std::string& str() const { return out_; }

 private:
  void pad();

  std::string out_;
  int indent_;
  int depth_ = 0;
};

}  // namespace dalert::xml
