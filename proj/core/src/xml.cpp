#include "dalert/xml.hpp"

#include <map>

#include "dalert/error.hpp"

namespace dalert::xml {

const Element* Element::child(std::string_view local_name) const {
  for (const auto& c : children) {
    if (c.name == local_name) return &c;
  }
  return nullptr;
}

std::vector<const Element*> Element::children_named(std::string_view local_name) const {
  std::vector<const Element*> out;
  for (const auto& c : children) {
    if (c.name == local_name) out.push_back(&c);
  }
  return out;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
         c == '.' || c == ':' || u >= 0x80;
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool legal_char(unsigned long cp) {
  return cp == 0x9 || cp == 0xA || cp == 0xD || (cp >= 0x20 && cp <= 0xD7FF) || (cp >= 0xE000 && cp <= 0xFFFD) ||
         (cp >= 0x10000 && cp <= 0x10FFFF);
}

// Character data accumulator that remembers which bytes came from literal
// whitespace so the ends can be trimmed afterwards.
class TextBuilder {
 public:
  void literal(char c) {
    text_ += c;
    if (!is_space(c)) mark(text_.size() - 1);
  }
  void significant(std::string_view s) {
    text_ += s;
    if (!s.empty()) mark(text_.size() - s.size());
  }
  std::string take() const {
    if (first_ == std::string::npos) return {};
    return text_.substr(first_, end_ - first_);
  }

 private:
  void mark(std::size_t start) {
    if (first_ == std::string::npos) first_ = start;
    end_ = text_.size();
  }
  std::string text_;
  std::size_t first_ = std::string::npos;
  std::size_t end_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view doc) : doc_(doc) {}

  Element run() {
    check_utf8();
    if (doc_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    skip_misc();
    if (eof() || peek() != '<') fail("expected root element");
    Element root = element({});
    skip_misc();
    if (!eof()) fail("content after root element");
    return root;
  }

 private:
  using Scope = std::map<std::string, std::string>;

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::MalformedXml, "offset " + std::to_string(pos_), why);
  }

  void check_utf8() {
    std::size_t i = 0;
    while (i < doc_.size()) {
      auto b = static_cast<unsigned char>(doc_[i]);
      std::size_t len = b < 0x80 ? 1 : (b >> 5) == 0x6 ? 2 : (b >> 4) == 0xE ? 3 : (b >> 3) == 0x1E ? 4 : 0;
      bool ok = len != 0 && i + len <= doc_.size();
      unsigned long cp = len == 1 ? b : (b & (0x7F >> len));
      for (std::size_t k = 1; ok && k < len; ++k) {
        auto c = static_cast<unsigned char>(doc_[i + k]);
        ok = (c & 0xC0) == 0x80;
        cp = (cp << 6) | (c & 0x3F);
      }
      // Reject overlong forms and surrogates along with illegal characters.
      static constexpr unsigned long kMin[] = {0, 0, 0x80, 0x800, 0x10000};
      if (!ok || cp < kMin[len] || !legal_char(cp)) {
        pos_ = i;
        fail("invalid UTF-8 or illegal character");
      }
      i += len;
    }
  }

  bool eof() const { return pos_ >= doc_.size(); }
  char peek() const { return doc_[pos_]; }
  bool starts(std::string_view s) const { return doc_.substr(pos_, s.size()) == s; }

  void skip_space() {
    while (!eof() && is_space(peek())) ++pos_;
  }

  void skip_until(std::string_view terminator) {
    auto at = doc_.find(terminator, pos_);
    if (at == std::string_view::npos) fail("unterminated construct");
    pos_ = at + terminator.size();
  }

  // Whitespace, comments and processing instructions outside the root.
  void skip_misc() {
    for (;;) {
      skip_space();
      if (starts("<?")) {
        skip_until("?>");
      } else if (starts("<!--")) {
        skip_until("-->");
      } else if (starts("<!DOCTYPE") || starts("<!doctype")) {
        fail("DOCTYPE is not supported");
      } else {
        return;
      }
    }
  }

  std::string name() {
    std::size_t start = pos_;
    while (!eof() && is_name_char(peek())) ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(doc_.substr(start, pos_ - start));
  }

  // Decodes one reference starting at '&' and appends it.
  std::string reference() {
    auto semi = doc_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 12) fail("unterminated entity reference");
    std::string_view ent = doc_.substr(pos_ + 1, semi - pos_ - 1);
    std::string out;
    if (ent == "lt") out = "<";
    else if (ent == "gt") out = ">";
    else if (ent == "amp") out = "&";
    else if (ent == "quot") out = "\"";
    else if (ent == "apos") out = "'";
    else if (ent.size() > 1 && ent[0] == '#') {
      unsigned long cp = 0;
      bool hex = ent[1] == 'x';
      std::string_view digits = ent.substr(hex ? 2 : 1);
      if (digits.empty()) fail("empty character reference");
      for (char c : digits) {
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (hex && c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else fail("bad character reference");
        cp = cp * (hex ? 16 : 10) + static_cast<unsigned long>(v);
        if (cp > 0x10FFFF) fail("character reference out of range");
      }
      if (!legal_char(cp)) fail("character reference to an illegal character");
      append_utf8(out, cp);
    } else {
      fail("unknown entity &" + std::string(ent) + ";");
    }
    pos_ = semi + 1;
    return out;
  }

  std::string attribute_value() {
    if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
    char quote = doc_[pos_++];
    std::string value;
    while (!eof() && peek() != quote) {
      char c = peek();
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        value += reference();
      } else {
        // Attribute-value normalization: literal whitespace becomes a space.
        value += is_space(c) ? ' ' : c;
        ++pos_;
      }
    }
    if (eof()) fail("unterminated attribute value");
    ++pos_;
    return value;
  }

  std::string resolve(const std::string& qname, const Scope& scope, bool is_attribute, std::string& local) {
    auto colon = qname.find(':');
    if (colon == std::string::npos) {
      local = qname;
      if (is_attribute) return {};
      auto it = scope.find("");
      return it == scope.end() ? std::string() : it->second;
    }
    std::string prefix = qname.substr(0, colon);
    local = qname.substr(colon + 1);
    if (local.empty() || local.find(':') != std::string::npos) fail("bad qualified name " + qname);
    if (prefix == "xml") return "http://www.w3.org/XML/1998/namespace";
    auto it = scope.find(prefix);
    if (it == scope.end()) fail("unbound namespace prefix " + prefix);
    return it->second;
  }

  Element element(Scope scope) {
    ++pos_;  // '<'
    std::string qname = name();
    std::vector<std::pair<std::string, std::string>> raw_attrs;
    bool self_closing = false;
    for (;;) {
      bool had_space = !eof() && is_space(peek());
      skip_space();
      if (eof()) fail("unterminated start tag");
      if (peek() == '>') {
        ++pos_;
        break;
      }
      if (starts("/>")) {
        pos_ += 2;
        self_closing = true;
        break;
      }
      if (!had_space) fail("expected whitespace before attribute");
      std::string attr = name();
      skip_space();
      if (eof() || peek() != '=') fail("expected '=' after attribute name");
      ++pos_;
      skip_space();
      std::string value = attribute_value();
      for (const auto& [n, _] : raw_attrs) {
        if (n == attr) fail("duplicate attribute " + attr);
      }
      raw_attrs.emplace_back(std::move(attr), std::move(value));
    }

    for (const auto& [n, v] : raw_attrs) {
      if (n == "xmlns") scope[""] = v;
      else if (n.rfind("xmlns:", 0) == 0) scope[n.substr(6)] = v;
    }

    Element el;
    el.ns = resolve(qname, scope, false, el.name);
    for (auto& [n, v] : raw_attrs) {
      if (n == "xmlns" || n.rfind("xmlns:", 0) == 0) {
        el.attributes.emplace_back(n, v);
        continue;
      }
      std::string local;
      resolve(n, scope, true, local);
      el.attributes.emplace_back(n, v);
    }
    if (self_closing) return el;

    TextBuilder text;
    for (;;) {
      if (eof()) fail("unterminated element " + qname);
      char c = peek();
      if (c == '<') {
        if (starts("</")) {
          pos_ += 2;
          std::string closing = name();
          if (closing != qname) fail("mismatched end tag </" + closing + "> for <" + qname + ">");
          skip_space();
          if (eof() || peek() != '>') fail("malformed end tag");
          ++pos_;
          break;
        }
        if (starts("<!--")) {
          skip_until("-->");
        } else if (starts("<![CDATA[")) {
          pos_ += 9;
          auto end = doc_.find("]]>", pos_);
          if (end == std::string_view::npos) fail("unterminated CDATA section");
          text.significant(doc_.substr(pos_, end - pos_));
          pos_ = end + 3;
        } else if (starts("<?")) {
          skip_until("?>");
        } else if (starts("<!")) {
          fail("unsupported markup declaration");
        } else {
          el.children.push_back(element(scope));
        }
      } else if (c == '&') {
        text.significant(reference());
      } else if (c == '\r') {
        text.literal('\n');
        ++pos_;
        if (!eof() && peek() == '\n') ++pos_;
      } else {
        if (c == '>' && pos_ >= 2 && doc_.substr(pos_ - 2, 2) == "]]") fail("']]>' in character data");
        text.literal(c);
        ++pos_;
      }
    }
    el.text = text.take();
    return el;
  }

  std::string_view doc_;
  std::size_t pos_ = 0;
};

// Decodes one UTF-8 sequence for validity checking; malformed bytes are
// passed through (text is treated as opaque bytes).
unsigned long next_code_point(std::string_view s, std::size_t& i) {
  auto b = static_cast<unsigned char>(s[i]);
  int len = b < 0x80 ? 1 : (b >> 5) == 0x6 ? 2 : (b >> 4) == 0xE ? 3 : (b >> 3) == 0x1E ? 4 : 1;
  if (len == 1 || i + static_cast<std::size_t>(len) > s.size()) {
    ++i;
    return b < 0x80 ? b : 0x20;
  }
  unsigned long cp = b & (0x7F >> len);
  for (int k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
  i += static_cast<std::size_t>(len);
  return cp;
}

void check_chars(std::string_view s) {
  for (std::size_t i = 0; i < s.size();) {
    if (!legal_char(next_code_point(s, i))) {
      throw Error(ErrorCode::InvariantViolation, "text", "character not representable in XML 1.0");
    }
  }
}

const char* whitespace_ref(char c) {
  switch (c) {
    case ' ': return "&#x20;";
    case '\t': return "&#x9;";
    case '\n': return "&#xA;";
    default: return "&#xD;";
  }
}

}  // namespace

Element parse(std::string_view document) { return Parser(document).run(); }

std::string escape_text(std::string_view text) {
  check_chars(text);
  std::size_t lead = 0;
  while (lead < text.size() && is_space(text[lead])) ++lead;
  std::size_t trail = text.size();
  while (trail > lead && is_space(text[trail - 1])) --trail;

  std::string out;
  out.reserve(text.size() + 8);
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (i < lead || i >= trail) {
      out += whitespace_ref(c);
      continue;
    }
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '\r': out += "&#xD;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string escape_attribute(std::string_view value) {
  check_chars(value);
  std::string out;
  for (char c : value) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '"': out += "&quot;"; break;
      case '\t': case '\n': case '\r': out += whitespace_ref(c); break;
      default: out += c;
    }
  }
  return out;
}

void Writer::declaration() { out_ += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"; }

void Writer::pad() { out_.append(static_cast<std::size_t>(depth_ * indent_), ' '); }

void Writer::open(std::string_view name, const std::vector<std::pair<std::string, std::string>>& attributes) {
  pad();
  out_ += '<';
  out_ += name;
  for (const auto& [n, v] : attributes) {
    out_ += ' ';
    out_ += n;
    out_ += "=\"";
    out_ += escape_attribute(v);
    out_ += '"';
  }
  out_ += ">\n";
  ++depth_;
}

void Writer::leaf(std::string_view name, std::string_view text) {
  pad();
  out_ += '<';
  out_ += name;
  out_ += '>';
  out_ += escape_text(text);
  out_ += "</";
  out_ += name;
  out_ += ">\n";
}

void Writer::close(std::string_view name) {
  --depth_;
  pad();
  out_ += "</";
  out_ += name;
  out_ += ">\n";
}

}  // namespace dalert::xml
