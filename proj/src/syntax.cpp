#include "enralg/syntax.hpp"

#include <cctype>

#include "enralg/error.hpp"

namespace enralg {

namespace {

class TermParser {
 public:
  explicit TermParser(std::string_view text) : text_(text) {}

  TermInContext parse() {
    TermInContext t = term();
    skip_space();
    if (pos_ != text_.size()) error("unexpected trailing input");
    return t;
  }

 private:
  static bool is_name_char(char c) {
    return c != '(' && c != ')' && c != '[' && c != ']' && c != ',' &&
           std::isspace(static_cast<unsigned char>(c)) == 0;
  }

  [[noreturn]] void error(const std::string& what) const {
    parse_failure("term syntax error at column " + std::to_string(pos_ + 1) + ": " + what +
                  " in \"" + std::string(text_) + "\"");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }

  std::string name() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    if (start == pos_) error("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  TermInContext term() {
    TermInContext t;
    t.head = name();
    if (accept('[')) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != ']') ++pos_;
      std::string_view p = text_.substr(start, pos_ - start);
      while (!p.empty() && std::isspace(static_cast<unsigned char>(p.front()))) p.remove_prefix(1);
      while (!p.empty() && std::isspace(static_cast<unsigned char>(p.back()))) p.remove_suffix(1);
      if (p.empty()) error("empty point name");
      t.point = std::string(p);
      expect(']');
    }
    if (accept('(')) {
      t.applied = true;
      if (!accept(')')) {
        do {
          t.args.push_back(term());
        } while (accept(','));
        expect(')');
      }
    }
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

TermInContext parse_term(std::string_view text) { return TermParser(text).parse(); }

std::string to_string(const TermInContext& t) {
  std::string out = t.head;
  if (t.point) out += "[" + *t.point + "]";
  if (t.applied || !t.args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) out += ",";
      out += to_string(t.args[i]);
    }
    out += ")";
  }
  return out;
}

}  // namespace enralg
