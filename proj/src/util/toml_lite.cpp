#include "schemabench/util/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "schemabench/error.hpp"

namespace schemabench::util {

std::optional<std::string> TomlValue::as_string() const {
  if (auto* s = std::get_if<std::string>(&value)) return *s;
  return std::nullopt;
}

std::optional<std::int64_t> TomlValue::as_int() const {
  if (auto* i = std::get_if<std::int64_t>(&value)) return *i;
  return std::nullopt;
}

std::optional<double> TomlValue::as_double() const {
  if (auto* d = std::get_if<double>(&value)) return *d;
  if (auto* i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
  return std::nullopt;
}

std::optional<bool> TomlValue::as_bool() const {
  if (auto* b = std::get_if<bool>(&value)) return *b;
  return std::nullopt;
}

namespace {

class LineParser {
 public:
  LineParser(std::string_view s, std::size_t line) : s_(s), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(Errc::ConfigError, "line " + std::to_string(line_) + ": " + what);
  }

  void skip_ws() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
  }
  bool at_end_or_comment() {
    skip_ws();
    return i_ >= s_.size() || s_[i_] == '#';
  }
  bool eat(char c) {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  std::string key_part() {
    skip_ws();
    if (i_ < s_.size() && (s_[i_] == '"' || s_[i_] == '\'')) return string_literal();
    std::size_t start = i_;
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
        ++i_;
      } else {
        break;
      }
    }
    if (start == i_) fail("expected a key");
    return std::string(s_.substr(start, i_ - start));
  }

  std::string dotted_key() {
    std::string k = key_part();
    while (eat('.')) k += "." + key_part();
    return k;
  }

  std::string string_literal() {
    char q = s_[i_++];
    std::string out;
    while (true) {
      if (i_ >= s_.size()) fail("unterminated string");
      char c = s_[i_++];
      if (c == q) break;
      if (q == '"' && c == '\\') {
        if (i_ >= s_.size()) fail("dangling escape");
        char e = s_[i_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      } else {
        out += c;
      }
    }
    return out;
  }

  TomlValue::Scalar scalar() {
    skip_ws();
    if (i_ >= s_.size()) fail("missing value");
    char c = s_[i_];
    if (c == '"' || c == '\'') return string_literal();
    std::size_t start = i_;
    while (i_ < s_.size() && s_[i_] != ',' && s_[i_] != ']' && s_[i_] != '#' && s_[i_] != ' ' && s_[i_] != '\t') ++i_;
    std::string tok(s_.substr(start, i_ - start));
    if (tok == "true") return true;
    if (tok == "false") return false;
    std::string digits;
    for (char ch : tok) {
      if (ch != '_') digits += ch;
    }
    if (digits.empty()) fail("missing value");
    const char* b = digits.data();
    const char* e = b + digits.size();
    if (digits.find_first_of(".eE") == std::string::npos) {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(b + (digits[0] == '+'), e, v);
      if (ec == std::errc() && p == e) return v;
    } else {
      double v = 0;
      auto [p, ec] = std::from_chars(b + (digits[0] == '+'), e, v);
      if (ec == std::errc() && p == e && std::isfinite(v)) return v;
    }
    fail("unsupported value '" + tok + "'");
  }

  TomlValue value() {
    if (eat('[')) {
      std::vector<TomlValue::Scalar> items;
      if (!eat(']')) {
        do {
          if (eat(']')) return TomlValue{std::move(items)};  // trailing comma
          items.push_back(scalar());
        } while (eat(','));
        expect(']');
      }
      return TomlValue{std::move(items)};
    }
    return std::visit([](auto&& v) { return TomlValue{v}; }, scalar());
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
  std::size_t line_;
};

}  // namespace

TomlTable parse_toml(std::string_view text) {
  TomlTable table;
  std::string prefix;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    LineParser p(line, line_no);
    if (p.at_end_or_comment()) continue;
    if (p.eat('[')) {
      if (p.eat('[')) p.fail("arrays of tables are not supported");
      prefix = p.dotted_key() + ".";
      p.expect(']');
    } else {
      auto key = prefix + p.dotted_key();
      p.expect('=');
      auto v = p.value();
      if (!table.emplace(key, std::move(v)).second) p.fail("duplicate key '" + key + "'");
    }
    if (!p.at_end_or_comment()) p.fail("unexpected trailing characters");
  }
  return table;
}

}  // namespace schemabench::util
