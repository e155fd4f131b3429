#include "schemabench/llm/json_extract.hpp"

#include <optional>
#include <string>

#include "schemabench/error.hpp"

namespace schemabench::llm {

using util::Json;

namespace {

/// Contents of the first ``` fenced block, if any.
std::optional<std::string_view> first_fenced_block(std::string_view text) {
  const auto open = text.find("```");
  if (open == std::string_view::npos) return std::nullopt;
  auto body_start = text.find('\n', open + 3);
  if (body_start == std::string_view::npos) return std::nullopt;
  ++body_start;
  const auto close = text.find("```", body_start);
  if (close == std::string_view::npos) return text.substr(body_start);
  return text.substr(body_start, close - body_start);
}

/// End index (exclusive) of the balanced value opening at `start`, or npos.
/// With `single_quotes`, '...' also delimits strings.
std::size_t balanced_end(std::string_view text, std::size_t start, bool single_quotes) {
  std::string stack;
  char quote = 0;
  bool escaped = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    const char c = text[i];
    if (quote != 0) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == quote) {
        quote = 0;
      }
      continue;
    }
    if (c == '"' || (single_quotes && c == '\'')) {
      quote = c;
    } else if (c == '{' || c == '[') {
      stack.push_back(c == '{' ? '}' : ']');
    } else if (c == '}' || c == ']') {
      if (stack.empty() || stack.back() != c) return std::string_view::npos;
      stack.pop_back();
      if (stack.empty()) return i + 1;
    }
  }
  return std::string_view::npos;
}

/// Rewrites Python-literal style text into JSON: single-quoted strings, True/False/None,
/// and trailing commas before a closing bracket.
std::string python_literal_to_json(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 16);
  char quote = 0;
  bool escaped = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quote != 0) {
      if (escaped) {
        // \' is not a JSON escape.
        if (c == '\'') {
          out.back() = '\'';
        } else {
          out.push_back(c);
        }
        escaped = false;
      } else if (c == '\\') {
        out.push_back(c);
        escaped = true;
      } else if (c == quote) {
        out.push_back('"');
        quote = 0;
      } else if (c == '"' && quote == '\'') {
        out += "\\\"";
      } else if (c == '\n') {
        out += "\\n";
      } else {
        out.push_back(c);
      }
      continue;
    }
    if (c == '"' || c == '\'') {
      quote = c;
      out.push_back('"');
    } else if (c == ',') {
      std::size_t j = i + 1;
      while (j < text.size() && (text[j] == ' ' || text[j] == '\n' || text[j] == '\t' || text[j] == '\r')) ++j;
      if (j < text.size() && (text[j] == '}' || text[j] == ']')) continue;
      out.push_back(c);
    } else if (text.substr(i, 4) == "True") {
      out += "true";
      i += 3;
    } else if (text.substr(i, 5) == "False") {
      out += "false";
      i += 4;
    } else if (text.substr(i, 4) == "None") {
      out += "null";
      i += 3;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

enum class Outcome { Parsed, NoOpener, Unbalanced, Unparseable };

Outcome try_extract(std::string_view text, Json& result, std::string& source) {
  bool saw_opener = false;
  bool saw_balanced = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '{' && text[i] != '[') continue;
    saw_opener = true;
    if (auto end = balanced_end(text, i, false); end != std::string_view::npos) {
      saw_balanced = true;
      try {
        source = std::string(text.substr(i, end - i));
        result = Json::parse(source);
        return Outcome::Parsed;
      } catch (const Json::exception&) {
      }
    }
    if (auto end = balanced_end(text, i, true); end != std::string_view::npos) {
      saw_balanced = true;
      try {
        source = python_literal_to_json(text.substr(i, end - i));
        result = Json::parse(source);
        return Outcome::Parsed;
      } catch (const Json::exception&) {
      }
    }
  }
  if (!saw_opener) return Outcome::NoOpener;
  return saw_balanced ? Outcome::Unparseable : Outcome::Unbalanced;
}

}  // namespace

namespace {

Json extract(std::string_view completion_text, std::string& source) {
  Json result;
  if (auto fenced = first_fenced_block(completion_text)) {
    if (try_extract(*fenced, result, source) == Outcome::Parsed) return result;
  }
  switch (try_extract(completion_text, result, source)) {
    case Outcome::Parsed: return result;
    case Outcome::Unbalanced:
      throw Error(Errc::UnbalancedJson, "JSON value opened but never closed");
    case Outcome::NoOpener:
    case Outcome::Unparseable:
      break;
  }
  throw Error(Errc::NoJsonFound, "no parseable JSON object or array in completion");
}

}  // namespace

Json extract_json_payload(std::string_view completion_text) {
  std::string source;
  return extract(completion_text, source);
}

std::string extract_json_text(std::string_view completion_text) {
  std::string source;
  extract(completion_text, source);
  return source;
}

}  // namespace schemabench::llm
