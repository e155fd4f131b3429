#include "schemabench/prompts/render.hpp"

#include <algorithm>

#include "schemabench/error.hpp"
#include "schemabench/util/text.hpp"

namespace schemabench::prompts {

namespace {

template <typename OnText, typename OnField>
void scan(std::string_view tpl, OnText on_text, OnField on_field) {
  std::size_t i = 0;
  while (i < tpl.size()) {
    const char c = tpl[i];
    if (c == '{' && i + 1 < tpl.size() && tpl[i + 1] == '{') {
      on_text('{');
      i += 2;
    } else if (c == '}' && i + 1 < tpl.size() && tpl[i + 1] == '}') {
      on_text('}');
      i += 2;
    } else if (c == '{') {
      const auto close = tpl.find('}', i);
      if (close == std::string_view::npos) throw Error(Errc::InvalidParameter, "unterminated placeholder");
      on_field(tpl.substr(i + 1, close - i - 1));
      i = close + 1;
    } else if (c == '}') {
      throw Error(Errc::InvalidParameter, "single '}' in template");
    } else {
      on_text(c);
      ++i;
    }
  }
}

}  // namespace

std::string render(std::string_view tpl, const Values& values) {
  std::string out;
  out.reserve(tpl.size());
  scan(
      tpl, [&](char c) { out += c; },
      [&](std::string_view name) {
        auto it = values.find(name);
        if (it == values.end()) throw Error(Errc::InvalidParameter, "no value for placeholder {" + std::string(name) + "}");
        out += it->second;
      });
  return out;
}

std::vector<std::string> placeholders(std::string_view tpl) {
  std::vector<std::string> names;
  scan(
      tpl, [](char) {},
      [&](std::string_view name) {
        if (std::find(names.begin(), names.end(), name) == names.end()) names.emplace_back(name);
      });
  return names;
}

std::string render_papers(const std::vector<core::PaperRecord>& papers, const PaperBlockOptions& options) {
  std::string out;
  for (std::size_t i = 0; i < papers.size(); ++i) {
    const auto& p = papers[i];
    if (i) out += "\n\n";
    out += "Paper " + std::to_string(i + 1) + "\nTitle: " + p.title + "\nAbstract: " + p.abstract;
    if (options.include_full_text) {
      if (!p.full_text) throw Error(Errc::MissingFullText, "paper " + p.paper_id + " has no full text");
      out += "\nFull text: " + util::truncate_utf8(*p.full_text, options.full_text_budget);
    }
  }
  return out;
}

std::string render_in_text_refs(const std::optional<std::vector<std::string>>& refs) {
  if (!refs || refs->empty()) return "None";
  return util::join(*refs, "\n");
}

std::string render_table(const core::TableInstance& instance) {
  if (instance.table_values) return *instance.table_values;
  if (!instance.reference_schema) {
    throw Error(Errc::MissingReference, "instance " + instance.instance_id + " has neither table values nor a reference schema");
  }
  std::string row = "|";
  for (const auto& a : instance.reference_schema->aspects()) row += " " + a.name + " |";
  return row;
}

std::string render_candidate_goals(const std::vector<core::IntentCandidate>& candidates) {
  std::string out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    out += "\nCandidate " + std::to_string(i + 1) + ": " + candidates[i].goal;
  }
  return out;
}

}  // namespace schemabench::prompts
