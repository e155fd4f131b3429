#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "schemabench/core/types.hpp"

namespace schemabench::prompts {

using Values = std::map<std::string, std::string, std::less<>>;

/// Fills `{name}` placeholders and unescapes `{{`/`}}`. Substituted text is not rescanned.
/// Throws InvalidParameter for a placeholder without a value or an unmatched brace.
std::string render(std::string_view tpl, const Values& values);

/// Placeholder names in order of first appearance.
std::vector<std::string> placeholders(std::string_view tpl);

/// Appended to the user prompt when a reply has to be re-requested after a parse failure.
inline constexpr std::string_view kFormatReminder =
    "Your previous reply could not be parsed. Reply with only the JSON object in the format requested above.";

inline constexpr std::size_t kDefaultFullTextBudget = 40000;

struct PaperBlockOptions {
  bool include_full_text = false;
  std::size_t full_text_budget = kDefaultFullTextBudget;  // bytes per paper, cut on a UTF-8 boundary
};

/// Papers as numbered title/abstract (and optionally full-text) entries separated by blank lines.
std::string render_papers(const std::vector<core::PaperRecord>& papers, const PaperBlockOptions& options = {});
std::string render_in_text_refs(const std::optional<std::vector<std::string>>& refs);
/// The table shown to intent prompts: table_values when present, else the reference header row.
std::string render_table(const core::TableInstance& instance);
std::string render_candidate_goals(const std::vector<core::IntentCandidate>& candidates);

}  // namespace schemabench::prompts
