#pragma once

#include <string>
#include <string_view>

#include "schemabench/util/json.hpp"

namespace schemabench::llm {

/// Pulls the first JSON object or array out of a model reply. Markdown fences and
/// surrounding prose are skipped; Python-style dicts (single quotes, True/None,
/// trailing commas) are accepted as a fallback since several prompts show that form.
/// Throws NoJsonFound or UnbalancedJson.
util::Json extract_json_payload(std::string_view completion_text);

/// Source text of the payload extract_json_payload would return (already rewritten to
/// JSON when it was a Python literal), for parsers that must see duplicate keys.
std::string extract_json_text(std::string_view completion_text);

}  // namespace schemabench::llm
