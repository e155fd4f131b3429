#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace schemabench::util {

using Json = nlohmann::ordered_json;

struct DuplicateKey {
  int depth;               // 1 = keys of the top-level object
  std::string parent_key;  // key under which the enclosing object sits ("" at top level)
  std::string key;
};

/// Parses JSON preserving key order and recording every duplicated object key
/// (nlohmann keeps only one of them, so duplicates must be caught during parsing).
/// Throws schemabench::Error(MalformedJson) on syntax errors.
Json parse_ordered(std::string_view text, std::vector<DuplicateKey>* duplicates = nullptr);

/// Compact dump that never throws on invalid UTF-8 (bytes are replaced).
std::string dump_compact(const Json& j);
std::string dump_indented(const Json& j, int indent = 4);

}  // namespace schemabench::util
