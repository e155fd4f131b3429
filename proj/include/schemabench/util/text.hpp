#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace schemabench::util {

std::string collapse_whitespace(std::string_view text);
std::string trim(std::string_view text);
std::string to_lower_ascii(std::string_view text);
/// Lowercased alphanumeric word tokens.
std::vector<std::string> word_tokens(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view separator);
bool contains(std::string_view haystack, std::string_view needle);
std::string truncate_utf8(std::string_view text, std::size_t max_bytes);

}  // namespace schemabench::util
