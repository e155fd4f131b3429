#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "schemabench/util/json.hpp"

namespace schemabench::llm {

/// Sampling defaults used for every prompted call unless a caller overrides them.
inline constexpr double kDefaultTemperature = 0.7;
inline constexpr double kDefaultTopP = 1.0;
/// Nucleus setting used for locally hosted fine-tuned models.
inline constexpr double kFineTunedTopP = 0.9;

struct ChatRequest {
  std::string model;
  std::string system_prompt;
  std::string user_prompt;
  double temperature = kDefaultTemperature;
  double top_p = kDefaultTopP;
  std::optional<int> max_tokens;
  /// Distinguishes repeated samples of the same prompt in the cache; never sent on the wire.
  std::optional<std::string> seed_tag;
};

enum class FinishReason { Stop, Length, Error };

struct Usage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
};

struct ChatCompletion {
  std::string text;
  std::string model;
  FinishReason finish_reason = FinishReason::Stop;
  std::optional<Usage> usage;
  /// Provider attempts spent on this completion (0 when served from cache).
  int attempts = 0;
  bool from_cache = false;
};

/// Throws InvalidRequest when prompts are empty or sampling parameters are out of range.
void validate_request(const ChatRequest& request);

std::string finish_reason_name(FinishReason reason);
FinishReason finish_reason_from_name(const std::string& name);

/// Canonical JSON of the fields that determine a completion (fixed key order).
util::Json canonical_request_json(const ChatRequest& request);
/// Hex SHA-256 of the canonical request; the response-cache key.
std::string request_cache_key(const ChatRequest& request);

util::Json completion_to_json(const ChatCompletion& completion);
ChatCompletion completion_from_json(const util::Json& j);

std::string sha256_hex(std::string_view bytes);

}  // namespace schemabench::llm
