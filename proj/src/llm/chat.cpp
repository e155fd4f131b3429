#include "schemabench/llm/chat.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>

#include "schemabench/error.hpp"

namespace schemabench::llm {

using util::Json;

void validate_request(const ChatRequest& r) {
  if (r.system_prompt.empty()) throw Error(Errc::InvalidRequest, "empty system prompt");
  if (r.user_prompt.empty()) throw Error(Errc::InvalidRequest, "empty user prompt");
  if (!(r.temperature >= 0.0 && r.temperature <= 2.0)) {
    throw Error(Errc::InvalidRequest, "temperature outside [0, 2]");
  }
  if (!(r.top_p > 0.0 && r.top_p <= 1.0)) throw Error(Errc::InvalidRequest, "top_p outside (0, 1]");
  if (r.max_tokens && *r.max_tokens <= 0) throw Error(Errc::InvalidRequest, "max_tokens must be positive");
}

std::string finish_reason_name(FinishReason reason) {
  switch (reason) {
    case FinishReason::Stop: return "stop";
    case FinishReason::Length: return "length";
    case FinishReason::Error: return "error";
  }
  return "error";
}

FinishReason finish_reason_from_name(const std::string& name) {
  if (name == "stop") return FinishReason::Stop;
  if (name == "length") return FinishReason::Length;
  return FinishReason::Error;
}

Json canonical_request_json(const ChatRequest& r) {
  Json j = Json::object();
  j["model"] = r.model;
  j["system_prompt"] = r.system_prompt;
  j["user_prompt"] = r.user_prompt;
  j["temperature"] = r.temperature;
  j["top_p"] = r.top_p;
  j["max_tokens"] = r.max_tokens ? Json(*r.max_tokens) : Json(nullptr);
  j["seed_tag"] = r.seed_tag ? Json(*r.seed_tag) : Json(nullptr);
  return j;
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::CacheIoError, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string request_cache_key(const ChatRequest& request) {
  return sha256_hex(util::dump_compact(canonical_request_json(request)));
}

Json completion_to_json(const ChatCompletion& c) {
  Json j = Json::object();
  j["text"] = c.text;
  j["model"] = c.model;
  j["finish_reason"] = finish_reason_name(c.finish_reason);
  if (c.usage) {
    j["usage"] = Json{{"prompt_tokens", c.usage->prompt_tokens},
                      {"completion_tokens", c.usage->completion_tokens}};
  }
  return j;
}

ChatCompletion completion_from_json(const Json& j) {
  ChatCompletion c;
  c.text = j.at("text").get<std::string>();
  c.model = j.value("model", "");
  c.finish_reason = finish_reason_from_name(j.value("finish_reason", "stop"));
  if (auto it = j.find("usage"); it != j.end() && it->is_object()) {
    c.usage = Usage{it->value("prompt_tokens", std::int64_t{0}),
                    it->value("completion_tokens", std::int64_t{0})};
  }
  return c;
}

}  // namespace schemabench::llm
