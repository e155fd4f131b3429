#pragma once

#include <chrono>
#include <string>

#include "schemabench/llm/provider.hpp"

namespace schemabench::llm {

/// Splits `https://host:port/v1` into the connection part and the path prefix.
struct HttpEndpoint {
  std::string scheme_host_port;
  std::string path_prefix;

  static HttpEndpoint parse(const std::string& base_url);
};

struct OpenAiProviderOptions {
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key;
  std::chrono::seconds timeout{120};
};

/// OpenAI-compatible `/chat/completions` client (system + user message, no streaming).
class OpenAiChatProvider : public ChatProvider {
 public:
  explicit OpenAiChatProvider(OpenAiProviderOptions options);

  ChatCompletion complete(const ChatRequest& request) override;
  std::string name() const override { return "openai-compatible:" + options_.base_url; }

  static util::Json request_body(const ChatRequest& request);
  static ChatCompletion parse_response(const std::string& body, const std::string& fallback_model);

 private:
  OpenAiProviderOptions options_;
  HttpEndpoint endpoint_;
};

}  // namespace schemabench::llm
