#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>

#include "schemabench/llm/chat.hpp"
#include "schemabench/llm/provider.hpp"

namespace schemabench::llm {

struct RetryPolicy {
  int max_retries = 5;
  std::chrono::milliseconds base_backoff{1000};
  std::chrono::milliseconds max_backoff{60000};
  bool jitter = true;
  /// Replaceable so tests never sleep.
  std::function<void(std::chrono::milliseconds)> sleep;
};

/// chat with retries: transport failures, 429 and 5xx are retried with exponential
/// backoff; 401/403 fail immediately with AuthError, other statuses with ProviderError.
ChatCompletion chat(ChatProvider& provider, const ChatRequest& request, const RetryPolicy& policy = {});

/// Content-addressed store of completions, one JSON file per request hash at
/// `<dir>/<first two hex chars>/<hash>.json`, written via temp-file rename.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<ChatCompletion> load(const ChatRequest& request) const;
  void store(const ChatRequest& request, const ChatCompletion& completion) const;
  std::filesystem::path path_for(const ChatRequest& request) const;
  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::size_t entry_count() const;

 private:
  std::filesystem::path dir_;
};

ChatCompletion chat_cached(ChatProvider& provider, const ResponseCache& cache,
                           const ChatRequest& request, const RetryPolicy& policy = {});

struct StageStats {
  std::int64_t requests = 0;        // completions asked for
  std::int64_t provider_calls = 0;  // completions that reached the provider
  std::int64_t cache_hits = 0;
  std::int64_t attempts = 0;
  std::int64_t prompt_chars = 0;
  std::int64_t completion_chars = 0;
};

struct GatewayOptions {
  RetryPolicy retry;
  std::optional<std::filesystem::path> cache_dir;
  int max_concurrency = 4;
  std::string default_model = "gpt-4o-2024-08-06";
};

/// Shared entry point for every prompting stage: cache lookup, bounded concurrency,
/// retries and per-stage call accounting.
class Gateway {
 public:
  Gateway(std::shared_ptr<ChatProvider> provider, GatewayOptions options);

  ChatCompletion complete(const ChatRequest& request, const std::string& stage);
  /// Request with the default model, sampling defaults and the shared system prompt.
  ChatRequest make_request(std::string system_prompt, std::string user_prompt,
                           std::optional<std::string> seed_tag = std::nullopt) const;

  std::map<std::string, StageStats> stats() const;
  StageStats totals() const;
  void reset_stats();

  const GatewayOptions& options() const noexcept { return options_; }
  ChatProvider& provider() noexcept { return *provider_; }

 private:
  std::shared_ptr<ChatProvider> provider_;
  GatewayOptions options_;
  std::optional<ResponseCache> cache_;
  std::counting_semaphore<256> slots_;
  mutable std::mutex stats_mutex_;
  std::map<std::string, StageStats> stats_;
};

}  // namespace schemabench::llm
