#include "schemabench/llm/gateway.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <atomic>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include "schemabench/error.hpp"
#include "schemabench/util/rng.hpp"

namespace schemabench::llm {

namespace fs = std::filesystem;
using util::Json;

namespace {

bool retryable(int status) { return status == 0 || status == 429 || status >= 500; }

std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int retry_index,
                                        util::Rng& rng) {
  double ms = static_cast<double>(policy.base_backoff.count()) * std::pow(2.0, retry_index);
  ms = std::min(ms, static_cast<double>(policy.max_backoff.count()));
  if (policy.jitter) ms *= 0.5 + 0.5 * rng.uniform01();
  return std::chrono::milliseconds(static_cast<std::int64_t>(ms));
}

[[noreturn]] void raise_final(int status, const std::string& body, int attempts) {
  if (status == 401 || status == 403) throw ProviderFailure(Errc::AuthError, status, body, attempts);
  if (status == 429) throw ProviderFailure(Errc::RateLimited, status, body, attempts);
  if (status == 0) throw ProviderFailure(Errc::TransportError, status, body, attempts);
  throw ProviderFailure(Errc::ProviderError, status, body, attempts);
}

}  // namespace

ChatCompletion chat(ChatProvider& provider, const ChatRequest& request, const RetryPolicy& policy) {
  validate_request(request);
  util::Rng jitter_rng(util::fnv1a64(request_cache_key(request)));
  const int max_attempts = 1 + std::max(0, policy.max_retries);
  for (int attempt = 1;; ++attempt) {
    try {
      ChatCompletion completion = provider.complete(request);
      completion.attempts = attempt;
      if (completion.model.empty()) completion.model = request.model;
      return completion;
    } catch (const AttemptFailure& failure) {
      if (!retryable(failure.status()) || attempt >= max_attempts) {
        raise_final(failure.status(), failure.body(), attempt);
      }
      auto delay = backoff_delay(policy, attempt - 1, jitter_rng);
      if (policy.sleep) {
        policy.sleep(delay);
      } else {
        std::this_thread::sleep_for(delay);
      }
    }
  }
}

ResponseCache::ResponseCache(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(Errc::CacheIoError, "cannot create cache directory " + dir_.string() + ": " + ec.message());
}

fs::path ResponseCache::path_for(const ChatRequest& request) const {
  const std::string key = request_cache_key(request);
  return dir_ / key.substr(0, 2) / (key + ".json");
}

std::optional<ChatCompletion> ResponseCache::load(const ChatRequest& request) const {
  const fs::path path = path_for(request);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    Json entry = Json::parse(buffer.str());
    return completion_from_json(entry.at("completion"));
  } catch (const std::exception& e) {
    throw Error(Errc::CacheIoError, "corrupt cache entry " + path.string() + ": " + e.what());
  }
}

void ResponseCache::store(const ChatRequest& request, const ChatCompletion& completion) const {
  static std::atomic<std::uint64_t> counter{0};
  const fs::path path = path_for(request);
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(Errc::CacheIoError, "cannot create " + path.parent_path().string());

  Json entry = Json::object();
  entry["request"] = canonical_request_json(request);
  entry["completion"] = completion_to_json(completion);
  entry["timestamp"] = static_cast<std::int64_t>(std::time(nullptr));

  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << util::dump_indented(entry, 2) << '\n';
    if (!out) throw Error(Errc::CacheIoError, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(Errc::CacheIoError, "rename failed for " + path.string());
  }
}

std::size_t ResponseCache::entry_count() const {
  std::size_t count = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir_)) {
    if (e.is_regular_file() && e.path().extension() == ".json") ++count;
  }
  return count;
}

ChatCompletion chat_cached(ChatProvider& provider, const ResponseCache& cache,
                           const ChatRequest& request, const RetryPolicy& policy) {
  validate_request(request);
  if (auto hit = cache.load(request)) {
    hit->from_cache = true;
    hit->attempts = 0;
    return *hit;
  }
  ChatCompletion completion = chat(provider, request, policy);
  cache.store(request, completion);
  return completion;
}

Gateway::Gateway(std::shared_ptr<ChatProvider> provider, GatewayOptions options)
    : provider_(std::move(provider)),
      options_(std::move(options)),
      slots_(std::clamp(options_.max_concurrency, 1, 256)) {
  if (options_.cache_dir) cache_.emplace(*options_.cache_dir);
}

ChatRequest Gateway::make_request(std::string system_prompt, std::string user_prompt,
                                  std::optional<std::string> seed_tag) const {
  ChatRequest r;
  r.model = options_.default_model;
  r.system_prompt = std::move(system_prompt);
  r.user_prompt = std::move(user_prompt);
  r.seed_tag = std::move(seed_tag);
  return r;
}

ChatCompletion Gateway::complete(const ChatRequest& request, const std::string& stage) {
  validate_request(request);
  ChatCompletion completion;
  bool hit = false;
  if (cache_) {
    if (auto cached = cache_->load(request)) {
      completion = *cached;
      completion.from_cache = true;
      hit = true;
    }
  }
  if (!hit) {
    slots_.acquire();
    try {
      completion = chat(*provider_, request, options_.retry);
    } catch (...) {
      slots_.release();
      std::lock_guard lock(stats_mutex_);
      auto& s = stats_[stage];
      ++s.requests;
      ++s.provider_calls;
      s.prompt_chars += static_cast<std::int64_t>(request.system_prompt.size() + request.user_prompt.size());
      throw;
    }
    slots_.release();
    if (cache_) cache_->store(request, completion);
  }
  std::lock_guard lock(stats_mutex_);
  auto& s = stats_[stage];
  ++s.requests;
  if (hit) {
    ++s.cache_hits;
  } else {
    ++s.provider_calls;
    s.attempts += completion.attempts;
  }
  s.prompt_chars += static_cast<std::int64_t>(request.system_prompt.size() + request.user_prompt.size());
  s.completion_chars += static_cast<std::int64_t>(completion.text.size());
  return completion;
}

std::map<std::string, StageStats> Gateway::stats() const {
  std::lock_guard lock(stats_mutex_);
  return stats_;
}

StageStats Gateway::totals() const {
  std::lock_guard lock(stats_mutex_);
  StageStats t;
  for (const auto& [_, s] : stats_) {
    t.requests += s.requests;
    t.provider_calls += s.provider_calls;
    t.cache_hits += s.cache_hits;
    t.attempts += s.attempts;
    t.prompt_chars += s.prompt_chars;
    t.completion_chars += s.completion_chars;
  }
  return t;
}

void Gateway::reset_stats() {
  std::lock_guard lock(stats_mutex_);
  stats_.clear();
}

}  // namespace schemabench::llm
