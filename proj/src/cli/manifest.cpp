#include "schemabench/cli/manifest.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>

#include "schemabench/corpus/corpus.hpp"
#include "schemabench/error.hpp"
#include "schemabench/llm/chat.hpp"

namespace schemabench::cli {

std::string timestamp_utc() {
  std::time_t t = 0;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (*end != '\0' || v < 0) throw Error(Errc::ConfigError, "SOURCE_DATE_EPOCH must be a non-negative integer");
    t = static_cast<std::time_t>(v);
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string file_digest(const std::filesystem::path& path) {
  return "sha256:" + llm::sha256_hex(corpus::read_file(path));
}

RunManifest::RunManifest(std::vector<std::string> argv, std::string command)
    : argv_(std::move(argv)), command_(std::move(command)), started_at_(timestamp_utc()) {}

void RunManifest::add_input(const std::string& role, const std::filesystem::path& path) {
  inputs_.push_back({{"role", role}, {"path", path.string()}, {"digest", file_digest(path)}});
}

void RunManifest::add_output(const std::filesystem::path& path) {
  outputs_.push_back({{"path", path.string()}, {"digest", file_digest(path)}});
}

void RunManifest::set_provider(const std::string& name, const std::string& model) {
  provider_ = {{"name", name}, {"model", model}};
}

void RunManifest::add_model(const std::string& role, const std::string& model) { models_[role] = model; }

void RunManifest::set_seed(const std::string& name, std::uint64_t value) { seeds_[name] = value; }

void RunManifest::merge_stats(const std::map<std::string, llm::StageStats>& stats) {
  for (const auto& [stage, s] : stats) {
    auto& d = stats_[stage];
    d.requests += s.requests;
    d.provider_calls += s.provider_calls;
    d.cache_hits += s.cache_hits;
    d.attempts += s.attempts;
    d.prompt_chars += s.prompt_chars;
    d.completion_chars += s.completion_chars;
  }
}

void RunManifest::note(const std::string& key, util::Json value) { notes_[key] = std::move(value); }

util::Json RunManifest::to_json() const {
  util::Json stages = util::Json::object();
  std::int64_t calls = 0;
  for (const auto& [stage, s] : stats_) {
    stages[stage] = {{"requests", s.requests},
                     {"provider_calls", s.provider_calls},
                     {"cache_hits", s.cache_hits},
                     {"attempts", s.attempts}};
    calls += s.provider_calls;
  }
  util::Json j = util::Json::object();
  j["command"] = command_;
  j["argv"] = argv_;
  j["config"] = config_;
  j["inputs"] = inputs_;
  j["outputs"] = outputs_;
  j["provider"] = provider_;
  j["models"] = models_;
  j["seeds"] = seeds_;
  j["started_at"] = started_at_;
  j["finished_at"] = finished_at_;
  j["stages"] = std::move(stages);
  j["provider_calls"] = calls;
  if (!notes_.empty()) j["notes"] = notes_;
  return j;
}

std::filesystem::path RunManifest::write_for(const std::filesystem::path& primary_output) {
  finished_at_ = timestamp_utc();
  auto path = primary_output;
  path += ".manifest.json";
  corpus::write_file(path, util::dump_indented(to_json(), 2) + "\n");
  return path;
}

}  // namespace schemabench::cli
