#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "schemabench/util/json.hpp"
#include "schemabench/util/toml_lite.hpp"

namespace schemabench::cli {

/// Resolved run configuration. Precedence: flags > environment > config file > defaults.
struct RunConfig {
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> cache_dir;
  int max_concurrency = 4;
  std::optional<std::filesystem::path> mock_provider;

  std::string base_url = "https://api.openai.com/v1";
  std::string api_key;
  std::string model = "gpt-4o-2024-08-06";
  int max_retries = 5;
  int timeout_s = 120;

  std::string embedding_backend = "hash";  // hash | remote
  std::string embedding_model = "text-embedding-ada-002";
  std::size_t embedding_dimension = 256;

  std::string scorer = "embedding";  // embedding | exact | bertscore-http
  std::string bertscore_url;
  int threshold_lower = 40;  // percent
  int threshold_upper = 100;
  bool normalize_auc = false;

  std::string revision_model;  // empty: same as `model`
  std::string editor_endpoint;
  std::string editor_model = "schema-editor";
  std::string editor_api_key;

  std::size_t intent_candidates = 5;
  std::size_t full_text_budget = 40000;
  std::size_t icl_count = 5;

  std::size_t lloom_min_cluster_size = 5;
  std::optional<std::size_t> lloom_min_samples;
  std::size_t lloom_concepts_per_cluster = 1;
  bool lloom_intent_in_summarize = false;
  bool lloom_intent_filter = true;
  bool lloom_generic_filter = true;
  bool lloom_merge = true;

  std::size_t sequential_passes = 5;
  std::size_t sequential_batch_size = 4;

  std::size_t clean_min_papers = 5;
  std::size_t clean_min_aspects = 4;
  std::string clean_rule = "and";

  /// Applies every key of a parsed config file; unknown keys and wrong types are ConfigError.
  void apply_file(const util::TomlTable& table);
  /// SCHEMA_BENCH_API_KEY and SCHEMA_BENCH_BASE_URL.
  void apply_env();
  void validate() const;

  /// Snapshot for run manifests; secrets are reported only as present/absent.
  util::Json snapshot() const;
};

}  // namespace schemabench::cli
