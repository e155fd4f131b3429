#include "schemabench/cli/config.hpp"

#include <cstdlib>
#include <functional>
#include <map>

#include "schemabench/error.hpp"

namespace schemabench::cli {

namespace {

[[noreturn]] void bad_type(const std::string& key, const char* want) {
  throw Error(Errc::ConfigError, "config key '" + key + "' must be " + want);
}

std::string want_string(const std::string& key, const util::TomlValue& v) {
  if (auto s = v.as_string()) return *s;
  bad_type(key, "a string");
}

std::int64_t want_int(const std::string& key, const util::TomlValue& v, std::int64_t min) {
  auto i = v.as_int();
  if (!i) bad_type(key, "an integer");
  if (*i < min) throw Error(Errc::ConfigError, "config key '" + key + "' must be >= " + std::to_string(min));
  return *i;
}

bool want_bool(const std::string& key, const util::TomlValue& v) {
  if (auto b = v.as_bool()) return *b;
  bad_type(key, "a boolean");
}

}  // namespace

void RunConfig::apply_file(const util::TomlTable& table) {
  using Setter = std::function<void(const std::string&, const util::TomlValue&)>;
  auto str = [](std::string& field) -> Setter {
    return [&field](const std::string& k, const util::TomlValue& v) { field = want_string(k, v); };
  };
  auto size = [](std::size_t& field, std::int64_t min) -> Setter {
    return [&field, min](const std::string& k, const util::TomlValue& v) {
      field = static_cast<std::size_t>(want_int(k, v, min));
    };
  };
  auto integer = [](int& field, std::int64_t min) -> Setter {
    return [&field, min](const std::string& k, const util::TomlValue& v) {
      field = static_cast<int>(want_int(k, v, min));
    };
  };
  auto flag = [](bool& field) -> Setter {
    return [&field](const std::string& k, const util::TomlValue& v) { field = want_bool(k, v); };
  };
  const std::map<std::string, Setter, std::less<>> setters{
      {"seed", [this](const std::string& k, const util::TomlValue& v) {
         seed = static_cast<std::uint64_t>(want_int(k, v, 0));
       }},
      {"cache_dir", [this](const std::string& k, const util::TomlValue& v) { cache_dir = want_string(k, v); }},
      {"max_concurrency", integer(max_concurrency, 1)},
      {"mock_provider",
       [this](const std::string& k, const util::TomlValue& v) { mock_provider = want_string(k, v); }},
      {"provider.base_url", str(base_url)},
      {"provider.api_key", str(api_key)},
      {"provider.model", str(model)},
      {"provider.max_retries", integer(max_retries, 0)},
      {"provider.timeout_s", integer(timeout_s, 1)},
      {"embedding.backend", str(embedding_backend)},
      {"embedding.model", str(embedding_model)},
      {"embedding.dimension", size(embedding_dimension, 2)},
      {"eval.scorer", str(scorer)},
      {"eval.bertscore_url", str(bertscore_url)},
      {"eval.threshold_lower", integer(threshold_lower, 0)},
      {"eval.threshold_upper", integer(threshold_upper, 0)},
      {"eval.normalize_auc", flag(normalize_auc)},
      {"editing.revision_model", str(revision_model)},
      {"editing.editor_endpoint", str(editor_endpoint)},
      {"editing.editor_model", str(editor_model)},
      {"editing.editor_api_key", str(editor_api_key)},
      {"intents.candidates", size(intent_candidates, 1)},
      {"generation.full_text_budget", size(full_text_budget, 1)},
      {"generation.icl_count", size(icl_count, 1)},
      {"lloom.min_cluster_size", size(lloom_min_cluster_size, 2)},
      {"lloom.min_samples", [this](const std::string& k, const util::TomlValue& v) {
         lloom_min_samples = static_cast<std::size_t>(want_int(k, v, 1));
       }},
      {"lloom.concepts_per_cluster", size(lloom_concepts_per_cluster, 1)},
      {"lloom.intent_in_summarize", flag(lloom_intent_in_summarize)},
      {"lloom.intent_filter", flag(lloom_intent_filter)},
      {"lloom.generic_filter", flag(lloom_generic_filter)},
      {"lloom.merge", flag(lloom_merge)},
      {"sequential.passes", size(sequential_passes, 1)},
      {"sequential.batch_size", size(sequential_batch_size, 1)},
      {"clean.min_papers", size(clean_min_papers, 0)},
      {"clean.min_aspects", size(clean_min_aspects, 0)},
      {"clean.rule", str(clean_rule)},
  };
  for (const auto& [key, value] : table) {
    auto it = setters.find(key);
    if (it == setters.end()) throw Error(Errc::ConfigError, "unknown config key '" + key + "'");
    it->second(key, value);
  }
}

void RunConfig::apply_env() {
  if (const char* k = std::getenv("SCHEMA_BENCH_API_KEY"); k && *k) api_key = k;
  if (const char* u = std::getenv("SCHEMA_BENCH_BASE_URL"); u && *u) base_url = u;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(Errc::ConfigError, m); };
  if (max_concurrency < 1 || max_concurrency > 256) fail("max_concurrency must be in [1, 256]");
  if (embedding_backend != "hash" && embedding_backend != "remote") {
    fail("embedding.backend must be 'hash' or 'remote'");
  }
  if (scorer != "embedding" && scorer != "exact" && scorer != "bertscore-http") {
    fail("eval.scorer must be 'embedding', 'exact' or 'bertscore-http'");
  }
  if (scorer == "bertscore-http" && bertscore_url.empty()) fail("eval.bertscore_url is required for bertscore-http");
  if (threshold_lower >= threshold_upper || threshold_upper > 100) {
    fail("thresholds must satisfy 0 <= lower < upper <= 100");
  }
  if (clean_rule != "and" && clean_rule != "or") fail("clean.rule must be 'and' or 'or'");
}

util::Json RunConfig::snapshot() const {
  util::Json j = util::Json::object();
  j["seed"] = seed;
  j["cache_dir"] = cache_dir ? util::Json(cache_dir->string()) : util::Json(nullptr);
  j["max_concurrency"] = max_concurrency;
  j["mock_provider"] = mock_provider ? util::Json(mock_provider->string()) : util::Json(nullptr);
  j["provider"] = {{"base_url", mock_provider ? "" : base_url},
                   {"model", model},
                   {"api_key_set", !api_key.empty()},
                   {"max_retries", max_retries},
                   {"timeout_s", timeout_s}};
  j["embedding"] = {{"backend", embedding_backend}, {"model", embedding_model}, {"dimension", embedding_dimension}};
  j["eval"] = {{"scorer", scorer},
               {"bertscore_url", bertscore_url},
               {"threshold_lower", threshold_lower},
               {"threshold_upper", threshold_upper},
               {"normalize_auc", normalize_auc}};
  j["editing"] = {{"revision_model", revision_model.empty() ? model : revision_model},
                  {"editor_endpoint", editor_endpoint},
                  {"editor_model", editor_model}};
  j["intents"] = {{"candidates", intent_candidates}};
  j["generation"] = {{"full_text_budget", full_text_budget}, {"icl_count", icl_count}};
  j["lloom"] = {{"min_cluster_size", lloom_min_cluster_size},
                {"min_samples", lloom_min_samples ? util::Json(*lloom_min_samples) : util::Json(nullptr)},
                {"concepts_per_cluster", lloom_concepts_per_cluster},
                {"intent_in_summarize", lloom_intent_in_summarize},
                {"intent_filter", lloom_intent_filter},
                {"generic_filter", lloom_generic_filter},
                {"merge", lloom_merge}};
  j["sequential"] = {{"passes", sequential_passes}, {"batch_size", sequential_batch_size}};
  j["clean"] = {{"min_papers", clean_min_papers}, {"min_aspects", clean_min_aspects}, {"rule", clean_rule}};
  return j;
}

}  // namespace schemabench::cli
