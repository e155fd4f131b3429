#include "schemabench/workflows/lloom.hpp"

#include <algorithm>
#include <set>

#include "schemabench/error.hpp"
#include "schemabench/llm/json_extract.hpp"
#include "schemabench/llm/structured.hpp"
#include "schemabench/prompts/templates.hpp"
#include "schemabench/util/text.hpp"
#include "schemabench/workflows/common.hpp"

namespace schemabench::workflows {

namespace {

std::string as_text(const util::Json& v) { return v.is_string() ? v.get<std::string>() : util::dump_compact(v); }

const util::Json& required_array(const util::Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_array()) {
    throw Error(Errc::ParseError, std::string("reply has no '") + key + "' list");
  }
  return j.at(key);
}

std::vector<std::string> parse_bullets(const std::string& text) {
  const auto payload = llm::extract_json_payload(text);
  std::vector<std::string> out;
  for (const auto& b : required_array(payload, "bullets")) {
    auto s = util::trim(as_text(b));
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

std::vector<ConceptPattern> parse_patterns(const std::string& text) {
  const auto payload = llm::extract_json_payload(text);
  std::vector<ConceptPattern> out;
  for (const auto& p : required_array(payload, "patterns")) {
    if (!p.is_object() || !p.contains("name")) throw Error(Errc::ParseError, "pattern without a name");
    ConceptPattern c{util::trim(as_text(p.at("name"))), p.contains("prompt") ? util::trim(as_text(p.at("prompt"))) : "", {}};
    if (c.name.empty() || c.prompt.empty()) throw Error(Errc::ParseError, "pattern with empty name or prompt");
    if (p.contains("example_ids") && p.at("example_ids").is_array()) {
      for (const auto& id : p.at("example_ids")) c.example_ids.push_back(util::trim(as_text(id)));
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<std::string> parse_remove(const std::string& text) {
  const auto payload = llm::extract_json_payload(text);
  std::vector<std::string> out;
  for (const auto& r : required_array(payload, "remove")) out.push_back(util::trim(as_text(r)));
  return out;
}

struct MergeOp {
  std::vector<std::string> originals;
  ConceptPattern merged;
};

std::vector<MergeOp> parse_merges(const std::string& text) {
  const auto payload = llm::extract_json_payload(text);
  std::vector<MergeOp> out;
  for (const auto& m : required_array(payload, "merge")) {
    if (!m.is_object() || !m.contains("original_themes") || !m.at("original_themes").is_array() ||
        !m.contains("merged_theme_name")) {
      throw Error(Errc::ParseError, "malformed merge entry");
    }
    MergeOp op;
    for (const auto& o : m.at("original_themes")) op.originals.push_back(util::trim(as_text(o)));
    op.merged.name = util::trim(as_text(m.at("merged_theme_name")));
    op.merged.prompt = m.contains("merged_theme_prompt") ? util::trim(as_text(m.at("merged_theme_prompt"))) : "";
    if (op.merged.name.empty()) throw Error(Errc::ParseError, "merge without a new name");
    out.push_back(std::move(op));
  }
  return out;
}

std::string render_examples(const std::vector<std::size_t>& members, const std::vector<std::string>& bullets) {
  std::string out;
  for (auto i : members) {
    util::Json j = util::Json::object();
    j["example_id"] = std::to_string(i + 1);
    j["example_text"] = bullets[i];
    if (!out.empty()) out += '\n';
    out += util::dump_compact(j);
  }
  return out;
}

std::string render_concept_dict(const std::vector<ConceptPattern>& concepts) {
  util::Json j = util::Json::object();
  for (const auto& c : concepts) j[c.name] = c.prompt;
  return util::dump_indented(j, 4);
}

void remove_named(std::vector<ConceptPattern>& pool, const std::vector<std::string>& names) {
  const std::set<std::string> drop(names.begin(), names.end());
  std::erase_if(pool, [&](const ConceptPattern& c) { return drop.count(c.name) > 0; });
}

void require_survivors(const std::vector<ConceptPattern>& pool, const std::string& stage) {
  if (pool.empty()) throw Error(Errc::NoConceptsSurvive, "no concepts left after " + stage);
}

template <typename Parse>
auto stage_call(llm::Gateway& gateway, const std::string& user, const std::string& stage, const std::string& context,
                Parse&& parse, Errc failure = Errc::ParseError) {
  auto request = gateway.make_request(std::string(prompts::kSystemPrompt), user);
  return llm::complete_structured(gateway, request, stage, failure, stage + " (" + context + ")",
                                  std::forward<Parse>(parse));
}

}  // namespace

std::string render_concept_list(const std::vector<ConceptPattern>& concepts) {
  std::string out;
  for (const auto& c : concepts) {
    if (!out.empty()) out += '\n';
    out += "- " + c.name + ": " + c.prompt;
  }
  return out;
}

std::vector<std::string> summarize_paper(const core::PaperRecord& paper, const std::optional<std::string>& intent,
                                         std::size_t full_text_budget, llm::Gateway& gateway, const std::string& stage) {
  if (!paper.full_text) throw Error(Errc::MissingFullText, "paper " + paper.paper_id + " has no full text");
  const std::string ex = paper.title + "\n\n" + util::truncate_utf8(*paper.full_text, full_text_budget);
  const auto user = intent ? prompts::render(prompts::kSummarizeWithIntent, {{"ex", ex}, {"goal", *intent}})
                           : prompts::render(prompts::kSummarize, {{"ex", ex}});
  return stage_call(gateway, user, stage, paper.paper_id, parse_bullets);
}

core::AspectSchema lloom_generate(const core::TableInstance& instance, const LloomConfig& cfg, llm::Gateway& gateway,
                                  embedding::EmbeddingBackend& embedder, LloomTrace* trace) {
  if (cfg.min_cluster_size < 2) throw Error(Errc::InvalidParameter, "min_cluster_size must be at least 2");
  if (cfg.concepts_per_cluster < 1) throw Error(Errc::InvalidParameter, "concepts_per_cluster must be at least 1");
  const bool needs_intent = cfg.intent_in_summarize || cfg.intent_filter || !cfg.all_concepts();
  if (needs_intent && (!instance.intent || instance.intent->empty())) {
    throw Error(Errc::MissingIntent, "instance " + instance.instance_id + " has no intent");
  }
  for (const auto& p : instance.papers) {
    if (!p.full_text) throw Error(Errc::MissingFullText, "paper " + p.paper_id + " has no full text");
  }
  LloomTrace local;
  LloomTrace& t = trace ? *trace : local;
  const auto& id = instance.instance_id;

  // 1. summarize
  t.stages.push_back("summarize");
  for (const auto& p : instance.papers) {
    auto bullets = summarize_paper(p, cfg.intent_in_summarize ? instance.intent : std::nullopt, cfg.full_text_budget,
                                   gateway, "lloom_summarize");
    t.bullets.insert(t.bullets.end(), bullets.begin(), bullets.end());
  }
  if (t.bullets.empty()) throw Error(Errc::NoConceptsSurvive, "summaries produced no bullets for " + id);

  // 2-3. embed and cluster; noise bullets are dropped
  t.stages.push_back("cluster");
  const auto vectors = embedding::embed_batch(embedder, t.bullets);
  const auto assignment = clustering::hdbscan(vectors, {cfg.min_cluster_size, cfg.min_samples});
  t.labels = assignment.labels;
  if (assignment.cluster_count == 0) throw Error(Errc::NoConceptsSurvive, "clustering found no clusters for " + id);

  // 4. synthesize one request per cluster
  t.stages.push_back("synthesize");
  std::vector<ConceptPattern> pool;
  for (int c = 0; c < assignment.cluster_count; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < t.labels.size(); ++i) {
      if (t.labels[i] == c) members.push_back(i);
    }
    const auto user = prompts::render(prompts::kSynthesizePatterns,
                                      {{"examples", render_examples(members, t.bullets)},
                                       {"n_concepts", std::to_string(cfg.concepts_per_cluster)},
                                       {"seeding_phrase", ""}});
    for (auto& pattern : stage_call(gateway, user, "lloom_synthesize", id + " cluster " + std::to_string(c), parse_patterns)) {
      // Later patterns reusing an existing name are dropped so names stay unique.
      const bool taken = std::any_of(pool.begin(), pool.end(), [&](const ConceptPattern& x) { return x.name == pattern.name; });
      if (!taken) pool.push_back(std::move(pattern));
    }
  }
  t.synthesized = pool;
  require_survivors(pool, "synthesis");

  // 5. generic filter
  if (cfg.generic_filter) {
    t.stages.push_back("generic_filter");
    t.generic_removed = stage_call(gateway, prompts::render(prompts::kReviewRemove, {{"concepts", render_concept_list(pool)}}),
                                   "lloom_generic_filter", id, parse_remove);
    remove_named(pool, t.generic_removed);
    require_survivors(pool, "the generic filter");
  }

  // 6. intent filter
  if (cfg.intent_filter) {
    t.stages.push_back("intent_filter");
    t.intent_removed = stage_call(
        gateway, prompts::render(prompts::kReviewRemoveSeed, {{"concepts", render_concept_dict(pool)}, {"seed", *instance.intent}}),
        "lloom_intent_filter", id, parse_remove);
    remove_named(pool, t.intent_removed);
    require_survivors(pool, "the intent filter");
  }

  // 7. merge
  if (cfg.merge) {
    t.stages.push_back("merge");
    const auto merges = stage_call(gateway, prompts::render(prompts::kReviewMerge, {{"concepts", render_concept_list(pool)}}),
                                   "lloom_merge", id, parse_merges);
    for (const auto& op : merges) {
      std::vector<std::size_t> hits;
      for (const auto& name : op.originals) {
        for (std::size_t i = 0; i < pool.size(); ++i) {
          if (pool[i].name == name && std::find(hits.begin(), hits.end(), i) == hits.end()) hits.push_back(i);
        }
      }
      if (hits.size() < 2) continue;  // a merge must name two surviving concepts
      std::sort(hits.begin(), hits.end());
      ConceptPattern merged = op.merged;
      for (auto i : hits) merged.example_ids.insert(merged.example_ids.end(), pool[i].example_ids.begin(), pool[i].example_ids.end());
      for (auto it = hits.rbegin(); it != hits.rend(); ++it) pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(*it));
      const bool taken = std::any_of(pool.begin(), pool.end(), [&](const ConceptPattern& x) { return x.name == merged.name; });
      if (!taken) pool.insert(pool.begin() + static_cast<std::ptrdiff_t>(hits.front()), std::move(merged));
    }
    // A merged theme may not reintroduce a concept the intent filter rejected.
    remove_named(pool, t.intent_removed);
    require_survivors(pool, "merging");
  }
  t.final_concepts = pool;

  // 8. concepts to schema
  t.stages.push_back("schema");
  core::AspectSchema schema;
  if (cfg.all_concepts()) {
    for (const auto& c : pool) schema.push_back({c.name, c.prompt, "string values"});
  } else {
    const auto user = prompts::render(prompts::kConceptsToSchema,
                                      {{"concepts", render_concept_list(pool)}, {"user_goal", *instance.intent}});
    schema = stage_call(gateway, user, "lloom_schema", id,
                        [](const std::string& text) { return parse_schema_reply(text, core::ValidationMode::Relaxed); },
                        Errc::GenerationParseError);
  }
  std::vector<core::Aspect> kept;
  for (const auto& a : schema.aspects()) {
    if (std::find(t.intent_removed.begin(), t.intent_removed.end(), a.name) == t.intent_removed.end()) kept.push_back(a);
  }
  core::AspectSchema final_schema(std::move(kept));
  try {
    final_schema.validate(core::ValidationMode::Strict);
  } catch (const Error& e) {
    throw Error(Errc::GenerationParseError, "lloom_schema (" + id + "): " + e.what());
  }
  return final_schema;
}

}  // namespace schemabench::workflows
