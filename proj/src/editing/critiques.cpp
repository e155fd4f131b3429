#include "schemabench/editing/critiques.hpp"

#include "schemabench/editing/datasets.hpp"
#include "schemabench/error.hpp"
#include "schemabench/llm/json_extract.hpp"
#include "schemabench/llm/structured.hpp"
#include "schemabench/prompts/render.hpp"
#include "schemabench/prompts/templates.hpp"
#include "schemabench/util/text.hpp"

namespace schemabench::editing {

namespace {

constexpr std::size_t kMinLeakLength = 16;

std::string parse_keyed_text(const std::string& text, const char* key) {
  const auto j = llm::extract_json_payload(text);
  if (!j.is_object() || !j.contains(key)) throw Error(Errc::ParseError, std::string("reply has no '") + key + "'");
  const auto& v = j.at(key);
  auto s = util::trim(v.is_string() ? v.get<std::string>() : util::dump_compact(v));
  if (s.empty()) throw Error(Errc::ParseError, std::string("empty '") + key + "'");
  return s;
}

Critique request_critique(llm::Gateway& gateway, const workflows::PromptPair& prompt, const char* key,
                          CritiqueProvenance provenance, const std::string& stage) {
  auto request = gateway.make_request(prompt.system, prompt.user);
  Critique c;
  c.text = llm::complete_structured(gateway, request, stage, Errc::ParseError, stage,
                                    [key](const std::string& text) { return parse_keyed_text(text, key); });
  c.provenance = provenance;
  c.source_model = request.model;
  return c;
}

void guard_prompt(const workflows::PromptPair& prompt, const std::optional<core::AspectSchema>& guard,
                  const std::string& allowed) {
  if (guard) check_no_leakage(prompt.user, *guard, allowed);
}

}  // namespace

std::string_view provenance_name(CritiqueProvenance p) noexcept {
  switch (p) {
    case CritiqueProvenance::Oracle: return "oracle";
    case CritiqueProvenance::Self: return "self";
    case CritiqueProvenance::Icl: return "icl";
    case CritiqueProvenance::Distilled: return "distilled";
  }
  return "?";
}

CritiqueProvenance parse_provenance(std::string_view name) {
  for (auto p : {CritiqueProvenance::Oracle, CritiqueProvenance::Self, CritiqueProvenance::Icl,
                 CritiqueProvenance::Distilled}) {
    if (provenance_name(p) == name) return p;
  }
  throw Error(Errc::InvalidParameter, "unknown critique mode '" + std::string(name) + "'");
}

void check_no_leakage(const std::string& prompt, const core::AspectSchema& reference, const std::string& allowed) {
  if (reference.empty()) return;
  auto forbid = [&](const std::string& needle, const std::string& what) {
    if (needle.empty() || util::contains(allowed, needle)) return;
    if (util::contains(prompt, needle)) throw Error(Errc::LeakageDetected, "prompt contains " + what);
  };
  forbid(core::serialize_schema(reference, core::JsonStyle::Indented), "the serialized reference schema");
  forbid(core::serialize_schema(reference, core::JsonStyle::Compact), "the serialized reference schema");
  for (const auto& a : reference.aspects()) {
    const core::AspectSchema single({a});
    forbid(core::serialize_schema(single, core::JsonStyle::Compact), "reference aspect '" + a.name + "'");
    auto indented = core::serialize_schema(single, core::JsonStyle::Indented);
    // the aspect's lines as they appear inside an indented multi-aspect object
    forbid(indented.substr(2, indented.size() - 4), "reference aspect '" + a.name + "'");
    if (a.definition.size() >= kMinLeakLength) forbid(a.definition, "the definition of reference aspect '" + a.name + "'");
  }
}

workflows::PromptPair oracle_critique_prompt(const core::AspectSchema& gen, const core::AspectSchema& ref,
                                             const std::string& papers) {
  return {std::string(prompts::kSystemPrompt),
          prompts::render(prompts::kOracleCritique, {{"gen_schema", core::serialize_schema(gen)},
                                                     {"ref_schema", core::serialize_schema(ref)},
                                                     {"papers", papers}})};
}

workflows::PromptPair self_critique_prompt(const core::AspectSchema& gen, const std::string& intent,
                                           const std::string& papers) {
  return {std::string(prompts::kSystemPrompt),
          prompts::render(prompts::kSelfCritique,
                          {{"intent", intent}, {"schema", core::serialize_schema(gen)}, {"papers", papers}})};
}

std::string render_critique_examples(const std::vector<CritiqueExample>& examples) {
  std::string out;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (i) out += "\n\n";
    out += "Example " + std::to_string(i + 1) + "\nIntent: " + examples[i].intent +
           "\nCreated schema: " + core::serialize_schema(examples[i].created_schema) +
           "\nCritique: " + examples[i].critique;
  }
  return out;
}

workflows::PromptPair icl_critique_prompt(const core::AspectSchema& gen, const std::string& intent,
                                          const std::string& papers, const std::vector<CritiqueExample>& examples) {
  return {std::string(prompts::kSystemPrompt),
          prompts::render(prompts::kIclCritique, {{"critique_text", render_critique_examples(examples)},
                                                  {"intent", intent},
                                                  {"org_schema", core::serialize_schema(gen)},
                                                  {"papers", papers}})};
}

workflows::PromptPair distilled_critique_prompt(const core::AspectSchema& gen, const std::string& intent,
                                                const std::string& papers) {
  return {std::string(prompts::kSystemPrompt), editor_user_prompt(intent, papers, gen)};
}

workflows::PromptPair apply_critique_prompt(const core::AspectSchema& schema, const Critique& critique,
                                            const std::string& intent, const std::string& papers) {
  return {std::string(prompts::kSystemPrompt),
          prompts::render(prompts::kApplyCritique, {{"intent", intent},
                                                    {"org_schema", core::serialize_schema(schema)},
                                                    {"feedback", critique.text},
                                                    {"papers", papers}})};
}

Critique oracle_critique(const core::AspectSchema& gen, const core::AspectSchema& ref, const std::string& papers,
                         llm::Gateway& gateway) {
  return request_critique(gateway, oracle_critique_prompt(gen, ref, papers), "critique", CritiqueProvenance::Oracle,
                          "critique_oracle");
}

Critique self_critique(const core::AspectSchema& gen, const std::string& intent, const std::string& papers,
                       llm::Gateway& gateway, const std::optional<core::AspectSchema>& guard) {
  const auto prompt = self_critique_prompt(gen, intent, papers);
  guard_prompt(prompt, guard, core::serialize_schema(gen) + "\n" + intent + "\n" + papers);
  return request_critique(gateway, prompt, "model_feedback", CritiqueProvenance::Self, "critique_self");
}

Critique icl_critique(const core::AspectSchema& gen, const std::string& intent, const std::string& papers,
                      const std::vector<CritiqueExample>& examples, llm::Gateway& gateway,
                      const std::optional<core::AspectSchema>& guard) {
  const auto prompt = icl_critique_prompt(gen, intent, papers, examples);
  guard_prompt(prompt, guard, core::serialize_schema(gen) + "\n" + intent + "\n" + papers);
  return request_critique(gateway, prompt, "critique", CritiqueProvenance::Icl, "critique_icl");
}

Critique distilled_critique(const core::AspectSchema& gen, const std::string& intent, const std::string& papers,
                            llm::Gateway& critic, const std::optional<core::AspectSchema>& guard) {
  const auto prompt = distilled_critique_prompt(gen, intent, papers);
  guard_prompt(prompt, guard, core::serialize_schema(gen) + "\n" + intent + "\n" + papers);
  auto request = critic.make_request(prompt.system, prompt.user);
  request.top_p = llm::kFineTunedTopP;
  Critique c;
  c.provenance = CritiqueProvenance::Distilled;
  c.source_model = request.model;
  // Fine-tuned critics answer with the bare critique; a {"critique": ...} object is also accepted.
  c.text = llm::complete_structured(critic, request, "critique_distilled", Errc::ParseError, "distilled critique",
                                    [](const std::string& text) {
                                      try {
                                        return parse_keyed_text(text, "critique");
                                      } catch (const Error&) {
                                      }
                                      auto s = util::trim(text);
                                      if (s.empty()) throw Error(Errc::ParseError, "empty critique");
                                      return s;
                                    });
  return c;
}

core::AspectSchema apply_critique(const core::AspectSchema& schema, const Critique& critique, const std::string& intent,
                                  const std::string& papers, llm::Gateway& gateway) {
  schema.validate(core::ValidationMode::Relaxed);
  const auto prompt = apply_critique_prompt(schema, critique, intent, papers);
  auto request = gateway.make_request(prompt.system, prompt.user);
  return llm::complete_structured(gateway, request, "apply_critique", Errc::GenerationParseError, "apply critique",
                                  [](const std::string& text) {
                                    return workflows::parse_schema_reply(text, core::ValidationMode::Strict);
                                  });
}

core::AspectSchema apply_editor(llm::Gateway& editor, const core::AspectSchema& schema, const std::string& intent,
                                const std::string& papers) {
  auto request = editor.make_request(std::string(prompts::kSystemPrompt), editor_user_prompt(intent, papers, schema));
  request.top_p = llm::kFineTunedTopP;
  return llm::complete_structured(editor, request, "editor", Errc::GenerationParseError, "editor",
                                  [](const std::string& text) {
                                    return workflows::parse_schema_reply(text, core::ValidationMode::Strict);
                                  });
}

IclCritiqueSource::IclCritiqueSource(std::vector<SilverEntry> silver, embedding::EmbeddingBackend& embedder,
                                     llm::Gateway& oracle, std::size_t k)
    : silver_(std::move(silver)), embedder_(embedder), oracle_(oracle), k_(k) {
  if (silver_.empty()) throw Error(Errc::EmptyCorpus, "ICL critique source needs silver entries");
  if (k_ == 0) throw Error(Errc::InvalidParameter, "k must be at least 1");
  std::vector<std::string> intents;
  for (const auto& e : silver_) {
    if (!e.instance.intent) throw Error(Errc::MissingIntent, "silver " + e.instance.instance_id + " has no intent");
    if (!e.instance.reference_schema) {
      throw Error(Errc::MissingReference, "silver " + e.instance.instance_id + " has no reference");
    }
    intents.push_back(*e.instance.intent);
  }
  intent_vectors_ = embedding::embed_batch(embedder_, intents);
}

std::vector<CritiqueExample> IclCritiqueSource::examples_for(const std::string& intent,
                                                             const std::string& exclude_instance_id) {
  std::vector<embedding::EmbeddingVector> pool;
  std::vector<std::size_t> pool_index;
  for (std::size_t i = 0; i < silver_.size(); ++i) {
    if (!exclude_instance_id.empty() && silver_[i].instance.instance_id == exclude_instance_id) continue;
    pool.push_back(intent_vectors_[i]);
    pool_index.push_back(i);
  }
  if (pool.empty()) throw Error(Errc::EmptyCorpus, "no silver entries left for retrieval");
  const std::vector<std::string> query{intent};
  const auto q = embedding::embed_batch(embedder_, query);
  std::vector<CritiqueExample> out;
  for (auto r : embedding::top_k_indices(q.front(), pool, k_)) {
    const auto& e = silver_[pool_index[r]];
    const auto critique = oracle_critique(e.candidate, *e.instance.reference_schema,
                                          prompts::render_papers(e.instance.papers), oracle_);
    out.push_back({e.instance.instance_id, *e.instance.intent, e.candidate, critique.text});
  }
  return out;
}

}  // namespace schemabench::editing
