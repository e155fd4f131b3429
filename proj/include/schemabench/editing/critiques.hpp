#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "schemabench/core/types.hpp"
#include "schemabench/embedding/embedding.hpp"
#include "schemabench/llm/gateway.hpp"
#include "schemabench/workflows/common.hpp"

namespace schemabench::editing {

enum class CritiqueProvenance { Oracle, Self, Icl, Distilled };

std::string_view provenance_name(CritiqueProvenance p) noexcept;
CritiqueProvenance parse_provenance(std::string_view name);

struct Critique {
  std::string text;
  CritiqueProvenance provenance = CritiqueProvenance::Oracle;
  std::string source_model;
};

/// Throws LeakageDetected when `prompt` carries reference material: the serialized
/// reference, or any reference-only aspect (its JSON, or a definition of 16+ characters)
/// that the legitimate inputs (`allowed`) do not already contain.
void check_no_leakage(const std::string& prompt, const core::AspectSchema& reference, const std::string& allowed);

workflows::PromptPair oracle_critique_prompt(const core::AspectSchema& gen, const core::AspectSchema& ref,
                                             const std::string& papers);
workflows::PromptPair self_critique_prompt(const core::AspectSchema& gen, const std::string& intent,
                                           const std::string& papers);

/// Retrieved neighbour rendered into the in-context critique prompt.
struct CritiqueExample {
  std::string instance_id;
  std::string intent;
  core::AspectSchema created_schema;
  std::string critique;
};

std::string render_critique_examples(const std::vector<CritiqueExample>& examples);
workflows::PromptPair icl_critique_prompt(const core::AspectSchema& gen, const std::string& intent,
                                          const std::string& papers, const std::vector<CritiqueExample>& examples);
workflows::PromptPair distilled_critique_prompt(const core::AspectSchema& gen, const std::string& intent,
                                                const std::string& papers);
workflows::PromptPair apply_critique_prompt(const core::AspectSchema& schema, const Critique& critique,
                                            const std::string& intent, const std::string& papers);

Critique oracle_critique(const core::AspectSchema& gen, const core::AspectSchema& ref, const std::string& papers,
                         llm::Gateway& gateway);

/// `guard` is the instance reference when known; the rendered prompt is checked against it.
Critique self_critique(const core::AspectSchema& gen, const std::string& intent, const std::string& papers,
                       llm::Gateway& gateway, const std::optional<core::AspectSchema>& guard = std::nullopt);

Critique icl_critique(const core::AspectSchema& gen, const std::string& intent, const std::string& papers,
                      const std::vector<CritiqueExample>& examples, llm::Gateway& gateway,
                      const std::optional<core::AspectSchema>& guard = std::nullopt);

/// Critique from a hosted fine-tuned critic speaking the editor chat format.
Critique distilled_critique(const core::AspectSchema& gen, const std::string& intent, const std::string& papers,
                            llm::Gateway& critic, const std::optional<core::AspectSchema>& guard = std::nullopt);

/// Revises `schema` with the critique; strict parse with one re-ask, then GenerationParseError.
core::AspectSchema apply_critique(const core::AspectSchema& schema, const Critique& critique, const std::string& intent,
                                  const std::string& papers, llm::Gateway& gateway);

/// Editor inference (unguided / add-column / drop-column models); fine-tuned sampling.
core::AspectSchema apply_editor(llm::Gateway& editor, const core::AspectSchema& schema, const std::string& intent,
                                const std::string& papers);

/// Silver-corpus entry usable as an in-context critique neighbour.
struct SilverEntry {
  core::TableInstance instance;  // carries intent and reference
  core::AspectSchema candidate;  // the generated schema the oracle critiques
};

/// Retrieves the k silver entries with the most similar intents and attaches their
/// (cached) oracle critiques.
class IclCritiqueSource {
 public:
  IclCritiqueSource(std::vector<SilverEntry> silver, embedding::EmbeddingBackend& embedder, llm::Gateway& oracle,
                    std::size_t k = 5);

  std::vector<CritiqueExample> examples_for(const std::string& intent, const std::string& exclude_instance_id = {});
  std::size_t size() const noexcept { return silver_.size(); }

 private:
  std::vector<SilverEntry> silver_;
  std::vector<embedding::EmbeddingVector> intent_vectors_;
  embedding::EmbeddingBackend& embedder_;
  llm::Gateway& oracle_;
  std::size_t k_;
};

}  // namespace schemabench::editing
