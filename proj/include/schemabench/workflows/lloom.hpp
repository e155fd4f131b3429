#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "schemabench/clustering/hdbscan.hpp"
#include "schemabench/core/types.hpp"
#include "schemabench/embedding/embedding.hpp"
#include "schemabench/llm/gateway.hpp"
#include "schemabench/prompts/render.hpp"

namespace schemabench::workflows {

struct ConceptPattern {
  std::string name;
  std::string prompt;
  std::vector<std::string> example_ids;  // bullet ids (1-based positions across all papers)
};

struct LloomConfig {
  bool intent_in_summarize = false;
  bool intent_filter = true;
  bool generic_filter = true;
  bool merge = true;
  std::size_t min_cluster_size = 5;
  std::optional<std::size_t> min_samples;
  std::size_t concepts_per_cluster = 1;
  std::size_t full_text_budget = prompts::kDefaultFullTextBudget;

  /// Without the generic filter and merge the surviving concepts become the schema directly.
  bool all_concepts() const noexcept { return !generic_filter && !merge; }
};

/// What each stage produced, in execution order.
struct LloomTrace {
  std::vector<std::string> stages;
  std::vector<std::string> bullets;
  std::vector<int> labels;
  std::vector<ConceptPattern> synthesized;
  std::vector<std::string> generic_removed;
  std::vector<std::string> intent_removed;
  std::vector<ConceptPattern> final_concepts;
};

/// Concept induction over paper full texts: summarize, embed, cluster, synthesize,
/// filter, merge, then concepts to schema (or one aspect per concept).
core::AspectSchema lloom_generate(const core::TableInstance& instance, const LloomConfig& cfg, llm::Gateway& gateway,
                                  embedding::EmbeddingBackend& embedder, LloomTrace* trace = nullptr);

/// Bullet-summary of one paper (shared with the sequential workflow).
std::vector<std::string> summarize_paper(const core::PaperRecord& paper, const std::optional<std::string>& intent,
                                         std::size_t full_text_budget, llm::Gateway& gateway, const std::string& stage);

std::string render_concept_list(const std::vector<ConceptPattern>& concepts);

}  // namespace schemabench::workflows
