#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "schemabench/core/types.hpp"
#include "schemabench/llm/gateway.hpp"
#include "schemabench/prompts/render.hpp"
#include "schemabench/workflows/common.hpp"

namespace schemabench::workflows {

// T = titles, A = abstracts, FT = full text, TI = table intent, C = caption,
// IR = in-text references, ICL = in-context examples.
enum class JointVariant { TA, TA_TI, TFT_TI, TA_C_IR, TA_TI_ICL };

std::string_view variant_name(JointVariant v) noexcept;
/// Accepts the names above; throws InvalidParameter otherwise.
JointVariant parse_variant(std::string_view name);

struct IclExample {
  std::string intent;
  core::AspectSchema schema;
};

struct JointOptions {
  std::size_t full_text_budget = prompts::kDefaultFullTextBudget;
  std::size_t icl_count = 5;
};

/// Intent + reference pairs from sampled corpus records (MissingIntent / MissingReference).
std::vector<IclExample> icl_examples_from(const std::vector<core::TableInstance>& records);
std::string render_icl_examples(const std::vector<IclExample>& examples);

PromptPair build_joint_prompt(const core::TableInstance& instance, JointVariant variant,
                              const std::vector<IclExample>& icl = {}, const JointOptions& options = {});

/// One call; strict parse with a single re-ask, then GenerationParseError.
core::AspectSchema joint_generate(const core::TableInstance& instance, JointVariant variant, llm::Gateway& gateway,
                                  const std::vector<IclExample>& icl_pool = {}, const JointOptions& options = {});

}  // namespace schemabench::workflows
