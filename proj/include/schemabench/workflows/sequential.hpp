#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "schemabench/core/types.hpp"
#include "schemabench/llm/gateway.hpp"
#include "schemabench/prompts/render.hpp"

namespace schemabench::workflows {

struct SequentialConfig {
  std::size_t passes = 5;
  std::size_t batch_size = 4;
  std::uint64_t seed = 0;
  std::size_t full_text_budget = prompts::kDefaultFullTextBudget;
};

struct SequentialTrace {
  std::vector<std::string> summaries;                 // paragraph per paper, corpus order
  std::vector<std::vector<std::size_t>> pass_orders;  // paper order used in each pass
  std::vector<std::size_t> schema_sizes;              // aspect count after each update
};

/// Paper order for one pass; depends only on (seed, instance id, pass).
std::vector<std::size_t> pass_order(std::uint64_t seed, const std::string& instance_id, std::size_t pass, std::size_t m);

/// Summaries once per paper, then `passes` shuffled sweeps of batched schema updates.
/// Calls: M summaries + passes * ceil(M / batch_size) updates.
core::AspectSchema sequential_generate(const core::TableInstance& instance, llm::Gateway& gateway,
                                       const SequentialConfig& cfg = {}, SequentialTrace* trace = nullptr);

}  // namespace schemabench::workflows
