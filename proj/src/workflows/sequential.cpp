#include "schemabench/workflows/sequential.hpp"

#include <numeric>

#include "schemabench/error.hpp"
#include "schemabench/llm/structured.hpp"
#include "schemabench/prompts/templates.hpp"
#include "schemabench/util/rng.hpp"
#include "schemabench/util/text.hpp"
#include "schemabench/workflows/common.hpp"
#include "schemabench/workflows/lloom.hpp"

namespace schemabench::workflows {

std::vector<std::size_t> pass_order(std::uint64_t seed, const std::string& instance_id, std::size_t pass, std::size_t m) {
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  util::Rng rng(util::derive_seed(seed, "sequential", instance_id, pass));
  rng.shuffle(order);
  return order;
}

core::AspectSchema sequential_generate(const core::TableInstance& instance, llm::Gateway& gateway,
                                       const SequentialConfig& cfg, SequentialTrace* trace) {
  if (cfg.passes == 0) throw Error(Errc::InvalidParameter, "passes must be at least 1");
  if (cfg.batch_size == 0) throw Error(Errc::InvalidParameter, "batch_size must be at least 1");
  if (!instance.intent || instance.intent->empty()) {
    throw Error(Errc::MissingIntent, "instance " + instance.instance_id + " has no intent");
  }
  for (const auto& p : instance.papers) {
    if (!p.full_text) throw Error(Errc::MissingFullText, "paper " + p.paper_id + " has no full text");
  }
  SequentialTrace local;
  SequentialTrace& t = trace ? *trace : local;
  const auto& papers = instance.papers;
  const std::size_t m = papers.size();

  for (const auto& p : papers) {
    t.summaries.push_back(
        util::join(summarize_paper(p, std::nullopt, cfg.full_text_budget, gateway, "sequential_summarize"), " "));
  }
  auto entry = [&](std::size_t i) { return "Title: " + papers[i].title + "\nSummary: " + t.summaries[i]; };
  std::string all_papers;
  for (std::size_t i = 0; i < m; ++i) all_papers += (i ? "\n\n" : "") + entry(i);

  core::AspectSchema state;
  for (std::size_t pass = 0; pass < cfg.passes; ++pass) {
    const auto order = pass_order(cfg.seed, instance.instance_id, pass, m);
    t.pass_orders.push_back(order);
    for (std::size_t start = 0, batch = 0; start < m; start += cfg.batch_size, ++batch) {
      std::string new_batch;
      for (std::size_t k = start; k < std::min(m, start + cfg.batch_size); ++k) {
        new_batch += (k > start ? "\n\n" : "") + entry(order[k]);
      }
      const auto user = prompts::render(prompts::kUpdateFromBatch, {{"intent", *instance.intent},
                                                                    {"curr_schema", core::serialize_schema(state)},
                                                                    {"new_batch", new_batch},
                                                                    {"past_papers", all_papers}});
      const std::string where = "pass " + std::to_string(pass) + ", batch " + std::to_string(batch);
      auto request = gateway.make_request(std::string(prompts::kSystemPrompt), user,
                                          "pass-" + std::to_string(pass) + "-batch-" + std::to_string(batch));
      state = llm::complete_structured(gateway, request, "sequential_update", Errc::UpdateParseError,
                                       instance.instance_id + " " + where, [](const std::string& text) {
                                         return parse_schema_reply(text, core::ValidationMode::Relaxed);
                                       });
      t.schema_sizes.push_back(state.size());
    }
  }
  try {
    state.validate(core::ValidationMode::Strict);
  } catch (const Error& e) {
    throw Error(Errc::UpdateParseError, instance.instance_id + " final schema: " + e.what());
  }
  return state;
}

}  // namespace schemabench::workflows
