#include "schemabench/workflows/joint.hpp"

#include "schemabench/error.hpp"
#include "schemabench/llm/structured.hpp"
#include "schemabench/prompts/templates.hpp"

namespace schemabench::workflows {

namespace {

const std::string& require_intent(const core::TableInstance& instance) {
  if (!instance.intent || instance.intent->empty()) {
    throw Error(Errc::MissingIntent, "instance " + instance.instance_id + " has no intent");
  }
  return *instance.intent;
}

}  // namespace

std::string_view variant_name(JointVariant v) noexcept {
  switch (v) {
    case JointVariant::TA: return "TA";
    case JointVariant::TA_TI: return "TA_TI";
    case JointVariant::TFT_TI: return "TFT_TI";
    case JointVariant::TA_C_IR: return "TA_C_IR";
    case JointVariant::TA_TI_ICL: return "TA_TI_ICL";
  }
  return "?";
}

JointVariant parse_variant(std::string_view name) {
  for (auto v : {JointVariant::TA, JointVariant::TA_TI, JointVariant::TFT_TI, JointVariant::TA_C_IR,
                 JointVariant::TA_TI_ICL}) {
    if (variant_name(v) == name) return v;
  }
  throw Error(Errc::InvalidParameter, "unknown variant '" + std::string(name) + "'");
}

std::vector<IclExample> icl_examples_from(const std::vector<core::TableInstance>& records) {
  std::vector<IclExample> out;
  for (const auto& r : records) {
    if (!r.reference_schema) throw Error(Errc::MissingReference, "ICL record " + r.instance_id + " has no reference");
    out.push_back({require_intent(r), *r.reference_schema});
  }
  return out;
}

std::string render_icl_examples(const std::vector<IclExample>& examples) {
  std::string out;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    out += "\nExample " + std::to_string(i + 1) + ":\nIntent: " + examples[i].intent +
           "\nSchema: " + core::serialize_schema(examples[i].schema);
  }
  return out;
}

PromptPair build_joint_prompt(const core::TableInstance& instance, JointVariant variant,
                              const std::vector<IclExample>& icl, const JointOptions& options) {
  PromptPair p{std::string(prompts::kSystemPrompt), {}};
  switch (variant) {
    case JointVariant::TA:
      p.user = prompts::render(prompts::kJointTitleAbstract, {{"papers", prompts::render_papers(instance.papers)}});
      break;
    case JointVariant::TA_TI:
      p.user = prompts::render(prompts::kJointIntent, {{"user_goal", require_intent(instance)},
                                                       {"papers", prompts::render_papers(instance.papers)}});
      break;
    case JointVariant::TFT_TI: {
      const auto& intent = require_intent(instance);
      prompts::PaperBlockOptions full{true, options.full_text_budget};
      p.user = prompts::render(prompts::kJointIntentFullText,
                               {{"user_goal", intent}, {"full_text_papers", prompts::render_papers(instance.papers, full)}});
      break;
    }
    case JointVariant::TA_C_IR:
      if (!instance.caption) throw Error(Errc::MissingCaption, "instance " + instance.instance_id + " has no caption");
      p.user = prompts::render(prompts::kJointCaptionRefs,
                               {{"caption", *instance.caption},
                                {"in_text_refs", prompts::render_in_text_refs(instance.in_text_refs)},
                                {"papers", prompts::render_papers(instance.papers)}});
      break;
    case JointVariant::TA_TI_ICL: {
      const auto& intent = require_intent(instance);
      if (icl.size() != options.icl_count) {
        throw Error(Errc::InvalidParameter, "ICL prompt needs " + std::to_string(options.icl_count) +
                                                " examples, got " + std::to_string(icl.size()));
      }
      p.user = prompts::render(prompts::kJointIntentIcl, {{"icl_text", render_icl_examples(icl)},
                                                          {"user_goal", intent},
                                                          {"papers", prompts::render_papers(instance.papers)}});
      break;
    }
  }
  return p;
}

core::AspectSchema joint_generate(const core::TableInstance& instance, JointVariant variant, llm::Gateway& gateway,
                                  const std::vector<IclExample>& icl_pool, const JointOptions& options) {
  auto prompt = build_joint_prompt(instance, variant, icl_pool, options);
  auto request = gateway.make_request(std::move(prompt.system), std::move(prompt.user));
  return llm::complete_structured(gateway, request, "joint_" + std::string(variant_name(variant)),
                                  Errc::GenerationParseError, instance.instance_id,
                                  [](const std::string& text) {
                                    return parse_schema_reply(text, core::ValidationMode::Strict);
                                  });
}

}  // namespace schemabench::workflows
