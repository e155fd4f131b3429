#include "schemabench/editing/datasets.hpp"

#include <vector>

#include "schemabench/error.hpp"
#include "schemabench/prompts/render.hpp"

namespace schemabench::editing {

namespace {

const std::string& require_intent(const core::TableInstance& instance) {
  if (!instance.intent) throw Error(Errc::MissingIntent, "instance " + instance.instance_id + " has no intent");
  return *instance.intent;
}

const core::AspectSchema& require_reference(const core::TableInstance& instance) {
  if (!instance.reference_schema) {
    throw Error(Errc::MissingReference, "instance " + instance.instance_id + " has no reference schema");
  }
  return *instance.reference_schema;
}

}  // namespace

std::string_view edit_op_name(EditOp op) noexcept {
  switch (op) {
    case EditOp::Unguided: return "unguided";
    case EditOp::AddColumn: return "add_column";
    case EditOp::DropColumn: return "drop_column";
    case EditOp::CritiqueDistill: return "critique_distill";
  }
  return "?";
}

std::string editor_user_prompt(const std::string& intent, const std::string& papers, const core::AspectSchema& schema) {
  return "[Intent] " + intent + "\n[Paper Information] " + papers + "\n[Candidate Schema] " + core::serialize_schema(schema);
}

EditExample build_add_column_example(const core::AspectSchema& ref, const std::string& intent, const std::string& papers,
                                     util::Rng& rng) {
  if (ref.size() < 2) throw Error(Errc::TooFewAspects, "add-column needs a reference with at least 2 aspects");
  EditExample ex;
  ex.input_schema = ref;
  ex.input_schema.erase(rng.uniform_index(ref.size()));
  ex.intent = intent;
  ex.papers = papers;
  ex.target_schema = ref;
  ex.op_kind = EditOp::AddColumn;
  return ex;
}

EditExample build_drop_column_example(const core::AspectSchema& ref, const core::AspectSchema& gen,
                                      const std::string& intent, const std::string& papers, util::Rng& rng) {
  std::vector<const core::Aspect*> fresh;
  for (const auto& a : gen.aspects()) {
    if (!ref.contains(a.name)) fresh.push_back(&a);
  }
  if (fresh.empty()) throw Error(Errc::NoNonCollidingAspect, "every generated aspect name already appears in the reference");
  EditExample ex;
  ex.input_schema = ref;
  ex.input_schema.push_back(*fresh[rng.uniform_index(fresh.size())]);
  ex.intent = intent;
  ex.papers = papers;
  ex.target_schema = ref;
  ex.op_kind = EditOp::DropColumn;
  return ex;
}

EditExample build_unguided_example(const core::AspectSchema& gen, const core::TableInstance& instance) {
  EditExample ex;
  ex.instance_id = instance.instance_id;
  ex.target_schema = require_reference(instance);
  ex.intent = require_intent(instance);
  ex.input_schema = gen;
  ex.papers = prompts::render_papers(instance.papers);
  ex.op_kind = EditOp::Unguided;
  return ex;
}

EditExample build_critique_distill_example(const core::AspectSchema& gen, const core::TableInstance& instance,
                                           const std::string& critique) {
  if (critique.empty()) throw Error(Errc::InvalidParameter, "empty critique for " + instance.instance_id);
  EditExample ex;
  ex.instance_id = instance.instance_id;
  ex.intent = require_intent(instance);
  ex.input_schema = gen;
  ex.target_schema = gen;
  ex.papers = prompts::render_papers(instance.papers);
  ex.op_kind = EditOp::CritiqueDistill;
  ex.target_critique = critique;
  return ex;
}

}  // namespace schemabench::editing
