#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "schemabench/core/types.hpp"
#include "schemabench/util/rng.hpp"

namespace schemabench::editing {

enum class EditOp { Unguided, AddColumn, DropColumn, CritiqueDistill };

std::string_view edit_op_name(EditOp op) noexcept;

/// One supervised editing pair. For CritiqueDistill the target is `target_critique`
/// (the candidate schema is kept as target_schema so the record stays well formed).
struct EditExample {
  std::string instance_id;
  core::AspectSchema input_schema;
  std::string intent;
  std::string papers;  // rendered title + abstract block
  core::AspectSchema target_schema;
  EditOp op_kind = EditOp::Unguided;
  std::optional<std::string> target_critique;
};

/// Chat user message shared by training data and editor inference.
std::string editor_user_prompt(const std::string& intent, const std::string& papers, const core::AspectSchema& schema);

/// Reference minus one uniformly chosen aspect; survivors keep their order.
EditExample build_add_column_example(const core::AspectSchema& ref, const std::string& intent, const std::string& papers,
                                     util::Rng& rng);

/// Reference plus one uniformly chosen generated aspect whose name the reference lacks, appended last.
EditExample build_drop_column_example(const core::AspectSchema& ref, const core::AspectSchema& gen,
                                      const std::string& intent, const std::string& papers, util::Rng& rng);

/// Candidate paired with the instance reference as-is.
EditExample build_unguided_example(const core::AspectSchema& gen, const core::TableInstance& instance);

/// Candidate paired with an oracle critique of it.
EditExample build_critique_distill_example(const core::AspectSchema& gen, const core::TableInstance& instance,
                                           const std::string& critique);

}  // namespace schemabench::editing
