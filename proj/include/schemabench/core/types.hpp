#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "schemabench/core/schema.hpp"

namespace schemabench::core {

struct PaperRecord {
  std::string paper_id;
  std::string title;
  std::string abstract;
  std::optional<std::string> full_text;
  std::optional<std::string> citation_key;

  bool operator==(const PaperRecord&) const = default;
};

struct TableInstance {
  std::string instance_id;
  std::vector<PaperRecord> papers;
  std::optional<std::string> caption;
  std::optional<std::vector<std::string>> in_text_refs;
  std::optional<std::string> intent;
  std::optional<AspectSchema> reference_schema;
  std::optional<std::string> table_values;

  bool operator==(const TableInstance&) const = default;
};

struct IntentCandidate {
  std::string goal;
  std::string justification;

  bool operator==(const IntentCandidate&) const = default;
};

/// Checks M >= 1, unique non-empty paper ids, non-empty titles and a relaxed-valid
/// reference schema. Throws InvalidRecord.
void validate_instance(const TableInstance& instance);

// Corpus record wire format (one JSON object per JSONL line).
TableInstance instance_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json instance_to_json(const TableInstance& instance);

nlohmann::ordered_json schema_to_json(const AspectSchema& schema);
AspectSchema schema_from_json(const nlohmann::ordered_json& j, ValidationMode mode);

}  // namespace schemabench::core
