#include "schemabench/workflows/common.hpp"

#include "schemabench/llm/json_extract.hpp"

namespace schemabench::workflows {

core::AspectSchema parse_schema_reply(const std::string& text, core::ValidationMode mode) {
  return core::parse_schema(llm::extract_json_text(text), mode);
}

}  // namespace schemabench::workflows
