#pragma once

#include <string>

#include "schemabench/core/schema.hpp"

namespace schemabench::workflows {

struct PromptPair {
  std::string system;
  std::string user;
};

/// Schema carried by a model reply (fences and prose tolerated, duplicate names rejected).
core::AspectSchema parse_schema_reply(const std::string& text, core::ValidationMode mode);

}  // namespace schemabench::workflows
