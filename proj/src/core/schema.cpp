#include "schemabench/core/schema.hpp"

#include <algorithm>

#include "schemabench/core/types.hpp"
#include "schemabench/error.hpp"
#include "schemabench/util/json.hpp"
#include "schemabench/util/text.hpp"

namespace schemabench::core {

using util::Json;

AspectSchema::AspectSchema(std::vector<Aspect> aspects) {
  aspects_.reserve(aspects.size());
  for (auto& a : aspects) push_back(std::move(a));
}

bool AspectSchema::contains(std::string_view name) const noexcept { return find(name) != nullptr; }

const Aspect* AspectSchema::find(std::string_view name) const noexcept {
  auto it = std::find_if(aspects_.begin(), aspects_.end(),
                         [&](const Aspect& a) { return a.name == name; });
  return it == aspects_.end() ? nullptr : &*it;
}

std::vector<std::string> AspectSchema::names() const {
  std::vector<std::string> out;
  out.reserve(aspects_.size());
  for (const auto& a : aspects_) out.push_back(a.name);
  return out;
}

void AspectSchema::push_back(Aspect aspect) {
  if (aspect.name.empty()) throw Error(Errc::MissingField, "aspect with empty name");
  if (contains(aspect.name)) throw Error(Errc::DuplicateAspect, aspect.name);
  aspects_.push_back(std::move(aspect));
}

void AspectSchema::erase(std::size_t index) {
  if (index >= aspects_.size()) throw Error(Errc::InvalidParameter, "aspect index out of range");
  aspects_.erase(aspects_.begin() + static_cast<std::ptrdiff_t>(index));
}

void AspectSchema::validate(ValidationMode mode) const {
  for (std::size_t i = 0; i < aspects_.size(); ++i) {
    if (aspects_[i].name.empty()) throw Error(Errc::MissingField, "aspect with empty name");
    for (std::size_t j = 0; j < i; ++j) {
      if (aspects_[i].name == aspects_[j].name) throw Error(Errc::DuplicateAspect, aspects_[i].name);
    }
  }
  if (mode == ValidationMode::Strict && aspects_.size() < 2) {
    throw Error(Errc::TooFewAspects,
                "schema has " + std::to_string(aspects_.size()) + " aspect(s), need at least 2");
  }
}

namespace {

std::string required_text(const Json& obj, const std::string& name, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) throw Error(Errc::MissingField, "(" + name + ", " + field + ")");
  if (it->is_string()) return it->get<std::string>();
  // Models occasionally emit lists or numbers for output_format; keep their JSON text.
  if (it->is_null()) throw Error(Errc::MissingField, "(" + name + ", " + field + ") is null");
  return util::dump_compact(*it);
}

AspectSchema schema_from_object(const Json& j, ValidationMode mode) {
  if (!j.is_object()) throw Error(Errc::MalformedJson, "schema must be a JSON object");
  std::vector<Aspect> aspects;
  aspects.reserve(j.size());
  for (const auto& [name, body] : j.items()) {
    if (name.empty()) throw Error(Errc::MissingField, "aspect with empty name");
    if (!body.is_object()) {
      throw Error(Errc::MissingField, "(" + name + ", definition): aspect body is not an object");
    }
    aspects.push_back(Aspect{name, required_text(body, name, "definition"),
                             required_text(body, name, "output_format")});
  }
  AspectSchema schema(std::move(aspects));
  schema.validate(mode);
  return schema;
}

}  // namespace

AspectSchema parse_schema(std::string_view text, ValidationMode mode) {
  std::vector<util::DuplicateKey> duplicates;
  Json j = util::parse_ordered(text, &duplicates);
  for (const auto& d : duplicates) {
    if (d.depth == 1) throw Error(Errc::DuplicateAspect, d.key);
  }
  return schema_from_object(j, mode);
}

Json schema_to_json(const AspectSchema& schema) {
  Json j = Json::object();
  for (const auto& a : schema.aspects()) {
    Json body = Json::object();
    body["definition"] = a.definition;
    body["output_format"] = a.output_format;
    j[a.name] = std::move(body);
  }
  return j;
}

std::string serialize_schema(const AspectSchema& schema, JsonStyle style) {
  Json j = schema_to_json(schema);
  return style == JsonStyle::Compact ? util::dump_compact(j) : util::dump_indented(j, 4);
}

std::string aspect_fingerprint(std::string_view name, std::string_view definition,
                               std::string_view output_format) {
  std::string joined;
  joined.reserve(name.size() + definition.size() + output_format.size() + 3);
  joined.append(name).append(". ").append(definition).append(" ").append(output_format);
  return util::trim(util::collapse_whitespace(joined));
}

std::string aspect_fingerprint(const Aspect& aspect) {
  return aspect_fingerprint(aspect.name, aspect.definition, aspect.output_format);
}

AspectSchema schema_from_json(const Json& j, ValidationMode mode) {
  return schema_from_object(j, mode);
}

}  // namespace schemabench::core
