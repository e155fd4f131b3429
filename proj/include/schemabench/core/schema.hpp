#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace schemabench::core {

/// One column of a literature-review table.
struct Aspect {
  std::string name;
  std::string definition;
  std::string output_format;

  bool operator==(const Aspect&) const = default;
};

enum class ValidationMode {
  Strict,   // final generation output: at least two aspects
  Relaxed,  // intermediate states and training inputs: any size
};

enum class JsonStyle {
  Indented,  // four-space indentation, the layout models are shown in prompts
  Compact,
};

/// Ordered aspect schema. Insertion order is significant and names are unique
/// (case-sensitive); equality compares aspects position by position.
class AspectSchema {
 public:
  AspectSchema() = default;
  explicit AspectSchema(std::vector<Aspect> aspects);

  const std::vector<Aspect>& aspects() const noexcept { return aspects_; }
  std::size_t size() const noexcept { return aspects_.size(); }
  bool empty() const noexcept { return aspects_.empty(); }

  bool contains(std::string_view name) const noexcept;
  const Aspect* find(std::string_view name) const noexcept;
  std::vector<std::string> names() const;

  /// Appends an aspect; throws DuplicateAspect when the name already exists.
  void push_back(Aspect aspect);
  /// Removes the aspect at `index`, preserving the order of the survivors.
  void erase(std::size_t index);

  /// Throws TooFewAspects (strict) or DuplicateAspect / MissingField on violation.
  void validate(ValidationMode mode) const;

  bool operator==(const AspectSchema&) const = default;

 private:
  std::vector<Aspect> aspects_;
};

AspectSchema parse_schema(std::string_view text, ValidationMode mode);
std::string serialize_schema(const AspectSchema& schema, JsonStyle style = JsonStyle::Indented);

/// Text the similarity scorer sees for one aspect: `name. definition output_format`
/// with every whitespace run collapsed to one space and the ends trimmed.
std::string aspect_fingerprint(std::string_view name, std::string_view definition,
                               std::string_view output_format);
std::string aspect_fingerprint(const Aspect& aspect);

}  // namespace schemabench::core
