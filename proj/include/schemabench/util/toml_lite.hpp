#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace schemabench::util {

/// Scalar or array-of-scalars value from the configuration file.
struct TomlValue {
  using Scalar = std::variant<std::string, std::int64_t, double, bool>;
  std::variant<std::string, std::int64_t, double, bool, std::vector<Scalar>> value;

  std::optional<std::string> as_string() const;
  std::optional<std::int64_t> as_int() const;
  std::optional<double> as_double() const;  // integers widen
  std::optional<bool> as_bool() const;
};

/// Flat table keyed by dotted path ("section.key").
using TomlTable = std::map<std::string, TomlValue, std::less<>>;

/// The subset used by config files: comments, [table] headers (dotted), bare or quoted
/// keys, basic/literal strings, integers, floats, booleans and single-line arrays of
/// those. Anything else is a ConfigError naming the line.
TomlTable parse_toml(std::string_view text);

}  // namespace schemabench::util
