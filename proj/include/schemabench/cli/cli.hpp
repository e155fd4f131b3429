#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "schemabench/core/schema.hpp"
#include "schemabench/error.hpp"
#include "schemabench/util/json.hpp"

namespace schemabench::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUser = 1;
inline constexpr int kExitRuntime = 2;

/// Exit code for a library error: bad input or configuration is the user's (1),
/// provider, parse and pipeline failures are runtime errors (2).
int exit_code_for(Errc code) noexcept;

/// `args[0]` is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

/// One line of a generated/edited schema file.
struct CandidateRecord {
  std::string instance_id;
  std::string method;
  core::AspectSchema schema;
  util::Json extra = util::Json::object();  // e.g. the critique that produced an edit
};

std::vector<CandidateRecord> parse_candidates(std::string_view text, const std::string& label = "<memory>");
std::string candidate_line(const CandidateRecord& record);

}  // namespace schemabench::cli
