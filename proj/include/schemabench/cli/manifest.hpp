#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "schemabench/llm/gateway.hpp"
#include "schemabench/util/json.hpp"

namespace schemabench::cli {

/// UTC ISO-8601 time; SOURCE_DATE_EPOCH (seconds) wins over the clock when set.
std::string timestamp_utc();

std::string file_digest(const std::filesystem::path& path);

/// Accumulates the facts of one run and writes them next to the primary output.
class RunManifest {
 public:
  RunManifest(std::vector<std::string> argv, std::string command);

  void set_config(util::Json snapshot) { config_ = std::move(snapshot); }
  void add_input(const std::string& role, const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
  void set_provider(const std::string& name, const std::string& model);
  void add_model(const std::string& role, const std::string& model);
  void set_seed(const std::string& name, std::uint64_t value);
  void merge_stats(const std::map<std::string, llm::StageStats>& stats);
  void note(const std::string& key, util::Json value);

  const std::map<std::string, llm::StageStats>& stats() const noexcept { return stats_; }

  util::Json to_json() const;
  /// Stamps the end time and writes `<primary>.manifest.json`.
  std::filesystem::path write_for(const std::filesystem::path& primary_output);

 private:
  std::vector<std::string> argv_;
  std::string command_;
  std::string started_at_;
  std::string finished_at_;
  util::Json config_ = util::Json::object();
  util::Json inputs_ = util::Json::array();
  util::Json outputs_ = util::Json::array();
  util::Json provider_ = util::Json::object();
  util::Json models_ = util::Json::object();
  util::Json seeds_ = util::Json::object();
  util::Json notes_ = util::Json::object();
  std::map<std::string, llm::StageStats> stats_;
};

}  // namespace schemabench::cli
