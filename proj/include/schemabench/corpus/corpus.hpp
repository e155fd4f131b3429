#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "schemabench/core/types.hpp"
#include "schemabench/editing/datasets.hpp"

namespace schemabench::corpus {

enum class Tier { Gold, Silver, Clean };

std::string_view tier_name(Tier t) noexcept;
Tier parse_tier(std::string_view name);

struct LoadWarning {
  std::size_t line = 0;
  std::string instance_id;
  std::string message;
};

struct CorpusFile {
  std::filesystem::path path;
  Tier tier = Tier::Gold;
  std::vector<core::TableInstance> records;
  std::vector<std::size_t> lines;  // 1-based source line of each record
  std::vector<LoadWarning> warnings;
};

/// One JSON object per line; blank lines are skipped. Errors name the offending line
/// (RecordParseError), duplicate ids name both lines. References load relaxed, and a
/// one-aspect reference is kept with a warning.
CorpusFile parse_corpus(std::string_view text, Tier tier, const std::string& label = "<memory>");
CorpusFile load_corpus(const std::filesystem::path& path, Tier tier);

std::string corpus_to_jsonl(std::span<const core::TableInstance> records);
void write_corpus(const std::filesystem::path& path, std::span<const core::TableInstance> records);

std::string read_file(const std::filesystem::path& path);
/// Writes atomically (temp file + rename). IoError on failure.
void write_file(const std::filesystem::path& path, std::string_view contents);

enum class SizeRule { And, Or };

struct CleanFilter {
  std::size_t min_papers = 5;
  std::size_t min_aspects = 4;
  SizeRule rule = SizeRule::And;
  std::set<std::string, std::less<>> excluded_ids;
};

/// Keeps instances passing the size rule and not listed in `excluded_ids`; order preserved.
std::vector<core::TableInstance> filter_clean_candidates(std::span<const core::TableInstance> records,
                                                         const CleanFilter& filter = {});

/// One instance id per line; '#' starts a comment.
std::set<std::string, std::less<>> read_exclusion_list(const std::filesystem::path& path);

/// Uniform sample without replacement, in selection order. InsufficientRecords when n > |records|.
std::vector<core::TableInstance> sample_records(std::span<const core::TableInstance> records, std::size_t n,
                                                std::uint64_t seed);
std::vector<core::TableInstance> sample_icl_examples(std::span<const core::TableInstance> records, std::size_t n,
                                                     std::uint64_t seed);

struct Split {
  std::vector<core::TableInstance> train;
  std::vector<core::TableInstance> val;
};

/// Seeded shuffle then prefix split.
Split split_train_val(std::span<const core::TableInstance> records, std::size_t train_n, std::size_t val_n,
                      std::uint64_t seed);

struct ChatExample {
  std::string system;
  std::string user;
  std::string assistant;
};

/// Editing pair in chat form: the assistant turn is the serialized target schema, or the
/// critique for critique-distill examples.
ChatExample chat_example(const editing::EditExample& example, std::string_view system_prompt);
/// Generation pair: titles, abstracts and intent in, reference schema out.
ChatExample generation_example(const core::TableInstance& instance, std::string_view system_prompt);

std::string chat_jsonl_line(const ChatExample& example);
/// Returns the number of lines written.
std::size_t emit_chat_jsonl(std::span<const ChatExample> examples, const std::filesystem::path& path);

}  // namespace schemabench::corpus
