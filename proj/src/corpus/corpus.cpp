#include "schemabench/corpus/corpus.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "schemabench/error.hpp"
#include "schemabench/util/json.hpp"
#include "schemabench/util/rng.hpp"
#include "schemabench/util/text.hpp"
#include "schemabench/workflows/joint.hpp"

namespace schemabench::corpus {

namespace fs = std::filesystem;

std::string_view tier_name(Tier t) noexcept {
  switch (t) {
    case Tier::Gold: return "gold";
    case Tier::Silver: return "silver";
    case Tier::Clean: return "clean";
  }
  return "?";
}

Tier parse_tier(std::string_view name) {
  for (auto t : {Tier::Gold, Tier::Silver, Tier::Clean}) {
    if (tier_name(t) == name) return t;
  }
  throw Error(Errc::InvalidParameter, "unknown corpus tier '" + std::string(name) + "'");
}

CorpusFile parse_corpus(std::string_view text, Tier tier, const std::string& label) {
  CorpusFile out;
  out.path = label;
  out.tier = tier;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (util::trim(line).empty()) continue;

    const std::string where = label + ":" + std::to_string(line_no);
    core::TableInstance inst;
    try {
      inst = core::instance_from_json(util::parse_ordered(line));
    } catch (const Error& e) {
      throw Error(Errc::RecordParseError, where + ": " + e.what());
    }
    if (auto [it, fresh] = seen.emplace(inst.instance_id, line_no); !fresh) {
      throw Error(Errc::RecordParseError, where + ": duplicate instance_id '" + inst.instance_id +
                                              "' (first seen on line " + std::to_string(it->second) + ")");
    }
    if (inst.reference_schema && inst.reference_schema->size() < 2) {
      out.warnings.push_back({line_no, inst.instance_id,
                              "reference schema has " + std::to_string(inst.reference_schema->size()) +
                                  " aspect(s); loaded in relaxed mode"});
    }
    out.records.push_back(std::move(inst));
    out.lines.push_back(line_no);
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(Errc::IoError, "read failed: " + path.string());
  return ss.str();
}

void write_file(const fs::path& path, std::string_view contents) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(Errc::IoError, "write failed: " + path.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw Error(Errc::IoError, "cannot rename into " + path.string() + ": " + ec.message());
}

CorpusFile load_corpus(const fs::path& path, Tier tier) {
  auto out = parse_corpus(read_file(path), tier, path.string());
  out.path = path;
  return out;
}

std::string corpus_to_jsonl(std::span<const core::TableInstance> records) {
  std::string out;
  for (const auto& r : records) {
    out += util::dump_compact(core::instance_to_json(r));
    out += '\n';
  }
  return out;
}

void write_corpus(const fs::path& path, std::span<const core::TableInstance> records) {
  write_file(path, corpus_to_jsonl(records));
}

std::vector<core::TableInstance> filter_clean_candidates(std::span<const core::TableInstance> records,
                                                         const CleanFilter& filter) {
  std::vector<core::TableInstance> kept;
  for (const auto& r : records) {
    if (!r.reference_schema) throw Error(Errc::MissingReference, r.instance_id + " has no reference schema");
    const bool papers_ok = r.papers.size() >= filter.min_papers;
    const bool aspects_ok = r.reference_schema->size() >= filter.min_aspects;
    const bool pass = filter.rule == SizeRule::And ? (papers_ok && aspects_ok) : (papers_ok || aspects_ok);
    if (pass && !filter.excluded_ids.contains(r.instance_id)) kept.push_back(r);
  }
  return kept;
}

std::set<std::string, std::less<>> read_exclusion_list(const fs::path& path) {
  std::set<std::string, std::less<>> ids;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto id = util::trim(line);
    if (!id.empty()) ids.insert(std::move(id));
  }
  return ids;
}

std::vector<core::TableInstance> sample_records(std::span<const core::TableInstance> records, std::size_t n,
                                                std::uint64_t seed) {
  if (n > records.size()) {
    throw Error(Errc::InsufficientRecords,
                "asked for " + std::to_string(n) + " of " + std::to_string(records.size()) + " records");
  }
  util::Rng rng(seed);
  std::vector<core::TableInstance> out;
  for (auto i : rng.sample_without_replacement(records.size(), n)) out.push_back(records[i]);
  return out;
}

std::vector<core::TableInstance> sample_icl_examples(std::span<const core::TableInstance> records, std::size_t n,
                                                     std::uint64_t seed) {
  return sample_records(records, n, seed);
}

Split split_train_val(std::span<const core::TableInstance> records, std::size_t train_n, std::size_t val_n,
                      std::uint64_t seed) {
  if (train_n + val_n > records.size()) {
    throw Error(Errc::InsufficientRecords, std::to_string(train_n) + " + " + std::to_string(val_n) + " > " +
                                               std::to_string(records.size()) + " records");
  }
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  util::Rng rng(seed);
  rng.shuffle(order);
  Split s;
  for (std::size_t i = 0; i < train_n; ++i) s.train.push_back(records[order[i]]);
  for (std::size_t i = train_n; i < train_n + val_n; ++i) s.val.push_back(records[order[i]]);
  return s;
}

ChatExample chat_example(const editing::EditExample& example, std::string_view system_prompt) {
  ChatExample c;
  c.system = system_prompt;
  c.user = editing::editor_user_prompt(example.intent, example.papers, example.input_schema);
  if (example.op_kind == editing::EditOp::CritiqueDistill) {
    if (!example.target_critique || example.target_critique->empty()) {
      throw Error(Errc::InvalidRecord, example.instance_id + ": distill example has no critique");
    }
    c.assistant = *example.target_critique;
  } else {
    c.assistant = core::serialize_schema(example.target_schema);
  }
  return c;
}

ChatExample generation_example(const core::TableInstance& instance, std::string_view system_prompt) {
  if (!instance.reference_schema) throw Error(Errc::MissingReference, instance.instance_id + " has no reference");
  auto prompt = workflows::build_joint_prompt(instance, workflows::JointVariant::TA_TI);
  return {std::string(system_prompt), std::move(prompt.user), core::serialize_schema(*instance.reference_schema)};
}

std::string chat_jsonl_line(const ChatExample& example) {
  util::Json messages = util::Json::array();
  auto add = [&](const char* role, const std::string& content) {
    util::Json m = util::Json::object();
    m["role"] = role;
    m["content"] = content;
    messages.push_back(std::move(m));
  };
  add("system", example.system);
  add("user", example.user);
  add("assistant", example.assistant);
  util::Json line = util::Json::object();
  line["messages"] = std::move(messages);
  return util::dump_compact(line);
}

std::size_t emit_chat_jsonl(std::span<const ChatExample> examples, const fs::path& path) {
  std::string out;
  for (const auto& e : examples) {
    out += chat_jsonl_line(e);
    out += '\n';
  }
  write_file(path, out);
  return examples.size();
}

}  // namespace schemabench::corpus
