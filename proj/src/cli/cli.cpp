#include "schemabench/cli/cli.hpp"

#include <atomic>
#include <exception>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "schemabench/cli/config.hpp"
#include "schemabench/cli/manifest.hpp"
#include "schemabench/corpus/corpus.hpp"
#include "schemabench/editing/critiques.hpp"
#include "schemabench/editing/datasets.hpp"
#include "schemabench/embedding/embedding.hpp"
#include "schemabench/eval/metrics.hpp"
#include "schemabench/eval/report.hpp"
#include "schemabench/eval/scorer.hpp"
#include "schemabench/intents/intents.hpp"
#include "schemabench/llm/gateway.hpp"
#include "schemabench/llm/mock_provider.hpp"
#include "schemabench/llm/openai_provider.hpp"
#include "schemabench/prompts/render.hpp"
#include "schemabench/prompts/templates.hpp"
#include "schemabench/util/rng.hpp"
#include "schemabench/util/text.hpp"
#include "schemabench/workflows/joint.hpp"
#include "schemabench/workflows/lloom.hpp"
#include "schemabench/workflows/sequential.hpp"

namespace schemabench::cli {

namespace fs = std::filesystem;
using util::Json;

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedJson:
    case Errc::MissingField:
    case Errc::DuplicateAspect:
    case Errc::TooFewAspects:
    case Errc::InvalidRecord:
    case Errc::InvalidParameter:
    case Errc::LengthMismatch:
    case Errc::TooFewSamples:
    case Errc::EmptyCorpus:
    case Errc::NotAPermutation:
    case Errc::MissingIntent:
    case Errc::MissingCaption:
    case Errc::MissingFullText:
    case Errc::MissingReference:
    case Errc::InsufficientRecords:
    case Errc::IoError:
    case Errc::RecordParseError:
    case Errc::ConfigError:
      return kExitUser;
    default:
      return kExitRuntime;
  }
}

std::vector<CandidateRecord> parse_candidates(std::string_view text, const std::string& label) {
  std::vector<CandidateRecord> out;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (util::trim(line).empty()) continue;
    const std::string where = label + ":" + std::to_string(line_no);
    CandidateRecord rec;
    try {
      auto j = util::parse_ordered(line);
      if (!j.is_object()) throw Error(Errc::InvalidRecord, "line is not a JSON object");
      rec.instance_id = j.at("instance_id").get<std::string>();
      rec.method = j.value("method", "");
      rec.schema = core::schema_from_json(j.at("schema"), core::ValidationMode::Relaxed);
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() != "instance_id" && it.key() != "method" && it.key() != "schema") rec.extra[it.key()] = it.value();
      }
    } catch (const Error& e) {
      throw Error(Errc::RecordParseError, where + ": " + e.what());
    } catch (const Json::exception& e) {
      throw Error(Errc::RecordParseError, where + ": " + e.what());
    }
    if (auto [it, fresh] = seen.emplace(rec.instance_id, line_no); !fresh) {
      throw Error(Errc::RecordParseError, where + ": duplicate instance_id '" + rec.instance_id +
                                              "' (first seen on line " + std::to_string(it->second) + ")");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::string candidate_line(const CandidateRecord& record) {
  Json j = Json::object();
  j["instance_id"] = record.instance_id;
  j["method"] = record.method;
  j["schema"] = core::schema_to_json(record.schema);
  for (auto it = record.extra.begin(); it != record.extra.end(); ++it) j[it.key()] = it.value();
  return util::dump_compact(j);
}

namespace {

/// Runs f(0..n-1) on up to `workers` threads; the first failure by index is rethrown.
template <typename F>
void parallel_for(std::size_t n, int workers, F&& f) {
  const auto count = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), n);
  if (count <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < count; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          f(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct GlobalFlags {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> cache_dir;
  std::optional<int> max_concurrency;
  std::optional<std::string> mock_provider;
  std::optional<std::string> model;
};

class Session {
 public:
  Session(RunConfig cfg, std::vector<std::string> argv, std::string command)
      : cfg_(std::move(cfg)), manifest_(std::move(argv), std::move(command)) {
    manifest_.set_config(cfg_.snapshot());
    manifest_.set_seed("run", cfg_.seed);
  }

  const RunConfig& cfg() const { return cfg_; }
  RunManifest& manifest() { return manifest_; }

  std::shared_ptr<llm::ChatProvider> provider() {
    if (provider_) return provider_;
    if (cfg_.mock_provider) {
      provider_ = std::make_shared<llm::MockProvider>(llm::MockProvider::from_script_file(*cfg_.mock_provider));
      manifest_.add_input("mock_script", *cfg_.mock_provider);
    } else {
      if (cfg_.api_key.empty()) {
        throw Error(Errc::ConfigError, "no provider configured: set SCHEMA_BENCH_API_KEY or pass --mock-provider");
      }
      provider_ = std::make_shared<llm::OpenAiChatProvider>(
          llm::OpenAiProviderOptions{cfg_.base_url, cfg_.api_key, std::chrono::seconds(cfg_.timeout_s)});
    }
    manifest_.set_provider(provider_->name(), cfg_.model);
    return provider_;
  }

  llm::Gateway& gateway() {
    if (!gateway_) gateway_ = make_gateway(provider(), cfg_.model);
    return *gateway_;
  }

  /// Revises schemas from critiques; a separate model may be configured.
  llm::Gateway& revision() {
    const auto model = cfg_.revision_model.empty() ? cfg_.model : cfg_.revision_model;
    if (model == cfg_.model) return gateway();
    if (!revision_) {
      revision_ = make_gateway(provider(), model);
      manifest_.add_model("revision", model);
    }
    return *revision_;
  }

  /// Hosted fine-tuned model (editor or distilled critic).
  llm::Gateway& editor() {
    if (editor_) return *editor_;
    std::shared_ptr<llm::ChatProvider> p;
    if (cfg_.mock_provider) {
      p = provider();
    } else {
      if (cfg_.editor_endpoint.empty()) {
        throw Error(Errc::ConfigError, "--editor-endpoint is required for fine-tuned editors and critics");
      }
      p = std::make_shared<llm::OpenAiChatProvider>(llm::OpenAiProviderOptions{
          cfg_.editor_endpoint, cfg_.editor_api_key, std::chrono::seconds(cfg_.timeout_s)});
    }
    editor_ = make_gateway(p, cfg_.editor_model);
    manifest_.add_model("editor", cfg_.editor_model);
    return *editor_;
  }

  embedding::EmbeddingBackend& embedder() {
    if (embedder_) return *embedder_;
    if (cfg_.embedding_backend == "remote") {
      if (cfg_.api_key.empty()) throw Error(Errc::ConfigError, "remote embeddings need SCHEMA_BENCH_API_KEY");
      embedding::RemoteEmbedderOptions o;
      o.base_url = cfg_.base_url;
      o.api_key = cfg_.api_key;
      o.model = cfg_.embedding_model;
      embedder_ = std::make_unique<embedding::RemoteEmbedder>(o);
    } else {
      embedder_ = std::make_unique<embedding::HashEmbedder>(cfg_.embedding_dimension);
    }
    manifest_.add_model("embedding", embedder_->name());
    return *embedder_;
  }

  void collect_stats() {
    for (auto* g : {gateway_.get(), revision_.get(), editor_.get()}) {
      if (g) manifest_.merge_stats(g->stats());
    }
  }

  std::int64_t provider_calls() const {
    std::int64_t n = 0;
    for (auto* g : {gateway_.get(), revision_.get(), editor_.get()}) {
      if (g) n += g->totals().provider_calls;
    }
    return n;
  }

 private:
  std::unique_ptr<llm::Gateway> make_gateway(std::shared_ptr<llm::ChatProvider> p, const std::string& model) {
    llm::GatewayOptions o;
    o.retry.max_retries = cfg_.max_retries;
    o.cache_dir = cfg_.cache_dir;
    o.max_concurrency = cfg_.max_concurrency;
    o.default_model = model;
    return std::make_unique<llm::Gateway>(std::move(p), o);
  }

  RunConfig cfg_;
  RunManifest manifest_;
  std::shared_ptr<llm::ChatProvider> provider_;
  std::unique_ptr<llm::Gateway> gateway_;
  std::unique_ptr<llm::Gateway> revision_;
  std::unique_ptr<llm::Gateway> editor_;
  std::unique_ptr<embedding::EmbeddingBackend> embedder_;
};

corpus::CorpusFile load_input_corpus(Session& s, const std::string& role, const std::string& path,
                                     corpus::Tier tier, std::ostream& err) {
  auto file = corpus::load_corpus(path, tier);
  s.manifest().add_input(role, path);
  for (const auto& w : file.warnings) err << "warning: " << path << ":" << w.line << ": " << w.message << "\n";
  return file;
}

std::vector<CandidateRecord> load_candidates(Session& s, const std::string& role, const std::string& path) {
  auto records = parse_candidates(corpus::read_file(path), path);
  s.manifest().add_input(role, path);
  return records;
}

const core::TableInstance& find_instance(const std::map<std::string, const core::TableInstance*, std::less<>>& index,
                                         const std::string& id) {
  auto it = index.find(id);
  if (it == index.end()) throw Error(Errc::InvalidParameter, "instance '" + id + "' is not in the corpus");
  return *it->second;
}

std::map<std::string, const core::TableInstance*, std::less<>> index_corpus(const corpus::CorpusFile& file) {
  std::map<std::string, const core::TableInstance*, std::less<>> index;
  for (const auto& r : file.records) index.emplace(r.instance_id, &r);
  return index;
}

const std::string& require_intent(const core::TableInstance& inst) {
  if (!inst.intent || inst.intent->empty()) throw Error(Errc::MissingIntent, inst.instance_id + " has no intent");
  return *inst.intent;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

void finish(Session& s, const std::vector<fs::path>& outputs, std::ostream& out) {
  for (const auto& p : outputs) s.manifest().add_output(p);
  s.collect_stats();
  auto m = s.manifest().write_for(outputs.front());
  out << "wrote " << outputs.front().string() << " (" << s.provider_calls() << " provider calls); manifest "
      << m.string() << "\n";
}

// ---- subcommands ----

struct IntentsArgs {
  std::string corpus, out;
  std::optional<std::size_t> candidates;
};

void cmd_intents(Session& s, const IntentsArgs& a, std::ostream& out, std::ostream& err) {
  auto file = load_input_corpus(s, "corpus", a.corpus, corpus::Tier::Gold, err);
  const auto n = a.candidates.value_or(s.cfg().intent_candidates);
  auto& gw = s.gateway();
  std::vector<intents::IntentSynthesis> results(file.records.size());
  parallel_for(file.records.size(), s.cfg().max_concurrency,
               [&](std::size_t i) { results[i] = intents::synthesize_intent(file.records[i], gw, n); });
  std::vector<std::string> provenance;
  for (std::size_t i = 0; i < results.size(); ++i) {
    file.records[i].intent = results[i].intent();
    Json p = Json::object();
    p["instance_id"] = file.records[i].instance_id;
    const auto prov = intents::provenance_json(results[i]);
    for (auto it = prov.begin(); it != prov.end(); ++it) p[it.key()] = it.value();
    provenance.push_back(util::dump_compact(p));
  }
  corpus::write_corpus(a.out, file.records);
  fs::path prov = a.out + ".provenance.jsonl";
  corpus::write_file(prov, join_lines(provenance));
  finish(s, {a.out, prov}, out);
}

struct GenerateArgs {
  std::string corpus, out, method = "joint", variant = "TA_TI";
  std::optional<std::string> icl_corpus;
};

void cmd_generate(Session& s, const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  auto file = load_input_corpus(s, "corpus", a.corpus, corpus::Tier::Gold, err);
  const auto& cfg = s.cfg();
  std::vector<CandidateRecord> results(file.records.size());
  auto& gw = s.gateway();

  if (a.method == "joint") {
    const auto variant = workflows::parse_variant(a.variant);
    workflows::JointOptions opts{cfg.full_text_budget, cfg.icl_count};
    std::vector<core::TableInstance> pool;
    if (variant == workflows::JointVariant::TA_TI_ICL) {
      if (!a.icl_corpus) throw Error(Errc::ConfigError, "TA_TI_ICL needs --icl-corpus");
      pool = load_input_corpus(s, "icl_corpus", *a.icl_corpus, corpus::Tier::Silver, err).records;
      s.manifest().set_seed("icl", util::derive_seed(cfg.seed, "icl"));
    }
    const std::string method = "joint:" + std::string(workflows::variant_name(variant));
    parallel_for(file.records.size(), cfg.max_concurrency, [&](std::size_t i) {
      const auto& inst = file.records[i];
      std::vector<workflows::IclExample> icl;
      if (variant == workflows::JointVariant::TA_TI_ICL) {
        std::vector<core::TableInstance> candidates;
        for (const auto& r : pool) {
          if (r.instance_id != inst.instance_id) candidates.push_back(r);
        }
        icl = workflows::icl_examples_from(
            corpus::sample_icl_examples(candidates, opts.icl_count, util::derive_seed(cfg.seed, "icl", inst.instance_id)));
      }
      results[i] = {inst.instance_id, method, workflows::joint_generate(inst, variant, gw, icl, opts), Json::object()};
    });
  } else if (a.method == "lloom") {
    workflows::LloomConfig lc;
    lc.intent_in_summarize = cfg.lloom_intent_in_summarize;
    lc.intent_filter = cfg.lloom_intent_filter;
    lc.generic_filter = cfg.lloom_generic_filter;
    lc.merge = cfg.lloom_merge;
    lc.min_cluster_size = cfg.lloom_min_cluster_size;
    lc.min_samples = cfg.lloom_min_samples;
    lc.concepts_per_cluster = cfg.lloom_concepts_per_cluster;
    lc.full_text_budget = cfg.full_text_budget;
    auto& emb = s.embedder();
    parallel_for(file.records.size(), cfg.max_concurrency, [&](std::size_t i) {
      results[i] = {file.records[i].instance_id, "lloom", workflows::lloom_generate(file.records[i], lc, gw, emb),
                    Json::object()};
    });
  } else if (a.method == "sequential") {
    workflows::SequentialConfig sc{cfg.sequential_passes, cfg.sequential_batch_size, cfg.seed, cfg.full_text_budget};
    parallel_for(file.records.size(), cfg.max_concurrency, [&](std::size_t i) {
      results[i] = {file.records[i].instance_id, "sequential", workflows::sequential_generate(file.records[i], gw, sc),
                    Json::object()};
    });
  } else {
    throw Error(Errc::InvalidParameter, "unknown generation method '" + a.method + "'");
  }

  std::vector<std::string> lines;
  for (const auto& r : results) lines.push_back(candidate_line(r));
  corpus::write_file(a.out, join_lines(lines));
  finish(s, {a.out}, out);
}

struct CritiqueArgs {
  std::string corpus, candidates, out, mode = "oracle";
  std::optional<std::string> silver, silver_candidates;
};

/// Builds the critic for one mode; the ICL source is created lazily since it embeds the silver pool.
class CritiqueRunner {
 public:
  CritiqueRunner(Session& s, editing::CritiqueProvenance mode, const CritiqueArgs& a, std::ostream& err)
      : s_(s), mode_(mode) {
    if (mode_ == editing::CritiqueProvenance::Icl) {
      if (!a.silver || !a.silver_candidates) {
        throw Error(Errc::ConfigError, "icl critiques need --silver and --silver-candidates");
      }
      auto silver = load_input_corpus(s, "silver", *a.silver, corpus::Tier::Silver, err);
      auto cands = load_candidates(s, "silver_candidates", *a.silver_candidates);
      const auto index = index_corpus(silver);
      std::vector<editing::SilverEntry> entries;
      for (auto& c : cands) entries.push_back({find_instance(index, c.instance_id), std::move(c.schema)});
      source_ = std::make_unique<editing::IclCritiqueSource>(std::move(entries), s.embedder(), s.gateway(),
                                                            s.cfg().icl_count);
    }
  }

  editing::Critique critique(const core::TableInstance& inst, const core::AspectSchema& candidate) {
    const auto papers = prompts::render_papers(inst.papers);
    switch (mode_) {
      case editing::CritiqueProvenance::Oracle:
        if (!inst.reference_schema) throw Error(Errc::MissingReference, inst.instance_id + " has no reference");
        return editing::oracle_critique(candidate, *inst.reference_schema, papers, s_.gateway());
      case editing::CritiqueProvenance::Self:
        return editing::self_critique(candidate, require_intent(inst), papers, s_.gateway(), inst.reference_schema);
      case editing::CritiqueProvenance::Icl: {
        std::vector<editing::CritiqueExample> examples;
        {
          // retrieval shares one embedder and the oracle cache; keep it serial
          std::lock_guard lock(mutex_);
          examples = source_->examples_for(require_intent(inst), inst.instance_id);
        }
        return editing::icl_critique(candidate, require_intent(inst), papers, examples, s_.gateway(),
                                     inst.reference_schema);
      }
      case editing::CritiqueProvenance::Distilled:
        return editing::distilled_critique(candidate, require_intent(inst), papers, s_.editor(),
                                           inst.reference_schema);
    }
    throw Error(Errc::InvalidParameter, "unknown critique mode");
  }

 private:
  Session& s_;
  editing::CritiqueProvenance mode_;
  std::unique_ptr<editing::IclCritiqueSource> source_;
  std::mutex mutex_;
};

void cmd_critique(Session& s, const CritiqueArgs& a, std::ostream& out, std::ostream& err) {
  auto file = load_input_corpus(s, "corpus", a.corpus, corpus::Tier::Gold, err);
  auto cands = load_candidates(s, "candidates", a.candidates);
  const auto index = index_corpus(file);
  CritiqueRunner runner(s, editing::parse_provenance(a.mode), a, err);
  if (editing::parse_provenance(a.mode) == editing::CritiqueProvenance::Distilled) s.editor();
  s.gateway();
  std::vector<editing::Critique> critiques(cands.size());
  parallel_for(cands.size(), s.cfg().max_concurrency, [&](std::size_t i) {
    critiques[i] = runner.critique(find_instance(index, cands[i].instance_id), cands[i].schema);
  });
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    Json j = Json::object();
    j["instance_id"] = cands[i].instance_id;
    j["provenance"] = editing::provenance_name(critiques[i].provenance);
    j["source_model"] = critiques[i].source_model;
    j["critique"] = critiques[i].text;
    lines.push_back(util::dump_compact(j));
  }
  corpus::write_file(a.out, join_lines(lines));
  finish(s, {a.out}, out);
}

struct EditArgs {
  CritiqueArgs critique;
  std::string method = "critique";
};

void cmd_edit(Session& s, const EditArgs& a, std::ostream& out, std::ostream& err) {
  const auto& c = a.critique;
  auto file = load_input_corpus(s, "corpus", c.corpus, corpus::Tier::Gold, err);
  auto cands = load_candidates(s, "candidates", c.candidates);
  const auto index = index_corpus(file);
  std::vector<CandidateRecord> results(cands.size());

  if (a.method == "critique") {
    const auto mode = editing::parse_provenance(c.mode);
    CritiqueRunner runner(s, mode, c, err);
    if (mode == editing::CritiqueProvenance::Distilled) s.editor();
    s.gateway();  // created before workers start
    auto& reviser = s.revision();
    parallel_for(cands.size(), s.cfg().max_concurrency, [&](std::size_t i) {
      const auto& inst = find_instance(index, cands[i].instance_id);
      auto critique = runner.critique(inst, cands[i].schema);
      const std::string intent = inst.intent.value_or("");
      auto edited = editing::apply_critique(cands[i].schema, critique, intent, prompts::render_papers(inst.papers),
                                            reviser);
      Json extra = Json::object();
      extra["critique"] = {{"provenance", editing::provenance_name(critique.provenance)},
                           {"source_model", critique.source_model},
                           {"text", critique.text}};
      results[i] = {inst.instance_id, "edit:critique:" + std::string(editing::provenance_name(mode)),
                    std::move(edited), std::move(extra)};
    });
  } else if (a.method == "unguided" || a.method == "add-column" || a.method == "drop-column") {
    auto& editor = s.editor();
    parallel_for(cands.size(), s.cfg().max_concurrency, [&](std::size_t i) {
      const auto& inst = find_instance(index, cands[i].instance_id);
      auto edited =
          editing::apply_editor(editor, cands[i].schema, require_intent(inst), prompts::render_papers(inst.papers));
      results[i] = {inst.instance_id, "edit:" + a.method, std::move(edited), Json::object()};
    });
  } else {
    throw Error(Errc::InvalidParameter, "unknown edit method '" + a.method + "'");
  }

  std::vector<std::string> lines;
  for (const auto& r : results) lines.push_back(candidate_line(r));
  corpus::write_file(c.out, join_lines(lines));
  finish(s, {c.out}, out);
}

struct EvaluateArgs {
  std::string generated, corpus, out;
  std::optional<std::string> csv;
  bool normalize_auc = false;
  std::optional<std::string> scorer;
};

void cmd_evaluate(Session& s, const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  auto file = load_input_corpus(s, "corpus", a.corpus, corpus::Tier::Gold, err);
  auto gens = load_candidates(s, "generated", a.generated);
  const auto index = index_corpus(file);
  const auto& cfg = s.cfg();

  const std::string scorer_name = a.scorer.value_or(cfg.scorer);
  std::unique_ptr<eval::Scorer> scorer;
  if (scorer_name == "embedding") {
    scorer = std::make_unique<eval::EmbeddingScorer>(s.embedder());
  } else if (scorer_name == "exact") {
    scorer = std::make_unique<eval::ExactMatchScorer>();
  } else if (scorer_name == "bertscore-http") {
    if (cfg.bertscore_url.empty()) throw Error(Errc::ConfigError, "bertscore-http needs eval.bertscore_url");
    scorer = std::make_unique<eval::HttpBertScoreScorer>(cfg.bertscore_url);
  } else {
    throw Error(Errc::InvalidParameter, "unknown scorer '" + scorer_name + "'");
  }

  const eval::SweepRange range{cfg.threshold_lower, cfg.threshold_upper};
  std::vector<eval::InstanceEval> results;
  for (const auto& g : gens) {
    const auto& inst = find_instance(index, g.instance_id);
    if (!inst.reference_schema || inst.reference_schema->empty()) {
      throw Error(Errc::MissingReference, inst.instance_id + " has no reference schema");
    }
    results.push_back({g.instance_id, eval::sweep(eval::similarity_matrix(g.schema, *inst.reference_schema, *scorer),
                                                  range)});
  }
  eval::ReportOptions ro{a.normalize_auc || cfg.normalize_auc, scorer->name()};
  corpus::write_file(a.out, util::dump_indented(eval::evaluation_report_json(results, ro), 2) + "\n");
  fs::path csv = a.csv ? fs::path(*a.csv) : fs::path(a.out).replace_extension(".csv");
  corpus::write_file(csv, eval::evaluation_csv(results, ro));
  finish(s, {a.out, csv}, out);
}

struct SignificanceArgs {
  std::string a, b, metric = "f1_auc";
  std::optional<std::string> out, name_a, name_b;
  double alpha = 0.05;
};

void cmd_significance(Session& s, const SignificanceArgs& a, std::ostream& out) {
  auto col_a = eval::read_metric_column(a.a, a.metric);
  auto col_b = eval::read_metric_column(a.b, a.metric);
  s.manifest().add_input("a", a.a);
  s.manifest().add_input("b", a.b);
  auto [xa, xb] = eval::pair_by_instance(col_a, col_b);
  const auto result = eval::paired_ttest(xa, xb, a.alpha);
  const auto j = eval::significance_json(a.name_a.value_or(fs::path(a.a).stem().string()),
                                         a.name_b.value_or(fs::path(a.b).stem().string()), a.metric, result);
  const auto text = util::dump_indented(j, 2) + "\n";
  if (a.out) {
    corpus::write_file(*a.out, text);
    finish(s, {*a.out}, out);
  } else {
    out << text;
  }
}

struct BuildDatasetArgs {
  std::string corpus, out, kind = "generation";
  std::optional<std::string> candidates;
  std::optional<std::size_t> train_n, val_n;
};

void cmd_build_dataset(Session& s, const BuildDatasetArgs& a, std::ostream& out, std::ostream& err) {
  auto file = load_input_corpus(s, "corpus", a.corpus, corpus::Tier::Silver, err);
  const auto& cfg = s.cfg();
  const bool needs_candidates = a.kind == "unguided" || a.kind == "drop-column" || a.kind == "critique-distill";
  if (a.kind != "generation" && a.kind != "add-column" && !needs_candidates) {
    throw Error(Errc::InvalidParameter, "unknown dataset kind '" + a.kind + "'");
  }
  std::map<std::string, core::AspectSchema, std::less<>> cand_by_id;
  if (needs_candidates) {
    if (!a.candidates) throw Error(Errc::ConfigError, a.kind + " datasets need --candidates");
    for (auto& c : load_candidates(s, "candidates", *a.candidates)) cand_by_id.emplace(c.instance_id, c.schema);
  }

  // eligible records keep corpus order; records without a candidate are skipped and listed
  std::vector<core::TableInstance> eligible;
  Json skipped = Json::array();
  for (const auto& r : file.records) {
    if (needs_candidates && !cand_by_id.contains(r.instance_id)) {
      skipped.push_back({{"instance_id", r.instance_id}, {"reason", "no candidate"}});
      continue;
    }
    if (a.kind == "drop-column" && r.reference_schema) {
      bool fresh = false;
      for (const auto& asp : cand_by_id.at(r.instance_id).aspects()) fresh = fresh || !r.reference_schema->contains(asp.name);
      if (!fresh) {
        skipped.push_back({{"instance_id", r.instance_id}, {"reason", "no non-colliding aspect"}});
        continue;
      }
    }
    eligible.push_back(r);
  }
  const std::size_t total = eligible.size();
  const std::size_t val_n = a.val_n.value_or(total * 1115 / (21168 + 1115));
  const std::size_t train_n = a.train_n.value_or(total >= val_n ? total - val_n : 0);
  const auto split_seed = util::derive_seed(cfg.seed, "split", a.kind);
  s.manifest().set_seed("split", split_seed);
  const auto split = corpus::split_train_val(eligible, train_n, val_n, split_seed);

  auto build = [&](const std::vector<core::TableInstance>& records) {
    std::vector<corpus::ChatExample> examples(records.size());
    parallel_for(records.size(), cfg.max_concurrency, [&](std::size_t i) {
      const auto& r = records[i];
      if (a.kind == "generation") {
        examples[i] = corpus::generation_example(r, prompts::kSystemPrompt);
        return;
      }
      if (!r.reference_schema) throw Error(Errc::MissingReference, r.instance_id + " has no reference");
      const auto& intent = require_intent(r);
      const auto papers = prompts::render_papers(r.papers);
      editing::EditExample ex;
      if (a.kind == "add-column") {
        util::Rng rng(util::derive_seed(cfg.seed, "add_column", r.instance_id));
        ex = editing::build_add_column_example(*r.reference_schema, intent, papers, rng);
      } else if (a.kind == "drop-column") {
        util::Rng rng(util::derive_seed(cfg.seed, "drop_column", r.instance_id));
        ex = editing::build_drop_column_example(*r.reference_schema, cand_by_id.at(r.instance_id), intent, papers, rng);
      } else if (a.kind == "unguided") {
        ex = editing::build_unguided_example(cand_by_id.at(r.instance_id), r);
      } else {
        const auto& cand = cand_by_id.at(r.instance_id);
        auto critique = editing::oracle_critique(cand, *r.reference_schema, papers, s.gateway());
        ex = editing::build_critique_distill_example(cand, r, critique.text);
      }
      ex.instance_id = r.instance_id;
      examples[i] = corpus::chat_example(ex, prompts::kSystemPrompt);
    });
    return examples;
  };
  if (a.kind == "critique-distill") s.gateway();
  const fs::path train_path = a.out + ".train.jsonl";
  const fs::path val_path = a.out + ".val.jsonl";
  corpus::emit_chat_jsonl(build(split.train), train_path);
  corpus::emit_chat_jsonl(build(split.val), val_path);
  if (!skipped.empty()) s.manifest().note("skipped", skipped);
  s.manifest().note("counts", {{"train", split.train.size()}, {"val", split.val.size()}});
  err << "train " << split.train.size() << ", val " << split.val.size() << ", skipped " << skipped.size() << "\n";
  finish(s, {train_path, val_path}, out);
}

struct FilterCleanArgs {
  std::string corpus, out;
  std::optional<std::string> exclude;
  std::optional<std::size_t> sample, min_papers, min_aspects;
  std::optional<std::string> rule;
};

void cmd_filter_clean(Session& s, const FilterCleanArgs& a, std::ostream& out, std::ostream& err) {
  auto file = load_input_corpus(s, "corpus", a.corpus, corpus::Tier::Gold, err);
  const auto& cfg = s.cfg();
  corpus::CleanFilter f;
  f.min_papers = a.min_papers.value_or(cfg.clean_min_papers);
  f.min_aspects = a.min_aspects.value_or(cfg.clean_min_aspects);
  const auto rule = a.rule.value_or(cfg.clean_rule);
  if (rule != "and" && rule != "or") throw Error(Errc::InvalidParameter, "--rule must be 'and' or 'or'");
  f.rule = rule == "and" ? corpus::SizeRule::And : corpus::SizeRule::Or;
  if (a.exclude) {
    f.excluded_ids = corpus::read_exclusion_list(*a.exclude);
    s.manifest().add_input("exclusions", *a.exclude);
  }
  auto kept = corpus::filter_clean_candidates(file.records, f);
  const auto survivors = kept.size();
  if (a.sample) {
    const auto seed = util::derive_seed(cfg.seed, "clean_sample");
    s.manifest().set_seed("clean_sample", seed);
    kept = corpus::sample_records(kept, *a.sample, seed);
  }
  s.manifest().note("counts", {{"input", file.records.size()}, {"survivors", survivors}, {"written", kept.size()}});
  corpus::write_corpus(a.out, kept);
  err << file.records.size() << " records, " << survivors << " pass the filter, " << kept.size() << " written\n";
  finish(s, {a.out}, out);
}

RunConfig resolve_config(const GlobalFlags& g) {
  RunConfig cfg;
  if (g.config) cfg.apply_file(util::parse_toml(corpus::read_file(*g.config)));
  cfg.apply_env();
  if (g.seed) cfg.seed = *g.seed;
  if (g.cache_dir) cfg.cache_dir = *g.cache_dir;
  if (g.max_concurrency) cfg.max_concurrency = *g.max_concurrency;
  if (g.mock_provider) cfg.mock_provider = *g.mock_provider;
  if (g.model) cfg.model = *g.model;
  return cfg;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Literature-review table schema benchmark", "schema-bench"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--config", g.config, "TOML config file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Run seed; every stage derives its own stream from it");
  app.add_option("--cache-dir", g.cache_dir, "Response cache directory");
  app.add_option("--max-concurrency", g.max_concurrency, "Parallel instances and in-flight requests");
  app.add_option("--mock-provider", g.mock_provider, "Scripted mock provider (JSON); no network access")
      ->check(CLI::ExistingFile);
  app.add_option("--model", g.model, "Chat model for prompted stages");

  std::optional<std::string> editor_endpoint, editor_model, revision_model;

  IntentsArgs ia;
  auto* intents = app.add_subcommand("intents", "Synthesize table intents (candidates + judge)");
  intents->add_option("--corpus", ia.corpus, "Input corpus JSONL")->required();
  intents->add_option("--out", ia.out, "Output corpus JSONL with intents")->required();
  intents->add_option("--candidates", ia.candidates, "Candidates per instance");

  GenerateArgs ga;
  auto* generate = app.add_subcommand("generate", "Generate schemas");
  generate->add_option("--corpus", ga.corpus)->required();
  generate->add_option("--out", ga.out)->required();
  generate->add_option("--method", ga.method)->check(CLI::IsMember({"joint", "lloom", "sequential"}));
  generate->add_option("--variant", ga.variant, "Joint input variant")
      ->check(CLI::IsMember({"TA", "TA_TI", "TFT_TI", "TA_C_IR", "TA_TI_ICL"}));
  generate->add_option("--icl-corpus", ga.icl_corpus, "Pool of (intent, reference) examples for TA_TI_ICL");

  CritiqueArgs ca;
  auto* critique = app.add_subcommand("critique", "Critique candidate schemas");
  critique->add_option("--corpus", ca.corpus)->required();
  critique->add_option("--candidates", ca.candidates)->required();
  critique->add_option("--out", ca.out)->required();
  critique->add_option("--critique-mode", ca.mode)->check(CLI::IsMember({"oracle", "self", "icl", "distilled"}));
  critique->add_option("--silver", ca.silver, "Silver corpus for icl retrieval");
  critique->add_option("--silver-candidates", ca.silver_candidates, "Generated schemas for the silver corpus");
  critique->add_option("--editor-endpoint", editor_endpoint, "Hosted distilled critic (OpenAI-compatible base URL)");
  critique->add_option("--editor-model", editor_model);

  EditArgs ea;
  auto* edit = app.add_subcommand("edit", "Edit candidate schemas");
  edit->add_option("--method", ea.method)->check(CLI::IsMember({"unguided", "add-column", "drop-column", "critique"}));
  edit->add_option("--critique-mode", ea.critique.mode)->check(CLI::IsMember({"oracle", "self", "icl", "distilled"}));
  edit->add_option("--corpus", ea.critique.corpus)->required();
  edit->add_option("--candidates", ea.critique.candidates)->required();
  edit->add_option("--out", ea.critique.out)->required();
  edit->add_option("--silver", ea.critique.silver);
  edit->add_option("--silver-candidates", ea.critique.silver_candidates);
  edit->add_option("--editor-endpoint", editor_endpoint, "Hosted fine-tuned editor (OpenAI-compatible base URL)");
  edit->add_option("--editor-model", editor_model);
  edit->add_option("--revision-model", revision_model, "Model that applies critiques");

  EvaluateArgs va;
  auto* evaluate = app.add_subcommand("evaluate", "Threshold-sweep evaluation against references");
  evaluate->add_option("--generated", va.generated)->required();
  evaluate->add_option("--corpus", va.corpus)->required();
  evaluate->add_option("--out", va.out, "Report JSON")->required();
  evaluate->add_option("--csv", va.csv, "Per-instance AUC CSV (default: report path with .csv)");
  evaluate->add_flag("--normalize-auc", va.normalize_auc, "Divide AUCs by the threshold range width");
  evaluate->add_option("--scorer", va.scorer)->check(CLI::IsMember({"embedding", "exact", "bertscore-http"}));

  SignificanceArgs sa;
  auto* significance = app.add_subcommand("significance", "Paired two-tailed t-test between two runs");
  significance->add_option("--a", sa.a)->required()->check(CLI::ExistingFile);
  significance->add_option("--b", sa.b)->required()->check(CLI::ExistingFile);
  significance->add_option("--metric", sa.metric)->check(CLI::IsMember({"recall_auc", "precision_auc", "f1_auc"}));
  significance->add_option("--out", sa.out);
  significance->add_option("--name-a", sa.name_a);
  significance->add_option("--name-b", sa.name_b);
  significance->add_option("--alpha", sa.alpha)->check(CLI::Range(0.0, 1.0));

  BuildDatasetArgs ba;
  auto* build = app.add_subcommand("build-dataset", "Emit chat-format training JSONL");
  build->add_option("--kind", ba.kind)
      ->check(CLI::IsMember({"generation", "unguided", "add-column", "drop-column", "critique-distill"}));
  build->add_option("--corpus", ba.corpus)->required();
  build->add_option("--candidates", ba.candidates);
  build->add_option("--out", ba.out, "Output prefix (<out>.train.jsonl, <out>.val.jsonl)")->required();
  build->add_option("--train-n", ba.train_n);
  build->add_option("--val-n", ba.val_n);

  FilterCleanArgs fa;
  auto* filter = app.add_subcommand("filter-clean", "Size filter, exclusions and seeded sample");
  filter->add_option("--corpus", fa.corpus)->required();
  filter->add_option("--out", fa.out)->required();
  filter->add_option("--exclude", fa.exclude, "Instance ids to drop, one per line")->check(CLI::ExistingFile);
  filter->add_option("--sample", fa.sample, "Seeded sample size after filtering");
  filter->add_option("--min-papers", fa.min_papers);
  filter->add_option("--min-aspects", fa.min_aspects);
  filter->add_option("--rule", fa.rule)->check(CLI::IsMember({"and", "or"}));

  std::vector<const char*> cargs;
  for (const auto& a : args) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUser;
  }

  try {
    auto cfg = resolve_config(g);
    if (editor_endpoint) cfg.editor_endpoint = *editor_endpoint;
    if (editor_model) cfg.editor_model = *editor_model;
    if (revision_model) cfg.revision_model = *revision_model;
    cfg.validate();
    auto* sub = app.get_subcommands().front();
    Session s(cfg, args, sub->get_name());
    if (sub == intents) cmd_intents(s, ia, out, err);
    else if (sub == generate) cmd_generate(s, ga, out, err);
    else if (sub == critique) cmd_critique(s, ca, out, err);
    else if (sub == edit) cmd_edit(s, ea, out, err);
    else if (sub == evaluate) cmd_evaluate(s, va, out, err);
    else if (sub == significance) cmd_significance(s, sa, out);
    else if (sub == build) cmd_build_dataset(s, ba, out, err);
    else if (sub == filter) cmd_filter_clean(s, fa, out, err);
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace schemabench::cli
