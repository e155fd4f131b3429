#include <doctest.h>

#include <sstream>

#include "schemabench/cli/cli.hpp"
#include "schemabench/cli/config.hpp"
#include "schemabench/cli/manifest.hpp"
#include "schemabench/corpus/corpus.hpp"
#include "schemabench/eval/report.hpp"
#include "schemabench/eval/metrics.hpp"
#include "schemabench/util/json.hpp"
#include "schemabench/util/toml_lite.hpp"
#include "support/test_support.hpp"

using namespace schemabench;
using testsupport::data_path;
using testsupport::read_text;
using util::Json;

namespace {

const std::vector<std::pair<std::string, std::string>> kEnv{
    {"SOURCE_DATE_EPOCH", "1700000000"}, {"SCHEMA_BENCH_API_KEY", ""}, {"SCHEMA_BENCH_BASE_URL", ""}};

struct Pipeline {
  testsupport::TempDir dir;
  std::vector<std::string> common() const {
    return {"--mock-provider", data_path("fixtures/pipeline_mock.json").string(), "--cache-dir", (dir / "cache").string(),
            "--max-concurrency", "1"};
  }
  int run(std::vector<std::string> args) const {
    auto all = common();
    all.insert(all.end(), args.begin(), args.end());
    return testsupport::run_cli(all, dir / "log.txt", kEnv);
  }
  std::string log() const { return read_text(dir / "log.txt"); }
};

Json manifest_of(const std::filesystem::path& out) {
  return Json::parse(read_text(out.string() + ".manifest.json"));
}

}  // namespace

TEST_CASE("candidate lines round trip") {
  cli::CandidateRecord r{"id-1", "joint:TA_TI", testsupport::schema_of({"A", "B"}), Json::object()};
  r.extra["critique"] = "text";
  const auto line = cli::candidate_line(r);
  auto back = cli::parse_candidates(line + "\n\n");
  REQUIRE(back.size() == 1);
  CHECK(back[0].schema == r.schema);
  CHECK(back[0].extra["critique"] == "text");
  CHECK(cli::candidate_line(back[0]) == line);
  try {
    cli::parse_candidates(line + "\n" + line + "\n", "c.jsonl");
    FAIL("duplicate accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::RecordParseError);
    CHECK(std::string(e.what()).find("c.jsonl:2") != std::string::npos);
  }
}

TEST_CASE("exit codes") {
  CHECK(cli::exit_code_for(Errc::ConfigError) == cli::kExitUser);
  CHECK(cli::exit_code_for(Errc::RecordParseError) == cli::kExitUser);
  CHECK(cli::exit_code_for(Errc::ProviderError) == cli::kExitRuntime);
  CHECK(cli::exit_code_for(Errc::GenerationParseError) == cli::kExitRuntime);

  std::ostringstream out, err;
  CHECK(cli::run({"schema-bench", "generate", "--corpus", "x", "--out", "y", "--bogus"}, out, err) == cli::kExitUser);
  CHECK(err.str().find("--bogus") != std::string::npos);
  CHECK(cli::run({"schema-bench"}, out, err) == cli::kExitUser);
  CHECK(cli::run({"schema-bench", "--help"}, out, err) == cli::kExitOk);
  CHECK(out.str().find("evaluate") != std::string::npos);
}

TEST_CASE("config file keys and precedence") {
  testsupport::TempDir dir;
  corpus::write_file(dir / "bad.toml", "[provider]\nmodle = \"x\"\n");
  cli::RunConfig cfg;
  CHECK_THROWS_AS(cfg.apply_file(util::parse_toml(read_text(dir / "bad.toml"))), Error);
  corpus::write_file(dir / "type.toml", "max_concurrency = \"two\"\n");
  CHECK_THROWS_AS(cfg.apply_file(util::parse_toml(read_text(dir / "type.toml"))), Error);

  cfg = {};
  cfg.threshold_lower = 100;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.scorer = "bertscore-http";
  CHECK_THROWS_AS(cfg.validate(), Error);

  // flag > env > file > default, observed through the run manifest
  corpus::write_file(dir / "run.toml",
                     "seed = 5\n[provider]\nbase_url = \"http://file.invalid/v1\"\nmodel = \"file-model\"\n"
                     "[eval]\nscorer = \"exact\"\n");
  const auto corpus_path = data_path("fixtures/corpus10.jsonl").string();
  corpus::write_file(dir / "gen.jsonl",
                     cli::candidate_line({"fx-00", "m", testsupport::schema_of({"Benchmark", "X"}), Json::object()}) + "\n");
  const auto out = dir / "rep.json";
  int rc = testsupport::run_cli({"--config", (dir / "run.toml").string(), "--seed", "9", "evaluate", "--generated",
                                 (dir / "gen.jsonl").string(), "--corpus", corpus_path, "--out", out.string()},
                                dir / "log.txt",
                                {{"SCHEMA_BENCH_BASE_URL", "http://env.invalid/v1"}, {"SCHEMA_BENCH_API_KEY", "k"}});
  REQUIRE_MESSAGE(rc == 0, read_text(dir / "log.txt"));
  auto m = manifest_of(out);
  CHECK(m["config"]["seed"] == 9);
  CHECK(m["config"]["provider"]["base_url"] == "http://env.invalid/v1");
  CHECK(m["config"]["provider"]["model"] == "file-model");
  CHECK(m["config"]["provider"]["api_key_set"] == true);
  CHECK(m["config"]["eval"]["scorer"] == "exact");
  CHECK(read_text(dir / "log.txt").find("\"k\"") == std::string::npos);
  CHECK(Json::parse(read_text(out))["scorer"] == "exact");

  rc = testsupport::run_cli({"--config", (dir / "bad.toml").string(), "evaluate", "--generated",
                             (dir / "gen.jsonl").string(), "--corpus", corpus_path, "--out", out.string()},
                            dir / "log.txt", kEnv);
  CHECK(rc == cli::kExitUser);
  CHECK(read_text(dir / "log.txt").find("modle") != std::string::npos);
}

TEST_CASE("missing provider and provider failures") {
  testsupport::TempDir dir;
  const auto corpus_path = data_path("fixtures/corpus10.jsonl").string();
  int rc = testsupport::run_cli({"generate", "--corpus", corpus_path, "--out", (dir / "g.jsonl").string()},
                                dir / "log.txt", kEnv);
  CHECK(rc == cli::kExitUser);
  CHECK(read_text(dir / "log.txt").find("SCHEMA_BENCH_API_KEY") != std::string::npos);

  corpus::write_file(dir / "empty.json", R"({"mode": "scripted", "rules": []})");
  rc = testsupport::run_cli({"--mock-provider", (dir / "empty.json").string(), "generate", "--variant", "TA", "--corpus",
                             corpus_path, "--out", (dir / "g.jsonl").string()},
                            dir / "log.txt", kEnv);
  CHECK(rc == cli::kExitRuntime);
  CHECK(!std::filesystem::exists(dir / "g.jsonl"));
}

TEST_CASE("mock pipeline: intents, generate, critique, edit, evaluate, significance") {
  Pipeline p;
  const auto d = [&](const char* n) { return (p.dir / n).string(); };
  REQUIRE_MESSAGE(p.run({"intents", "--corpus", data_path("fixtures/corpus10.jsonl").string(), "--out", d("int.jsonl")}) == 0,
                  p.log());
  auto with_intents = corpus::load_corpus(d("int.jsonl"), corpus::Tier::Gold);
  REQUIRE(with_intents.records.size() == 10);
  CHECK(*with_intents.records[0].intent == "Which evaluation settings do the compared methods share (cand-2)?");
  CHECK(testsupport::read_lines(d("int.jsonl.provenance.jsonl")).size() == 10);
  CHECK(manifest_of(d("int.jsonl"))["provider_calls"] == 60);

  REQUIRE_MESSAGE(p.run({"generate", "--corpus", d("int.jsonl"), "--out", d("gen.jsonl")}) == 0, p.log());
  auto gens = cli::parse_candidates(read_text(d("gen.jsonl")));
  REQUIRE(gens.size() == 10);
  CHECK(gens[0].method == "joint:TA_TI");
  CHECK(gens[0].schema.names() == std::vector<std::string>{"Study design", "Benchmark"});
  CHECK(manifest_of(d("gen.jsonl"))["stages"]["joint_TA_TI"]["provider_calls"] == 10);

  REQUIRE_MESSAGE(p.run({"critique", "--critique-mode", "oracle", "--corpus", d("int.jsonl"), "--candidates",
                         d("gen.jsonl"), "--out", d("crit.jsonl")}) == 0,
                  p.log());
  auto crit = Json::parse(testsupport::read_lines(d("crit.jsonl"))[0]);
  CHECK(crit["provenance"] == "oracle");
  CHECK(crit["critique"] == "Add a column recording the headline accuracy each paper reports.");

  REQUIRE_MESSAGE(p.run({"edit", "--method", "critique", "--critique-mode", "self", "--corpus", d("int.jsonl"),
                         "--candidates", d("gen.jsonl"), "--out", d("edit.jsonl")}) == 0,
                  p.log());
  auto edits = cli::parse_candidates(read_text(d("edit.jsonl")));
  REQUIRE(edits.size() == 10);
  CHECK(edits[0].schema.size() == 3);
  CHECK(edits[0].extra["critique"]["text"] == "Merge the two overlapping method columns.");

  REQUIRE_MESSAGE(p.run({"evaluate", "--generated", d("gen.jsonl"), "--corpus", d("int.jsonl"), "--out", d("a.json")}) == 0,
                  p.log());
  REQUIRE_MESSAGE(p.run({"evaluate", "--generated", d("edit.jsonl"), "--corpus", d("int.jsonl"), "--out", d("b.json"),
                         "--csv", d("b_auc.csv")}) == 0,
                  p.log());
  auto report = Json::parse(read_text(d("a.json")));
  CHECK(report["instance_count"] == 10);
  for (const auto& inst : report["instances"]) {
    CHECK(inst["thresholds"].size() == 61);
    CHECK(inst["precision"].size() == 61);
    CHECK(inst["recall"].size() == 61);
    CHECK(inst["f1"].size() == 61);
  }
  CHECK(report["instances"][0]["thresholds"][0].get<double>() == doctest::Approx(0.4));
  CHECK(std::filesystem::exists(d("a.csv")));
  CHECK(std::filesystem::exists(d("b_auc.csv")));

  REQUIRE_MESSAGE(p.run({"significance", "--a", d("a.csv"), "--b", d("b_auc.csv"), "--metric", "recall_auc", "--out",
                         d("sig.json")}) == 0,
                  p.log());
  auto sig = Json::parse(read_text(d("sig.json")));
  auto [xa, xb] = eval::pair_by_instance(eval::read_metric_column(d("a.csv"), "recall_auc"),
                                         eval::read_metric_column(d("b_auc.csv"), "recall_auc"));
  const auto expected = eval::paired_ttest(xa, xb);
  CHECK(sig["metric"] == "recall_auc");
  CHECK(sig["t"].get<double>() == expected.t);
  CHECK(sig["p"].get<double>() == expected.p);
  CHECK(sig["significant"] == expected.significant);

  // Warm rerun: every response is served from the cache.
  REQUIRE(p.run({"generate", "--corpus", d("int.jsonl"), "--out", d("gen2.jsonl")}) == 0);
  CHECK(read_text(d("gen2.jsonl")) == read_text(d("gen.jsonl")));
  auto warm = manifest_of(d("gen2.jsonl"));
  CHECK(warm["provider_calls"] == 0);
  CHECK(warm["stages"]["joint_TA_TI"]["cache_hits"] == 10);
}

TEST_CASE("build-dataset and filter-clean") {
  Pipeline p;
  const auto d = [&](const char* n) { return (p.dir / n).string(); };
  const auto fixture = data_path("fixtures/corpus10.jsonl").string();
  REQUIRE_MESSAGE(p.run({"filter-clean", "--corpus", fixture, "--out", d("clean.jsonl"), "--min-papers", "1",
                         "--min-aspects", "1", "--sample", "4"}) == 0,
                  p.log());
  CHECK(testsupport::read_lines(d("clean.jsonl")).size() == 4);
  CHECK(manifest_of(d("clean.jsonl"))["notes"]["counts"]["survivors"] == 10);

  REQUIRE(p.run({"intents", "--corpus", fixture, "--out", d("int.jsonl")}) == 0);
  REQUIRE_MESSAGE(p.run({"build-dataset", "--kind", "add-column", "--corpus", d("int.jsonl"), "--out", d("ds"),
                         "--train-n", "8", "--val-n", "2"}) == 0,
                  p.log());
  auto train = testsupport::read_lines(d("ds.train.jsonl"));
  CHECK(train.size() == 8);
  CHECK(testsupport::read_lines(d("ds.val.jsonl")).size() == 2);
  for (const auto& line : train) {
    auto j = Json::parse(line);
    CHECK(j["messages"].size() == 3);
    CHECK_NOTHROW(core::parse_schema(j["messages"][2]["content"].get<std::string>(), core::ValidationMode::Relaxed));
  }
  CHECK(p.run({"build-dataset", "--kind", "drop-column", "--corpus", d("int.jsonl"), "--out", d("ds2")}) ==
        cli::kExitUser);
}
