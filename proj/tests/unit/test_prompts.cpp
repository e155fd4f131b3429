#include <doctest.h>

#include <fstream>

#include "schemabench/error.hpp"
#include "schemabench/prompts/render.hpp"
#include "schemabench/prompts/templates.hpp"
#include "schemabench/util/json.hpp"
#include "support/test_support.hpp"

using namespace schemabench;
using namespace schemabench::prompts;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::IoError;
}

std::string strip_ws(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != ' ' && c != '\n' && c != '\t' && c != '\r') out += c;
  }
  return out;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) s.replace(pos, from.size(), to);
  return s;
}

struct Named {
  const char* key;
  std::string_view tpl;
  std::vector<std::string> fields;
};

const std::vector<Named>& all_templates() {
  static const std::vector<Named> t{
      {"generate_intent", kGenerateIntent, {"table", "caption", "in_text_refs", "papers"}},
      {"judge_intents", kJudgeIntents, {"table", "caption", "in_text_refs", "goal_text"}},
      {"joint_title_abstract", kJointTitleAbstract, {"papers"}},
      {"joint_caption_refs", kJointCaptionRefs, {"caption", "in_text_refs", "papers"}},
      {"joint_intent", kJointIntent, {"user_goal", "papers"}},
      {"joint_intent_full_text", kJointIntentFullText, {"user_goal", "full_text_papers"}},
      {"joint_intent_icl", kJointIntentIcl, {"icl_text", "user_goal", "papers"}},
      {"summarize", kSummarize, {"ex"}},
      {"summarize_with_intent", kSummarizeWithIntent, {"ex", "goal"}},
      {"synthesize_patterns", kSynthesizePatterns, {"examples", "n_concepts", "seeding_phrase"}},
      {"review_remove", kReviewRemove, {"concepts"}},
      {"review_remove_seed", kReviewRemoveSeed, {"concepts", "seed"}},
      {"review_merge", kReviewMerge, {"concepts"}},
      {"concepts_to_schema", kConceptsToSchema, {"concepts", "user_goal"}},
      {"update_from_batch", kUpdateFromBatch, {"intent", "curr_schema", "new_batch", "past_papers"}},
      {"self_critique", kSelfCritique, {"intent", "schema", "papers"}},
      {"apply_critique", kApplyCritique, {"intent", "org_schema", "feedback", "papers"}},
      {"oracle_critique", kOracleCritique, {"gen_schema", "ref_schema", "papers"}},
      {"icl_critique", kIclCritique, {"critique_text", "intent", "org_schema", "papers"}},
  };
  return t;
}

}  // namespace

TEST_CASE("templates match the published prompt text") {
  std::ifstream in(testsupport::data_path("golden/prompt_fingerprints.json"));
  REQUIRE(in.good());
  auto golden = util::Json::parse(in);
  CHECK(golden.size() == all_templates().size());
  for (const auto& t : all_templates()) {
    INFO(t.key);
    REQUIRE(golden.contains(t.key));
    // Whitespace-insensitive so line wrapping in the source text does not matter. The
    // brace escapes in our templates correspond to single braces in the published text.
    std::string ours = strip_ws(t.tpl);
    std::string unescaped = replace_all(replace_all(ours, "{{", "{"), "}}", "}");
    bool found = false;
    for (const auto& fp : golden[t.key]) found = found || fp == ours || fp == unescaped;
    CHECK(found);
  }
}

TEST_CASE("template placeholders") {
  for (const auto& t : all_templates()) {
    INFO(t.key);
    CHECK(placeholders(t.tpl) == t.fields);
    Values v;
    for (const auto& f : t.fields) v[f] = "<" + f + ">";
    const auto out = render(t.tpl, v);
    for (const auto& f : t.fields) CHECK(out.find("<" + f + ">") != std::string::npos);
  }
  CHECK_FALSE(kSystemPrompt.empty());
  CHECK(placeholders(kSystemPrompt).empty());
}

TEST_CASE("render substitutes once and unescapes braces") {
  CHECK(render("a {x} b {{lit}} {y}", {{"x", "{y}"}, {"y", "2"}}) == "a {y} b {lit} 2");
  CHECK(render("{{\"k\": {v}}}", {{"v", "1"}}) == "{\"k\": 1}");
  CHECK(code_of([] { render("{missing}", {}); }) == Errc::InvalidParameter);
  CHECK(code_of([] { render("{open", {}); }) == Errc::InvalidParameter);
  CHECK(code_of([] { render("close}", {}); }) == Errc::InvalidParameter);
  CHECK(placeholders("{a}{b}{a}{{c}}") == std::vector<std::string>{"a", "b"});
}

TEST_CASE("paper block rendering") {
  auto inst = testsupport::make_instance("p", 2, testsupport::schema_of({"A", "B"}));
  inst.papers[0].title = "T1";
  inst.papers[0].abstract = "A1";
  inst.papers[1].title = "T2";
  inst.papers[1].abstract = "A2";
  inst.papers[1].full_text = std::string(10, 'x') + "\xC3\xA9";
  CHECK(render_papers(inst.papers) == "Paper 1\nTitle: T1\nAbstract: A1\n\nPaper 2\nTitle: T2\nAbstract: A2");
  PaperBlockOptions opts{true, 11};
  auto block = render_papers(inst.papers, opts);
  // Budget 11 would split the two-byte character, so it is dropped whole.
  CHECK(block.substr(block.rfind("Full text: ") + 11) == std::string(10, 'x'));
  inst.papers[0].full_text.reset();
  CHECK(code_of([&] { render_papers(inst.papers, opts); }) == Errc::MissingFullText);
  CHECK(render_papers({}).empty());
}

TEST_CASE("table, refs and candidate rendering") {
  auto inst = testsupport::make_instance("p", 1, testsupport::schema_of({"Model", "Data"}));
  inst.table_values.reset();
  CHECK(render_table(inst) == "| Model | Data |");
  inst.table_values = "| a | b |\n| 1 | 2 |";
  CHECK(render_table(inst) == "| a | b |\n| 1 | 2 |");
  inst.table_values.reset();
  inst.reference_schema.reset();
  CHECK(code_of([&] { render_table(inst); }) == Errc::MissingReference);

  CHECK(render_in_text_refs(std::nullopt) == "None");
  CHECK(render_in_text_refs(std::vector<std::string>{}) == "None");
  CHECK(render_in_text_refs(std::vector<std::string>{"x", "y"}) == "x\ny");

  std::vector<core::IntentCandidate> c(2);
  c[0].goal = "G1?";
  c[1].goal = "G2?";
  CHECK(render_candidate_goals(c) == "\nCandidate 1: G1?\nCandidate 2: G2?");
}
