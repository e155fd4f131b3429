#include <doctest.h>

#include "schemabench/error.hpp"
#include "schemabench/intents/intents.hpp"
#include "schemabench/llm/mock_provider.hpp"
#include "schemabench/prompts/templates.hpp"
#include "support/test_support.hpp"

using namespace schemabench;
using namespace schemabench::intents;

namespace {

llm::MockReply ok(std::string text) { return llm::MockReply{200, false, std::move(text), llm::FinishReason::Stop}; }

// Candidates answer by seed tag; the judge answers from `judge_replies` in order.
std::shared_ptr<llm::MockProvider> scripted(std::vector<std::string> judge_replies) {
  auto replies = std::make_shared<std::vector<std::string>>(std::move(judge_replies));
  auto next = std::make_shared<std::size_t>(0);
  return std::make_shared<llm::MockProvider>([replies, next](const llm::ChatRequest& r) {
    const std::string tag = r.seed_tag.value_or("");
    if (tag.rfind("cand-", 0) == 0) {
      return ok("```json\n{\"goal\": \"How do the methods compare on dataset " + tag.substr(5) +
                "?\", \"justification\": \"j" + tag.substr(5) + "\"}\n```");
    }
    const auto& text = (*replies)[std::min(*next, replies->size() - 1)];
    ++*next;
    return ok(text);
  });
}

}  // namespace

TEST_CASE("intent synthesis: n samples then one judge call") {
  auto p = scripted({R"({"justification": "clear", "best_goal": "How do the methods compare on dataset 3?"})"});
  llm::Gateway g(p, llm::GatewayOptions{});
  auto inst = testsupport::make_instance("t1", 3, testsupport::schema_of({"A", "B"}));
  auto s = synthesize_intent(inst, g, 5);
  CHECK(p->call_count() == 6);
  REQUIRE(s.candidates.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(s.candidates[i].goal == "How do the methods compare on dataset " + std::to_string(i) + "?");
  }
  CHECK(s.judge.chosen_index == 3);
  CHECK(s.judge.exact_match);
  CHECK_FALSE(s.judge.fallback);
  CHECK(s.intent() == s.candidates[3].goal);
  auto stats = g.stats();
  CHECK(stats["intent_candidates"].provider_calls == 5);
  CHECK(stats["intent_judge"].provider_calls == 1);

  auto calls = p->calls();
  CHECK(calls[0].system_prompt == prompts::kSystemPrompt);
  CHECK(calls[0].user_prompt == intent_user_prompt(inst));
  CHECK(calls[5].user_prompt == judge_user_prompt(inst, s.candidates));
  CHECK(calls[5].user_prompt.find("Candidate 5: " + s.candidates[4].goal) != std::string::npos);

  auto prov = provenance_json(s);
  CHECK(prov["candidates"].size() == 5);
  CHECK(prov["chosen_index"] == 3);
  CHECK(prov["fallback_warning"] == false);
}

TEST_CASE("judge None twice falls back to the first candidate") {
  auto p = scripted({R"({"justification": "none fit", "best_goal": "None"})"});
  llm::Gateway g(p, llm::GatewayOptions{});
  auto inst = testsupport::make_instance("t2", 2, testsupport::schema_of({"A", "B"}));
  auto s = synthesize_intent(inst, g, 3);
  CHECK(p->call_count() == 5);
  CHECK(s.judge.fallback);
  CHECK(s.judge.chosen_index == 0);
  CHECK_FALSE(s.judge.verdict.best_goal.has_value());
  CHECK(provenance_json(s)["verdict"]["best_goal"].is_null());
}

TEST_CASE("judge None once then a real answer") {
  auto p = scripted({R"({"justification": "x", "best_goal": "None"})",
                     R"({"justification": "y", "best_goal": "How do the methods compare on dataset 1?"})"});
  llm::Gateway g(p, llm::GatewayOptions{});
  auto inst = testsupport::make_instance("t3", 2, testsupport::schema_of({"A", "B"}));
  auto s = synthesize_intent(inst, g, 2);
  CHECK(p->call_count() == 4);
  CHECK_FALSE(s.judge.fallback);
  CHECK(s.judge.chosen_index == 1);
}

TEST_CASE("judge paraphrase resolves by token overlap") {
  std::vector<core::IntentCandidate> c{{"Which datasets do the papers use?", ""},
                                       {"How large are the evaluated models?", ""},
                                       {"What training objectives are compared?", ""}};
  bool exact = true;
  CHECK(resolve_best_goal(c, "How large are the evaluated models.", &exact) == 1);
  CHECK_FALSE(exact);
  CHECK(resolve_best_goal(c, "What training objectives are compared?", &exact) == 2);
  CHECK(exact);
  // No overlap at all: earliest candidate.
  CHECK(resolve_best_goal(c, "zzz", &exact) == 0);
  CHECK_THROWS_AS(resolve_best_goal({}, "x"), Error);
}

TEST_CASE("malformed candidate replies are re-asked once, then fail") {
  auto p = std::make_shared<llm::MockProvider>();
  p->add_rule("could not be parsed", {ok(R"({"goal": "Recovered goal?", "justification": "r"})")});
  p->set_fallback(ok("I think the goal is about datasets."));
  llm::Gateway g(p, llm::GatewayOptions{});
  auto inst = testsupport::make_instance("t4", 2, testsupport::schema_of({"A", "B"}));
  auto c = generate_intent_candidates(inst, 1, g);
  CHECK(c[0].goal == "Recovered goal?");
  CHECK(p->call_count() == 2);

  auto bad = std::make_shared<llm::MockProvider>();
  bad->set_fallback(ok(R"({"justification": "no goal key"})"));
  llm::Gateway g2(bad, llm::GatewayOptions{});
  try {
    generate_intent_candidates(inst, 1, g2);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ParseError);
  }
  CHECK_THROWS_AS(generate_intent_candidates(inst, 0, g2), Error);
}

TEST_CASE("intent prompt falls back to the reference header row") {
  auto inst = testsupport::make_instance("t5", 1, testsupport::schema_of({"Model", "Data"}));
  inst.table_values.reset();
  inst.caption.reset();
  const auto u = intent_user_prompt(inst);
  CHECK(u.find("| Model | Data |") != std::string::npos);
}

TEST_CASE("ranking agreement averages spearman over annotators") {
  std::map<std::string, std::vector<std::vector<int>>> human{
      {"a", {{1, 2, 3, 4, 5}, {2, 1, 3, 4, 5}}}, {"b", {{5, 4, 3, 2, 1}}}, {"c", {{1, 2}}}};
  std::map<std::string, std::vector<int>> judge{{"a", {1, 2, 3, 4, 5}}, {"b", {1, 2, 3, 4, 5}}};
  auto r = ranking_agreement(human, judge);
  CHECK(r.per_instance.size() == 2);
  CHECK(r.per_instance["a"] == doctest::Approx(0.95));
  CHECK(r.per_instance["b"] == doctest::Approx(-1.0));
  CHECK(r.mean == doctest::Approx(-0.025));
  CHECK_THROWS_AS(ranking_agreement(human, {}), Error);
}
