#include "schemabench/intents/intents.hpp"

#include <algorithm>
#include <set>

#include "schemabench/error.hpp"
#include "schemabench/eval/metrics.hpp"
#include "schemabench/llm/json_extract.hpp"
#include "schemabench/llm/structured.hpp"
#include "schemabench/prompts/render.hpp"
#include "schemabench/prompts/templates.hpp"
#include "schemabench/util/text.hpp"

namespace schemabench::intents {

namespace {

std::string string_field(const util::Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return {};
  const auto& v = j.at(key);
  return v.is_string() ? v.get<std::string>() : util::dump_compact(v);
}

core::IntentCandidate parse_candidate(const std::string& text) {
  const auto j = llm::extract_json_payload(text);
  if (!j.is_object()) throw Error(Errc::ParseError, "intent reply is not an object");
  core::IntentCandidate c{util::trim(string_field(j, "goal")), string_field(j, "justification")};
  if (c.goal.empty()) throw Error(Errc::ParseError, "intent reply has no goal");
  return c;
}

JudgeVerdict parse_verdict(const std::string& text) {
  const auto j = llm::extract_json_payload(text);
  if (!j.is_object()) throw Error(Errc::ParseError, "judge reply is not an object");
  if (!j.contains("best_goal")) throw Error(Errc::ParseError, "judge reply has no best_goal");
  JudgeVerdict v;
  v.justification = string_field(j, "justification");
  const auto best = util::trim(string_field(j, "best_goal"));
  if (!best.empty() && best != "None" && best != "none") v.best_goal = best;
  return v;
}

std::set<std::string> token_set(const std::string& s) {
  auto tokens = util::word_tokens(s);
  return {tokens.begin(), tokens.end()};
}

}  // namespace

std::string intent_user_prompt(const core::TableInstance& instance) {
  return prompts::render(prompts::kGenerateIntent,
                         {{"table", prompts::render_table(instance)},
                          {"caption", instance.caption.value_or("None")},
                          {"in_text_refs", prompts::render_in_text_refs(instance.in_text_refs)},
                          {"papers", prompts::render_papers(instance.papers)}});
}

std::string judge_user_prompt(const core::TableInstance& instance, const std::vector<core::IntentCandidate>& candidates) {
  return prompts::render(prompts::kJudgeIntents,
                         {{"table", prompts::render_table(instance)},
                          {"caption", instance.caption.value_or("None")},
                          {"in_text_refs", prompts::render_in_text_refs(instance.in_text_refs)},
                          {"goal_text", prompts::render_candidate_goals(candidates)}});
}

std::vector<core::IntentCandidate> generate_intent_candidates(const core::TableInstance& instance, std::size_t n,
                                                              llm::Gateway& gateway) {
  if (n == 0) throw Error(Errc::InvalidParameter, "candidate count must be at least 1");
  const auto user = intent_user_prompt(instance);
  // Sequential so a FIFO-scripted provider sees the samples in a fixed order.
  std::vector<core::IntentCandidate> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto request = gateway.make_request(std::string(prompts::kSystemPrompt), user, "cand-" + std::to_string(i));
    out.push_back(llm::complete_structured(gateway, request, "intent_candidates", Errc::ParseError,
                                           instance.instance_id + " sample " + std::to_string(i), parse_candidate));
  }
  return out;
}

std::size_t resolve_best_goal(const std::vector<core::IntentCandidate>& candidates, const std::string& best_goal,
                              bool* exact) {
  if (candidates.empty()) throw Error(Errc::InvalidParameter, "no candidates");
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].goal == best_goal) {
      if (exact) *exact = true;
      return i;
    }
  }
  if (exact) *exact = false;
  const auto target = token_set(best_goal);
  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto tokens = token_set(candidates[i].goal);
    std::size_t shared = 0;
    for (const auto& t : tokens) shared += target.count(t);
    const std::size_t unioned = tokens.size() + target.size() - shared;
    const double score = unioned ? static_cast<double>(shared) / static_cast<double>(unioned) : 0.0;
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

JudgeResult judge_select(const core::TableInstance& instance, const std::vector<core::IntentCandidate>& candidates,
                         llm::Gateway& gateway) {
  if (candidates.empty()) throw Error(Errc::InvalidParameter, "judge needs at least one candidate");
  const auto user = judge_user_prompt(instance, candidates);
  JudgeResult result;
  for (int round = 0; round < 2; ++round) {
    auto request = gateway.make_request(std::string(prompts::kSystemPrompt), user, round == 0 ? "judge" : "judge-retry");
    result.verdict = llm::complete_structured(gateway, request, "intent_judge", Errc::ParseError,
                                              instance.instance_id + " judge", parse_verdict);
    if (result.verdict.best_goal) {
      result.chosen_index = resolve_best_goal(candidates, *result.verdict.best_goal, &result.exact_match);
      return result;
    }
  }
  result.chosen_index = 0;
  result.fallback = true;
  return result;
}

IntentSynthesis synthesize_intent(const core::TableInstance& instance, llm::Gateway& gateway, std::size_t n) {
  IntentSynthesis s;
  s.candidates = generate_intent_candidates(instance, n, gateway);
  s.judge = judge_select(instance, s.candidates, gateway);
  return s;
}

util::Json provenance_json(const IntentSynthesis& synthesis) {
  util::Json candidates = util::Json::array();
  for (const auto& c : synthesis.candidates) candidates.push_back({{"goal", c.goal}, {"justification", c.justification}});
  util::Json verdict = util::Json::object();
  verdict["justification"] = synthesis.judge.verdict.justification;
  verdict["best_goal"] = synthesis.judge.verdict.best_goal ? util::Json(*synthesis.judge.verdict.best_goal) : util::Json();
  util::Json j = util::Json::object();
  j["candidates"] = std::move(candidates);
  j["verdict"] = std::move(verdict);
  j["chosen_index"] = synthesis.judge.chosen_index;
  j["exact_match"] = synthesis.judge.exact_match;
  j["fallback_warning"] = synthesis.judge.fallback;
  return j;
}

RankingAgreement ranking_agreement(const std::map<std::string, std::vector<std::vector<int>>>& human,
                                   const std::map<std::string, std::vector<int>>& judge) {
  RankingAgreement out;
  double total = 0.0;
  for (const auto& [id, annotations] : human) {
    auto it = judge.find(id);
    if (it == judge.end() || annotations.empty()) continue;
    double sum = 0.0;
    for (const auto& ranks : annotations) sum += eval::spearman_rho(ranks, it->second);
    const double mean = sum / static_cast<double>(annotations.size());
    out.per_instance[id] = mean;
    total += mean;
  }
  if (out.per_instance.empty()) throw Error(Errc::EmptyCorpus, "no instance has both human and judge rankings");
  out.mean = total / static_cast<double>(out.per_instance.size());
  return out;
}

}  // namespace schemabench::intents
