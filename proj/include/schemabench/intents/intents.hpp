#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "schemabench/core/types.hpp"
#include "schemabench/llm/gateway.hpp"
#include "schemabench/util/json.hpp"

namespace schemabench::intents {

inline constexpr std::size_t kDefaultCandidates = 5;

struct JudgeVerdict {
  std::string justification;
  std::optional<std::string> best_goal;  // absent when the judge answered None
};

struct JudgeResult {
  JudgeVerdict verdict;
  std::size_t chosen_index = 0;
  bool exact_match = false;
  bool fallback = false;  // judge declined twice; the first candidate was taken
};

struct IntentSynthesis {
  std::vector<core::IntentCandidate> candidates;
  JudgeResult judge;
  const std::string& intent() const { return candidates.at(judge.chosen_index).goal; }
};

std::string intent_user_prompt(const core::TableInstance& instance);
std::string judge_user_prompt(const core::TableInstance& instance, const std::vector<core::IntentCandidate>& candidates);

/// n sampled calls with seed tags cand-0 .. cand-{n-1}; candidates keep sampling order.
std::vector<core::IntentCandidate> generate_intent_candidates(const core::TableInstance& instance, std::size_t n,
                                                              llm::Gateway& gateway);

JudgeResult judge_select(const core::TableInstance& instance, const std::vector<core::IntentCandidate>& candidates,
                         llm::Gateway& gateway);

/// Exact goal match first, then the highest token-set Jaccard overlap (earliest on ties).
std::size_t resolve_best_goal(const std::vector<core::IntentCandidate>& candidates, const std::string& best_goal,
                              bool* exact = nullptr);

IntentSynthesis synthesize_intent(const core::TableInstance& instance, llm::Gateway& gateway,
                                  std::size_t n = kDefaultCandidates);

util::Json provenance_json(const IntentSynthesis& synthesis);

/// Agreement between annotator rankings and judge rankings of the same candidates.
struct RankingAgreement {
  std::map<std::string, double> per_instance;  // mean rho over annotators
  double mean = 0.0;
};

/// `human` maps instance id to one ranking per annotator; `judge` maps instance id to the
/// judge's ranking. Instances without a judge ranking are skipped.
RankingAgreement ranking_agreement(const std::map<std::string, std::vector<std::vector<int>>>& human,
                                   const std::map<std::string, std::vector<int>>& judge);

}  // namespace schemabench::intents
