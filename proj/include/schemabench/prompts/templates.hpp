#pragma once

#include <string_view>

// Prompt templates. Placeholders use Python format syntax: `{name}` is substituted and
// `{{` / `}}` render as literal braces. Wrapped source lines are joined with single spaces;
// explicit line-continuation points, tagged fields (`[Tag] ...`) and bare placeholders
// start their own lines.

namespace schemabench::prompts {

extern const std::string_view kSystemPrompt;

// intent synthesis
extern const std::string_view kGenerateIntent;  // {table} {caption} {in_text_refs} {papers}
extern const std::string_view kJudgeIntents;    // {table} {caption} {in_text_refs} {goal_text}

// joint generation
extern const std::string_view kJointTitleAbstract;        // {papers}
extern const std::string_view kJointCaptionRefs;          // {caption} {in_text_refs} {papers}
extern const std::string_view kJointIntent;               // {user_goal} {papers}
extern const std::string_view kJointIntentFullText;       // {user_goal} {full_text_papers}
extern const std::string_view kJointIntentIcl;            // {icl_text} {user_goal} {papers}

// parallel (concept induction) workflow
extern const std::string_view kSummarize;                 // {ex}
extern const std::string_view kSummarizeWithIntent;       // {ex} {goal}
extern const std::string_view kSynthesizePatterns;        // {examples} {n_concepts} {seeding_phrase}
extern const std::string_view kReviewRemove;              // {concepts}
extern const std::string_view kReviewRemoveSeed;          // {concepts} {seed}
extern const std::string_view kReviewMerge;               // {concepts}
extern const std::string_view kConceptsToSchema;          // {concepts} {user_goal}

// sequential workflow
extern const std::string_view kUpdateFromBatch;           // {intent} {curr_schema} {new_batch} {past_papers}

// critiques
extern const std::string_view kSelfCritique;              // {intent} {schema} {papers}
extern const std::string_view kApplyCritique;             // {intent} {org_schema} {feedback} {papers}
extern const std::string_view kOracleCritique;            // {gen_schema} {ref_schema} {papers}
extern const std::string_view kIclCritique;               // {critique_text} {intent} {org_schema} {papers}

}  // namespace schemabench::prompts
