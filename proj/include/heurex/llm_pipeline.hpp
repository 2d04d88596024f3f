// Copyright 2026 The heurex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "heurex/condenser.hpp"
#include "heurex/design_tree.hpp"
#include "heurex/guidelines.hpp"
#include "heurex/transport.hpp"

namespace heurex::llm {

/// One violation as reported by the evaluation call. Guideline names and
/// element ids that do not resolve are kept and flagged.
struct RawViolation {
  std::string guideline;
  std::vector<std::string> node_ids;
  std::string explanation;
  bool guideline_resolved = true;
  std::vector<std::string> unresolved_ids;

  bool operator==(const RawViolation&) const = default;
};

/// Feedback phrased as expected standard, the gap to it, and how to close it.
struct Constructive {
  std::string standard;
  std::string gap;
  std::string fix;

  bool operator==(const Constructive&) const = default;
};

struct Suggestion {
  std::string id;
  RawViolation violation;
  Constructive constructive;

  bool operator==(const Suggestion&) const = default;
};

/// Stable id from the guideline, the sorted element ids and the explanation
/// with case and whitespace normalized.
std::string suggestion_id(const RawViolation& violation);

struct PromptOptions {
  std::size_t budget = condense::kDefaultTokenBudget;
  std::size_t chars_per_token = condense::kDefaultCharsPerToken;
};

/// Token estimate of all message contents taken together.
std::size_t prompt_tokens(const std::vector<PromptMessage>& messages,
                          std::size_t chars_per_token = condense::kDefaultCharsPerToken);

/// Bulleted common-error avoidance instructions from data/prompts.
const std::vector<std::string>& common_errors();

/// [system, history..., user]. History is evicted oldest exchange first
/// (three messages at a time) until the prompt fits the budget; throws
/// Error(BudgetExceeded) if it still does not fit.
std::vector<PromptMessage> build_eval_prompt(const condense::CondensedUiJson& ui,
                                             const std::vector<guidelines::GuidelineSet>& sets,
                                             const std::vector<PromptMessage>& history = {},
                                             const PromptOptions& opts = {});

/// Expects a JSON array of {guideline, elements, explanation}, optionally
/// wrapped in a single code fence. Throws Error(UnparseableResponse) with
/// the raw text as detail.
std::vector<RawViolation> parse_eval_response(std::string_view text,
                                              const design::DesignDocument& doc,
                                              const std::vector<guidelines::GuidelineSet>& sets);

/// The rephrasing call: system instructions for the standard/gap/fix
/// structure and output format, then the violations only.
std::vector<PromptMessage> build_rephrase_prompt(const std::vector<RawViolation>& violations);

std::vector<Suggestion> parse_rephrase_response(std::string_view text,
                                                const std::vector<RawViolation>& violations);

struct EvaluationResult {
  std::vector<RawViolation> violations;
  std::vector<Suggestion> suggestions;
  std::size_t transport_calls = 0;
};

/// condense -> evaluate -> parse -> rephrase -> parse. Errors carry the
/// stage ("evaluate" or "rephrase") they came from.
EvaluationResult evaluate_ui(const design::DesignDocument& doc,
                             const std::vector<guidelines::GuidelineSet>& sets,
                             const std::vector<PromptMessage>& history,
                             CompletionTransport& transport, const CompletionParams& params = {},
                             const PromptOptions& opts = {});

// Dismissal feedback -------------------------------------------------------

struct ElementSnapshot {
  std::string node_id;
  std::string condensed_json;  // empty when the node no longer exists

  bool operator==(const ElementSnapshot&) const = default;
};

std::string reflection_request_text();
std::string canned_reflection_text();

/// The two messages that ask for a self-reflection on a dismissed violation.
std::vector<PromptMessage> build_reflection_prompt(const RawViolation& violation,
                                                   const std::vector<ElementSnapshot>& snapshots);

/// assistant(bad violation + element JSON), user(reflection request),
/// assistant(reflection).
std::vector<PromptMessage> feedback_exchange(const RawViolation& violation,
                                             const std::vector<ElementSnapshot>& snapshots,
                                             const std::string& reflection);

// Label generation ---------------------------------------------------------

std::vector<PromptMessage> build_label_prompt(const std::vector<condense::CondensedUiJson>& groups);

/// Expects a JSON object id -> label covering exactly `expected_ids`.
std::map<std::string, std::string> parse_label_response(
    std::string_view text, const std::vector<std::string>& expected_ids);

/// Labels every unnamed group of `doc` with one transport call. Returns an
/// empty map without calling the transport when all groups are named.
std::map<std::string, std::string> generate_labels(const design::DesignDocument& doc,
                                                   CompletionTransport& transport,
                                                   const CompletionParams& params = {});

// Prompt-composition ablations --------------------------------------------

enum class AblationCondition { Complete, OneCall, NoHeuristics, GeneralFeedback };

std::string_view to_string(AblationCondition condition);
/// Accepts complete, one-call, no-heuristics, general-feedback (or general).
AblationCondition ablation_from_string(std::string_view name);
const std::vector<AblationCondition>& all_ablation_conditions();

struct AblationPrompt {
  AblationCondition condition = AblationCondition::Complete;
  int calls = 2;  // chain length for this condition
  std::vector<PromptMessage> messages;
};

AblationPrompt ablation_condition(AblationCondition condition,
                                  const condense::CondensedUiJson& ui,
                                  const std::vector<guidelines::GuidelineSet>& sets);

std::string violations_to_json(const std::vector<RawViolation>& violations, int indent = -1);

}  // namespace heurex::llm
