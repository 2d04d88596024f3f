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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "heurex/design_tree.hpp"
#include "heurex/guidelines.hpp"
#include "heurex/llm_pipeline.hpp"
#include "heurex/rule_engine.hpp"
#include "heurex/transport.hpp"

namespace heurex::session {

inline constexpr std::string_view kSessionFormat = "heurex-session/1";

enum class Engine { Llm, Rules };
std::string_view to_string(Engine engine);
Engine engine_from_string(std::string_view name);

/// Where the self-reflection text for a dismissal comes from.
enum class ReflectionSource { Transport, Stub };

enum class SuggestionStatus { Active, Dismissed };

/// Element geometry copied when a round is produced, for overlays.
struct NodeRef {
  std::string id;
  std::string name;
  design::Bounds bounds;
  bool resolved = true;

  bool operator==(const NodeRef&) const = default;
};

struct Round {
  int number = 0;
  std::string ui_snapshot;  // condensed UI JSON at evaluation time
  std::vector<llm::Suggestion> suggestions;
  std::map<std::string, SuggestionStatus> status;
  std::vector<NodeRef> node_refs;

  const NodeRef* node_ref(std::string_view id) const;
  bool operator==(const Round&) const = default;
};

struct DismissalRecord {
  std::string suggestion_id;
  llm::RawViolation violation;
  std::vector<llm::ElementSnapshot> snapshots;
  int round_number = 0;
  std::string timestamp;
  bool missing_nodes = false;  // some cited element no longer exists
  std::string reflection;

  bool operator==(const DismissalRecord&) const = default;
};

struct SessionOptions {
  /// Also hide new suggestions citing exactly the same elements as a
  /// dismissed one, whatever guideline they name.
  bool suppress_same_nodes = false;
  ReflectionSource reflection = ReflectionSource::Transport;
  rules::RuleConfig rule_config;
  std::size_t chars_per_token = condense::kDefaultCharsPerToken;

  bool operator==(const SessionOptions&) const = default;
};

struct SessionState {
  std::string session_id;
  design::DesignDocument document;
  std::vector<guidelines::GuidelineSet> sets;
  std::vector<Round> rounds;
  std::vector<DismissalRecord> dismissals;
  std::size_t budget = condense::kDefaultTokenBudget;
  Engine engine = Engine::Llm;
  SessionOptions options;

  bool is_dismissed(std::string_view suggestion_id) const;
  bool operator==(const SessionState&) const = default;
};

using Clock = std::function<std::string()>;
/// ISO-8601 UTC wall clock.
std::string utc_now();

/// Throws Error(InvalidArgument) when no guideline set is given.
SessionState create_session(std::string session_id, design::DesignDocument doc,
                            std::vector<guidelines::GuidelineSet> sets, Engine engine,
                            std::optional<std::size_t> budget = std::nullopt,
                            SessionOptions options = {});

/// Evaluates the current (or supplied updated) design and appends a round.
/// Suggestions matching a dismissal are filtered out. `transport` may be
/// null for the rules engine.
const Round& run_round(SessionState& state,
                       const std::optional<design::DesignDocument>& updated_doc,
                       llm::CompletionTransport* transport,
                       const llm::CompletionParams& params = {});

/// Marks a suggestion dismissed and records the cited elements' current JSON.
/// Throws Error(UnknownSuggestion) or Error(AlreadyDismissed).
const DismissalRecord& dismiss(SessionState& state, std::string_view suggestion_id,
                               llm::CompletionTransport* transport,
                               const llm::CompletionParams& params = {},
                               const Clock& clock = utc_now);

/// Tokens left for history after the base evaluation prompt of the current
/// design; zero when the base prompt alone exceeds the budget.
std::size_t history_budget(const SessionState& state);

/// One assistant/user/assistant exchange per retained dismissal, oldest
/// first, after evicting the oldest records until history_budget() fits.
std::vector<llm::PromptMessage> history_for_next_round(const SessionState& state);

/// Turns rule findings into suggestions with standard/gap/fix text.
std::vector<llm::Suggestion> findings_to_suggestions(
    const std::vector<rules::RuleFinding>& findings,
    const std::vector<guidelines::GuidelineSet>& sets);

std::string save_session(const SessionState& state);
/// Throws Error(VersionMismatch) or Error(CorruptState).
SessionState load_session(std::string_view bytes);

}  // namespace heurex::session
