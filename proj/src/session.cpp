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


#include "heurex/session.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <set>

#include "heurex/condenser.hpp"
#include "heurex/error.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace heurex::session {

using nlohmann::ordered_json;
using llm::RawViolation;
using llm::Suggestion;

std::string_view to_string(Engine engine) { return engine == Engine::Llm ? "llm" : "rules"; }

Engine engine_from_string(std::string_view name) {
  if (name == "llm") return Engine::Llm;
  if (name == "rules") return Engine::Rules;
  throw Error(ErrorCode::InvalidArgument, "unknown engine: " + std::string(name),
              std::string(name));
}

const NodeRef* Round::node_ref(std::string_view id) const {
  for (const auto& ref : node_refs) {
    if (ref.id == id) return &ref;
  }
  return nullptr;
}

bool SessionState::is_dismissed(std::string_view suggestion_id) const {
  return std::any_of(dismissals.begin(), dismissals.end(),
                     [&](const DismissalRecord& d) { return d.suggestion_id == suggestion_id; });
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

SessionState create_session(std::string session_id, design::DesignDocument doc,
                            std::vector<guidelines::GuidelineSet> sets, Engine engine,
                            std::optional<std::size_t> budget, SessionOptions options) {
  if (sets.empty()) {
    throw Error(ErrorCode::InvalidArgument, "a session needs at least one guideline set");
  }
  SessionState state;
  state.session_id = std::move(session_id);
  state.document = std::move(doc);
  state.sets = std::move(sets);
  state.engine = engine;
  state.budget = budget.value_or(condense::kDefaultTokenBudget);
  state.options = std::move(options);
  return state;
}

// ---------------------------------------------------------------------------
// Rules engine suggestions

namespace {

std::string fmt(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", value);
  return buf;
}

std::string fix_for(const rules::RuleFinding& f) {
  auto m = [&](std::string_view name) { return fmt(f.measurement(name).value_or(0)); };
  const std::string& rule = f.rule_id;
  if (rule.rfind("alignment.", 0) == 0) {
    return "Move the element by " + m("offset") + "px so it sits on the line at " + m("line") +
           "px shared by its siblings.";
  }
  if (rule.rfind("spacing.", 0) == 0) {
    return "Change this gap to " + m("median_gap") +
           "px so the spacing matches the rest of the group.";
  }
  if (rule == "size.width") {
    return "Resize the element to " + m("modal") + "px wide to match the other elements of its kind.";
  }
  if (rule == "size.height") {
    return "Resize the element to " + m("modal") + "px tall to match the other elements of its kind.";
  }
  if (rule == "overlap") {
    return "Move or resize the elements so they no longer overlap, or confirm the overlap is "
           "intended and only transparent padding is involved.";
  }
  if (rule.rfind("contrast.", 0) == 0) {
    return "Darken or lighten the text or its background until the contrast ratio is at least " +
           m("minimum") + ":1.";
  }
  return "Adjust the cited elements so the guideline is met.";
}

std::string standard_for(const std::string& guideline,
                         const std::vector<guidelines::GuidelineSet>& sets) {
  for (const auto& set : sets) {
    if (const auto* g = set.find_by_name(guideline)) {
      if (!g->body.empty()) return text::collapse_whitespace(g->body);
    }
  }
  return guideline + " should be met.";
}

}  // namespace

std::vector<Suggestion> findings_to_suggestions(const std::vector<rules::RuleFinding>& findings,
                                                const std::vector<guidelines::GuidelineSet>& sets) {
  std::vector<Suggestion> out;
  for (const auto& f : findings) {
    Suggestion s;
    s.violation.guideline = f.guideline;
    s.violation.node_ids = f.node_ids;
    s.violation.explanation = f.message;
    s.id = llm::suggestion_id(s.violation);
    s.constructive.standard = standard_for(f.guideline, sets);
    s.constructive.gap = f.message;
    s.constructive.fix = fix_for(f);
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rounds

namespace {

std::vector<std::string> sorted_ids(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string display_name(const design::DesignNode& node) {
  return node.name.empty() ? node.id : node.name;
}

std::size_t base_prompt_tokens(const SessionState& state) {
  llm::PromptOptions unlimited;
  unlimited.budget = static_cast<std::size_t>(-1);
  unlimited.chars_per_token = state.options.chars_per_token;
  const auto prompt =
      llm::build_eval_prompt(condense::condense(state.document), state.sets, {}, unlimited);
  return llm::prompt_tokens(prompt, state.options.chars_per_token);
}

}  // namespace

std::size_t history_budget(const SessionState& state) {
  const std::size_t base = base_prompt_tokens(state);
  return base >= state.budget ? 0 : state.budget - base;
}

std::vector<llm::PromptMessage> history_for_next_round(const SessionState& state) {
  std::vector<std::vector<llm::PromptMessage>> exchanges;
  for (const auto& d : state.dismissals) {
    exchanges.push_back(llm::feedback_exchange(d.violation, d.snapshots, d.reflection));
  }
  const std::size_t available = history_budget(state);
  auto flatten = [&](std::size_t from) {
    std::vector<llm::PromptMessage> out;
    for (std::size_t i = from; i < exchanges.size(); ++i) {
      out.insert(out.end(), exchanges[i].begin(), exchanges[i].end());
    }
    return out;
  };
  for (std::size_t from = 0; from < exchanges.size(); ++from) {
    auto history = flatten(from);
    if (llm::prompt_tokens(history, state.options.chars_per_token) <= available) return history;
  }
  return {};
}

const Round& run_round(SessionState& state,
                       const std::optional<design::DesignDocument>& updated_doc,
                       llm::CompletionTransport* transport, const llm::CompletionParams& params) {
  if (updated_doc) state.document = *updated_doc;
  const auto ui = condense::condense(state.document);

  std::vector<Suggestion> produced;
  if (state.engine == Engine::Llm) {
    if (transport == nullptr) {
      throw Error(ErrorCode::InvalidArgument, "the llm engine needs a completion transport");
    }
    llm::PromptOptions opts;
    opts.budget = state.budget;
    opts.chars_per_token = state.options.chars_per_token;
    auto result = llm::evaluate_ui(state.document, state.sets, history_for_next_round(state),
                                   *transport, params, opts);
    produced = std::move(result.suggestions);
  } else {
    produced = findings_to_suggestions(
        rules::run_rules(state.document, state.sets, state.options.rule_config), state.sets);
  }

  std::set<std::vector<std::string>> dismissed_nodes;
  for (const auto& d : state.dismissals) dismissed_nodes.insert(sorted_ids(d.violation.node_ids));

  Round round;
  round.number = static_cast<int>(state.rounds.size()) + 1;
  round.ui_snapshot = ui.text;
  std::set<std::string> seen;
  for (auto& s : produced) {
    if (state.is_dismissed(s.id) || !seen.insert(s.id).second) continue;
    if (state.options.suppress_same_nodes &&
        dismissed_nodes.count(sorted_ids(s.violation.node_ids))) {
      continue;
    }
    round.status[s.id] = SuggestionStatus::Active;
    round.suggestions.push_back(std::move(s));
  }
  std::set<std::string> referenced;
  for (const auto& s : round.suggestions) {
    for (const auto& id : s.violation.node_ids) {
      if (!referenced.insert(id).second) continue;
      NodeRef ref;
      ref.id = id;
      if (const auto* node = state.document.lookup(id)) {
        ref.name = display_name(*node);
        ref.bounds = node->bounds;
      } else {
        ref.name = id;
        ref.resolved = false;
      }
      round.node_refs.push_back(std::move(ref));
    }
  }
  state.rounds.push_back(std::move(round));
  return state.rounds.back();
}

const DismissalRecord& dismiss(SessionState& state, std::string_view suggestion_id,
                               llm::CompletionTransport* transport,
                               const llm::CompletionParams& params, const Clock& clock) {
  Round* round = nullptr;
  const Suggestion* suggestion = nullptr;
  for (auto it = state.rounds.rbegin(); it != state.rounds.rend() && !suggestion; ++it) {
    for (const auto& s : it->suggestions) {
      if (s.id == suggestion_id) {
        round = &*it;
        suggestion = &s;
        break;
      }
    }
  }
  if (suggestion == nullptr) {
    throw Error(ErrorCode::UnknownSuggestion, "unknown suggestion " + std::string(suggestion_id),
                std::string(suggestion_id));
  }
  if (state.is_dismissed(suggestion_id) ||
      round->status[suggestion->id] == SuggestionStatus::Dismissed) {
    throw Error(ErrorCode::AlreadyDismissed,
                "suggestion already dismissed: " + std::string(suggestion_id),
                std::string(suggestion_id));
  }

  DismissalRecord record;
  record.suggestion_id = suggestion->id;
  record.violation = suggestion->violation;
  record.round_number = round->number;
  for (const auto& id : suggestion->violation.node_ids) {
    llm::ElementSnapshot snap{id, {}};
    if (state.document.lookup(id) != nullptr) {
      snap.condensed_json = condense::subtree_condensed(state.document, id).text;
    } else {
      record.missing_nodes = true;
    }
    record.snapshots.push_back(std::move(snap));
  }
  if (state.engine == Engine::Llm && state.options.reflection == ReflectionSource::Transport &&
      transport != nullptr) {
    try {
      record.reflection =
          transport->complete(llm::build_reflection_prompt(record.violation, record.snapshots),
                              params);
    } catch (const Error& e) {
      throw e.with_stage("reflect");
    }
  }
  if (text::trim(record.reflection).empty()) record.reflection = llm::canned_reflection_text();
  record.timestamp = clock();

  round->status[suggestion->id] = SuggestionStatus::Dismissed;
  state.dismissals.push_back(std::move(record));
  return state.dismissals.back();
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

ordered_json bounds_json(const design::Bounds& b) {
  return ordered_json::array({b.x, b.y, b.width, b.height});
}

design::Bounds bounds_from(const ordered_json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>(),
          j.at(3).get<double>()};
}

ordered_json violation_json(const RawViolation& v) {
  return {{"guideline", v.guideline},
          {"guideline_resolved", v.guideline_resolved},
          {"elements", v.node_ids},
          {"unresolved_elements", v.unresolved_ids},
          {"explanation", v.explanation}};
}

RawViolation violation_from(const ordered_json& j) {
  RawViolation v;
  v.guideline = j.at("guideline").get<std::string>();
  v.guideline_resolved = j.at("guideline_resolved").get<bool>();
  v.node_ids = j.at("elements").get<std::vector<std::string>>();
  v.unresolved_ids = j.at("unresolved_elements").get<std::vector<std::string>>();
  v.explanation = j.at("explanation").get<std::string>();
  return v;
}

std::string_view status_name(SuggestionStatus s) {
  return s == SuggestionStatus::Active ? "active" : "dismissed";
}

SuggestionStatus status_from(const std::string& name) {
  if (name == "active") return SuggestionStatus::Active;
  if (name == "dismissed") return SuggestionStatus::Dismissed;
  throw Error(ErrorCode::CorruptState, "unknown suggestion status " + name);
}

}  // namespace

std::string save_session(const SessionState& state) {
  ordered_json j;
  j["format"] = kSessionFormat;
  j["session_id"] = state.session_id;
  j["engine"] = to_string(state.engine);
  j["budget"] = state.budget;
  const auto& cfg = state.options.rule_config;
  j["options"] = {
      {"suppress_same_nodes", state.options.suppress_same_nodes},
      {"reflection", state.options.reflection == ReflectionSource::Transport ? "transport" : "stub"},
      {"chars_per_token", state.options.chars_per_token},
      {"rules",
       {{"epsilon_align", cfg.epsilon_align},
        {"epsilon_gap", cfg.epsilon_gap},
        {"min_contrast", cfg.min_contrast},
        {"overlap_min_fraction", cfg.overlap_min_fraction},
        {"align_near_miss", cfg.align_near_miss}}}};
  j["document"] = ordered_json::parse(design::serialize_document(state.document));
  j["guideline_sets"] = ordered_json::array();
  for (const auto& set : state.sets) {
    j["guideline_sets"].push_back(ordered_json::parse(guidelines::set_to_json(set)));
  }
  j["rounds"] = ordered_json::array();
  for (const auto& round : state.rounds) {
    ordered_json r;
    r["number"] = round.number;
    r["ui_snapshot"] = round.ui_snapshot;
    r["suggestions"] = ordered_json::array();
    for (const auto& s : round.suggestions) {
      auto status = round.status.find(s.id);
      r["suggestions"].push_back(
          {{"id", s.id},
           {"violation", violation_json(s.violation)},
           {"standard", s.constructive.standard},
           {"gap", s.constructive.gap},
           {"fix", s.constructive.fix},
           {"status", status_name(status == round.status.end() ? SuggestionStatus::Active
                                                               : status->second)}});
    }
    r["node_refs"] = ordered_json::array();
    for (const auto& ref : round.node_refs) {
      r["node_refs"].push_back({{"id", ref.id},
                                {"name", ref.name},
                                {"bounds", bounds_json(ref.bounds)},
                                {"resolved", ref.resolved}});
    }
    j["rounds"].push_back(std::move(r));
  }
  j["dismissals"] = ordered_json::array();
  for (const auto& d : state.dismissals) {
    ordered_json snaps = ordered_json::array();
    for (const auto& s : d.snapshots) {
      snaps.push_back({{"id", s.node_id}, {"json", s.condensed_json}});
    }
    j["dismissals"].push_back({{"suggestion_id", d.suggestion_id},
                               {"violation", violation_json(d.violation)},
                               {"snapshots", snaps},
                               {"round", d.round_number},
                               {"timestamp", d.timestamp},
                               {"missing_nodes", d.missing_nodes},
                               {"reflection", d.reflection}});
  }
  return j.dump(2);
}

SessionState load_session(std::string_view bytes) {
  ordered_json j;
  try {
    j = ordered_json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::CorruptState, std::string("session is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("format") || !j["format"].is_string()) {
    throw Error(ErrorCode::CorruptState, "session has no format tag");
  }
  if (j["format"].get<std::string>() != kSessionFormat) {
    throw Error(ErrorCode::VersionMismatch,
                "unsupported session format " + j["format"].get<std::string>(),
                j["format"].get<std::string>());
  }
  try {
    SessionState state;
    state.session_id = j.at("session_id").get<std::string>();
    state.engine = engine_from_string(j.at("engine").get<std::string>());
    state.budget = j.at("budget").get<std::size_t>();
    const auto& opts = j.at("options");
    state.options.suppress_same_nodes = opts.at("suppress_same_nodes").get<bool>();
    state.options.reflection = opts.at("reflection").get<std::string>() == "stub"
                                   ? ReflectionSource::Stub
                                   : ReflectionSource::Transport;
    state.options.chars_per_token = opts.at("chars_per_token").get<std::size_t>();
    const auto& rules_json = opts.at("rules");
    state.options.rule_config.epsilon_align = rules_json.at("epsilon_align").get<double>();
    state.options.rule_config.epsilon_gap = rules_json.at("epsilon_gap").get<double>();
    state.options.rule_config.min_contrast = rules_json.at("min_contrast").get<double>();
    state.options.rule_config.overlap_min_fraction =
        rules_json.at("overlap_min_fraction").get<double>();
    state.options.rule_config.align_near_miss = rules_json.at("align_near_miss").get<double>();
    state.document = design::parse_document(j.at("document").dump());
    for (const auto& set : j.at("guideline_sets")) {
      state.sets.push_back(guidelines::parse_set_json(set.dump()));
    }
    int previous = 0;
    for (const auto& r : j.at("rounds")) {
      Round round;
      round.number = r.at("number").get<int>();
      if (round.number <= previous) throw Error(ErrorCode::CorruptState, "round numbers out of order");
      previous = round.number;
      round.ui_snapshot = r.at("ui_snapshot").get<std::string>();
      for (const auto& s : r.at("suggestions")) {
        Suggestion suggestion;
        suggestion.id = s.at("id").get<std::string>();
        suggestion.violation = violation_from(s.at("violation"));
        suggestion.constructive = {s.at("standard").get<std::string>(),
                                   s.at("gap").get<std::string>(), s.at("fix").get<std::string>()};
        round.status[suggestion.id] = status_from(s.at("status").get<std::string>());
        round.suggestions.push_back(std::move(suggestion));
      }
      for (const auto& ref : r.at("node_refs")) {
        round.node_refs.push_back({ref.at("id").get<std::string>(),
                                   ref.at("name").get<std::string>(),
                                   bounds_from(ref.at("bounds")), ref.at("resolved").get<bool>()});
      }
      state.rounds.push_back(std::move(round));
    }
    for (const auto& d : j.at("dismissals")) {
      DismissalRecord record;
      record.suggestion_id = d.at("suggestion_id").get<std::string>();
      record.violation = violation_from(d.at("violation"));
      for (const auto& s : d.at("snapshots")) {
        record.snapshots.push_back({s.at("id").get<std::string>(), s.at("json").get<std::string>()});
      }
      record.round_number = d.at("round").get<int>();
      record.timestamp = d.at("timestamp").get<std::string>();
      record.missing_nodes = d.at("missing_nodes").get<bool>();
      record.reflection = d.at("reflection").get<std::string>();
      state.dismissals.push_back(std::move(record));
    }
    return state;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptState, std::string("session state is incomplete: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CorruptState) throw;
    throw Error(ErrorCode::CorruptState, std::string("session state is invalid: ") + e.what());
  }
}

}  // namespace heurex::session
