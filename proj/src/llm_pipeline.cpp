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


#include "heurex/llm_pipeline.hpp"

#include <algorithm>
#include <set>

#include "embedded_data.hpp"
#include "heurex/error.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace heurex::llm {

using nlohmann::ordered_json;
using guidelines::GuidelineSet;

namespace {

constexpr std::string_view kUiDescription =
    "The JSON is a tree that mirrors the layer structure of the mockup. Each node has a "
    "unique \"id\", a \"type\" (GROUP, TEXT, IMAGE, ICON, BUTTON, INPUT, RECTANGLE or another "
    "element type) and \"bounds\" given as [x, y, width, height] in pixels from the top-left "
    "corner of the screen. A node may also have a \"name\" from the layers panel, the \"text\" "
    "it displays, a \"font\", \"fill\" and \"background\" colors in hex, a \"stroke\" border, "
    "and an \"opacity\" when it is not fully opaque. Groups list their members in "
    "\"children\".";

constexpr std::string_view kConstructiveInstructions =
    "Rewrite each violation as constructive feedback for the designer in three parts:\n"
    "1. \"standard\": the expected standard set by the guideline.\n"
    "2. \"gap\": how the current design falls short of that standard, naming the specific "
    "elements involved.\n"
    "3. \"fix\": what the designer needs to do to close the gap.";

std::string evaluator_preamble(std::string_view task) {
  return "You are an expert UI/UX designer. You will be given a JSON representation of a "
         "single screen of a static mobile UI mockup, and your task is to " +
         std::string(task);
}

std::string common_error_block() {
  std::string out = "Avoid these common mistakes:\n";
  for (const auto& line : common_errors()) out += "- " + line + '\n';
  return out;
}

std::string issue_kind(const GuidelineSet& set) {
  if (set.id == "nielsen") return "usability issues";
  if (set.id == "crowdcrit") return "visual design issues";
  if (set.id == "semantic") return "semantic group issues";
  return "design issues";
}

std::string join_kinds(const std::vector<GuidelineSet>& sets) {
  std::vector<std::string> kinds;
  for (const auto& set : sets) {
    auto kind = issue_kind(set);
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) kinds.push_back(kind);
  }
  std::string out;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (i > 0) out += i + 1 == kinds.size() ? " and " : ", ";
    out += kinds[i];
  }
  return out;
}

struct Composition {
  std::string system;
  std::string instructions;
  std::string format;
};

Composition compose(AblationCondition condition, const std::vector<GuidelineSet>& sets) {
  Composition c;
  switch (condition) {
    case AblationCondition::Complete:
    case AblationCondition::OneCall:
      c.system = evaluator_preamble(
                     "perform a heuristic evaluation of it: identify the places where the "
                     "design violates the guidelines listed below. Only report violations of "
                     "these guidelines, and cite the exact name of the guideline each "
                     "violation breaks.") +
                 "\n\nGuidelines:\n\n" + guidelines::render_guidelines_text(sets);
      c.instructions =
          "Identify all of the guideline violations in this UI. Each violation should "
          "describe one specific problem and reference the specific elements or groups "
          "involved.";
      c.format =
          "Respond with only a JSON array and no other text. Each item must be an object "
          "with the keys \"guideline\" (the exact name of the violated guideline), "
          "\"elements\" (an array of the ids of the elements or groups involved) and "
          "\"explanation\" (a short description of the violation). If there are no "
          "violations, respond with [].";
      break;
    case AblationCondition::NoHeuristics: {
      const std::string kinds = join_kinds(sets);
      c.system = evaluator_preamble("find the " + kinds + " in its design.");
      c.instructions = "Identify all of the " + kinds +
                       " in this UI. Each issue should describe one specific problem and "
                       "reference the specific elements or groups involved.";
      c.format =
          "Respond with only a JSON array and no other text. Each item must be an object "
          "with the keys \"issue\" (a short name for the kind of issue), \"elements\" (an "
          "array of the ids of the elements or groups involved) and \"explanation\" (a "
          "short description of the issue). If there are no issues, respond with [].";
      break;
    }
    case AblationCondition::GeneralFeedback:
      c.system = evaluator_preamble("give specific feedback on its design.");
      c.instructions =
          "Give all of your feedback on this UI. Each feedback item should describe one "
          "specific problem and reference the specific elements or groups involved.";
      c.format =
          "Respond with only a JSON array and no other text. Each item must be an object "
          "with the keys \"topic\" (a short name for the kind of problem), \"elements\" (an "
          "array of the ids of the elements or groups involved) and \"explanation\" (a "
          "short description of the feedback). If you have no feedback, respond with [].";
      break;
  }
  if (condition == AblationCondition::OneCall) {
    c.system += "\nAfter identifying the violations, " + text::lower(kConstructiveInstructions.substr(0, 1)) +
                std::string(kConstructiveInstructions.substr(1));
    c.format =
        "Respond with only a JSON array and no other text. Each item must be an object with "
        "the keys \"guideline\" (the exact name of the violated guideline), \"elements\" (an "
        "array of the ids of the elements or groups involved), \"explanation\" (a short "
        "description of the violation), \"standard\", \"gap\" and \"fix\". If there are no "
        "violations, respond with [].";
  }
  return c;
}

std::string user_message(const condense::CondensedUiJson& ui, const Composition& c) {
  std::string out = "Here is the JSON of the UI to evaluate:\n" + ui.text + "\n\n";
  out += std::string(kUiDescription) + "\n\n";
  out += c.instructions + "\n\n";
  out += c.format + "\n\n";
  out += common_error_block();
  return out;
}

std::vector<PromptMessage> assemble(const Composition& c, const condense::CondensedUiJson& ui,
                                    const std::vector<PromptMessage>& history) {
  std::vector<PromptMessage> messages;
  messages.push_back({Role::System, c.system});
  messages.insert(messages.end(), history.begin(), history.end());
  messages.push_back({Role::User, user_message(ui, c)});
  return messages;
}

[[noreturn]] void unparseable(const std::string& why, std::string_view raw) {
  throw Error(ErrorCode::UnparseableResponse, "unparseable model response: " + why,
              std::string(raw));
}

// Parses a JSON reply, tolerating a single surrounding code fence.
ordered_json parse_reply(std::string_view raw) {
  std::string body = text::trim(raw);
  if (body.rfind("```", 0) == 0) {
    auto first_newline = body.find('\n');
    auto closing = body.rfind("```");
    if (first_newline == std::string::npos || closing <= first_newline) {
      unparseable("unterminated code fence", raw);
    }
    body = text::trim(body.substr(first_newline + 1, closing - first_newline - 1));
  }
  try {
    return ordered_json::parse(body);
  } catch (const nlohmann::json::parse_error&) {
    unparseable("not JSON", raw);
  }
}

std::string string_field(const ordered_json& item, const char* key, std::string_view raw) {
  auto it = item.find(key);
  if (it == item.end() || !it->is_string()) {
    unparseable(std::string("item without string \"") + key + "\"", raw);
  }
  return it->get<std::string>();
}

}  // namespace

std::string suggestion_id(const RawViolation& violation) {
  std::vector<std::string> ids = violation.node_ids;
  std::sort(ids.begin(), ids.end());
  std::string key = text::lower(text::collapse_whitespace(violation.guideline));
  key += '\x1f';
  for (const auto& id : ids) key += id + '\x1e';
  key += '\x1f';
  key += text::lower(text::collapse_whitespace(violation.explanation));
  return "sg-" + fnv1a_hex(key);
}

std::size_t prompt_tokens(const std::vector<PromptMessage>& messages,
                          std::size_t chars_per_token) {
  std::size_t chars = 0;
  for (const auto& m : messages) chars += condense::count_characters(m.content);
  return (chars + chars_per_token - 1) / chars_per_token;
}

const std::vector<std::string>& common_errors() {
  static const std::vector<std::string> kLines = [] {
    std::vector<std::string> lines;
    for (const auto& raw : text::split_lines(embedded::common_errors())) {
      auto line = text::trim(raw);
      if (!line.empty() && line[0] != '#') lines.push_back(line);
    }
    return lines;
  }();
  return kLines;
}

std::vector<PromptMessage> build_eval_prompt(const condense::CondensedUiJson& ui,
                                             const std::vector<GuidelineSet>& sets,
                                             const std::vector<PromptMessage>& history,
                                             const PromptOptions& opts) {
  if (sets.empty()) throw Error(ErrorCode::InvalidArgument, "at least one guideline set needed");
  const Composition c = compose(AblationCondition::Complete, sets);
  std::vector<PromptMessage> kept = history;
  while (true) {
    auto messages = assemble(c, ui, kept);
    if (prompt_tokens(messages, opts.chars_per_token) <= opts.budget) return messages;
    if (kept.empty()) {
      throw Error(ErrorCode::BudgetExceeded,
                  "prompt needs " + std::to_string(prompt_tokens(messages, opts.chars_per_token)) +
                      " tokens, budget is " + std::to_string(opts.budget));
    }
    const std::size_t drop = kept.size() % 3 == 0 ? 3 : 1;
    kept.erase(kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(drop));
  }
}

std::vector<RawViolation> parse_eval_response(std::string_view text,
                                              const design::DesignDocument& doc,
                                              const std::vector<GuidelineSet>& sets) {
  const ordered_json reply = parse_reply(text);
  if (!reply.is_array()) unparseable("expected a JSON array", text);
  std::vector<RawViolation> out;
  for (const auto& item : reply) {
    if (!item.is_object()) unparseable("array item is not an object", text);
    RawViolation v;
    v.guideline = text::trim(string_field(item, "guideline", text));
    v.explanation = text::trim(string_field(item, "explanation", text));
    if (v.explanation.empty()) unparseable("empty explanation", text);
    auto elements = item.find("elements");
    if (elements == item.end() || !elements->is_array()) {
      unparseable("item without \"elements\" array", text);
    }
    for (const auto& id : *elements) {
      if (!id.is_string()) unparseable("element id is not a string", text);
      v.node_ids.push_back(id.get<std::string>());
      if (doc.lookup(v.node_ids.back()) == nullptr) v.unresolved_ids.push_back(v.node_ids.back());
    }
    v.guideline_resolved = false;
    for (const auto& set : sets) {
      if (const auto* g = set.find_by_name(v.guideline)) {
        v.guideline = g->name;
        v.guideline_resolved = true;
        break;
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::string violations_to_json(const std::vector<RawViolation>& violations, int indent) {
  auto out = ordered_json::array();
  for (const auto& v : violations) {
    out.push_back({{"guideline", v.guideline}, {"elements", v.node_ids},
                   {"explanation", v.explanation}});
  }
  return out.dump(indent);
}

std::vector<PromptMessage> build_rephrase_prompt(const std::vector<RawViolation>& violations) {
  if (violations.empty()) {
    throw Error(ErrorCode::InvalidArgument, "nothing to rephrase");
  }
  std::string system =
      "You are an expert design mentor. You will be given a numbered list of guideline "
      "violations found in a UI mockup. " +
      std::string(kConstructiveInstructions) +
      "\n\nRespond with only a JSON array and no other text. It must contain exactly one "
      "object per violation, in the same order as the input, each with the keys "
      "\"standard\", \"gap\" and \"fix\". Every value must be a non-empty string.";
  std::string user = "Guideline violations:\n";
  int number = 1;
  for (const auto& v : violations) {
    user += std::to_string(number++) + ". [" + v.guideline + "] " +
            text::collapse_whitespace(v.explanation);
    if (!v.node_ids.empty()) {
      user += " (elements: ";
      for (std::size_t i = 0; i < v.node_ids.size(); ++i) {
        if (i > 0) user += ", ";
        user += v.node_ids[i];
      }
      user += ")";
    }
    user += '\n';
  }
  return {{Role::System, std::move(system)}, {Role::User, std::move(user)}};
}

std::vector<Suggestion> parse_rephrase_response(std::string_view text,
                                                const std::vector<RawViolation>& violations) {
  const ordered_json reply = parse_reply(text);
  if (!reply.is_array()) unparseable("expected a JSON array", text);
  if (reply.size() != violations.size()) {
    throw Error(ErrorCode::CountMismatch,
                "expected " + std::to_string(violations.size()) + " rephrased items, got " +
                    std::to_string(reply.size()),
                std::to_string(violations.size()) + "," + std::to_string(reply.size()));
  }
  std::vector<Suggestion> out;
  for (std::size_t i = 0; i < reply.size(); ++i) {
    const auto& item = reply[i];
    if (!item.is_object()) unparseable("array item is not an object", text);
    Suggestion s;
    s.violation = violations[i];
    s.id = suggestion_id(s.violation);
    for (auto [key, field] : {std::pair{"standard", &Constructive::standard},
                              std::pair{"gap", &Constructive::gap},
                              std::pair{"fix", &Constructive::fix}}) {
      auto it = item.find(key);
      std::string value = it != item.end() && it->is_string() ? text::trim(it->get<std::string>())
                                                              : std::string();
      if (value.empty()) {
        throw Error(ErrorCode::MissingSegment,
                    std::string("rephrased item ") + std::to_string(i + 1) + " has no \"" + key +
                        "\"",
                    key);
      }
      s.constructive.*field = std::move(value);
    }
    out.push_back(std::move(s));
  }
  return out;
}

EvaluationResult evaluate_ui(const design::DesignDocument& doc,
                             const std::vector<GuidelineSet>& sets,
                             const std::vector<PromptMessage>& history,
                             CompletionTransport& transport, const CompletionParams& params,
                             const PromptOptions& opts) {
  EvaluationResult result;
  const auto ui = condense::condense(doc);
  std::string reply;
  try {
    const auto prompt = build_eval_prompt(ui, sets, history, opts);
    ++result.transport_calls;
    reply = transport.complete(prompt, params);
    result.violations = parse_eval_response(reply, doc, sets);
  } catch (const Error& e) {
    throw e.with_stage("evaluate");
  }
  if (result.violations.empty()) return result;
  try {
    const auto prompt = build_rephrase_prompt(result.violations);
    ++result.transport_calls;
    reply = transport.complete(prompt, params);
    result.suggestions = parse_rephrase_response(reply, result.violations);
  } catch (const Error& e) {
    throw e.with_stage("rephrase");
  }
  return result;
}

// ---------------------------------------------------------------------------
// Dismissal feedback

std::string reflection_request_text() {
  return "The designer marked these violations as incorrect or unhelpful. Reflect on why "
         "they were wrong, so that you do not report similar violations for this UI again.";
}

std::string canned_reflection_text() {
  return "These violations did not hold for this design. Before reporting a violation I "
         "should re-read the JSON of the cited elements, check that the guideline really "
         "applies to them, and avoid repeating the same claim for these elements.";
}

namespace {

std::string dismissed_violation_text(const RawViolation& violation,
                                     const std::vector<ElementSnapshot>& snapshots) {
  std::string out = "I found these guideline violations:\n" + violations_to_json({violation}) +
                    "\n\nJSON of the elements involved:\n";
  bool any = false;
  for (const auto& snap : snapshots) {
    if (snap.condensed_json.empty()) continue;
    out += snap.condensed_json + '\n';
    any = true;
  }
  std::vector<std::string> missing;
  for (const auto& snap : snapshots) {
    if (snap.condensed_json.empty()) missing.push_back(snap.node_id);
  }
  if (!missing.empty()) {
    out += "(no longer in the design:";
    for (const auto& id : missing) out += ' ' + id;
    out += ")\n";
  } else if (!any) {
    out += "(none)\n";
  }
  return out;
}

}  // namespace

std::vector<PromptMessage> build_reflection_prompt(const RawViolation& violation,
                                                   const std::vector<ElementSnapshot>& snapshots) {
  return {{Role::Assistant, dismissed_violation_text(violation, snapshots)},
          {Role::User, reflection_request_text()}};
}

std::vector<PromptMessage> feedback_exchange(const RawViolation& violation,
                                             const std::vector<ElementSnapshot>& snapshots,
                                             const std::string& reflection) {
  auto messages = build_reflection_prompt(violation, snapshots);
  messages.push_back({Role::Assistant, reflection});
  return messages;
}

// ---------------------------------------------------------------------------
// Labels

std::vector<PromptMessage> build_label_prompt(const std::vector<condense::CondensedUiJson>& groups) {
  if (groups.empty()) throw Error(ErrorCode::InvalidArgument, "no groups to label");
  std::string system =
      "You name the groups in the layers panel of a UI mockup. For each group JSON you are "
      "given, write a short descriptive label of two to six lowercase words based on its "
      "contents, such as \"navbar\" or \"event photo and logo\". Respond with only a JSON "
      "object that maps every group id to its label, and no other text.";
  std::string user = "Groups to label:\n";
  for (const auto& g : groups) user += g.text + '\n';
  return {{Role::System, std::move(system)}, {Role::User, std::move(user)}};
}

std::map<std::string, std::string> parse_label_response(
    std::string_view text, const std::vector<std::string>& expected_ids) {
  const ordered_json reply = parse_reply(text);
  if (!reply.is_object()) unparseable("expected a JSON object", text);
  const std::set<std::string> expected(expected_ids.begin(), expected_ids.end());
  std::map<std::string, std::string> labels;
  for (const auto& [id, value] : reply.items()) {
    if (!expected.count(id)) {
      throw Error(ErrorCode::UnknownLabelId, "label for unknown group " + id, id);
    }
    if (!value.is_string()) unparseable("label is not a string", text);
    labels[id] = text::trim(value.get<std::string>());
  }
  for (const auto& id : expected_ids) {
    auto it = labels.find(id);
    if (it == labels.end() || it->second.empty()) {
      throw Error(ErrorCode::MissingLabel, "no label for group " + id, id);
    }
  }
  return labels;
}

std::map<std::string, std::string> generate_labels(const design::DesignDocument& doc,
                                                   CompletionTransport& transport,
                                                   const CompletionParams& params) {
  std::vector<condense::CondensedUiJson> groups;
  std::vector<std::string> ids;
  for (const auto* node : design::unnamed_groups(doc)) {
    groups.push_back(condense::condense_node(*node));
    ids.push_back(node->id);
  }
  if (groups.empty()) return {};
  const auto prompt = build_label_prompt(groups);
  try {
    return parse_label_response(transport.complete(prompt, params), ids);
  } catch (const Error& e) {
    throw e.with_stage("label");
  }
}

// ---------------------------------------------------------------------------
// Ablations

std::string_view to_string(AblationCondition condition) {
  switch (condition) {
    case AblationCondition::Complete: return "complete";
    case AblationCondition::OneCall: return "one-call";
    case AblationCondition::NoHeuristics: return "no-heuristics";
    case AblationCondition::GeneralFeedback: return "general-feedback";
  }
  return "complete";
}

AblationCondition ablation_from_string(std::string_view name) {
  if (name == "complete") return AblationCondition::Complete;
  if (name == "one-call") return AblationCondition::OneCall;
  if (name == "no-heuristics") return AblationCondition::NoHeuristics;
  if (name == "general-feedback" || name == "general") return AblationCondition::GeneralFeedback;
  throw Error(ErrorCode::InvalidArgument, "unknown ablation condition: " + std::string(name),
              std::string(name));
}

const std::vector<AblationCondition>& all_ablation_conditions() {
  static const std::vector<AblationCondition> kAll{
      AblationCondition::Complete, AblationCondition::OneCall, AblationCondition::NoHeuristics,
      AblationCondition::GeneralFeedback};
  return kAll;
}

AblationPrompt ablation_condition(AblationCondition condition, const condense::CondensedUiJson& ui,
                                  const std::vector<GuidelineSet>& sets) {
  if (sets.empty()) throw Error(ErrorCode::InvalidArgument, "at least one guideline set needed");
  AblationPrompt prompt;
  prompt.condition = condition;
  prompt.calls = condition == AblationCondition::OneCall ? 1 : 2;
  if (condition == AblationCondition::Complete) {
    PromptOptions unlimited;
    unlimited.budget = static_cast<std::size_t>(-1);
    prompt.messages = build_eval_prompt(ui, sets, {}, unlimited);
  } else {
    prompt.messages = assemble(compose(condition, sets), ui, {});
  }
  return prompt;
}

}  // namespace heurex::llm
