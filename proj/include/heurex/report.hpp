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

#include <string>
#include <vector>

#include "heurex/session.hpp"

namespace heurex::report {

struct ReportNode {
  std::string id;
  std::string name;
  design::Bounds bounds;  // copied from the round snapshot

  bool operator==(const ReportNode&) const = default;
};

struct ReportSuggestion {
  std::string id;
  std::string guideline;
  std::string standard;
  std::string gap;
  std::string fix;
  std::string explanation;
  std::vector<ReportNode> nodes;
  bool dismissed = false;

  bool operator==(const ReportSuggestion&) const = default;
};

struct Report {
  std::string session_id;
  int round = 0;
  session::Engine engine = session::Engine::Llm;
  std::vector<ReportSuggestion> suggestions;

  bool operator==(const Report&) const = default;
};

/// Builds the report for one round of `state`. Dismissed suggestions are
/// included only when `include_dismissed` is set.
Report make_report(const session::SessionState& state, const session::Round& round,
                   bool include_dismissed = false);

std::string report_to_json(const Report& report, int indent = 2);

/// Markdown with one section per suggestion and element links of the form
/// [name](#node-id).
std::string render_report_markdown(const Report& report);

}  // namespace heurex::report
