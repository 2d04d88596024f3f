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


#include "heurex/report.hpp"

#include <sstream>

#include "json.hpp"

namespace heurex::report {

using nlohmann::ordered_json;

Report make_report(const session::SessionState& state, const session::Round& round,
                   bool include_dismissed) {
  Report report;
  report.session_id = state.session_id;
  report.round = round.number;
  report.engine = state.engine;
  for (const auto& s : round.suggestions) {
    auto status = round.status.find(s.id);
    const bool dismissed =
        status != round.status.end() && status->second == session::SuggestionStatus::Dismissed;
    if (dismissed && !include_dismissed) continue;
    ReportSuggestion out{s.id,
                         s.violation.guideline,
                         s.constructive.standard,
                         s.constructive.gap,
                         s.constructive.fix,
                         s.violation.explanation,
                         {},
                         dismissed};
    for (const auto& id : s.violation.node_ids) {
      // Elements missing from the evaluated design stay out of the report.
      const auto* ref = round.node_ref(id);
      if (ref == nullptr || !ref->resolved) continue;
      out.nodes.push_back({ref->id, ref->name, ref->bounds});
    }
    report.suggestions.push_back(std::move(out));
  }
  return report;
}

std::string report_to_json(const Report& report, int indent) {
  ordered_json j;
  j["session_id"] = report.session_id;
  j["round"] = report.round;
  j["engine"] = session::to_string(report.engine);
  j["suggestions"] = ordered_json::array();
  for (const auto& s : report.suggestions) {
    ordered_json nodes = ordered_json::array();
    for (const auto& n : s.nodes) {
      nodes.push_back({{"id", n.id},
                       {"name", n.name},
                       {"bounds", {n.bounds.x, n.bounds.y, n.bounds.width, n.bounds.height}}});
    }
    j["suggestions"].push_back({{"id", s.id},
                                {"guideline", s.guideline},
                                {"standard", s.standard},
                                {"gap", s.gap},
                                {"fix", s.fix},
                                {"explanation", s.explanation},
                                {"nodes", std::move(nodes)},
                                {"dismissed", s.dismissed}});
  }
  return j.dump(indent);
}

std::string render_report_markdown(const Report& report) {
  std::ostringstream out;
  out << "# Review of " << report.session_id << ", round " << report.round << " ("
      << session::to_string(report.engine) << ")\n";
  for (const auto& s : report.suggestions) {
    out << "\n## " << s.guideline << "\n\n";
    out << "**Standard.** " << s.standard << "\n\n";
    out << "**Gap.** " << s.gap << "\n\n";
    out << "**Fix.** " << s.fix << "\n";
    if (!s.nodes.empty()) {
      out << "\nElements:";
      for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        out << (i == 0 ? " " : ", ") << '[' << s.nodes[i].name << "](#" << s.nodes[i].id << ')';
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace heurex::report
