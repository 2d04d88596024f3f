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
#include <string_view>
#include <vector>

namespace heurex::guidelines {

struct Guideline {
  std::string id;
  std::string name;
  std::string body;
  std::string set_id;

  bool operator==(const Guideline&) const = default;
};

struct GuidelineSet {
  std::string id;
  std::string title;
  std::vector<Guideline> guidelines;

  /// Case-insensitive name match.
  const Guideline* find_by_name(std::string_view name) const;

  bool operator==(const GuidelineSet&) const = default;
};

/// Nielsen (10), CrowdCrit (7) and Semantic Grouping (5), in that order.
const std::vector<GuidelineSet>& builtin_sets();

/// Resolves a comma-separated list of builtin set ids ("nielsen,crowdcrit").
/// Throws Error(InvalidArgument) on unknown ids or an empty list.
std::vector<GuidelineSet> select_builtin(std::string_view comma_separated_ids);

/// Parses a free-form list: one guideline per line (numbering and bullets
/// stripped), indented lines continue the previous item, '#' lines are
/// headers and skipped. "Name: body" splits on the first colon; otherwise
/// the name is the first six words.
GuidelineSet parse_custom(std::string_view text, std::string set_id = "custom",
                          std::string title = "Custom Guidelines");

/// Reads the JSON set format {id, title, guidelines: [{id, name, body}]}.
GuidelineSet parse_set_json(std::string_view json_text);
std::string set_to_json(const GuidelineSet& set);

/// Markdown-ish block: "## <title>" then "1. <name>: <body>" per guideline,
/// sets separated by a blank line.
std::string render_guidelines_text(const std::vector<GuidelineSet>& sets);

/// Lower-case, alphanumerics kept, everything else collapsed to '-'.
std::string slugify(std::string_view text);

}  // namespace heurex::guidelines
