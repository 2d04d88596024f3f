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


#include "heurex/guidelines.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "embedded_data.hpp"
#include "heurex/error.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace heurex::guidelines {

using nlohmann::ordered_json;

const Guideline* GuidelineSet::find_by_name(std::string_view name) const {
  for (const auto& g : guidelines) {
    if (text::iequals(g.name, name)) return &g;
  }
  return nullptr;
}

std::string slugify(std::string_view text) {
  std::string out;
  bool dash = false;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      if (dash && !out.empty()) out.push_back('-');
      out.push_back(static_cast<char>(std::tolower(c)));
      dash = false;
    } else {
      dash = true;
    }
  }
  return out.empty() ? "guideline" : out;
}

GuidelineSet parse_set_json(std::string_view json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, std::string("invalid guideline set JSON: ") + e.what());
  }
  auto bad = [](const std::string& what) {
    return Error(ErrorCode::MalformedJson, "invalid guideline set: " + what);
  };
  if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) throw bad("missing id");
  GuidelineSet set;
  set.id = j["id"].get<std::string>();
  set.title = j.value("title", set.id);
  if (!j.contains("guidelines") || !j["guidelines"].is_array()) throw bad("missing guidelines");
  std::set<std::string> seen;
  for (const auto& item : j["guidelines"]) {
    if (!item.is_object() || !item.contains("name") || !item["name"].is_string()) {
      throw bad("guideline without name");
    }
    Guideline g;
    g.name = text::trim(item["name"].get<std::string>());
    if (g.name.empty()) throw bad("guideline with empty name");
    g.id = item.contains("id") && item["id"].is_string() ? item["id"].get<std::string>()
                                                         : slugify(g.name);
    g.body = item.value("body", std::string());
    g.set_id = set.id;
    if (!seen.insert(g.id).second) throw bad("duplicate guideline id " + g.id);
    set.guidelines.push_back(std::move(g));
  }
  if (set.guidelines.empty()) {
    throw Error(ErrorCode::EmptyInput, "guideline set " + set.id + " is empty");
  }
  return set;
}

std::string set_to_json(const GuidelineSet& set) {
  ordered_json j;
  j["id"] = set.id;
  j["title"] = set.title;
  j["guidelines"] = ordered_json::array();
  for (const auto& g : set.guidelines) {
    j["guidelines"].push_back({{"id", g.id}, {"name", g.name}, {"body", g.body}});
  }
  return j.dump(2);
}

const std::vector<GuidelineSet>& builtin_sets() {
  static const std::vector<GuidelineSet> kSets = {
      parse_set_json(embedded::nielsen_json()),
      parse_set_json(embedded::crowdcrit_json()),
      parse_set_json(embedded::semantic_json()),
  };
  return kSets;
}

std::vector<GuidelineSet> select_builtin(std::string_view comma_separated_ids) {
  std::vector<GuidelineSet> out;
  for (const auto& raw : text::split(comma_separated_ids, ',')) {
    const std::string id = text::trim(raw);
    if (id.empty()) continue;
    const auto& sets = builtin_sets();
    auto it = std::find_if(sets.begin(), sets.end(), [&](const auto& s) { return s.id == id; });
    if (it == sets.end()) {
      throw Error(ErrorCode::InvalidArgument, "unknown guideline set: " + id, id);
    }
    if (std::none_of(out.begin(), out.end(), [&](const auto& s) { return s.id == id; })) {
      out.push_back(*it);
    }
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "no guideline sets selected");
  return out;
}

namespace {

// Strips "1.", "1)", "(1)", "-", "*", "•" style list markers.
std::string strip_marker(std::string line) {
  std::size_t i = 0;
  if (line.rfind("\xE2\x80\xA2", 0) == 0) return text::trim(line.substr(3));
  if (!line.empty() && (line[0] == '-' || line[0] == '*')) return text::trim(line.substr(1));
  if (!line.empty() && line[0] == '(') i = 1;
  std::size_t digits = i;
  while (digits < line.size() && std::isdigit(static_cast<unsigned char>(line[digits]))) ++digits;
  if (digits > i && digits < line.size() &&
      (line[digits] == '.' || line[digits] == ')')) {
    return text::trim(line.substr(digits + 1));
  }
  return line;
}

std::string first_words(const std::string& text, std::size_t n) {
  std::istringstream in(text);
  std::string word;
  std::string out;
  for (std::size_t i = 0; i < n && in >> word; ++i) {
    if (!out.empty()) out.push_back(' ');
    out += word;
  }
  return out;
}

}  // namespace

GuidelineSet parse_custom(std::string_view text, std::string set_id, std::string title) {
  std::vector<std::string> items;
  for (const auto& raw : text::split_lines(text)) {
    const std::string line = text::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const bool indented = !raw.empty() && (raw[0] == ' ' || raw[0] == '\t');
    if (indented && !items.empty()) {
      items.back() += ' ' + line;
      continue;
    }
    std::string item = strip_marker(line);
    if (!item.empty()) items.push_back(std::move(item));
  }
  if (items.empty()) throw Error(ErrorCode::EmptyInput, "no guidelines in custom text");

  GuidelineSet set;
  set.id = std::move(set_id);
  set.title = std::move(title);
  std::set<std::string> used;
  for (const auto& item : items) {
    Guideline g;
    g.set_id = set.id;
    auto colon = item.find(':');
    if (colon != std::string::npos && !text::trim(item.substr(0, colon)).empty()) {
      g.name = text::trim(item.substr(0, colon));
      g.body = text::trim(item.substr(colon + 1));
    } else {
      g.name = first_words(item, 6);
      g.body = item;
    }
    std::string id = slugify(g.name);
    std::string unique = id;
    for (int n = 2; !used.insert(unique).second; ++n) unique = id + "-" + std::to_string(n);
    g.id = unique;
    set.guidelines.push_back(std::move(g));
  }
  return set;
}

std::string render_guidelines_text(const std::vector<GuidelineSet>& sets) {
  std::string out;
  for (const auto& set : sets) {
    if (!out.empty()) out += '\n';
    out += "## " + set.title + '\n';
    int number = 1;
    for (const auto& g : set.guidelines) {
      out += std::to_string(number++) + ". " + g.name;
      std::string body = text::collapse_whitespace(g.body);
      out += ':';
      if (!body.empty()) out += ' ' + body;
      out += '\n';
    }
  }
  return out;
}

}  // namespace heurex::guidelines
