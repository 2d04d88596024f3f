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


#include <random>
#include <set>

#include "doctest.h"
#include "heurex/error.hpp"
#include "heurex/guidelines.hpp"

using namespace heurex;
using namespace heurex::guidelines;

namespace {

std::vector<std::string> names_of(const GuidelineSet& set) {
  std::vector<std::string> out;
  for (const auto& g : set.guidelines) out.push_back(g.name);
  return out;
}

bool has_name(const std::vector<GuidelineSet>& sets, const std::string& name) {
  for (const auto& set : sets) {
    if (set.find_by_name(name)) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("guidelines") {
  TEST_CASE("three builtin sets of 10, 7 and 5") {
    const auto& sets = builtin_sets();
    REQUIRE(sets.size() == 3);
    CHECK(sets[0].id == "nielsen");
    CHECK(sets[0].guidelines.size() == 10);
    CHECK(sets[1].id == "crowdcrit");
    CHECK(sets[1].guidelines.size() == 7);
    CHECK(sets[2].id == "semantic");
    CHECK(sets[2].guidelines.size() == 5);
    for (const auto& set : sets) {
      std::set<std::string> ids;
      for (const auto& g : set.guidelines) {
        CHECK_FALSE(g.name.empty());
        CHECK_FALSE(g.body.empty());
        CHECK(g.set_id == set.id);
        CHECK(ids.insert(g.id).second);
      }
    }
    CHECK(&builtin_sets() == &sets);
  }

  TEST_CASE("builtin names cited in the results are present") {
    const auto& sets = builtin_sets();
    for (const char* name : {"Consistency and Standards", "Aesthetic and Minimalist Design",
                             "Emphasis", "Recognition rather than Recall",
                             "Match Between System and Real World"}) {
      CAPTURE(name);
      CHECK(has_name(sets, name));
    }
    CHECK(sets[0].find_by_name("consistency AND standards") != nullptr);
  }

  TEST_CASE("select_builtin") {
    CHECK(select_builtin("nielsen").size() == 1);
    const auto two = select_builtin("crowdcrit, semantic");
    REQUIRE(two.size() == 2);
    CHECK(two[0].id == "crowdcrit");
    CHECK_THROWS_AS(select_builtin("bogus"), Error);
    CHECK_THROWS_AS(select_builtin(""), Error);
  }

  TEST_CASE("custom list with names and bodies") {
    const auto set = parse_custom("1. Contrast: text must meet contrast standards");
    REQUIRE(set.guidelines.size() == 1);
    CHECK(set.guidelines[0].name == "Contrast");
    CHECK(set.guidelines[0].body == "text must meet contrast standards");
    CHECK(set.guidelines[0].id == "contrast");
  }

  TEST_CASE("custom list keeps order and handles markers") {
    const auto set = parse_custom(
        "- Keep buttons large enough to tap comfortably on small screens\n"
        "* Labels: every input has a visible label\n"
        "3) Use one accent color for primary actions\n");
    CHECK(names_of(set) == std::vector<std::string>{"Keep buttons large enough to tap",
                                                    "Labels",
                                                    "Use one accent color for primary"});
    CHECK(set.guidelines[0].body ==
          "Keep buttons large enough to tap comfortably on small screens");
  }

  TEST_CASE("continuation lines, comments and duplicate names") {
    const auto set = parse_custom(
        "# Team heuristics\n"
        "1. Labels: every input\n"
        "   has a visible label\n"
        "\n"
        "2. Labels: icons need text too\n");
    REQUIRE(set.guidelines.size() == 2);
    CHECK(set.guidelines[0].body == "every input has a visible label");
    CHECK(set.guidelines[0].id == "labels");
    CHECK(set.guidelines[1].id == "labels-2");
  }

  TEST_CASE("empty custom input") {
    try {
      parse_custom("  \n# only a comment\n\n");
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyInput);
    }
  }

  TEST_CASE("item count matches an independent splitter") {
    std::mt19937 rng(3);
    const std::vector<std::string> markers{"", "- ", "* ", "1. ", "2) ", "• "};
    for (int round = 0; round < 200; ++round) {
      std::string text;
      std::size_t expected = 0;
      const int lines = static_cast<int>(rng() % 12);
      for (int i = 0; i < lines; ++i) {
        switch (rng() % 4) {
          case 0:
            text += "\n";
            break;
          case 1:
            text += "   \t\n";
            break;
          default:
            text += markers[rng() % markers.size()] + "Item " + std::to_string(i) +
                    (rng() % 2 ? ": body text" : " without a colon") + "\n";
            ++expected;
        }
      }
      if (expected == 0) {
        CHECK_THROWS_AS(parse_custom(text), Error);
      } else {
        CHECK(parse_custom(text).guidelines.size() == expected);
      }
    }
  }

  TEST_CASE("render then parse keeps names and count") {
    const auto set = parse_custom("1. Contrast: high enough\n2. Spacing: even gaps\n3. Tap targets\n");
    const auto rendered = render_guidelines_text({set});
    // Drop the header and parse the numbered lines back.
    const auto body = rendered.substr(rendered.find('\n') + 1);
    const auto again = parse_custom(body);
    CHECK(names_of(again) == names_of(set));
  }

  TEST_CASE("rendering") {
    const auto& sets = builtin_sets();
    const auto one = render_guidelines_text({sets[2]});
    CHECK(one.rfind("## Semantic Grouping Guidelines\n1. ", 0) == 0);
    CHECK(one.find("\n5. ") != std::string::npos);
    const auto two = render_guidelines_text({sets[0], sets[1]});
    CHECK(two.find("## Nielsen's 10 Usability Heuristics") != std::string::npos);
    CHECK(two.find("## CrowdCrit Visual Design Principles") != std::string::npos);
    CHECK(render_guidelines_text({sets[0], sets[1]}) == two);

    // Distinct selections render differently.
    std::set<std::string> seen;
    const std::vector<std::vector<GuidelineSet>> selections{
        {sets[0]}, {sets[1]}, {sets[2]}, {sets[0], sets[1]}, {sets[1], sets[0]},
        {sets[0], sets[2]}, {sets[0], sets[1], sets[2]}};
    for (const auto& sel : selections) CHECK(seen.insert(render_guidelines_text(sel)).second);
  }

  TEST_CASE("set json round trip") {
    for (const auto& set : builtin_sets()) CHECK(parse_set_json(set_to_json(set)) == set);
    CHECK_THROWS_AS(parse_set_json(R"({"id":"x","title":"t","guidelines":[]})"), Error);
  }
}
