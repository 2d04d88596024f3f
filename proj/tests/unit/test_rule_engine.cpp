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


#include <algorithm>
#include <array>
#include <functional>
#include <random>
#include <set>

#include "doctest.h"
#include "heurex/error.hpp"
#include "heurex/rule_engine.hpp"
#include "json.hpp"
#include "scenes.hpp"
#include "test_support.hpp"

using namespace heurex;
using namespace heurex::rules;
using design::DesignNode;
using design::KindTag;

namespace {

struct Row {
  std::vector<DesignNode> nodes;
  std::vector<const DesignNode*> ptrs() const {
    std::vector<const DesignNode*> out;
    for (const auto& n : nodes) out.push_back(&n);
    return out;
  }
};

Row boxes(const std::vector<std::array<double, 4>>& rects, KindTag kind = KindTag::Button) {
  Row row;
  for (const auto& r : rects) {
    row.nodes.push_back(
        testing::leaf("b" + std::to_string(row.nodes.size()), kind, r[0], r[1], r[2], r[3]));
  }
  return row;
}

design::Color rgb(std::uint8_t r, std::uint8_t g, std::uint8_t b) { return {r, g, b, 1.0}; }

DesignNode text_node(const std::string& id, design::Color fill) {
  DesignNode n = testing::leaf(id, KindTag::Text, 0, 0, 10, 10);
  n.text = "x";
  n.fill = fill;
  return n;
}

}  // namespace

TEST_SUITE("rule_engine") {
  TEST_CASE("edge alignment") {
    RuleConfig cfg;
    CHECK(check_edge_alignment(boxes({{10, 0, 20, 10}, {10, 20, 20, 10}, {10, 40, 20, 10}}).ptrs(),
                               cfg)
              .empty());
    const auto row = boxes({{10, 0, 20, 10}, {10, 20, 20, 10}, {13, 40, 17, 10}});
    const auto found = check_edge_alignment(row.ptrs(), cfg);
    REQUIRE(found.size() == 1);
    CHECK(found[0].rule_id == "alignment.edge.left");
    CHECK(found[0].node_ids == std::vector<std::string>{"b2"});
    CHECK(found[0].measurement("offset") == 3.0);
    CHECK(found[0].measurement("line") == 10.0);
    CHECK(found[0].measurement("peers") == 2.0);
  }

  TEST_CASE("a form field slightly off the others is the only flagged element") {
    // Label column plus an input column; the "Contact" input sits 3px right.
    DesignNode form = testing::leaf("form", KindTag::Group, 0, 0, 375, 400);
    const char* names[] = {"Name", "Email", "Phone", "Contact"};
    for (int i = 0; i < 4; ++i) {
      auto field = testing::leaf(std::string("field-") + names[i], KindTag::Input,
                                 i == 3 ? 123 : 120, 20 + 60.0 * i, 200, 40);
      field.name = names[i];
      form.children.push_back(field);
    }
    const auto doc = design::DesignDocument::build(form);
    const auto findings = run_rules(doc, guidelines::select_builtin("nielsen"));
    REQUIRE_FALSE(findings.empty());
    std::set<std::string> flagged;
    for (const auto& f : findings) {
      CHECK(f.rule_id.rfind("alignment.", 0) == 0);
      CHECK(f.guideline == "Consistency and Standards");
      flagged.insert(f.node_ids.begin(), f.node_ids.end());
    }
    CHECK(flagged == std::set<std::string>{"field-Contact"});
  }

  TEST_CASE("center alignment compares centers") {
    RuleConfig cfg;
    // Different widths, same center.
    CHECK(check_center_alignment(boxes({{100, 0, 40, 10}, {80, 20, 80, 10}}).ptrs(), cfg).empty());
    // Equal boxes, one center 5px off.
    const auto row = boxes({{0, 0, 20, 20}, {0, 30, 20, 20}, {5, 60, 20, 20}});
    const auto found = check_center_alignment(row.ptrs(), cfg);
    REQUIRE(found.size() == 1);
    CHECK(found[0].rule_id == "alignment.center.x");
    CHECK(found[0].node_ids == std::vector<std::string>{"b2"});
    CHECK(found[0].measurement("offset") == 5.0);
  }

  TEST_CASE("spacing") {
    RuleConfig cfg;
    CHECK(check_spacing(boxes({{0, 0, 10, 10}, {18, 0, 10, 10}, {36, 0, 10, 10}, {54, 0, 10, 10}})
                            .ptrs(),
                        Axis::Horizontal, cfg)
              .empty());
    const auto row = boxes({{0, 0, 10, 10}, {18, 0, 10, 10}, {36, 0, 10, 10}, {58, 0, 10, 10}});
    const auto found = check_spacing(row.ptrs(), Axis::Horizontal, cfg);
    REQUIRE(found.size() == 1);
    CHECK(found[0].node_ids == std::vector<std::string>{"b2", "b3"});
    CHECK(found[0].measurement("gap") == 12.0);
    CHECK(found[0].measurement("median_gap") == 8.0);
    CHECK(detect_stack_axis(row.ptrs()) == Axis::Horizontal);
  }

  TEST_CASE("spacing ignores declaration order") {
    std::mt19937 rng(17);
    for (int k = 0; k < 200; ++k) {
      auto s = scenes::random_scene(rng, 3, 8);
      const auto a = s.pointers();
      auto shuffled = a;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      RuleConfig cfg;
      CHECK(check_spacing(a, Axis::Vertical, cfg) == check_spacing(shuffled, Axis::Vertical, cfg));
    }
  }

  TEST_CASE("size consistency") {
    RuleConfig cfg;
    CHECK(check_size_consistency(boxes({{0, 0, 80, 40}, {90, 0, 80, 40}}).ptrs(), cfg).empty());
    auto icons = boxes({{0, 0, 32, 32}, {40, 0, 32, 32}, {80, 0, 32, 32}, {120, 0, 24, 24}},
                       KindTag::Icon);
    const auto found = check_size_consistency(icons.ptrs(), cfg);
    REQUIRE(found.size() == 2);
    CHECK(found[0].rule_id == "size.width");
    CHECK(found[0].measurement("width") == 24.0);
    CHECK(found[0].measurement("modal") == 32.0);
    CHECK(found[1].rule_id == "size.height");
    // A lone icon next to buttons is never compared with them.
    auto mixed = boxes({{0, 0, 80, 40}, {90, 0, 80, 40}});
    mixed.nodes.push_back(testing::leaf("i", KindTag::Icon, 0, 50, 24, 24));
    CHECK(check_size_consistency(mixed.ptrs(), cfg).empty());
  }

  TEST_CASE("overlap") {
    RuleConfig cfg;
    CHECK(check_overlap(boxes({{0, 0, 10, 10}, {20, 0, 10, 10}}).ptrs(), cfg).empty());
    const auto same = boxes({{5, 5, 10, 10}, {5, 5, 10, 10}});
    const auto found = check_overlap(same.ptrs(), cfg);
    REQUIRE(found.size() == 1);
    CHECK(found[0].measurement("fraction") == 1.0);

    // A group never overlaps its own children.
    DesignNode group = testing::leaf("g", KindTag::Group, 0, 0, 100, 100);
    group.children.push_back(testing::leaf("c", KindTag::Button, 10, 10, 20, 20));
    const std::vector<const DesignNode*> nested{&group, &group.children[0]};
    CHECK(check_overlap(nested, cfg).empty());
  }

  TEST_CASE("contrast") {
    RuleConfig cfg;
    CHECK(contrast_ratio(rgb(0, 0, 0), rgb(255, 255, 255)) == doctest::Approx(21.0));
    CHECK(check_contrast(text_node("t", rgb(0, 0, 0)), rgb(255, 255, 255), cfg).empty());
    const auto found = check_contrast(text_node("t", rgb(255, 255, 255)), rgb(255, 255, 255), cfg);
    REQUIRE(found.size() == 1);
    CHECK(found[0].measurement("ratio") == doctest::Approx(1.0));
    CHECK(found[0].guideline == "Readability");

    try {
      check_contrast(text_node("t", rgb(0, 0, 0)), std::nullopt, cfg);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MissingColor);
    }
    DesignNode bare = testing::leaf("bare", KindTag::Text, 0, 0, 1, 1);
    CHECK_THROWS_AS(check_contrast(bare, rgb(0, 0, 0), cfg), Error);
  }

  TEST_CASE("text opacity is composited over its background") {
    auto faded = text_node("t", rgb(0, 0, 0));
    faded.opacity = 0.2;
    const auto found = check_contrast(faded, rgb(255, 255, 255), RuleConfig{});
    REQUIRE(found.size() == 1);
    const auto mixed = composite({0, 0, 0, 0.2}, rgb(255, 255, 255));
    CHECK(mixed == rgb(204, 204, 204));
    CHECK(found[0].measurement("ratio") == doctest::Approx(oracle::contrast(204, 204, 204, 255, 255, 255)));
  }

  TEST_CASE("effective background walks groups and covering surfaces") {
    DesignNode root = testing::leaf("root", KindTag::Group, 0, 0, 375, 812);
    root.background = rgb(240, 240, 240);
    auto button = testing::leaf("btn", KindTag::Button, 10, 10, 100, 40);
    button.fill = rgb(0, 0, 200);
    auto label = text_node("label", rgb(255, 255, 255));
    label.bounds = {20, 20, 60, 20};
    auto outside = text_node("outside", rgb(0, 0, 0));
    outside.bounds = {200, 200, 60, 20};
    root.children = {button, label, outside};
    const auto doc = design::DesignDocument::build(root);
    CHECK(effective_background(doc, *doc.lookup("label")) == rgb(0, 0, 200));
    CHECK(effective_background(doc, *doc.lookup("outside")) == rgb(240, 240, 240));

    DesignNode plain = testing::leaf("p", KindTag::Group, 0, 0, 10, 10);
    plain.children.push_back(text_node("t", rgb(0, 0, 0)));
    const auto bare = design::DesignDocument::build(plain);
    CHECK_FALSE(effective_background(bare, *bare.lookup("t")).has_value());
  }

  TEST_CASE("random scenes agree with the oracles") {
    CHECK(scenes::edge_alignment_disagreements(1, 400) == 0);
    CHECK(scenes::center_alignment_disagreements(2, 400) == 0);
    CHECK(scenes::spacing_disagreements(3, 400) == 0);
    CHECK(scenes::size_disagreements(4, 400) == 0);
    CHECK(scenes::overlap_disagreements(5, 400) == 0);
    CHECK(scenes::contrast_disagreements(6, 400) == 0);
  }

  TEST_CASE("symmetric resize and translation keep verdicts") {
    CHECK(scenes::symmetric_resize_changes(7, 300) == 0);
    CHECK(scenes::translation_changes(8, 300) == 0);
  }

  TEST_CASE("run_rules is translation invariant on whole documents") {
    std::mt19937 rng(11);
    const auto sets = guidelines::builtin_sets();
    for (int k = 0; k < 40; ++k) {
      auto root = testing::random_tree(rng, 40);
      const auto before = run_rules(design::DesignDocument::build(root), sets);
      std::function<void(DesignNode&)> shift = [&](DesignNode& n) {
        n.bounds.x += 37;
        n.bounds.y -= 19;
        for (auto& c : n.children) shift(c);
      };
      shift(root);
      const auto doc = design::DesignDocument::build(root);
      const auto after = run_rules(doc, sets);
      REQUIRE(after.size() == before.size());
      for (std::size_t i = 0; i < after.size(); ++i) {
        CHECK(after[i].rule_id == before[i].rule_id);
        CHECK(after[i].node_ids == before[i].node_ids);
        for (const auto& id : after[i].node_ids) CHECK(doc.lookup(id) != nullptr);
      }
    }
  }

  TEST_CASE("run_rules selection and ordering") {
    const auto empty = design::DesignDocument::build(
        testing::leaf("r", KindTag::Group, 0, 0, 375, 812));
    CHECK(run_rules(empty, guidelines::builtin_sets()).empty());

    for (const auto& path : testing::screen_fixtures()) {
      const auto doc = design::parse_document(testing::read_file(path));
      CHECK(run_rules(doc, guidelines::select_builtin("semantic")).empty());
      const auto findings = run_rules(doc, guidelines::builtin_sets());
      for (std::size_t i = 1; i < findings.size(); ++i) {
        const auto a = *doc.preorder_index(findings[i - 1].node_ids.front());
        const auto b = *doc.preorder_index(findings[i].node_ids.front());
        CHECK((a < b || (a == b && findings[i - 1].rule_id <= findings[i].rule_id)));
      }
    }
  }

  TEST_CASE("fixture screens reproduce their golden findings") {
    const auto sets = guidelines::builtin_sets();
    for (const auto& path : testing::screen_fixtures()) {
      CAPTURE(path.filename().string());
      const auto doc = design::parse_document(testing::read_file(path));
      const auto text = findings_to_json(run_rules(doc, sets)) + "\n";
      const auto golden = testing::fixture("golden/rules/" + path.filename().string());
      if (testing::update_golden()) {
        testing::write_file(golden, text);
      } else {
        CHECK(text == testing::read_file(golden));
      }
    }
  }

  TEST_CASE("deliberate defects in the fixtures are found") {
    const auto sets = guidelines::builtin_sets();
    auto has = [&](const char* screen, const char* rule_prefix) {
      const auto doc = testing::load_screen(screen);
      for (const auto& f : run_rules(doc, sets)) {
        if (f.rule_id.rfind(rule_prefix, 0) == 0) return true;
      }
      return false;
    };
    CHECK(has("01_login.json", "alignment."));
    CHECK(has("01_login.json", "contrast."));
    CHECK(has("02_settings.json", "spacing."));
    CHECK(has("05_checkout.json", "overlap"));
    CHECK(has("11_player.json", "size."));
  }

  TEST_CASE("parse_config") {
    const auto cfg = parse_config("# tolerances\nepsilon_align = 2\n\nmin_contrast=3.0  # AA large\n");
    CHECK(cfg.epsilon_align == 2.0);
    CHECK(cfg.min_contrast == 3.0);
    CHECK(cfg.epsilon_gap == RuleConfig{}.epsilon_gap);
    CHECK(parse_config("") == RuleConfig{});
    for (const char* bad : {"epsilon_align 2", "unknown = 1", "epsilon_gap = two",
                            "epsilon_gap = -1", "overlap_min_fraction = 1.5",
                            "min_contrast = 4.5x", "epsilon_align = nan"}) {
      CAPTURE(bad);
      try {
        parse_config(bad);
        FAIL("accepted");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidArgument);
      }
    }
  }

  TEST_CASE("findings json") {
    RuleFinding f{"overlap", "Layout", {"a", "b"}, {{"fraction", 0.5}}, "m"};
    const auto j = nlohmann::json::parse(findings_to_json({f}));
    CHECK(j[0]["rule"] == "overlap");
    CHECK(j[0]["elements"] == nlohmann::json::array({"a", "b"}));
    CHECK(j[0]["measurements"]["fraction"] == 0.5);
  }
}
