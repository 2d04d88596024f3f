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


// Randomized scene comparisons between the rule checks and the oracles.
//
// Every function builds `count` flat scenes from a seeded generator and
// returns the number of scenes where the library and the oracle disagree.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "heurex/design_tree.hpp"
#include "heurex/rule_engine.hpp"
#include "oracles.hpp"

namespace scenes {

using heurex::design::DesignNode;
using heurex::design::KindTag;

struct Scene {
  std::vector<DesignNode> nodes;

  std::vector<const DesignNode*> pointers() const {
    std::vector<const DesignNode*> out;
    for (const auto& n : nodes) out.push_back(&n);
    return out;
  }
  std::vector<oracle::Box> boxes() const {
    std::vector<oracle::Box> out;
    for (const auto& n : nodes) {
      out.push_back({n.id, n.bounds.x, n.bounds.y, n.bounds.width, n.bounds.height});
    }
    return out;
  }
};

// Coordinates snap to a coarse grid so that shared lines actually occur.
inline Scene random_scene(std::mt19937& rng, std::size_t min_nodes, std::size_t max_nodes,
                          KindTag kind = KindTag::Button) {
  std::uniform_int_distribution<std::size_t> count(min_nodes, max_nodes);
  std::uniform_int_distribution<int> coarse(0, 12);
  std::uniform_int_distribution<int> jitter(-3, 3);
  std::uniform_int_distribution<int> size(0, 6);
  Scene scene;
  for (std::size_t i = count(rng); i > 0; --i) {
    DesignNode n;
    n.id = "s" + std::to_string(scene.nodes.size());
    n.name = n.id;
    n.kind = heurex::design::NodeKind(kind);
    const int jx = rng() % 3 == 0 ? jitter(rng) : 0;
    const int jy = rng() % 3 == 0 ? jitter(rng) : 0;
    n.bounds = {static_cast<double>(coarse(rng) * 10 + jx),
                static_cast<double>(coarse(rng) * 10 + jy),
                static_cast<double>(size(rng) * 8 + (rng() % 4 == 0 ? jitter(rng) + 3 : 8)),
                static_cast<double>(size(rng) * 8 + (rng() % 4 == 0 ? jitter(rng) + 3 : 8))};
    scene.nodes.push_back(std::move(n));
  }
  return scene;
}

inline double pick_epsilon(std::mt19937& rng) {
  static const double choices[] = {0.0, 1.0, 2.0, 3.5};
  return choices[rng() % 4];
}

inline void expect_isolated(const Scene& s, const std::vector<double>& values,
                            const std::string& rule, double eps,
                            std::vector<heurex::rules::RuleFinding>& out) {
  for (const auto& flag : oracle::isolated(values, eps)) {
    heurex::rules::RuleFinding f;
    f.rule_id = rule;
    f.node_ids = {s.nodes[flag.index].id};
    f.measurements = {{"offset", flag.offset},
                      {"line", flag.line},
                      {"peers", static_cast<double>(flag.peers)}};
    out.push_back(std::move(f));
  }
}

inline bool same_core(const std::vector<heurex::rules::RuleFinding>& got,
                      const std::vector<heurex::rules::RuleFinding>& want) {
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (got[i].rule_id != want[i].rule_id || got[i].node_ids != want[i].node_ids ||
        got[i].measurements != want[i].measurements) {
      return false;
    }
  }
  return true;
}

inline std::size_t edge_alignment_disagreements(std::uint32_t seed, std::size_t count) {
  std::mt19937 rng(seed);
  std::size_t bad = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const auto s = random_scene(rng, 2, 9);
    heurex::rules::RuleConfig cfg;
    cfg.epsilon_align = pick_epsilon(rng);
    std::vector<double> left, right, top;
    for (const auto& n : s.nodes) {
      left.push_back(n.bounds.x);
      right.push_back(n.bounds.x + n.bounds.width);
      top.push_back(n.bounds.y);
    }
    std::vector<heurex::rules::RuleFinding> want;
    expect_isolated(s, left, "alignment.edge.left", cfg.epsilon_align, want);
    expect_isolated(s, right, "alignment.edge.right", cfg.epsilon_align, want);
    expect_isolated(s, top, "alignment.edge.top", cfg.epsilon_align, want);
    const auto ptrs = s.pointers();
    if (!same_core(heurex::rules::check_edge_alignment(ptrs, cfg), want)) ++bad;
  }
  return bad;
}

inline std::size_t center_alignment_disagreements(std::uint32_t seed, std::size_t count) {
  std::mt19937 rng(seed);
  std::size_t bad = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const auto s = random_scene(rng, 2, 9);
    heurex::rules::RuleConfig cfg;
    cfg.epsilon_align = pick_epsilon(rng);
    std::vector<double> cx, cy;
    for (const auto& n : s.nodes) {
      cx.push_back(n.bounds.x + n.bounds.width / 2);
      cy.push_back(n.bounds.y + n.bounds.height / 2);
    }
    std::vector<heurex::rules::RuleFinding> want;
    expect_isolated(s, cx, "alignment.center.x", cfg.epsilon_align, want);
    expect_isolated(s, cy, "alignment.center.y", cfg.epsilon_align, want);
    const auto ptrs = s.pointers();
    if (!same_core(heurex::rules::check_center_alignment(ptrs, cfg), want)) ++bad;
  }
  return bad;
}

inline std::size_t spacing_disagreements(std::uint32_t seed, std::size_t count) {
  std::mt19937 rng(seed);
  std::size_t bad = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const auto s = random_scene(rng, 3, 9);
    heurex::rules::RuleConfig cfg;
    cfg.epsilon_gap = pick_epsilon(rng) + 1.0;
    const bool horizontal = rng() % 2 == 0;
    const auto axis = horizontal ? heurex::rules::Axis::Horizontal : heurex::rules::Axis::Vertical;
    const auto want = oracle::spacing(s.boxes(), horizontal, cfg.epsilon_gap);
    const auto ptrs = s.pointers();
    const auto got = heurex::rules::check_spacing(ptrs, axis, cfg);
    bool ok = got.size() == want.size();
    for (std::size_t i = 0; ok && i < got.size(); ++i) {
      ok = got[i].node_ids == std::vector<std::string>{want[i].first, want[i].second} &&
           got[i].measurement("gap") == want[i].gap &&
           got[i].measurement("median_gap") == want[i].median;
    }
    if (!ok) ++bad;
  }
  return bad;
}

inline std::size_t size_disagreements(std::uint32_t seed, std::size_t count) {
  std::mt19937 rng(seed);
  std::size_t bad = 0;
  for (std::size_t k = 0; k < count; ++k) {
    auto s = random_scene(rng, 2, 10);
    // Mix two kinds; the oracle groups them by hand in first-seen order.
    for (auto& n : s.nodes) {
      if (rng() % 2) n.kind = heurex::design::NodeKind(KindTag::Icon);
    }
    heurex::rules::RuleConfig cfg;
    cfg.epsilon_align = pick_epsilon(rng);
    std::vector<std::string> kinds;
    for (const auto& n : s.nodes) {
      const auto wire = n.kind.wire_name();
      if (std::find(kinds.begin(), kinds.end(), wire) == kinds.end()) kinds.push_back(wire);
    }
    std::vector<heurex::rules::RuleFinding> expected;
    for (const auto& kind : kinds) {
      Scene sub;
      for (const auto& n : s.nodes) {
        if (n.kind.wire_name() == kind) sub.nodes.push_back(n);
      }
      if (sub.nodes.size() < 2) continue;
      for (const bool width : {true, false}) {
        std::vector<double> values;
        for (const auto& n : sub.nodes) values.push_back(width ? n.bounds.width : n.bounds.height);
        for (const auto& flag : oracle::isolated(values, cfg.epsilon_align)) {
          heurex::rules::RuleFinding f;
          f.rule_id = width ? "size.width" : "size.height";
          f.node_ids = {sub.nodes[flag.index].id};
          f.measurements = {{width ? "width" : "height", values[flag.index]},
                            {"modal", flag.line},
                            {"peers", static_cast<double>(flag.peers)}};
          expected.push_back(std::move(f));
        }
      }
    }
    const auto ptrs = s.pointers();
    if (!same_core(heurex::rules::check_size_consistency(ptrs, cfg), expected)) ++bad;
  }
  return bad;
}

inline std::size_t overlap_disagreements(std::uint32_t seed, std::size_t count) {
  std::mt19937 rng(seed);
  std::size_t bad = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const auto s = random_scene(rng, 0, 12);
    heurex::rules::RuleConfig cfg;
    cfg.overlap_min_fraction = (rng() % 5) * 0.1;
    const auto want = oracle::overlaps(s.boxes(), cfg.overlap_min_fraction);
    const auto ptrs = s.pointers();
    const auto got = heurex::rules::check_overlap(ptrs, cfg);
    bool ok = got.size() == want.size();
    for (std::size_t i = 0; ok && i < got.size(); ++i) {
      ok = got[i].node_ids ==
               std::vector<std::string>{s.nodes[want[i].a].id, s.nodes[want[i].b].id} &&
           std::abs(*got[i].measurement("fraction") - want[i].fraction) < 1e-12;
    }
    if (!ok) ++bad;
  }
  return bad;
}

inline std::size_t contrast_disagreements(std::uint32_t seed, std::size_t count) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> channel(0, 255);
  std::size_t bad = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const int r1 = channel(rng), g1 = channel(rng), b1 = channel(rng);
    const int r2 = channel(rng), g2 = channel(rng), b2 = channel(rng);
    const heurex::design::Color fg{static_cast<std::uint8_t>(r1), static_cast<std::uint8_t>(g1),
                                   static_cast<std::uint8_t>(b1), 1.0};
    const heurex::design::Color bg{static_cast<std::uint8_t>(r2), static_cast<std::uint8_t>(g2),
                                   static_cast<std::uint8_t>(b2), 1.0};
    const double want = oracle::contrast(r1, g1, b1, r2, g2, b2);
    DesignNode text;
    text.id = "t";
    text.kind = heurex::design::NodeKind(KindTag::Text);
    text.fill = fg;
    heurex::rules::RuleConfig cfg;
    const auto findings = heurex::rules::check_contrast(text, bg, cfg);
    const bool ok = std::abs(heurex::rules::contrast_ratio(fg, bg) - want) <= 1e-9 &&
                    findings.empty() == (want >= cfg.min_contrast);
    if (!ok) ++bad;
  }
  return bad;
}

/// Grows one element symmetrically about its center in every scene and
/// counts scenes whose center verdicts changed.
inline std::size_t symmetric_resize_changes(std::uint32_t seed, std::size_t count) {
  std::mt19937 rng(seed);
  std::size_t changed = 0;
  for (std::size_t k = 0; k < count; ++k) {
    auto s = random_scene(rng, 2, 9);
    heurex::rules::RuleConfig cfg;
    cfg.epsilon_align = pick_epsilon(rng);
    auto verdicts = [&](const Scene& scene) {
      std::vector<std::pair<std::string, std::vector<std::string>>> out;
      const auto ptrs = scene.pointers();
      for (const auto& f : heurex::rules::check_center_alignment(ptrs, cfg)) {
        out.emplace_back(f.rule_id, f.node_ids);
      }
      return out;
    };
    const auto before = verdicts(s);
    auto& target = s.nodes[rng() % s.nodes.size()];
    const double dx = static_cast<double>(rng() % 20), dy = static_cast<double>(rng() % 20);
    target.bounds = {target.bounds.x - dx, target.bounds.y - dy, target.bounds.width + 2 * dx,
                     target.bounds.height + 2 * dy};
    if (verdicts(s) != before) ++changed;
  }
  return changed;
}

/// Translates every scene and counts those whose findings changed in any
/// check.
inline std::size_t translation_changes(std::uint32_t seed, std::size_t count) {
  std::mt19937 rng(seed);
  std::size_t changed = 0;
  for (std::size_t k = 0; k < count; ++k) {
    auto s = random_scene(rng, 3, 9);
    heurex::rules::RuleConfig cfg;
    auto run = [&](const Scene& scene) {
      const auto ptrs = scene.pointers();
      std::vector<heurex::rules::RuleFinding> all;
      for (auto&& part : {heurex::rules::check_edge_alignment(ptrs, cfg),
                          heurex::rules::check_center_alignment(ptrs, cfg),
                          heurex::rules::check_spacing(ptrs, heurex::rules::Axis::Vertical, cfg),
                          heurex::rules::check_size_consistency(ptrs, cfg),
                          heurex::rules::check_overlap(ptrs, cfg)}) {
        for (const auto& f : part) all.push_back(f);
      }
      // Absolute lines move with the scene; compare everything else.
      for (auto& f : all) {
        std::erase_if(f.measurements, [](const auto& m) { return m.name == "line"; });
        f.message.clear();
      }
      return all;
    };
    const auto before = run(s);
    const double dx = static_cast<double>(static_cast<int>(rng() % 401) - 200);
    const double dy = static_cast<double>(static_cast<int>(rng() % 401) - 200);
    for (auto& n : s.nodes) {
      n.bounds.x += dx;
      n.bounds.y += dy;
    }
    if (run(s) != before) ++changed;
  }
  return changed;
}

}  // namespace scenes
