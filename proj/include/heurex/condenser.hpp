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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "heurex/design_tree.hpp"

namespace heurex::condense {

inline constexpr std::size_t kDefaultTokenBudget = 8100;
inline constexpr std::size_t kDefaultCharsPerToken = 4;

struct Options {
  bool round_px = true;
  /// Drops placeholder names, opacity 1.0, zero-weight strokes and default
  /// font weight.
  bool drop_defaults = true;
};

struct CondensedNode {
  std::string id;
  std::optional<std::string> name;
  std::string kind;
  design::Bounds bounds;
  std::optional<std::string> text;
  std::vector<CondensedNode> children;
};

/// The compact UI JSON handed to the evaluator, plus its parsed tree.
struct CondensedUiJson {
  std::string text;
  CondensedNode root;
};

CondensedUiJson condense(const design::DesignDocument& doc, const Options& opts = {});
CondensedUiJson condense_node(const design::DesignNode& node, const Options& opts = {});
/// Throws Error(UnknownId) when `id` is not in `doc`.
CondensedUiJson subtree_condensed(const design::DesignDocument& doc, std::string_view id,
                                  const Options& opts = {});

struct TokenEstimate {
  std::size_t tokens = 0;
  bool operator==(const TokenEstimate&) const = default;
  auto operator<=>(const TokenEstimate&) const = default;
};

/// Number of Unicode code points in UTF-8 text (continuation bytes excluded).
std::size_t count_characters(std::string_view text);

/// ceil(characters / chars_per_token).
TokenEstimate estimate_tokens(std::string_view text,
                              std::size_t chars_per_token = kDefaultCharsPerToken);

}  // namespace heurex::condense
