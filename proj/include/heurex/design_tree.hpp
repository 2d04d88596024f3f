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

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace heurex::design {

inline constexpr std::string_view kDesignFormat = "heurex-design/1";

/// Axis-aligned box in screen pixels; (x, y) is the top-left corner.
struct Bounds {
  double x = 0;
  double y = 0;
  double width = 0;
  double height = 0;

  double right() const { return x + width; }
  double bottom() const { return y + height; }
  double center_x() const { return x + width / 2; }
  double center_y() const { return y + height / 2; }
  double area() const { return width * height; }

  bool operator==(const Bounds&) const = default;
};

struct Color {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  double a = 1.0;

  bool operator==(const Color&) const = default;
};

/// "#RRGGBB", or "#RRGGBBAA" when alpha is below 1.
std::string to_hex(const Color& color);
/// Accepts "#RGB", "#RRGGBB" and "#RRGGBBAA"; nullopt on anything else.
std::optional<Color> parse_hex_color(std::string_view text);

enum class KindTag { Group, Text, Image, Icon, Button, Input, Rectangle, Other };

class NodeKind {
 public:
  NodeKind() = default;
  NodeKind(KindTag tag) : tag_(tag) {}  // NOLINT(google-explicit-constructor)

  static NodeKind other(std::string name);
  /// Upper-case wire name ("GROUP", "TEXT", ...); unknown names map to Other.
  static NodeKind from_wire(std::string_view name);

  KindTag tag() const { return tag_; }
  bool is_group() const { return tag_ == KindTag::Group; }
  std::string wire_name() const;

  bool operator==(const NodeKind&) const = default;

 private:
  KindTag tag_ = KindTag::Other;
  std::string other_name_;
};

struct Font {
  std::string family;
  double size = 0;
  int weight = 400;

  bool operator==(const Font&) const = default;
};

struct Stroke {
  Color color;
  double weight = 0;

  bool operator==(const Stroke&) const = default;
};

struct DesignNode {
  std::string id;
  std::string name;
  NodeKind kind = KindTag::Group;
  Bounds bounds;
  std::optional<std::string> text;
  std::optional<Font> font;
  std::optional<Color> fill;
  std::optional<Color> background;
  std::optional<Stroke> stroke;
  double opacity = 1.0;
  std::vector<DesignNode> children;

  bool operator==(const DesignNode&) const = default;
};

struct SourceMeta {
  std::string title;
  std::string exported_at;

  bool operator==(const SourceMeta&) const = default;
};

/// True for empty names and layer-panel placeholders such as "Group 406"
/// or "Rectangle 12".
bool is_placeholder_name(std::string_view name);

/// A validated, immutable design tree for one static screen.
///
/// Copies share the same underlying tree. The id index is built once at
/// construction, so lookup() is O(1).
class DesignDocument {
 public:
  /// An empty root group with id "root".
  DesignDocument();

  /// Validates the tree and builds the index. Throws heurex::Error.
  static DesignDocument build(DesignNode root, std::optional<Bounds> screen = std::nullopt,
                              SourceMeta meta = {});

  const DesignNode& root() const;
  const Bounds& screen() const;
  const SourceMeta& meta() const;

  const DesignNode* lookup(std::string_view id) const;
  /// Parent of the node with `id`; nullptr for the root or unknown ids.
  const DesignNode* parent_of(std::string_view id) const;
  /// Position of the node in preorder, or nullopt for unknown ids.
  std::optional<std::size_t> preorder_index(std::string_view id) const;
  /// All nodes in preorder.
  const std::vector<const DesignNode*>& preorder() const;
  std::size_t size() const { return preorder().size(); }

  bool operator==(const DesignDocument& other) const;

 private:
  struct State;
  static void index_tree(State& state);
  explicit DesignDocument(std::shared_ptr<const State> state) : state_(std::move(state)) {}
  std::shared_ptr<const State> state_;
};

/// Parses a "heurex-design/1" document. Unknown fields are ignored.
DesignDocument parse_document(std::string_view json_text);

/// Full-fidelity serialization of every retained field, pretty printed with
/// two-space indentation. parse_document(serialize_document(d)) == d.
std::string serialize_document(const DesignDocument& doc);

/// Group nodes with empty or placeholder names, in preorder.
std::vector<const DesignNode*> unnamed_groups(const DesignDocument& doc);

/// Copy of `doc` with group names replaced according to `names` (id -> name).
DesignDocument rename_nodes(const DesignDocument& doc,
                            const std::vector<std::pair<std::string, std::string>>& names);

}  // namespace heurex::design
