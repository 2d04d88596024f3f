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

#include "heurex/design_tree.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <regex>
#include <unordered_map>

#include "heurex/error.hpp"
#include "json.hpp"

namespace heurex::design {

using ordered_json = nlohmann::ordered_json;

namespace {

struct KindName {
  KindTag tag;
  std::string_view wire;
};

constexpr std::array<KindName, 7> kKindNames{{
    {KindTag::Group, "GROUP"},
    {KindTag::Text, "TEXT"},
    {KindTag::Image, "IMAGE"},
    {KindTag::Icon, "ICON"},
    {KindTag::Button, "BUTTON"},
    {KindTag::Input, "INPUT"},
    {KindTag::Rectangle, "RECTANGLE"},
}};

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedJson, "malformed design document: " + what);
}

}  // namespace

std::string to_hex(const Color& color) {
  char buf[10];
  if (color.a < 1.0) {
    auto alpha = static_cast<unsigned>(std::lround(std::clamp(color.a, 0.0, 1.0) * 255.0));
    std::snprintf(buf, sizeof(buf), "#%02X%02X%02X%02X", color.r, color.g, color.b, alpha);
  } else {
    std::snprintf(buf, sizeof(buf), "#%02X%02X%02X", color.r, color.g, color.b);
  }
  return buf;
}

std::optional<Color> parse_hex_color(std::string_view text) {
  if (text.empty() || text.front() != '#') return std::nullopt;
  text.remove_prefix(1);
  std::vector<int> digits;
  for (char c : text) {
    int d = hex_digit(c);
    if (d < 0) return std::nullopt;
    digits.push_back(d);
  }
  Color color;
  if (digits.size() == 3) {
    color.r = static_cast<std::uint8_t>(digits[0] * 17);
    color.g = static_cast<std::uint8_t>(digits[1] * 17);
    color.b = static_cast<std::uint8_t>(digits[2] * 17);
    return color;
  }
  if (digits.size() != 6 && digits.size() != 8) return std::nullopt;
  color.r = static_cast<std::uint8_t>(digits[0] * 16 + digits[1]);
  color.g = static_cast<std::uint8_t>(digits[2] * 16 + digits[3]);
  color.b = static_cast<std::uint8_t>(digits[4] * 16 + digits[5]);
  if (digits.size() == 8) color.a = (digits[6] * 16 + digits[7]) / 255.0;
  return color;
}

NodeKind NodeKind::other(std::string name) {
  NodeKind kind(KindTag::Other);
  kind.other_name_ = std::move(name);
  return kind;
}

NodeKind NodeKind::from_wire(std::string_view name) {
  for (const auto& entry : kKindNames) {
    if (entry.wire == name) return NodeKind(entry.tag);
  }
  return other(std::string(name));
}

std::string NodeKind::wire_name() const {
  for (const auto& entry : kKindNames) {
    if (entry.tag == tag_) return std::string(entry.wire);
  }
  return other_name_.empty() ? "OTHER" : other_name_;
}

bool is_placeholder_name(std::string_view name) {
  static const std::regex kPlaceholder(R"(^(Group|Rectangle) [0-9]+$)");
  if (name.empty()) return true;
  return std::regex_match(name.begin(), name.end(), kPlaceholder);
}

// ---------------------------------------------------------------------------
// Document state and validation

struct DesignDocument::State {
  DesignNode root;
  Bounds screen;
  SourceMeta meta;
  std::vector<const DesignNode*> preorder;
  std::unordered_map<std::string_view, std::size_t> index;
  std::vector<const DesignNode*> parents;  // parallel to preorder
};

namespace {

bool finite(const Bounds& b) {
  return std::isfinite(b.x) && std::isfinite(b.y) && std::isfinite(b.width) &&
         std::isfinite(b.height);
}

void check_color(const std::optional<Color>& color, const std::string& id) {
  if (color && !(color->a >= 0.0 && color->a <= 1.0)) {
    throw Error(ErrorCode::ColorOutOfRange, "color alpha out of range on node " + id, id);
  }
}

void validate_node(const DesignNode& node) {
  if (node.id.empty()) malformed("node with empty id");
  if (!finite(node.bounds)) {
    throw Error(ErrorCode::NonFiniteCoordinate, "non-finite bounds on node " + node.id, node.id);
  }
  if (node.bounds.width < 0 || node.bounds.height < 0) {
    throw Error(ErrorCode::NegativeDimension, "negative dimension on node " + node.id, node.id);
  }
  if (!node.kind.is_group() && !node.children.empty()) {
    throw Error(ErrorCode::ChildrenOnNonGroup, "non-group node has children: " + node.id, node.id);
  }
  if (node.font && (!std::isfinite(node.font->size) || node.font->size < 0)) {
    throw Error(ErrorCode::NegativeDimension, "invalid font size on node " + node.id, node.id);
  }
  if (node.stroke && (!std::isfinite(node.stroke->weight) || node.stroke->weight < 0)) {
    throw Error(ErrorCode::NegativeDimension, "invalid stroke weight on node " + node.id, node.id);
  }
  check_color(node.fill, node.id);
  check_color(node.background, node.id);
  if (node.stroke) check_color(node.stroke->color, node.id);
  if (!(node.opacity >= 0.0 && node.opacity <= 1.0)) {
    throw Error(ErrorCode::ColorOutOfRange, "opacity out of range on node " + node.id, node.id);
  }
}

}  // namespace

DesignDocument DesignDocument::build(DesignNode root, std::optional<Bounds> screen,
                                     SourceMeta meta) {
  if (!root.kind.is_group()) {
    throw Error(ErrorCode::RootNotGroup, "document root must be a group", root.id);
  }
  auto state = std::make_shared<State>();
  state->root = std::move(root);
  state->screen = screen.value_or(state->root.bounds);
  state->meta = std::move(meta);
  if (!finite(state->screen)) {
    throw Error(ErrorCode::NonFiniteCoordinate, "non-finite screen bounds");
  }
  if (state->screen.width < 0 || state->screen.height < 0) {
    throw Error(ErrorCode::NegativeDimension, "negative screen dimension");
  }
  index_tree(*state);
  return DesignDocument(std::move(state));
}

void DesignDocument::index_tree(State& state) {
  struct Frame {
    const DesignNode* node;
    const DesignNode* parent;
  };
  std::vector<Frame> stack{{&state.root, nullptr}};
  while (!stack.empty()) {
    auto [node, parent] = stack.back();
    stack.pop_back();
    validate_node(*node);
    auto [it, inserted] = state.index.emplace(node->id, state.preorder.size());
    if (!inserted) {
      throw Error(ErrorCode::DuplicateId, "duplicate node id: " + node->id, node->id);
    }
    state.preorder.push_back(node);
    state.parents.push_back(parent);
    for (auto child = node->children.rbegin(); child != node->children.rend(); ++child) {
      stack.push_back({&*child, node});
    }
  }
}

DesignDocument::DesignDocument() {
  DesignNode root;
  root.id = "root";
  *this = build(std::move(root));
}

const DesignNode& DesignDocument::root() const { return state_->root; }
const Bounds& DesignDocument::screen() const { return state_->screen; }
const SourceMeta& DesignDocument::meta() const { return state_->meta; }
const std::vector<const DesignNode*>& DesignDocument::preorder() const {
  return state_->preorder;
}

const DesignNode* DesignDocument::lookup(std::string_view id) const {
  auto it = state_->index.find(id);
  return it == state_->index.end() ? nullptr : state_->preorder[it->second];
}

const DesignNode* DesignDocument::parent_of(std::string_view id) const {
  auto it = state_->index.find(id);
  return it == state_->index.end() ? nullptr : state_->parents[it->second];
}

std::optional<std::size_t> DesignDocument::preorder_index(std::string_view id) const {
  auto it = state_->index.find(id);
  if (it == state_->index.end()) return std::nullopt;
  return it->second;
}

bool DesignDocument::operator==(const DesignDocument& other) const {
  if (state_ == other.state_) return true;
  return state_->root == other.state_->root && state_->screen == other.state_->screen &&
         state_->meta == other.state_->meta;
}

// ---------------------------------------------------------------------------
// JSON reading

namespace {

double read_number(const ordered_json& value, const std::string& what) {
  if (!value.is_number()) malformed(what + " must be a number");
  return value.get<double>();
}

Bounds read_bounds(const ordered_json& value, const std::string& id) {
  if (value.is_array()) {
    if (value.size() != 4) malformed("bounds of " + id + " must have 4 entries");
    return {read_number(value[0], "bounds"), read_number(value[1], "bounds"),
            read_number(value[2], "bounds"), read_number(value[3], "bounds")};
  }
  if (value.is_object()) {
    return {read_number(value.value("x", ordered_json(0)), "x"),
            read_number(value.value("y", ordered_json(0)), "y"),
            read_number(value.value("width", ordered_json(0)), "width"),
            read_number(value.value("height", ordered_json(0)), "height")};
  }
  malformed("bounds of " + id + " must be [x, y, width, height]");
}

std::uint8_t read_channel(const ordered_json& value, const std::string& id) {
  if (!value.is_number_integer() && !value.is_number_unsigned()) {
    malformed("color channel on " + id + " must be an integer");
  }
  auto channel = value.get<long long>();
  if (channel < 0 || channel > 255) {
    throw Error(ErrorCode::ColorOutOfRange, "color channel out of range on node " + id, id);
  }
  return static_cast<std::uint8_t>(channel);
}

Color read_color(const ordered_json& value, const std::string& id) {
  if (value.is_string()) {
    auto color = parse_hex_color(value.get<std::string>());
    if (!color) malformed("bad color string on " + id);
    return *color;
  }
  if (!value.is_object()) malformed("color on " + id + " must be a string or object");
  Color color;
  color.r = read_channel(value.value("r", ordered_json(0)), id);
  color.g = read_channel(value.value("g", ordered_json(0)), id);
  color.b = read_channel(value.value("b", ordered_json(0)), id);
  if (value.contains("a")) color.a = read_number(value["a"], "alpha");
  return color;
}

std::string read_string(const ordered_json& object, const char* key, const std::string& id) {
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return {};
  if (!it->is_string()) malformed(std::string(key) + " on " + id + " must be a string");
  return it->get<std::string>();
}

DesignNode read_node(const ordered_json& value, int depth) {
  if (depth > 512) malformed("tree nested too deeply");
  if (!value.is_object()) malformed("node must be an object");
  auto id_it = value.find("id");
  if (id_it == value.end() || !id_it->is_string()) malformed("node without string id");
  DesignNode node;
  node.id = id_it->get<std::string>();
  node.name = read_string(value, "name", node.id);
  auto type_it = value.find("type");
  if (type_it == value.end() || !type_it->is_string()) malformed("node " + node.id + " has no type");
  node.kind = NodeKind::from_wire(type_it->get<std::string>());
  auto bounds_it = value.find("bounds");
  if (bounds_it == value.end()) malformed("node " + node.id + " has no bounds");
  node.bounds = read_bounds(*bounds_it, node.id);
  if (auto it = value.find("text"); it != value.end() && !it->is_null()) {
    if (!it->is_string()) malformed("text on " + node.id + " must be a string");
    node.text = it->get<std::string>();
  }
  if (auto it = value.find("font"); it != value.end() && !it->is_null()) {
    if (!it->is_object()) malformed("font on " + node.id + " must be an object");
    Font font;
    font.family = read_string(*it, "family", node.id);
    if (it->contains("size")) font.size = read_number((*it)["size"], "font size");
    if (it->contains("weight")) font.weight = static_cast<int>(read_number((*it)["weight"], "font weight"));
    node.font = font;
  }
  if (auto it = value.find("fill"); it != value.end() && !it->is_null()) {
    node.fill = read_color(*it, node.id);
  }
  if (auto it = value.find("background"); it != value.end() && !it->is_null()) {
    node.background = read_color(*it, node.id);
  }
  if (auto it = value.find("stroke"); it != value.end() && !it->is_null()) {
    if (!it->is_object()) malformed("stroke on " + node.id + " must be an object");
    Stroke stroke;
    if (it->contains("color")) stroke.color = read_color((*it)["color"], node.id);
    if (it->contains("weight")) stroke.weight = read_number((*it)["weight"], "stroke weight");
    node.stroke = stroke;
  }
  if (auto it = value.find("opacity"); it != value.end() && !it->is_null()) {
    node.opacity = read_number(*it, "opacity");
  }
  if (auto it = value.find("children"); it != value.end() && !it->is_null()) {
    if (!it->is_array()) malformed("children of " + node.id + " must be an array");
    node.children.reserve(it->size());
    for (const auto& child : *it) node.children.push_back(read_node(child, depth + 1));
  }
  return node;
}

}  // namespace

DesignDocument parse_document(std::string_view json_text) {
  ordered_json root_json;
  try {
    root_json = ordered_json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, std::string("invalid JSON: ") + e.what());
  }
  if (!root_json.is_object()) malformed("top level must be an object");
  if (auto it = root_json.find("format"); it != root_json.end()) {
    if (!it->is_string() || it->get<std::string>() != kDesignFormat) {
      malformed("unsupported format, expected " + std::string(kDesignFormat));
    }
  }
  auto root_it = root_json.find("root");
  if (root_it == root_json.end()) malformed("missing root");
  DesignNode root = read_node(*root_it, 0);

  std::optional<Bounds> screen;
  if (auto it = root_json.find("screen"); it != root_json.end() && !it->is_null()) {
    screen = read_bounds(*it, "screen");
  }
  SourceMeta meta;
  if (auto it = root_json.find("meta"); it != root_json.end() && it->is_object()) {
    meta.title = read_string(*it, "title", "meta");
    meta.exported_at = read_string(*it, "exported_at", "meta");
  }
  return DesignDocument::build(std::move(root), screen, std::move(meta));
}

// ---------------------------------------------------------------------------
// JSON writing

namespace {

ordered_json color_json(const Color& c) {
  return ordered_json{{"r", c.r}, {"g", c.g}, {"b", c.b}, {"a", c.a}};
}

ordered_json bounds_json(const Bounds& b) {
  return ordered_json::array({b.x, b.y, b.width, b.height});
}

ordered_json node_json(const DesignNode& node) {
  ordered_json out;
  out["id"] = node.id;
  out["name"] = node.name;
  out["type"] = node.kind.wire_name();
  out["bounds"] = bounds_json(node.bounds);
  if (node.text) out["text"] = *node.text;
  if (node.font) {
    out["font"] = {{"family", node.font->family},
                   {"size", node.font->size},
                   {"weight", node.font->weight}};
  }
  if (node.fill) out["fill"] = color_json(*node.fill);
  if (node.background) out["background"] = color_json(*node.background);
  if (node.stroke) {
    out["stroke"] = {{"color", color_json(node.stroke->color)}, {"weight", node.stroke->weight}};
  }
  out["opacity"] = node.opacity;
  auto children = ordered_json::array();
  for (const auto& child : node.children) children.push_back(node_json(child));
  out["children"] = std::move(children);
  return out;
}

}  // namespace

std::string serialize_document(const DesignDocument& doc) {
  ordered_json out;
  out["format"] = kDesignFormat;
  out["meta"] = {{"title", doc.meta().title}, {"exported_at", doc.meta().exported_at}};
  out["screen"] = bounds_json(doc.screen());
  out["root"] = node_json(doc.root());
  return out.dump(2);
}

std::vector<const DesignNode*> unnamed_groups(const DesignDocument& doc) {
  std::vector<const DesignNode*> out;
  for (const DesignNode* node : doc.preorder()) {
    if (node->kind.is_group() && is_placeholder_name(node->name)) out.push_back(node);
  }
  return out;
}

namespace {

void apply_names(DesignNode& node, const std::map<std::string, std::string, std::less<>>& names) {
  if (auto it = names.find(node.id); it != names.end()) node.name = it->second;
  for (auto& child : node.children) apply_names(child, names);
}

}  // namespace

DesignDocument rename_nodes(const DesignDocument& doc,
                            const std::vector<std::pair<std::string, std::string>>& names) {
  std::map<std::string, std::string, std::less<>> lookup_names(names.begin(), names.end());
  DesignNode root = doc.root();
  apply_names(root, lookup_names);
  return DesignDocument::build(std::move(root), doc.screen(), doc.meta());
}

}  // namespace heurex::design
