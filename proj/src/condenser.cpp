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

#include "heurex/condenser.hpp"

#include <cmath>

#include "heurex/error.hpp"
#include "json.hpp"

namespace heurex::condense {

using nlohmann::ordered_json;
using design::DesignNode;

namespace {

ordered_json px(double value, const Options& opts) {
  if (opts.round_px) return static_cast<long long>(std::llround(value));
  return value;
}

ordered_json condensed_json(const DesignNode& node, const Options& opts, CondensedNode& out) {
  ordered_json j;
  out.id = node.id;
  out.kind = node.kind.wire_name();
  j["id"] = node.id;
  if (!opts.drop_defaults || !design::is_placeholder_name(node.name)) {
    j["name"] = node.name;
    out.name = node.name;
  }
  j["type"] = out.kind;
  j["bounds"] = ordered_json::array({px(node.bounds.x, opts), px(node.bounds.y, opts),
                                     px(node.bounds.width, opts), px(node.bounds.height, opts)});
  out.bounds = opts.round_px
                   ? design::Bounds{double(std::llround(node.bounds.x)),
                                    double(std::llround(node.bounds.y)),
                                    double(std::llround(node.bounds.width)),
                                    double(std::llround(node.bounds.height))}
                   : node.bounds;
  if (node.text) {
    j["text"] = *node.text;
    out.text = node.text;
  }
  if (node.font) {
    ordered_json font;
    if (!node.font->family.empty()) font["family"] = node.font->family;
    font["size"] = px(node.font->size, opts);
    if (!opts.drop_defaults || node.font->weight != 400) font["weight"] = node.font->weight;
    j["font"] = std::move(font);
  }
  if (node.fill) j["fill"] = design::to_hex(*node.fill);
  if (node.background) j["background"] = design::to_hex(*node.background);
  if (node.stroke && (!opts.drop_defaults || node.stroke->weight > 0)) {
    j["stroke"] = {{"color", design::to_hex(node.stroke->color)},
                   {"weight", px(node.stroke->weight, opts)}};
  }
  if (!opts.drop_defaults || node.opacity < 1.0) j["opacity"] = node.opacity;
  if (node.kind.is_group()) {
    auto children = ordered_json::array();
    out.children.resize(node.children.size());
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      children.push_back(condensed_json(node.children[i], opts, out.children[i]));
    }
    j["children"] = std::move(children);
  }
  return j;
}

}  // namespace

CondensedUiJson condense_node(const DesignNode& node, const Options& opts) {
  CondensedUiJson out;
  out.text = condensed_json(node, opts, out.root).dump();
  return out;
}

CondensedUiJson condense(const design::DesignDocument& doc, const Options& opts) {
  return condense_node(doc.root(), opts);
}

CondensedUiJson subtree_condensed(const design::DesignDocument& doc, std::string_view id,
                                  const Options& opts) {
  const DesignNode* node = doc.lookup(id);
  if (node == nullptr) {
    throw Error(ErrorCode::UnknownId, "unknown node id: " + std::string(id), std::string(id));
  }
  return condense_node(*node, opts);
}

std::size_t count_characters(std::string_view text) {
  std::size_t count = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++count;
  }
  return count;
}

TokenEstimate estimate_tokens(std::string_view text, std::size_t chars_per_token) {
  if (chars_per_token == 0) {
    throw Error(ErrorCode::InvalidArgument, "chars_per_token must be positive");
  }
  const std::size_t chars = count_characters(text);
  return {(chars + chars_per_token - 1) / chars_per_token};
}

}  // namespace heurex::condense
