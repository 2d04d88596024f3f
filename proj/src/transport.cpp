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


#include "heurex/transport.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "heurex/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace heurex::llm {

using nlohmann::ordered_json;

std::string_view to_string(Role role) {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

Role role_from_string(std::string_view name) {
  if (name == "system") return Role::System;
  if (name == "user") return Role::User;
  if (name == "assistant") return Role::Assistant;
  throw Error(ErrorCode::InvalidArgument, "unknown message role: " + std::string(name),
              std::string(name));
}

std::string messages_to_json(std::span<const PromptMessage> messages) {
  auto out = ordered_json::array();
  for (const auto& m : messages) {
    out.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }
  return out.dump();
}

std::vector<PromptMessage> messages_from_json(std::string_view json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, std::string("invalid messages JSON: ") + e.what());
  }
  if (!j.is_array()) throw Error(ErrorCode::MalformedJson, "messages must be a JSON array");
  std::vector<PromptMessage> out;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("role") || !item.contains("content") ||
        !item["role"].is_string() || !item["content"].is_string()) {
      throw Error(ErrorCode::MalformedJson, "message needs string role and content");
    }
    out.push_back({role_from_string(item["role"].get<std::string>()),
                   item["content"].get<std::string>()});
  }
  return out;
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string prompt_hash(std::span<const PromptMessage> messages) {
  return fnv1a_hex(messages_to_json(messages));
}

// ---------------------------------------------------------------------------
// ScriptedTransport

ScriptedTransport::ScriptedTransport(ScriptedTransport&& other) noexcept {
  std::lock_guard lock(other.mutex_);
  responses_ = std::move(other.responses_);
  requested_ = std::move(other.requested_);
}

ScriptedTransport ScriptedTransport::from_json(std::string_view json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, std::string("invalid transport script: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::MalformedJson, "transport script must be an object");
  ScriptedTransport transport;
  for (const auto& [hash, value] : j.items()) {
    if (value.is_string()) {
      transport.add_hash(hash, value.get<std::string>());
    } else if (value.is_object() && value.contains("error") && value["error"].is_string()) {
      transport.add_failure(hash, value["error"].get<std::string>());
    } else {
      throw Error(ErrorCode::MalformedJson, "transport script entry " + hash +
                                                " must be a string or {\"error\": ...}");
    }
  }
  return transport;
}

ScriptedTransport ScriptedTransport::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read transport script " + path, path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

void ScriptedTransport::add(std::span<const PromptMessage> messages, std::string response) {
  add_hash(prompt_hash(messages), std::move(response));
}

void ScriptedTransport::add_hash(std::string hash, std::string response) {
  std::lock_guard lock(mutex_);
  responses_[std::move(hash)] = {std::move(response), false};
}

void ScriptedTransport::add_failure(std::string hash, std::string message) {
  std::lock_guard lock(mutex_);
  responses_[std::move(hash)] = {std::move(message), true};
}

std::string ScriptedTransport::complete(std::span<const PromptMessage> messages,
                                        const CompletionParams& /*params*/) {
  const std::string hash = prompt_hash(messages);
  std::lock_guard lock(mutex_);
  requested_.push_back(hash);
  auto it = responses_.find(hash);
  if (it == responses_.end()) {
    throw Error(ErrorCode::Transport, "no scripted response for prompt " + hash, hash);
  }
  if (it->second.failure) throw Error(ErrorCode::Transport, it->second.text, hash);
  return it->second.text;
}

std::size_t ScriptedTransport::calls() const {
  std::lock_guard lock(mutex_);
  return requested_.size();
}

std::vector<std::string> ScriptedTransport::requested_hashes() const {
  std::lock_guard lock(mutex_);
  return requested_;
}

std::string ScriptedTransport::to_json() const {
  std::lock_guard lock(mutex_);
  ordered_json j = ordered_json::object();
  for (const auto& [hash, entry] : responses_) {
    if (entry.failure) {
      j[hash] = {{"error", entry.text}};
    } else {
      j[hash] = entry.text;
    }
  }
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// HttpTransport

HttpTransportConfig HttpTransportConfig::from_env() {
  HttpTransportConfig config;
  if (const char* v = std::getenv("HEUREX_ENDPOINT"); v && *v) config.endpoint = v;
  if (const char* v = std::getenv("HEUREX_API_KEY"); v && *v) config.api_key = v;
  if (const char* v = std::getenv("HEUREX_MODEL"); v && *v) config.model = v;
  return config;
}

HttpTransport::HttpTransport(HttpTransportConfig config) : config_(std::move(config)) {
  const auto scheme_end = config_.endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "endpoint must be an absolute URL: " + config_.endpoint);
  }
  const auto path_start = config_.endpoint.find('/', scheme_end + 3);
  origin_ = config_.endpoint.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : config_.endpoint.substr(path_start);
}

std::string HttpTransport::complete(std::span<const PromptMessage> messages,
                                    const CompletionParams& params) {
  ordered_json body;
  body["model"] = params.model.empty() ? config_.model : params.model;
  body["temperature"] = params.temperature;
  body["max_tokens"] = params.max_output_tokens;
  body["messages"] = ordered_json::parse(messages_to_json(messages));

  httplib::Client client(origin_);
  client.set_connection_timeout(config_.timeout_seconds, 0);
  client.set_read_timeout(config_.timeout_seconds, 0);
  client.set_write_timeout(config_.timeout_seconds, 0);
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }
  auto result = client.Post(path_, headers, body.dump(), "application/json");
  if (!result) {
    throw Error(ErrorCode::Transport,
                "request to " + config_.endpoint + " failed: " + httplib::to_string(result.error()));
  }
  if (result->status < 200 || result->status >= 300) {
    throw Error(ErrorCode::Transport, "completion endpoint returned HTTP " +
                                          std::to_string(result->status) + ": " +
                                          result->body.substr(0, 500));
  }
  try {
    auto reply = ordered_json::parse(result->body);
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Transport,
                std::string("unexpected completion response shape: ") + e.what());
  }
}

}  // namespace heurex::llm
