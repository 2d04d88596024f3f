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
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace heurex::llm {

enum class Role { System, User, Assistant };

std::string_view to_string(Role role);
/// Throws Error(InvalidArgument) for anything but system/user/assistant.
Role role_from_string(std::string_view name);

struct PromptMessage {
  Role role = Role::User;
  std::string content;

  bool operator==(const PromptMessage&) const = default;
};

struct CompletionParams {
  double temperature = 0.0;
  int max_output_tokens = 1024;
  std::string model;  // empty: the transport's configured model
};

/// Chat-completion backend. Implementations throw Error(Transport) on
/// network or service failures.
class CompletionTransport {
 public:
  virtual ~CompletionTransport() = default;
  virtual std::string complete(std::span<const PromptMessage> messages,
                               const CompletionParams& params) = 0;
};

/// Compact JSON array of {role, content}; the canonical prompt encoding.
std::string messages_to_json(std::span<const PromptMessage> messages);
std::vector<PromptMessage> messages_from_json(std::string_view json_text);

/// 64-bit FNV-1a of messages_to_json(), as 16 lower-case hex digits.
std::string prompt_hash(std::span<const PromptMessage> messages);
std::string fnv1a_hex(std::string_view data);

/// Replays canned responses keyed by prompt_hash(). Fixture files are a JSON
/// object mapping hash to response text; a value of the form
/// {"error": "message"} replays a transport failure instead.
class ScriptedTransport : public CompletionTransport {
 public:
  ScriptedTransport() = default;
  ScriptedTransport(ScriptedTransport&& other) noexcept;

  static ScriptedTransport from_json(std::string_view json_text);
  static ScriptedTransport from_file(const std::string& path);

  void add(std::span<const PromptMessage> messages, std::string response);
  void add_hash(std::string hash, std::string response);
  void add_failure(std::string hash, std::string message);

  std::string complete(std::span<const PromptMessage> messages,
                       const CompletionParams& params) override;

  std::size_t calls() const;
  std::vector<std::string> requested_hashes() const;
  std::string to_json() const;

 private:
  struct Entry {
    std::string text;
    bool failure = false;
  };
  mutable std::mutex mutex_;
  std::map<std::string, Entry> responses_;
  std::vector<std::string> requested_;
};

struct HttpTransportConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string api_key;
  std::string model = "gpt-4";
  int timeout_seconds = 120;

  /// HEUREX_ENDPOINT, HEUREX_API_KEY and HEUREX_MODEL override the defaults.
  static HttpTransportConfig from_env();
};

/// POSTs chat-completions requests with a bearer key and returns
/// choices[0].message.content.
class HttpTransport : public CompletionTransport {
 public:
  explicit HttpTransport(HttpTransportConfig config);

  std::string complete(std::span<const PromptMessage> messages,
                       const CompletionParams& params) override;

  const HttpTransportConfig& config() const { return config_; }

 private:
  HttpTransportConfig config_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;
};

}  // namespace heurex::llm
