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

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "heurex/error.hpp"
#include "heurex/session.hpp"
#include "heurex/transport.hpp"

namespace heurex::service {

struct Response {
  int status = 200;
  std::string body;  // always JSON
};

struct ServiceOptions {
  llm::CompletionParams params;
  session::SessionOptions session_options;
  session::Clock clock = session::utc_now;
  /// When set, every session is written to <dir>/<session-id>.json after
  /// each mutation and reloaded on construction.
  std::optional<std::filesystem::path> state_dir;
};

/// The review API as a plain request handler, so it can be exercised
/// without sockets. Safe to call from several threads; requests on the
/// same session are serialized.
class Service {
 public:
  explicit Service(std::shared_ptr<llm::CompletionTransport> transport,
                   ServiceOptions options = {});

  Response handle(std::string_view method, std::string_view path, std::string_view body);

  std::size_t session_count() const;

 private:
  struct Entry {
    std::mutex mutex;
    session::SessionState state;
  };

  Response create_session(std::string_view body);
  Response run_round(const std::string& id, std::string_view body);
  Response dismiss(const std::string& id, const std::string& suggestion_id);
  Response get_session(const std::string& id);
  Response guidelines() const;
  Response labels(std::string_view body);

  std::shared_ptr<Entry> find(const std::string& id) const;
  void persist(const session::SessionState& state) const;
  llm::CompletionTransport* transport() const { return transport_.get(); }

  std::shared_ptr<llm::CompletionTransport> transport_;
  ServiceOptions options_;
  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::size_t next_id_ = 1;
};

/// HTTP status for an error code: 400 validation, 404 unknown ids, 409
/// repeated dismissal, 502 failures of the completion backend.
int status_for(ErrorCode code);

/// Serves `service` over HTTP/1.1 until the process is stopped.
void serve(Service& service, const std::string& host, int port);

}  // namespace heurex::service
