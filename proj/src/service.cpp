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


#include "heurex/service.hpp"

#include <fstream>
#include <sstream>

#include "heurex/condenser.hpp"
#include "heurex/error.hpp"
#include "heurex/guidelines.hpp"
#include "heurex/llm_pipeline.hpp"
#include "heurex/report.hpp"
#include "httplib.h"
#include "json.hpp"
#include "text_util.hpp"

namespace heurex::service {

using nlohmann::ordered_json;

namespace {

Response json_response(int status, const ordered_json& body) { return {status, body.dump(2)}; }

Response error_response(const Error& e) { return {status_for(e.code()), error_to_json(e)}; }

ordered_json parse_body(std::string_view body, bool required) {
  if (text::trim(body).empty()) {
    if (required) throw Error(ErrorCode::InvalidArgument, "request body is empty");
    return ordered_json::object();
  }
  ordered_json j = ordered_json::parse(body.begin(), body.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::MalformedJson, "request body must be a JSON object");
  }
  return j;
}

std::vector<std::string> path_segments(std::string_view path) {
  if (auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
  std::vector<std::string> out;
  for (auto& part : text::split(path, '/')) {
    if (!part.empty()) out.push_back(httplib::detail::decode_url(part, false));
  }
  return out;
}

std::vector<guidelines::GuidelineSet> sets_from_request(const ordered_json& j) {
  std::vector<guidelines::GuidelineSet> sets;
  if (j.contains("guidelines")) {
    const auto& g = j["guidelines"];
    std::string ids;
    if (g.is_string()) {
      ids = g.get<std::string>();
    } else if (g.is_array()) {
      for (const auto& item : g) {
        if (!item.is_string()) throw Error(ErrorCode::InvalidArgument, "guideline ids must be strings");
        ids += (ids.empty() ? "" : ",") + item.get<std::string>();
      }
    } else {
      throw Error(ErrorCode::InvalidArgument, "guidelines must be a list of set ids");
    }
    if (!ids.empty()) sets = guidelines::select_builtin(ids);
  }
  if (j.contains("custom_guidelines")) {
    if (!j["custom_guidelines"].is_string()) {
      throw Error(ErrorCode::InvalidArgument, "custom_guidelines must be text");
    }
    sets.push_back(guidelines::parse_custom(j["custom_guidelines"].get<std::string>()));
  }
  if (sets.empty()) throw Error(ErrorCode::InvalidArgument, "no guidelines selected");
  return sets;
}

design::DesignDocument design_from(const ordered_json& j) {
  if (!j.contains("design")) throw Error(ErrorCode::InvalidArgument, "design is required");
  const auto& d = j["design"];
  return design::parse_document(d.is_string() ? d.get<std::string>() : d.dump());
}

}  // namespace

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownSession:
    case ErrorCode::UnknownSuggestion:
      return 404;
    case ErrorCode::AlreadyDismissed:
      return 409;
    case ErrorCode::Transport:
    case ErrorCode::UnparseableResponse:
    case ErrorCode::CountMismatch:
    case ErrorCode::MissingSegment:
    case ErrorCode::MissingLabel:
    case ErrorCode::UnknownLabelId:
      return 502;
    case ErrorCode::CorruptState:
    case ErrorCode::VersionMismatch:
      return 500;
    default:
      return 400;
  }
}

Service::Service(std::shared_ptr<llm::CompletionTransport> transport, ServiceOptions options)
    : transport_(std::move(transport)), options_(std::move(options)) {
  if (!options_.state_dir) return;
  std::filesystem::create_directories(*options_.state_dir);
  for (const auto& file : std::filesystem::directory_iterator(*options_.state_dir)) {
    if (file.path().extension() != ".json") continue;
    std::ifstream in(file.path(), std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    auto entry = std::make_shared<Entry>();
    entry->state = session::load_session(buf.str());
    const auto& id = entry->state.session_id;
    if (id.rfind("session-", 0) == 0) {
      try {
        next_id_ = std::max(next_id_, std::stoul(id.substr(8)) + 1);
      } catch (const std::exception&) {
      }
    }
    sessions_[id] = std::move(entry);
  }
}

std::size_t Service::session_count() const {
  std::lock_guard lock(sessions_mutex_);
  return sessions_.size();
}

Response Service::handle(std::string_view method, std::string_view path, std::string_view body) {
  try {
    const auto seg = path_segments(path);
    const auto n = seg.size();
    if (method == "GET" && n == 1 && seg[0] == "guidelines") return guidelines();
    if (method == "POST" && n == 1 && seg[0] == "labels") return labels(body);
    if (n >= 1 && seg[0] == "sessions") {
      if (method == "POST" && n == 1) return create_session(body);
      if (method == "GET" && n == 2) return get_session(seg[1]);
      if (method == "POST" && n == 3 && seg[2] == "rounds") return run_round(seg[1], body);
      if (method == "POST" && n == 5 && seg[2] == "suggestions" && seg[4] == "dismiss") {
        return dismiss(seg[1], seg[3]);
      }
    }
    return json_response(404, {{"error", "NotFound"},
                               {"message", std::string(method) + " " + std::string(path)}});
  } catch (const Error& e) {
    return error_response(e);
  } catch (const nlohmann::json::exception& e) {
    return error_response(Error(ErrorCode::MalformedJson, e.what()));
  }
}

std::shared_ptr<Service::Entry> Service::find(const std::string& id) const {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "unknown session " + id, id);
  return it->second;
}

void Service::persist(const session::SessionState& state) const {
  if (!options_.state_dir) return;
  const auto target = *options_.state_dir / (state.session_id + ".json");
  const auto tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << session::save_session(state);
  }
  std::filesystem::rename(tmp, target);
}

Response Service::create_session(std::string_view body) {
  const auto j = parse_body(body, true);
  auto doc = design_from(j);
  auto sets = sets_from_request(j);
  const auto engine = session::engine_from_string(j.value("engine", std::string("llm")));
  std::optional<std::size_t> budget;
  if (j.contains("budget")) {
    if (!j["budget"].is_number_unsigned()) {
      throw Error(ErrorCode::InvalidArgument, "budget must be a positive integer");
    }
    budget = j["budget"].get<std::size_t>();
  }
  auto opts = options_.session_options;
  if (j.contains("suppress_same_nodes")) opts.suppress_same_nodes = j["suppress_same_nodes"].get<bool>();

  auto entry = std::make_shared<Entry>();
  std::string id;
  {
    std::lock_guard lock(sessions_mutex_);
    id = "session-" + std::to_string(next_id_++);
    entry->state = session::create_session(id, std::move(doc), std::move(sets), engine, budget, opts);
    sessions_[id] = entry;
  }
  std::lock_guard guard(entry->mutex);
  persist(entry->state);
  return json_response(201, {{"session_id", id}});
}

Response Service::run_round(const std::string& id, std::string_view body) {
  auto entry = find(id);
  const auto j = parse_body(body, false);
  std::optional<design::DesignDocument> updated;
  if (j.contains("design")) updated = design_from(j);

  std::lock_guard guard(entry->mutex);
  // Work on a copy so a failed round leaves the session untouched.
  auto next = entry->state;
  const auto& round = session::run_round(next, updated, transport(), options_.params);
  auto result = report::make_report(next, round);
  entry->state = std::move(next);
  persist(entry->state);
  return {200, report::report_to_json(result)};
}

Response Service::dismiss(const std::string& id, const std::string& suggestion_id) {
  auto entry = find(id);
  std::lock_guard guard(entry->mutex);
  auto next = entry->state;
  const auto& record =
      session::dismiss(next, suggestion_id, transport(), options_.params, options_.clock);
  ordered_json out{{"suggestion_id", record.suggestion_id},
                   {"round", record.round_number},
                   {"status", "dismissed"},
                   {"missing_nodes", record.missing_nodes},
                   {"timestamp", record.timestamp}};
  entry->state = std::move(next);
  persist(entry->state);
  return json_response(200, out);
}

Response Service::get_session(const std::string& id) {
  auto entry = find(id);
  std::lock_guard guard(entry->mutex);
  return {200, session::save_session(entry->state)};
}

Response Service::guidelines() const {
  ordered_json sets = ordered_json::array();
  for (const auto& set : guidelines::builtin_sets()) {
    sets.push_back(ordered_json::parse(guidelines::set_to_json(set)));
  }
  return json_response(200, {{"sets", sets}});
}

Response Service::labels(std::string_view body) {
  const auto j = parse_body(body, true);
  const auto doc = design_from(j);
  if (transport() == nullptr) {
    throw Error(ErrorCode::InvalidArgument, "label generation needs a completion transport");
  }
  const auto labels = llm::generate_labels(doc, *transport(), options_.params);
  ordered_json out = ordered_json::object();
  for (const auto& [node_id, label] : labels) out[node_id] = label;
  return json_response(200, out);
}

void serve(Service& service, const std::string& host, int port) {
  httplib::Server server;
  auto bridge = [&service](const httplib::Request& req, httplib::Response& res) {
    const auto out = service.handle(req.method, req.path, req.body);
    res.status = out.status;
    res.set_content(out.body, "application/json");
  };
  server.Get(R"(/.*)", bridge);
  server.Post(R"(/.*)", bridge);
  if (!server.listen(host, port)) {
    throw Error(ErrorCode::Transport, "cannot listen on " + host + ":" + std::to_string(port));
  }
}

}  // namespace heurex::service
