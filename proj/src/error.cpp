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

#include "heurex/error.hpp"

#include "json.hpp"

namespace heurex {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::ChildrenOnNonGroup: return "ChildrenOnNonGroup";
    case ErrorCode::NegativeDimension: return "NegativeDimension";
    case ErrorCode::NonFiniteCoordinate: return "NonFiniteCoordinate";
    case ErrorCode::RootNotGroup: return "RootNotGroup";
    case ErrorCode::ColorOutOfRange: return "ColorOutOfRange";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingColor: return "MissingColor";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::UnparseableResponse: return "UnparseableResponse";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::MissingSegment: return "MissingSegment";
    case ErrorCode::MissingLabel: return "MissingLabel";
    case ErrorCode::UnknownLabelId: return "UnknownLabelId";
    case ErrorCode::Transport: return "Transport";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::UnknownSuggestion: return "UnknownSuggestion";
    case ErrorCode::AlreadyDismissed: return "AlreadyDismissed";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CorruptState: return "CorruptState";
    case ErrorCode::InvalidCounts: return "InvalidCounts";
    case ErrorCode::RowSumMismatch: return "RowSumMismatch";
    case ErrorCode::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string message, std::string detail)
    : std::runtime_error(std::move(message)), code_(code), detail_(std::move(detail)) {}

Error Error::with_stage(std::string stage) const {
  Error tagged = *this;
  tagged.stage_ = std::move(stage);
  return tagged;
}

std::string error_to_json(const Error& error) {
  nlohmann::ordered_json j;
  j["error"] = to_string(error.code());
  j["message"] = error.what();
  if (!error.detail().empty()) j["detail"] = error.detail();
  if (!error.stage().empty()) j["stage"] = error.stage();
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace heurex
