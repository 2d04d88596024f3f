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

#include <stdexcept>
#include <string>
#include <string_view>

namespace heurex {

enum class ErrorCode {
  // design document
  MalformedJson,
  DuplicateId,
  ChildrenOnNonGroup,
  NegativeDimension,
  NonFiniteCoordinate,
  RootNotGroup,
  ColorOutOfRange,
  UnknownId,
  // guidelines / analysis inputs
  EmptyInput,
  InvalidArgument,
  // rules
  MissingColor,
  // llm pipeline
  BudgetExceeded,
  UnparseableResponse,
  CountMismatch,
  MissingSegment,
  MissingLabel,
  UnknownLabelId,
  Transport,
  // session
  UnknownSession,
  UnknownSuggestion,
  AlreadyDismissed,
  VersionMismatch,
  CorruptState,
  // analysis
  InvalidCounts,
  RowSumMismatch,
  SchemaError,
};

std::string_view to_string(ErrorCode code);

/// Error raised by every heurex operation.
///
/// `detail()` carries the offending value where the error names one (the
/// duplicated id, the missing segment, the row number). `stage()` is set by
/// the evaluation pipeline to say which call of the chain failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string detail = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::string& stage() const noexcept { return stage_; }

  Error with_stage(std::string stage) const;

 private:
  ErrorCode code_;
  std::string detail_;
  std::string stage_;
};

/// {"error": code, "message", "detail", "stage"} as compact JSON; empty
/// detail and stage are omitted.
std::string error_to_json(const Error& error);

}  // namespace heurex
