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

#include <string>
#include <string_view>
#include <vector>

namespace heurex::csv {

struct Row {
  std::size_t line = 0;  // 1-based line the record starts on
  std::vector<std::string> fields;
};

/// RFC 4180 records: quoted fields may hold commas, doubled quotes and
/// line breaks. Blank lines are skipped.
std::vector<Row> parse(std::string_view text);

std::string escape(std::string_view field);
std::string join(const std::vector<std::string>& fields);

}  // namespace heurex::csv
