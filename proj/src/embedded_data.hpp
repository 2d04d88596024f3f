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

#include <string_view>

// Contents of the files under data/, compiled in so the library and CLI work
// from any directory.
namespace heurex::embedded {

std::string_view nielsen_json();
std::string_view crowdcrit_json();
std::string_view semantic_json();
std::string_view common_errors();
std::string_view stopwords();

}  // namespace heurex::embedded
