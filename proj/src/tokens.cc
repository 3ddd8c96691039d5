// Copyright 2026 The mdclean Authors.
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

#include "mdclean/tokens.h"

#include <cctype>
#include <vector>

namespace mdclean {

std::set<std::string> tokens_of(std::string_view value) {
  std::set<std::string> result;
  std::size_t i = 0;
  while (i < value.size()) {
    while (i < value.size() &&
           std::isspace(static_cast<unsigned char>(value[i]))) {
      ++i;
    }
    std::size_t start = i;
    while (i < value.size() &&
           !std::isspace(static_cast<unsigned char>(value[i]))) {
      ++i;
    }
    if (i > start) result.emplace(value.substr(start, i - start));
  }
  return result;
}

std::string join_tokens(const std::set<std::string> &tokens) {
  std::string out;
  for (const std::string &t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

}  // namespace mdclean
