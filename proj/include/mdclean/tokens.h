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

#ifndef MDCLEAN_TOKENS_H_
#define MDCLEAN_TOKENS_H_

#include <set>
#include <string>
#include <string_view>

namespace mdclean {

// Whitespace-separated token set of a value.
std::set<std::string> tokens_of(std::string_view value);

// Sorted, duplicate-free, single-space-joined form of a token set.
std::string join_tokens(const std::set<std::string> &tokens);

inline std::string canonical_token_value(std::string_view value) {
  return join_tokens(tokens_of(value));
}

}  // namespace mdclean

#endif  // MDCLEAN_TOKENS_H_
