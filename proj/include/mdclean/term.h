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

#ifndef MDCLEAN_TERM_H_
#define MDCLEAN_TERM_H_

#include <compare>
#include <string>

namespace mdclean {

// Variable or constant argument of a query or rule literal.
struct Term {
  enum class Kind { kVariable, kConstant };

  Kind kind = Kind::kVariable;
  std::string text;

  static Term var(std::string name) { return {Kind::kVariable, std::move(name)}; }
  static Term constant(std::string value) {
    return {Kind::kConstant, std::move(value)};
  }

  bool is_variable() const { return kind == Kind::kVariable; }
  auto operator<=>(const Term &) const = default;
};

}  // namespace mdclean

#endif  // MDCLEAN_TERM_H_
