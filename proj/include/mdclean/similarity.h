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

#ifndef MDCLEAN_SIMILARITY_H_
#define MDCLEAN_SIMILARITY_H_

#include <map>
#include <set>
#include <string>
#include <utility>

#include "mdclean/schema.h"

namespace mdclean {

enum class SimilarityBuiltin {
  kNone,
  kEquality,      // only a ~ a
  kTokenOverlap,  // values share at least one token
};

// Per-domain similarity relations. Declared pairs are stored unordered;
// reflexivity and symmetry are applied when queried.
class SimilarityRelation {
 public:
  void add_domain(const std::string &domain);
  void declare(const std::string &domain, const Value &a, const Value &b);
  void set_builtin(const std::string &domain, SimilarityBuiltin builtin);

  bool has_domain(const std::string &domain) const {
    return domains_.count(domain) != 0;
  }
  std::set<std::string> domains() const;

  // Throws UnknownDomain.
  bool similar(const std::string &domain, const Value &a, const Value &b) const;

  SimilarityBuiltin builtin(const std::string &domain) const;
  // Declared pairs with first <= second.
  const std::set<std::pair<Value, Value>> &declared(
      const std::string &domain) const;

 private:
  struct DomainRelation {
    SimilarityBuiltin builtin = SimilarityBuiltin::kNone;
    std::set<std::pair<Value, Value>> pairs;
  };
  const DomainRelation &lookup(const std::string &domain) const;

  std::map<std::string, DomainRelation> domains_;
};

// Free-function form used across the engine.
inline bool similar(const SimilarityRelation &sim, const std::string &domain,
                    const Value &a, const Value &b) {
  return sim.similar(domain, a, b);
}

const char *to_string(SimilarityBuiltin builtin);

}  // namespace mdclean

#endif  // MDCLEAN_SIMILARITY_H_
