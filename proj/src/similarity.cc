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

#include "mdclean/similarity.h"

#include <algorithm>

#include "mdclean/error.h"
#include "mdclean/tokens.h"

namespace mdclean {

void SimilarityRelation::add_domain(const std::string &domain) {
  domains_[domain];
}

void SimilarityRelation::declare(const std::string &domain, const Value &a,
                                 const Value &b) {
  DomainRelation &rel = domains_[domain];
  if (a == b) return;  // reflexive pairs are implicit
  rel.pairs.emplace(std::min(a, b), std::max(a, b));
}

void SimilarityRelation::set_builtin(const std::string &domain,
                                     SimilarityBuiltin builtin) {
  domains_[domain].builtin = builtin;
}

std::set<std::string> SimilarityRelation::domains() const {
  std::set<std::string> result;
  for (const auto &[name, rel] : domains_) result.insert(name);
  return result;
}

const SimilarityRelation::DomainRelation &SimilarityRelation::lookup(
    const std::string &domain) const {
  auto it = domains_.find(domain);
  if (it == domains_.end()) {
    throw UnknownDomain("no similarity relation for domain " + domain);
  }
  return it->second;
}

bool SimilarityRelation::similar(const std::string &domain, const Value &a,
                                 const Value &b) const {
  const DomainRelation &rel = lookup(domain);
  if (a == b) return true;
  if (rel.pairs.count({std::min(a, b), std::max(a, b)}) != 0) return true;
  if (rel.builtin == SimilarityBuiltin::kTokenOverlap) {
    const std::set<std::string> ta = tokens_of(a);
    const std::set<std::string> tb = tokens_of(b);
    auto ia = ta.begin();
    auto ib = tb.begin();
    while (ia != ta.end() && ib != tb.end()) {
      if (*ia == *ib) return true;
      if (*ia < *ib) {
        ++ia;
      } else {
        ++ib;
      }
    }
  }
  return false;
}

SimilarityBuiltin SimilarityRelation::builtin(const std::string &domain) const {
  return lookup(domain).builtin;
}

const std::set<std::pair<Value, Value>> &SimilarityRelation::declared(
    const std::string &domain) const {
  return lookup(domain).pairs;
}

const char *to_string(SimilarityBuiltin builtin) {
  switch (builtin) {
    case SimilarityBuiltin::kNone:
      return "none";
    case SimilarityBuiltin::kEquality:
      return "equality";
    case SimilarityBuiltin::kTokenOverlap:
      return "token-overlap";
  }
  return "none";
}

}  // namespace mdclean
