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

#ifndef MDCLEAN_MATCHING_H_
#define MDCLEAN_MATCHING_H_

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mdclean/schema.h"

namespace mdclean {

enum class MatchBuiltin {
  kNone,
  kTokenUnion,  // union of token sets
  kValueMin,    // numeric when both values parse as numbers, else lexicographic
  kValueMax,
};

struct MatchTriple {
  Value left;
  Value right;
  Value result;

  auto operator<=>(const MatchTriple &) const = default;
};

// Per domain values, used to seed saturation with idempotence triples.
using ActiveValues = std::map<std::string, std::set<Value>>;

// Matching functions m_A, one per domain that has one. A table-backed domain
// holds a partial join table; saturate_mf() closes it under the semilattice
// laws. Domains without an entry have no matching function, and their induced
// order is equality.
class MatchingFunction {
 public:
  using Table = std::map<std::pair<Value, Value>, Value>;

  // Registers a table-backed domain with no triples yet.
  void add_domain(const std::string &domain);
  void declare(const std::string &domain, const Value &a, const Value &b,
               const Value &result);
  void set_builtin(const std::string &domain, MatchBuiltin builtin);

  bool has_domain(const std::string &domain) const {
    return domains_.count(domain) != 0;
  }
  std::set<std::string> domains() const;
  MatchBuiltin builtin(const std::string &domain) const;
  const std::vector<MatchTriple> &declared(const std::string &domain) const;

  bool saturated() const { return saturated_; }

  // m(a, b) if defined. Requires a saturated function.
  std::optional<Value> try_match(const std::string &domain, const Value &a,
                                 const Value &b) const;

  // Saturated join table over ordered pairs; empty for built-in domains.
  const Table &table(const std::string &domain) const;
  // Every value mentioned by the saturated table of a domain.
  std::set<Value> table_values(const std::string &domain) const;

 private:
  friend MatchingFunction saturate_mf(const MatchingFunction &,
                                      const ActiveValues &);

  struct DomainFunction {
    MatchBuiltin builtin = MatchBuiltin::kNone;
    std::vector<MatchTriple> declared;
    Table table;
  };
  const DomainFunction &lookup(const std::string &domain) const;

  std::map<std::string, DomainFunction> domains_;
  bool saturated_ = false;
};

// Closes every table-backed domain under idempotence, commutativity and
// associativity, seeding idempotent triples for `active` values. Throws
// SemilatticeViolation when the laws force two results for one pair.
MatchingFunction saturate_mf(const MatchingFunction &mf,
                             const ActiveValues &active);

// m_A(a, b). Throws UndefinedMatch when no result is defined.
Value match_values(const MatchingFunction &mf, const std::string &domain,
                   const Value &a, const Value &b);

// a ⪯ b, i.e. m(a, b) = b; equality for domains without a matching function.
bool precedes(const MatchingFunction &mf, const std::string &domain,
              const Value &a, const Value &b);

// Attribute-wise precedes over tuples whose positions have `domains`.
bool tuple_precedes(const MatchingFunction &mf,
                    std::span<const std::string> domains, const Tuple &lhs,
                    const Tuple &rhs);

const char *to_string(MatchBuiltin builtin);

}  // namespace mdclean

#endif  // MDCLEAN_MATCHING_H_
