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

#ifndef MDCLEAN_QUERY_H_
#define MDCLEAN_QUERY_H_

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdclean/instance.h"
#include "mdclean/md.h"
#include "mdclean/similarity.h"
#include "mdclean/term.h"

namespace mdclean {

struct QueryAtom {
  std::string relation;
  Term tid;
  std::vector<Term> args;
};

// left ~domain~ right; the domain is inferred by resolve_query() when empty.
struct QuerySimilarity {
  Term left;
  Term right;
  std::string domain;
};

struct QueryDistinct {
  Term left;
  Term right;
};

// q(head) :- atoms, similarities, disequalities.
struct ConjunctiveQuery {
  std::string name = "q";
  std::vector<Term> head;
  std::vector<QueryAtom> atoms;
  std::vector<QuerySimilarity> similarities;
  std::vector<QueryDistinct> distinct;
};

// Variable name -> value (tuple identifiers for identifier positions).
using Binding = std::map<std::string, std::string>;

struct AnswerSet {
  std::size_t arity = 0;
  std::set<std::vector<Value>> rows;

  bool operator==(const AnswerSet &) const = default;
};

// Parses `q(X, Y) :- R(T, X, Y), S(U, Y, Z), X ~ Z, Y ~D~ c, T != U.`
// Identifiers starting with an upper-case letter or '_' are variables;
// other identifiers and quoted strings are constants.
ConjunctiveQuery parse_query(std::string_view text,
                             std::string_view source = "<query>");
std::string print_query(const ConjunctiveQuery &query);

// Checks relations, arities and head safety against the schema and infers
// omitted similarity domains. Throws UnknownRelation or ValidationError.
void resolve_query(ConjunctiveQuery &query, const Schema &schema);

// Calls `visit` for every homomorphism of the body into `instance` until it
// returns false. Returns false if stopped early.
bool for_each_binding(const Instance &instance, const SimilarityRelation &sim,
                      const ConjunctiveQuery &query,
                      const std::function<bool(const Binding &)> &visit);

// Variables of `query` in the order for_each_row reports them.
std::vector<std::string> query_variables(const ConjunctiveQuery &query);

// Positional form of for_each_binding, without building a map per answer:
// row[i] points to the value of query_variables(query)[i].
bool for_each_row(const Instance &instance, const SimilarityRelation &sim,
                  const ConjunctiveQuery &query,
                  const std::function<bool(const std::vector<const std::string *> &)>
                      &visit);

std::optional<Binding> first_binding(const Instance &instance,
                                     const SimilarityRelation &sim,
                                     const ConjunctiveQuery &query);

// All homomorphic images of the head.
AnswerSet eval_cq(const Instance &instance, const ConjunctiveQuery &query,
                  const SimilarityRelation &sim);

struct CertainAnswerOptions {
  // When false, head variables that only occur at tuple-identifier positions
  // are projected away before intersecting.
  bool include_tids = false;
};

// Answers that hold in every instance of `clean`. Throws EmptyCleanSet.
AnswerSet certain_answers(std::span<const Instance> clean,
                          const ConjunctiveQuery &query,
                          const SimilarityRelation &sim,
                          CertainAnswerOptions options = {});

// The LHS of a bound MD as a query whose head lists all tuple identifier
// variables (leading atoms first).
ConjunctiveQuery lhs_query(const Md &md);

}  // namespace mdclean

#endif  // MDCLEAN_QUERY_H_
