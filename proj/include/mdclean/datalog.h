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

#ifndef MDCLEAN_DATALOG_H_
#define MDCLEAN_DATALOG_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mdclean/matching.h"
#include "mdclean/similarity.h"
#include "mdclean/term.h"

namespace mdclean::datalog {

enum class LiteralKind {
  kAtom,
  kSim,       // sim(D, X, Y)
  kMatch,     // mf(D, X, Y, Z); Z may be unbound
  kPrecedes,  // pre(D, X, Y)
  kNotEqual,  // X != Y or (X1, ..., Xn) != (Y1, ..., Yn)
  kEqual,     // X = Y; binds an unbound side
};

struct Literal {
  LiteralKind kind = LiteralKind::kAtom;
  bool negated = false;
  // Predicate of an atom, or the domain of sim/mf/pre.
  std::string name;
  std::vector<Term> args;
  // Right-hand side of = and !=; `args` holds the left-hand side.
  std::vector<Term> rhs;

  static Literal atom(std::string predicate, std::vector<Term> args,
                      bool negated = false);
};

// head :- body. An empty body makes a fact, an empty head a constraint and
// several heads a disjunction. Only single-head rules are evaluable.
struct Rule {
  std::vector<Literal> head;
  std::vector<Literal> body;
};

using Row = std::vector<std::string>;
using Relation = std::set<Row>;
using Database = std::map<std::string, Relation>;

// Rules plus the tables backing the built-ins. The tables come from facts
// `sim(D, a, b).`, `mf(D, a, b, c).`, `sim_builtin(D, "token-overlap").` and
// `mf_builtin(D, "token-union").` in program text.
struct Program {
  std::vector<Rule> rules;
  SimilarityRelation sim;
  MatchingFunction mf;
};

// Any program in the rule language, disjunctions and constraints included.
// Statements are `h :- l1, ..., not a.`, `h1 | h2 :- ...`, `:- ...` and facts;
// `%` starts a comment. Throws ParseError.
std::vector<Rule> parse_rules(std::string_view text,
                              std::string_view source = "<program>");

// An evaluable program: every statement has exactly one head. Built-in table
// facts are moved into `sim` and `mf`, and the matching function is
// saturated. Throws ParseError or ValidationError.
Program parse_program(std::string_view text,
                      std::string_view source = "<program>");

std::string print_rule(const Rule &rule);
std::string print_rules(const std::vector<Rule> &rules);
// Rules followed by the built-in tables as facts; parse_program() accepts
// the result.
std::string print_program(const Program &program);
// Plain when a lower-case identifier, quoted otherwise.
std::string print_constant(const std::string &value);

// Predicates defined by a rule head.
std::set<std::string> idb_predicates(const Program &program);

// Predicates grouped into strata, lowest first. Predicates in one stratum are
// sorted by name. Throws NotStratifiable naming a cycle through negation.
std::vector<std::vector<std::string>> stratify(const Program &program);

struct Diagnostic {
  std::string message;
};

struct Model {
  Database relations;
  std::vector<Diagnostic> warnings;
  std::size_t iterations = 0;

  const Relation &at(const std::string &predicate) const;
};

// Semi-naive bottom-up evaluation, stratum by stratum. `facts` is added to
// the facts of the program. Throws NotStratifiable, UnboundBuiltin, or
// ValidationError for unsafe rules.
Model evaluate(const Program &program, const Database &facts = {});

}  // namespace mdclean::datalog

#endif  // MDCLEAN_DATALOG_H_
