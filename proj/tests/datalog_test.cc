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

#include <random>
#include <string>

#include "doctest.h"
#include "mdclean/datalog.h"
#include "mdclean/error.h"
#include "support/naive_datalog.h"
#include "support/random_cases.h"

namespace mdclean::datalog {
namespace {

TEST_CASE("transitive closure") {
  Program p = parse_program(
      "e(a, b). e(b, c). e(c, d).\n"
      "path(X, Y) :- e(X, Y).\n"
      "path(X, Z) :- path(X, Y), e(Y, Z).\n");
  Model m = evaluate(p);
  CHECK(m.at("path").size() == 6);
  CHECK(m.at("path").count({"a", "d"}));
  CHECK(m.at("missing").empty());
}

TEST_CASE("stratified negation") {
  Program p = parse_program(
      "node(a). node(b). node(c). e(a, b).\n"
      "reach(X) :- e(a, X).\n"
      "unreached(X) :- node(X), not reach(X), X != a.\n");
  Model m = evaluate(p);
  CHECK(m.at("unreached") == Relation{{"c"}});
  auto strata = stratify(p);
  REQUIRE(strata.size() == 2);
  CHECK(strata.back() == std::vector<std::string>{"unreached"});
}

TEST_CASE("negative cycles are rejected") {
  CHECK_THROWS_AS(stratify(parse_program("p(X) :- e(X), not p(X).")), NotStratifiable);
  CHECK_THROWS_AS(evaluate(parse_program("p(X) :- e(X), not q(X).\nq(X) :- e(X), not p(X).")),
                  NotStratifiable);
}

TEST_CASE("unsafe rules are rejected") {
  CHECK_THROWS_AS(evaluate(parse_program("p(X, Y) :- e(X).")), ValidationError);
  CHECK_THROWS_AS(evaluate(parse_program("p(X) :- e(X), not q(Y).")), ValidationError);
}

TEST_CASE("built-ins") {
  Program p = parse_program(
      "sim(\"A\", a1, a2).\n"
      "mf(\"B\", b1, b2, b12).\n"
      "v(a1, b1). v(a2, b2). v(a3, b3).\n"
      "s(X, Y) :- v(X, _x), v(Y, _y), sim(\"A\", X, Y), X != Y.\n"
      "m(Z) :- v(X, B1), v(Y, B2), sim(\"A\", X, Y), X != Y, mf(\"B\", B1, B2, Z).\n"
      "up(X, Y) :- v(_a, X), v(_b, Y), pre(\"B\", X, Y), X != Y.\n");
  Model m = evaluate(p);
  CHECK(m.at("s") == Relation{{"a1", "a2"}, {"a2", "a1"}});
  CHECK(m.at("m") == Relation{{"b12"}});
  CHECK(m.at("up").empty());
}

TEST_CASE("undefined matches warn instead of failing") {
  Program p = parse_program(
      "mf_builtin(\"B\", \"value-max\").\n"
      "mf(\"C\", c1, c2, c12).\n"
      "v(c1). v(c3).\n"
      "m(Z) :- v(X), v(Y), X != Y, mf(\"C\", X, Y, Z).\n"
      "n(Z) :- v(X), mf(\"B\", X, \"9\", Z).\n");
  Model m = evaluate(p);
  CHECK(m.at("m").empty());
  CHECK_FALSE(m.warnings.empty());
  CHECK(m.at("n").size() == 2);
}

TEST_CASE("printing round-trips") {
  const char *text =
      "a(X) | b(X) :- c(X, \"two words\"), not d(X).\n"
      ":- a(X), b(X).\n"
      "e(X, Y) :- c(X, Y), (X, Y) != (Y, X), X = Y.\n";
  std::vector<Rule> rules = parse_rules(text);
  REQUIRE(rules.size() == 3);
  CHECK(rules[0].head.size() == 2);
  CHECK(rules[1].head.empty());
  CHECK(print_rules(parse_rules(print_rules(rules))) == print_rules(rules));
  CHECK(print_constant("abc") == "abc");
  CHECK(print_constant("Abc") != "Abc");
  CHECK(print_constant("not") != "not");
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_rules("p(X) :- q(X\n");
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.line() >= 1);
  }
}

TEST_CASE("semi-naive evaluation agrees with the naive oracle") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 120; ++i) {
    testing::RandomProgram rp = testing::random_program(rng);
    CAPTURE(print_program(rp.program));
    REQUIRE(rp.fact_count <= 200);
    Model semi = evaluate(rp.program, rp.facts);
    Database naive = testing::naive_evaluate(rp.program, rp.facts);
    for (const std::string &pred : idb_predicates(rp.program)) {
      CAPTURE(pred);
      CHECK(semi.at(pred) == naive[pred]);
    }
  }
}

TEST_CASE("strata respect dependencies") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    testing::RandomProgram rp = testing::random_program(rng);
    auto strata = stratify(rp.program);
    std::map<std::string, std::size_t> level;
    for (std::size_t s = 0; s < strata.size(); ++s) {
      for (const std::string &p : strata[s]) level[p] = s;
    }
    for (const Rule &r : rp.program.rules) {
      for (const Literal &b : r.body) {
        if (b.kind != LiteralKind::kAtom || !level.count(b.name)) continue;
        if (b.negated) {
          CHECK(level[b.name] < level[r.head[0].name]);
        } else {
          CHECK(level[b.name] <= level[r.head[0].name]);
        }
      }
    }
  }
}

}  // namespace
}  // namespace mdclean::datalog
