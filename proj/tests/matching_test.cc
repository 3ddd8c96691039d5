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

#include <map>
#include <random>
#include <set>
#include <string>

#include "doctest.h"
#include "mdclean/error.h"
#include "mdclean/matching.h"
#include "support/random_cases.h"

namespace mdclean {
namespace {

// Generator-set model: each value names a set of generators and m is set
// union, defined when the union has a name.
struct GeneratorModel {
  std::map<Value, unsigned> mask;
  std::map<unsigned, Value> name;

  void add(const Value &v, unsigned m) {
    mask[v] = m;
    name[m] = v;
  }
  std::optional<Value> join(const Value &a, const Value &b) const {
    auto it = name.find(mask.at(a) | mask.at(b));
    if (it == name.end()) return std::nullopt;
    return it->second;
  }
};

GeneratorModel Example2Model() {
  GeneratorModel g;
  g.add("b1", 1);
  g.add("b2", 2);
  g.add("b3", 4);
  g.add("b4", 8);
  g.add("b12", 3);
  g.add("b23", 6);
  g.add("b123", 7);
  g.add("b34", 12);
  return g;
}

MatchingFunction Example2Table() {
  MatchingFunction mf;
  mf.declare("B", "b1", "b2", "b12");
  mf.declare("B", "b2", "b3", "b23");
  mf.declare("B", "b1", "b23", "b123");
  mf.declare("B", "b3", "b4", "b34");
  return mf;
}

TEST_CASE("saturation of the example table agrees with the generator model") {
  MatchingFunction s = saturate_mf(Example2Table(), {});
  GeneratorModel g = Example2Model();
  CHECK(s.table_values("B").size() == g.mask.size());
  for (const auto &[a, _] : g.mask) {
    for (const auto &[b, _2] : g.mask) {
      CAPTURE(a);
      CAPTURE(b);
      CHECK(s.try_match("B", a, b) == g.join(a, b));
    }
  }
  CHECK(s.try_match("B", "b1", "b12") == Value("b12"));
  CHECK(s.try_match("B", "b12", "b3") == Value("b123"));
  CHECK_FALSE(s.try_match("B", "b1", "b3").has_value());
}

TEST_CASE("saturated tables are sound for random generator families") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 200; ++round) {
    GeneratorModel g;
    const unsigned gens = 3 + testing::pick(rng, 2);
    for (unsigned m = 1; m < (1u << gens); ++m) {
      bool singleton = (m & (m - 1)) == 0;
      if (singleton || testing::coin(rng, 0.4)) g.add(testing::subset_name(m), m);
    }
    MatchingFunction mf;
    mf.add_domain("D");
    std::set<MatchTriple> declared;
    for (const auto &[a, ma] : g.mask) {
      for (const auto &[b, mb] : g.mask) {
        auto j = g.join(a, b);
        if (a < b && j && testing::coin(rng, 0.5)) {
          mf.declare("D", a, b, *j);
          declared.insert({a, b, *j});
        }
      }
    }
    MatchingFunction s = saturate_mf(mf, {});
    for (const MatchTriple &t : declared) {
      CHECK(s.try_match("D", t.left, t.right) == t.result);
    }
    for (const auto &[pair, result] : s.table("D")) {
      REQUIRE(g.mask.count(pair.first));
      REQUIRE(g.mask.count(pair.second));
      CHECK(g.join(pair.first, pair.second) == result);
    }
  }
}

TEST_CASE("saturation is complete when every nameable union is declared") {
  GeneratorModel g;
  for (unsigned m = 1; m < 16; ++m) g.add(testing::subset_name(m), m);
  MatchingFunction mf;
  for (const auto &[a, _] : g.mask) {
    for (const auto &[b, _2] : g.mask) {
      if (a < b) mf.declare("D", a, b, *g.join(a, b));
    }
  }
  MatchingFunction s = saturate_mf(mf, {});
  for (const auto &[a, _] : g.mask) {
    for (const auto &[b, _2] : g.mask) CHECK(s.try_match("D", a, b) == g.join(a, b));
  }
}

TEST_CASE("active values become idempotent entries") {
  MatchingFunction s = saturate_mf(Example2Table(), {{"B", {"b9"}}});
  CHECK(s.try_match("B", "b9", "b9") == Value("b9"));
  CHECK_FALSE(s.try_match("B", "b9", "b1").has_value());
}

TEST_CASE("inconsistent tables are rejected") {
  SUBCASE("absorption conflict") {
    MatchingFunction bad;
    bad.declare("B", "b1", "b2", "b12");
    bad.declare("B", "b1", "b12", "b1");
    CHECK_THROWS_AS(saturate_mf(bad, {}), SemilatticeViolation);
  }
  SUBCASE("two results for one pair") {
    MatchingFunction bad;
    bad.declare("B", "b1", "b2", "b12");
    bad.declare("B", "b2", "b1", "b21");
    CHECK_THROWS_AS(saturate_mf(bad, {}), SemilatticeViolation);
  }
  SUBCASE("idempotence") {
    MatchingFunction bad;
    bad.declare("B", "b1", "b1", "b2");
    CHECK_THROWS_AS(saturate_mf(bad, {}), SemilatticeViolation);
  }
}

TEST_CASE("order induced by the matching function") {
  MatchingFunction s = saturate_mf(Example2Table(), {});
  CHECK(precedes(s, "B", "b1", "b12"));
  CHECK(precedes(s, "B", "b1", "b123"));
  CHECK(precedes(s, "B", "b12", "b12"));
  CHECK_FALSE(precedes(s, "B", "b12", "b1"));
  CHECK_FALSE(precedes(s, "B", "b1", "b3"));
  // Without a matching function the order is equality.
  CHECK(precedes(s, "A", "a1", "a1"));
  CHECK_FALSE(precedes(s, "A", "a1", "a2"));
  std::vector<std::string> doms = {"A", "B"};
  CHECK(tuple_precedes(s, doms, {"a1", "b1"}, {"a1", "b123"}));
  CHECK_FALSE(tuple_precedes(s, doms, {"a1", "b1"}, {"a2", "b123"}));
}

TEST_CASE("built-in matching functions") {
  MatchingFunction mf;
  mf.set_builtin("T", MatchBuiltin::kTokenUnion);
  mf.set_builtin("Lo", MatchBuiltin::kValueMin);
  mf.set_builtin("Hi", MatchBuiltin::kValueMax);
  MatchingFunction s = saturate_mf(mf, {});
  CHECK(s.try_match("T", "x y", "y z") == Value("x y z"));
  CHECK(s.try_match("T", "b a", "a") == Value("a b"));
  CHECK(s.try_match("Hi", "9", "10") == Value("10"));
  CHECK(s.try_match("Lo", "9", "10") == Value("9"));
  CHECK(s.try_match("Lo", "b", "a") == Value("a"));
  CHECK(match_values(s, "T", "x", "x") == "x");
  CHECK_THROWS_AS(match_values(s, "Missing", "x", "y"), UndefinedMatch);
  // Laws on a sample of token sets.
  const std::vector<Value> vals = {"a", "b", "a b", "c", "b c", "a b c"};
  for (const Value &a : vals) {
    for (const Value &b : vals) {
      CHECK(s.try_match("T", a, b) == s.try_match("T", b, a));
      for (const Value &c : vals) {
        CHECK(s.try_match("T", *s.try_match("T", a, b), c) ==
              s.try_match("T", a, *s.try_match("T", b, c)));
      }
    }
  }
}

TEST_CASE("undefined pairs are reported") {
  MatchingFunction s = saturate_mf(Example2Table(), {});
  CHECK_THROWS_AS(match_values(s, "B", "b1", "b4"), UndefinedMatch);
}

}  // namespace
}  // namespace mdclean
