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
#include <set>
#include <string>

#include "doctest.h"
#include "mdclean/chase.h"
#include "mdclean/classify.h"
#include "mdclean/codegen.h"
#include "mdclean/datalog.h"
#include "mdclean/error.h"
#include "mdclean/io.h"
#include "support/naive_datalog.h"
#include "support/problems.h"
#include "support/random_cases.h"

namespace mdclean {
namespace {

TEST_CASE("predicate names") {
  CHECK(relation_predicate("Author") == "author");
  CHECK(clean_predicate("R") == "r_c");
  CHECK(version_predicate("R") == "r_prime");
  CHECK(old_version_predicate("R") == "oldversion_r");
  CHECK(match_predicate("phi1") == "match_phi1");
  CHECK(not_match_predicate("phi1") == "notmatch_phi1");
  std::set<std::string> names = {relation_predicate("R"),    clean_predicate("R"),
                                 version_predicate("R"),     old_version_predicate("R"),
                                 match_predicate("R"),       not_match_predicate("R"),
                                 mf_predicate("R"),          sim_predicate("R")};
  CHECK(names.size() == 8);
}

TEST_CASE("residual program solves the example4 fixture") {
  Problem p = testing::example4();
  Classification c = classify(p.mds, p.instance, p.sim, p.mf);
  REQUIRE(c.verdict == Verdict::kSfai);
  datalog::Model m = datalog::evaluate(emit_residual_datalog(p.mds, p.instance, p.sim, p.mf, c));
  datalog::Relation want = {{"t1", "a1", "b12"},
                            {"t2", "a2", "b12"},
                            {"t3", "a3", "b34"},
                            {"t4", "a4", "b34"}};
  CHECK(m.at(clean_predicate("R")) == want);
  CHECK(m.warnings.empty());
}

TEST_CASE("residual program needs a single clean instance") {
  Problem p = testing::example2();
  Classification c = classify(p.mds, p.instance, p.sim, p.mf);
  CHECK_THROWS_AS(emit_residual_datalog(p.mds, p.instance, p.sim, p.mf, c), NotSci);
}

TEST_CASE("residual programs agree with the chase and the naive oracle") {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int i = 0; i < 400 && checked < 80; ++i) {
    testing::RandomCase rc = testing::random_case(rng);
    const Problem &p = rc.problem;
    CAPTURE(rc.mds_text);
    Classification c = classify(p.mds, p.instance, p.sim, p.mf);
    if (c.verdict == Verdict::kGeneral) continue;
    CleanInstanceSet set;
    try {
      set = chase_all(p.instance, p.mds, p.sim, p.mf);
    } catch (const UndefinedMatch &) {
      continue;
    }
    if (set.size() != 1) continue;
    ++checked;
    datalog::Program program = emit_residual_datalog(p.mds, p.instance, p.sim, p.mf, c);
    datalog::Model semi = datalog::evaluate(program);
    datalog::Database naive = testing::naive_evaluate(program, {});
    for (const std::string &pred : datalog::idb_predicates(program)) {
      CAPTURE(pred);
      CHECK(semi.at(pred) == naive[pred]);
    }
    for (const auto &rel : p.instance.schema().relations()) {
      CHECK(semi.at(clean_predicate(rel.name())) ==
            instance_rows(set.members[0].instance, rel.name()));
    }
  }
  CHECK(checked >= 40);
}

TEST_CASE("general program for the example3 fixture has seven parseable blocks") {
  const std::string dir = MDCLEAN_FIXTURES "/example3/";
  ProblemPaths paths;
  paths.schema = dir + "schema.txt";
  paths.instance = dir + "data";
  paths.mds = dir + "mds.md";
  paths.sim = dir + "sim.txt";
  paths.mf = dir + "mf.txt";
  Problem p = load_problem(paths);
  AspProgram asp = emit_general_asp(p.mds, p.instance, p.sim, p.mf);
  REQUIRE(asp.blocks.size() == 7);
  for (int n = 1; n <= 7; ++n) {
    CAPTURE(n);
    CHECK(asp.block(n).number == n);
  }
  std::vector<datalog::Rule> rules = datalog::parse_rules(asp.text());
  std::size_t total = 0;
  for (const AspBlock &b : asp.blocks) total += b.rules.size();
  CHECK(rules.size() == total);
  bool disjunctive = false;
  for (const datalog::Rule &r : rules) disjunctive |= r.head.size() > 1;
  CHECK(disjunctive);
  CHECK(asp.text().find(clean_predicate("Author")) != std::string::npos);
}

}  // namespace
}  // namespace mdclean
