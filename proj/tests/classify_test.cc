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

#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "mdclean/classify.h"
#include "mdclean/query.h"
#include "support/problems.h"
#include "support/random_cases.h"

namespace mdclean {
namespace {

// Every way to satisfy the LHS of `md` in `instance`, by brute force over
// tuple choices; returns the tuple identifier of each atom.
std::vector<std::vector<Tid>> Applications(const Md &md, const Instance &instance,
                                           const SimilarityRelation &sim) {
  std::vector<std::vector<Tid>> out;
  std::vector<Tid> chosen(md.atoms.size());
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == md.atoms.size()) {
      std::map<std::string, Value> env;
      for (std::size_t i = 0; i < md.atoms.size(); ++i) {
        const Tuple &t = instance.at(chosen[i]);
        for (std::size_t p = 0; p < t.size(); ++p) {
          auto [it, fresh] = env.emplace(md.atoms[i].vars[p], t[p]);
          if (!fresh && it->second != t[p]) return;
        }
      }
      for (const SimilarityConstraint &s : md.similarities) {
        if (!sim.similar(md.domain_of(s), env[s.left], env[s.right])) return;
      }
      if (chosen[md.leading[0]] == chosen[md.leading[1]]) return;
      out.push_back(chosen);
      return;
    }
    for (const auto &[tid, _] : instance.tuples(md.atoms[k].relation)) {
      chosen[k] = tid;
      go(k + 1);
    }
  };
  go(0);
  return out;
}

// Atoms of `md` that compare `attr`, through a similarity or a join.
std::set<std::size_t> Readers(const Md &md, const AttributeRef &attr) {
  std::set<std::string> compared;
  for (const SimilarityConstraint &s : md.similarities) compared.insert({s.left, s.right});
  std::map<std::string, int> uses;
  for (const MdAtom &a : md.atoms) {
    for (const std::string &v : a.vars) ++uses[v];
  }
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < md.atoms.size(); ++i) {
    for (std::size_t p = 0; p < md.atoms[i].vars.size(); ++p) {
      const std::string &v = md.atoms[i].vars[p];
      if (md.refs[i][p] == attr && (compared.count(v) || uses[v] > 1)) out.insert(i);
    }
  }
  return out;
}

// Two applications overlap on a tuple one writes and the other reads.
// Applying one MD to the same pair of tuples twice counts once.
bool OracleSfai(const MdSet &mds, const Instance &instance, const SimilarityRelation &sim) {
  for (const Md &m1 : mds) {
    for (const Md &m2 : mds) {
      std::set<AttributeRef> written = arhs(m1);
      for (const AttributeRef &attr : alhs(m2)) {
        if (!written.count(attr)) continue;
        std::set<std::size_t> readers = Readers(m2, attr);
        for (const auto &a1 : Applications(m1, instance, sim)) {
          for (const auto &a2 : Applications(m2, instance, sim)) {
            for (int side = 0; side < 2; ++side) {
              std::size_t w = m1.leading[side];
              if (m1.refs[w][m1.rhs_position[side]] != attr) continue;
              for (std::size_t r : readers) {
                if (a1[w] != a2[r]) continue;
                bool r_leading = r == m2.leading[0] || r == m2.leading[1];
                if (m1.name == m2.name && r_leading) {
                  const Tid &o1 = a1[m1.leading[1 - side]];
                  const Tid &o2 = a2[r == m2.leading[0] ? m2.leading[1] : m2.leading[0]];
                  if (o1 == o2) continue;
                }
                return false;
              }
            }
          }
        }
      }
    }
  }
  return true;
}

// Direct reading of similarity preservation on the active values, with
// joins on written attributes read as equality.
bool OraclePreserving(const MdSet &mds, const SimilarityRelation &sim,
                      const MatchingFunction &mf, const ActiveValues &active) {
  std::set<AttributeRef> written;
  for (const Md &md : mds) {
    for (const AttributeRef &a : arhs(md)) written.insert(a);
  }
  std::set<std::string> joined;
  for (const Md &md : mds) {
    std::map<std::string, int> uses;
    for (const MdAtom &a : md.atoms) {
      for (const std::string &v : a.vars) ++uses[v];
    }
    for (std::size_t i = 0; i < md.atoms.size(); ++i) {
      for (std::size_t p = 0; p < md.atoms[i].vars.size(); ++p) {
        if (uses[md.atoms[i].vars[p]] > 1 && written.count(md.refs[i][p])) {
          joined.insert(md.var_domain.at(md.atoms[i].vars[p]));
        }
      }
    }
  }
  for (const Md &md : mds) {
    const std::string &d = md.rhs_domain;
    if (!active.count(d)) continue;
    const auto &vals = active.at(d);
    for (const Value &a : vals) {
      for (const Value &a1 : vals) {
        bool related = sim.similar(d, a, a1) || a == a1;
        bool equal = a == a1;
        for (const Value &a2 : vals) {
          auto m = mf.try_match(d, a1, a2);
          if (!m) continue;
          if (related && !sim.similar(d, a, *m) && a != *m) return false;
          if (equal && joined.count(d) && *m != a) return false;
        }
      }
    }
  }
  return true;
}

TEST_CASE("running examples") {
  SUBCASE("example 2 is General with a preservation counterexample") {
    Problem p = testing::example2();
    Classification c = classify(p.mds, p.instance, p.sim, p.mf);
    CHECK(c.verdict == Verdict::kGeneral);
    REQUIRE(c.preservation.has_value());
    bool found = false;
    for (const PreservationViolation &v : c.preservation->violations) {
      found = found || (v.a == "b3" && v.a1 == "b2" && v.a2 == "b1" && v.merged == "b12");
    }
    CHECK(found);
    bool some_true = false;
    for (const QueryOutcome &q : c.queries) some_true = some_true || q.satisfied;
    CHECK(some_true);
  }
  SUBCASE("example 4 is SFAI") {
    Problem p = testing::example4();
    Classification c = classify(p.mds, p.instance, p.sim, p.mf);
    CHECK(c.verdict == Verdict::kSfai);
    CHECK(c.queries.size() == 2);
    for (const QueryOutcome &q : c.queries) CHECK_FALSE(q.satisfied);
  }
  SUBCASE("example 4's queries mention three tuples each") {
    Problem p = testing::example4();
    for (const SfaiQuery &q : sfai_queries(p.mds)) CHECK(q.query.atoms.size() == 3);
  }
}

TEST_CASE("two MDs writing each other's inputs give two queries") {
  Problem p = testing::make_problem(
      "R(A, B)", R"({"R": [{"tid": "t1", "A": "a", "B": "b"}]})",
      "md f: R(t1; x1, y1), R(t2; x2, y2), y1 ~ y2 -> x1 := x2;\n"
      "md g: R(t1; x1, y1), R(t2; x2, y2), x1 ~ x2 -> y1 := y2;\n",
      "", "A: builtin token-union\nB: builtin token-union\n");
  auto pairs = interaction_pairs(p.mds);
  CHECK(pairs.size() == 2);
  CHECK(sfai_queries(p.mds).size() == 2);
}

TEST_CASE("non-interacting sets") {
  Problem p = testing::make_problem(
      "R(A, B)", R"({"R": [{"tid": "t1", "A": "a", "B": "b"}, {"tid": "t2", "A": "a", "B": "c"}]})",
      "md f: R(t1; x1, y1), R(t2; x2, y2), x1 ~ x2 -> y1 := y2;\n", "",
      "B: builtin token-union\n");
  Classification c = classify(p.mds, p.instance, p.sim, p.mf);
  CHECK(c.verdict == Verdict::kNonInteracting);
  CHECK(c.pairs.empty());
  CHECK(is_sfai(p.mds, p.instance, p.sim));
}

TEST_CASE("a join on a written attribute is not similarity preserving") {
  Problem p = testing::make_problem(
      "R(A, B)\nS(B)",
      R"({"R": [{"tid": "r1", "A": "a", "B": "x"}, {"tid": "r2", "A": "a", "B": "y"}],
          "S": [{"tid": "s1", "B": "x"}]})",
      "md f: lead R(t1; x1, y1), S(t3; y1), lead R(t2; x2, y2), x1 ~ x2 -> y1 := y2;\n",
      "B: builtin token-overlap\n", "B: builtin token-union\n");
  Classification c = classify(p.mds, p.instance, p.sim, p.mf);
  REQUIRE(c.preservation.has_value());
  CHECK_FALSE(c.preservation->preserving);
}

TEST_CASE("classification agrees with brute-force oracles") {
  std::mt19937_64 rng(99);
  int general = 0, sfai_only = 0;
  for (int i = 0; i < 300; ++i) {
    testing::RandomCase rc = testing::random_case(rng);
    const Problem &p = rc.problem;
    CAPTURE(rc.mds_text);
    CHECK(is_sfai(p.mds, p.instance, p.sim) == OracleSfai(p.mds, p.instance, p.sim));
    ActiveValues active = collect_active_values(p.instance, p.sim, p.mf);
    CHECK(is_similarity_preserving(p.mds, p.sim, p.mf, active) ==
          OraclePreserving(p.mds, p.sim, p.mf, active));
    Classification c = classify(p.mds, p.instance, p.sim, p.mf);
    general += c.verdict == Verdict::kGeneral;
    sfai_only += c.verdict == Verdict::kSfai;
  }
  // The population exercises every verdict that needs the instance.
  CHECK(general > 0);
  CHECK(sfai_only > 0);
}

}  // namespace
}  // namespace mdclean
