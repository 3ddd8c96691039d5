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

#include <set>
#include <string>

#include "doctest.h"
#include "mdclean/error.h"
#include "mdclean/io.h"
#include "mdclean/md.h"
#include "support/problems.h"

namespace mdclean {
namespace {

const char *kExample3 =
    "md phi:\n"
    "  lead Author(t1; x1, y1, bl1), Paper(t3; y1', z1, bl4),\n"
    "  lead Author(t2; x2, y2, bl2), Paper(t4; y2', z2, bl4),\n"
    "  y1 ~ y1', y2 ~ y2', x1 ~ x2, y1 ~ y2\n"
    "  -> bl1 := bl2;\n";

Schema Example3Schema() {
  return parse_schema(
      "Author(Name, PTitle:Title, ABlock:Block)\nPaper(PTitle:Title, Venue, PBlock:Block)\n");
}

TEST_CASE("classical syntax") {
  MdSet mds = parse_mds(testing::kExample2Mds);
  REQUIRE(mds.size() == 2);
  const Md &m = mds.mds()[0];
  CHECK(m.name == "phi1");
  CHECK(m.atoms.size() == 2);
  CHECK(m.leading == std::array<std::size_t, 2>{0, 1});
  CHECK(m.similarities.size() == 1);
  CHECK(m.similarities[0].domain == "A");
  CHECK(m.rhs_left == "y1");
  CHECK(m.rhs_right == "y2");
  CHECK(mds.find("phi2") != nullptr);
  CHECK(mds.find("phi3") == nullptr);
}

TEST_CASE("printing round-trips") {
  for (const char *text : {testing::kExample2Mds, kExample3}) {
    MdSet a = parse_mds(text);
    MdSet b = parse_mds(print_mds(a));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(same_syntax(a.mds()[i], b.mds()[i]));
    }
  }
}

TEST_CASE("binding the example3 fixture") {
  MdSet mds = parse_mds(kExample3);
  Schema schema = Example3Schema();
  bind_mds(mds, schema);
  const Md &m = mds.mds()[0];
  CHECK(m.bound);
  CHECK(m.leading == std::array<std::size_t, 2>{0, 2});
  CHECK(m.rhs_domain == "Block");
  CHECK(m.var_domain.at("y1'") == "Title");
  CHECK(m.occurrences.at("bl4").size() == 2);
  std::set<AttributeRef> want_lhs = {{"Author", "Name"}, {"Author", "PTitle"},
                                     {"Paper", "PTitle"}, {"Paper", "PBlock"}};
  CHECK(alhs(m) == want_lhs);
  CHECK(arhs(m) == std::set<AttributeRef>{{"Author", "ABlock"}});
}

TEST_CASE("syntax errors") {
  CHECK_THROWS_AS(parse_mds("mx phi: R(t1; x), R(t2; y), x ~ y -> x := y;"), ParseError);
  CHECK_THROWS_AS(parse_mds("md phi: R(t1 x), R(t2; y), x ~ y -> x := y;"), ParseError);
  CHECK_THROWS_AS(parse_mds(std::string(testing::kExample2Mds) +
                            "md phi1: R(t1; x), R(t2; y), x ~ y -> x := y;"),
                  ValidationError);
  // A tuple variable used twice.
  CHECK_THROWS_AS(parse_mds("md p: R(t1; x), R(t1; y), x ~ y -> x := y;"), ValidationError);
  // An RHS variable from a context atom.
  CHECK_THROWS_AS(
      parse_mds("md p: lead R(t1; x, a), S(t3; w), lead R(t2; y, b), x ~ y -> w := b;"),
      ValidationError);
}

TEST_CASE("binding errors") {
  Schema schema = parse_schema("R(A, B)\nS(C)\n");
  {
    MdSet mds = parse_mds("md p: T(t1; x), T(t2; y), x ~ y -> x := y;");
    CHECK_THROWS_AS(bind_mds(mds, schema), UnknownRelation);
  }
  {
    MdSet mds = parse_mds("md p: R(t1; x), R(t2; y), x ~ y -> x := y;");
    CHECK_THROWS_AS(bind_mds(mds, schema), ValidationError);
  }
  {
    // x and c live in different domains.
    MdSet mds = parse_mds(
        "md p: lead R(t1; x, y1), S(t3; c), lead R(t2; x2, y2), x ~ c -> y1 := y2;");
    CHECK_THROWS_AS(bind_mds(mds, schema), ValidationError);
  }
  {
    MdSet mds = parse_mds("md p: R(t1; x1, y1), R(t2; x2, y2), x1 ~B~ x2 -> y1 := y2;");
    CHECK_THROWS_AS(bind_mds(mds, schema), ValidationError);
  }
}

TEST_CASE("right-hand sides need matching functions") {
  MdSet mds = parse_mds(testing::kExample2Mds);
  CHECK_THROWS_AS(check_rhs_matchers(mds, MatchingFunction{}), PreconditionViolation);
  bind_mds(mds, parse_schema("R(A, B)"));
  CHECK_THROWS_AS(check_rhs_matchers(mds, parse_matching("A: m(a1, a2) = a12")),
                  ValidationError);
  CHECK_NOTHROW(check_rhs_matchers(mds, parse_matching(testing::kExample2Mf)));
}

}  // namespace
}  // namespace mdclean
