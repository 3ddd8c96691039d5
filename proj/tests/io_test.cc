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

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include "doctest.h"
#include "mdclean/error.h"
#include "mdclean/io.h"
#include "mdclean/matching.h"

namespace mdclean {
namespace {

namespace fs = std::filesystem;

// A scratch directory removed when the test ends.
class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("mdclean_io_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  fs::path write(const std::string &name, const std::string &text) const {
    fs::path p = path_ / name;
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }
  const fs::path &path() const { return path_; }

 private:
  fs::path path_;
};

TEST_CASE("schema text") {
  Schema s = parse_schema("# comment\nAuthor(Name, PTitle:Title)\nPaper(PTitle:Title, Venue)\n");
  REQUIRE(s.relations().size() == 2);
  const Relation &a = s.at("Author");
  CHECK(a.arity() == 2);
  CHECK(a.position_of("PTitle") == 1);
  CHECK(a.attributes()[1].domain == "Title");
  CHECK(a.attributes()[0].domain == "Name");
  CHECK(s.has_domain("Title"));
  CHECK_THROWS_AS(parse_schema("R(A, A)"), ParseError);
  CHECK_THROWS_AS(parse_schema("R(A\n"), ParseError);
  CHECK_THROWS_AS(parse_schema("R(A)\nR(B)"), ParseError);
}

TEST_CASE("similarity text") {
  SimilarityRelation sim = parse_similarity(
      "A: a1 ~ a2\nA: \"x y\" ~ z\nN: builtin token-overlap\n");
  CHECK(sim.similar("A", "a1", "a2"));
  CHECK(sim.similar("A", "a2", "a1"));
  CHECK(sim.similar("A", "a1", "a1"));
  CHECK(sim.similar("A", "x y", "z"));
  CHECK_FALSE(sim.similar("A", "a1", "z"));
  CHECK(sim.similar("N", "john doe", "j doe"));
  CHECK_FALSE(sim.similar("N", "john", "mary"));
  CHECK_THROWS_AS(parse_similarity("A a1 ~ a2"), ParseError);
}

TEST_CASE("matching text") {
  MatchingFunction raw = parse_matching("B: m(b1, b2) = b12\nA: builtin token-union\n");
  CHECK_THROWS(raw.try_match("B", "b1", "b2"));
  MatchingFunction mf = saturate_mf(raw, {});
  CHECK(mf.try_match("B", "b2", "b1") == "b12");
  CHECK(mf.try_match("B", "b1", "b1") == "b1");
  CHECK_FALSE(mf.try_match("B", "b1", "b3"));
  CHECK(mf.try_match("A", "x y", "y z") == "x y z");
  CHECK_THROWS_AS(parse_matching("B: m(b1) = b12"), ParseError);
}

TEST_CASE("instance JSON") {
  auto schema = std::make_shared<const Schema>(parse_schema("R(A, B)"));
  Instance d = parse_instance_json(
      R"({"R": [{"tid": "t2", "A": "a2", "B": "b2"}, {"tid": "t1", "A": "a1", "B": "b1"}]})",
      "<json>", schema);
  CHECK(d.size() == 2);
  CHECK(d.at("t1") == Tuple{"a1", "b1"});
  nlohmann::ordered_json j = instance_to_json(d);
  CHECK(j["R"][0]["tid"] == "t1");
  CHECK(parse_instance_json(j.dump(), "<round>", schema) == d);
  CHECK_THROWS_AS(parse_instance_json(R"({"R": [{"tid": "t1", "A": "a1"}]})", "<j>", schema),
                  ValidationError);
  CHECK_THROWS_AS(parse_instance_json(R"({"R": [{"A": "a1", "B": "b"}]})", "<j>", schema),
                  ValidationError);
  CHECK_THROWS_AS(parse_instance_json(R"({"S": []})", "<j>", schema), Error);
  CHECK_THROWS_AS(parse_instance_json(R"({"R": [)", "<j>", schema), ParseError);
  Schema inferred = infer_schema_json(R"({"R": [{"tid": "t1", "A": "a1", "B": "b1"}]})", "<j>");
  CHECK(inferred.at("R").arity() == 2);
}

TEST_CASE("instance CSV") {
  TempDir dir;
  auto schema = std::make_shared<const Schema>(parse_schema("R(A, B)"));
  fs::path ok = dir.write("R.csv", "tid,A,B\nt1,\"x, y\",\"say \"\"hi\"\"\"\nt2,a,b\n");
  Instance d = load_instance_csv(ok, schema);
  CHECK(d.at("t1") == Tuple{"x, y", "say \"hi\""});
  CHECK(d.at("t2") == Tuple{"a", "b"});
  CHECK(infer_schema_csv(ok).at("R").arity() == 2);

  CHECK_THROWS_AS(load_instance_csv(dir.write("bad1/R.csv", "A,tid,B\n"), schema),
                  ValidationError);
  CHECK_THROWS_AS(load_instance_csv(dir.write("bad2/R.csv", "tid,A,C\n"), schema),
                  ValidationError);
  CHECK_THROWS_AS(load_instance_csv(dir.write("bad3/R.csv", "tid,A,B\nt1,a\n"), schema),
                  ValidationError);
  CHECK_THROWS_AS(load_instance_csv(dir.write("bad4/R.csv", "tid,A,B\nt1,\"a,b\n"), schema),
                  ParseError);
  CHECK_THROWS_AS(load_instance_csv(dir.path() / "missing.csv", schema), IoError);
}

TEST_CASE("problem loading") {
  const std::string dir = MDCLEAN_FIXTURES "/example2/";
  ProblemPaths paths;
  paths.schema = dir + "schema.txt";
  paths.instance = dir + "instance.json";
  paths.mds = dir + "mds.md";
  paths.sim = dir + "sim.txt";
  paths.mf = dir + "mf.txt";
  Problem p = load_problem(paths);
  CHECK(p.instance.size() == 3);
  CHECK(p.mds.size() == 2);
  CHECK(p.mds.mds()[0].bound);
  // The matching function arrives saturated.
  CHECK(p.mf.try_match("B", "b12", "b3"));

  ProblemPaths no_mds = paths;
  no_mds.mds.reset();
  CHECK_THROWS_AS(load_problem(no_mds), ValidationError);

  ProblemPaths missing = paths;
  missing.sim = dir + "does-not-exist.txt";
  CHECK_THROWS_AS(load_problem(missing), IoError);

  TempDir tmp;
  ProblemPaths bad = paths;
  bad.mf = tmp.write("mf.txt", "B: m(b1, b2) = b12\nB: m(b1, b2) = b3\n");
  try {
    load_problem(bad);
    FAIL("expected a semilattice violation");
  } catch (const Error &e) {
    CHECK(e.code() == "SemilatticeViolation");
    CHECK(std::string(e.what()).find("mf.txt") != std::string::npos);
  }
}

}  // namespace
}  // namespace mdclean
