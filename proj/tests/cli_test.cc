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
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "mdclean/cli.h"

namespace mdclean::cli {
namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result Run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int status = run(args, out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::string> Inputs(const std::string &example) {
  const std::string dir = MDCLEAN_FIXTURES "/" + example + "/";
  return {"--schema", dir + "schema.txt", "--instance", dir + "instance.json",
          "--mds",    dir + "mds.md",     "--sim",      dir + "sim.txt",
          "--mf",     dir + "mf.txt"};
}

std::vector<std::string> With(std::vector<std::string> head, const std::string &example) {
  for (std::string &a : Inputs(example)) head.push_back(std::move(a));
  return head;
}

TEST_CASE("help") {
  Result r = Run({"--help"});
  CHECK(r.status == kOk);
  CHECK(r.out.find("solve") != std::string::npos);
  CHECK(Run({}).status == kValidationFailure);
  CHECK(Run({"frobnicate"}).status == kValidationFailure);
}

TEST_CASE("solve the example4 fixture") {
  Result r = Run(With({"solve"}, "example4"));
  REQUIRE(r.status == kOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "SFAI");
  CHECK(j["clean"]["R"][0]["B"] == "b12");
  CHECK(j["clean"]["R"][3]["B"] == "b34");
}

TEST_CASE("classify and chase the example2 fixture") {
  Result c = Run(With({"classify"}, "example2"));
  REQUIRE(c.status == kOk);
  CHECK(nlohmann::json::parse(c.out)["verdict"] == "General");
  Result all = Run(With({"chase", "--format", "text"}, "example2"));
  REQUIRE(all.status == kOk);
  CHECK(all.out.find("# clean instance 2") != std::string::npos);
  CHECK(Run(With({"chase", "--all", "--one"}, "example2")).status == kValidationFailure);
  CHECK(Run(With({"emit-datalog"}, "example2")).status == kSemanticFailure);
  CHECK(Run(With({"emit-asp"}, "example2")).status == kOk);
}

TEST_CASE("answers") {
  const std::string q = MDCLEAN_FIXTURES "/example2/q_x.cq";
  Result r = Run(With({"answer", "--query", q, "--format", "text"}, "example2"));
  REQUIRE(r.status == kOk);
  CHECK(r.out == "a1\na2\na3\n");
}

TEST_CASE("failures map to exit codes") {
  namespace fs = std::filesystem;
  fs::path bad = fs::temp_directory_path() / "mdclean_cli_bad_mf.txt";
  std::ofstream(bad) << "B: m(b1, b2) = b12\nB: m(b1, b2) = b3\n";
  std::vector<std::string> args = With({"validate"}, "example2");
  args.back() = bad.string();
  Result r = Run(args);
  CHECK(r.status == kValidationFailure);
  CHECK(r.err.find("SemilatticeViolation") != std::string::npos);
  fs::remove(bad);

  args.back() = "/nonexistent/mf.txt";
  CHECK(Run(args).status == kIoFailure);
  CHECK(Run(With({"validate"}, "example2")).status == kOk);
}

TEST_CASE("output files") {
  namespace fs = std::filesystem;
  fs::path out = fs::temp_directory_path() / "mdclean_cli_out.json";
  Result r = Run(With({"solve", "--out", out.string()}, "example4"));
  REQUIRE(r.status == kOk);
  CHECK(r.out.empty());
  std::ifstream in(out);
  CHECK(nlohmann::json::parse(in)["verdict"] == "SFAI");
  fs::remove(out);
}

}  // namespace
}  // namespace mdclean::cli
