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

#ifndef MDCLEAN_IO_H_
#define MDCLEAN_IO_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "mdclean/instance.h"
#include "mdclean/matching.h"
#include "mdclean/md.h"
#include "mdclean/schema.h"
#include "mdclean/similarity.h"

namespace mdclean {

// Whole file as text. Throws IoError.
std::string read_file(const std::filesystem::path &path);

// One relation per line, `R(A, B:Dom, ...)`; an attribute without `:Dom`
// uses its own name as domain. `#` starts a comment.
Schema parse_schema(std::string_view text, std::string_view source = "<schema>");

// Lines `DOM: v1 ~ v2` or `DOM: builtin token-overlap|equality`.
SimilarityRelation parse_similarity(std::string_view text,
                                    std::string_view source = "<sim>");

// Lines `DOM: m(v1, v2) = v3` or `DOM: builtin token-union|value-min|value-max`.
MatchingFunction parse_matching(std::string_view text,
                                std::string_view source = "<mf>");

// JSON `{"R": [{"tid": "t1", "A": "a1", ...}, ...], ...}`. Without a schema
// one is inferred from the first object of every relation.
Instance parse_instance_json(std::string_view text, std::string_view source,
                             std::shared_ptr<const Schema> schema);
Schema infer_schema_json(std::string_view text, std::string_view source);

// CSV with a header row whose first column is `tid`; the relation is named
// after the file stem. `path` may be one file or a directory of .csv files.
Instance load_instance_csv(const std::filesystem::path &path,
                           std::shared_ptr<const Schema> schema);
Schema infer_schema_csv(const std::filesystem::path &path);

// Canonical JSON of the current values, tuples in natural identifier order.
nlohmann::ordered_json instance_to_json(const Instance &instance);

struct ProblemPaths {
  std::optional<std::filesystem::path> schema;
  std::optional<std::filesystem::path> instance;
  std::optional<std::filesystem::path> mds;
  std::optional<std::filesystem::path> sim;
  std::optional<std::filesystem::path> mf;
};

// A loaded and checked problem: MDs bound to the schema, every schema domain
// registered with the similarity relation, values of token-union domains in
// canonical form, and the matching function saturated.
struct Problem {
  std::shared_ptr<const Schema> schema;
  Instance instance;
  MdSet mds;
  SimilarityRelation sim;
  MatchingFunction mf;
};

// Builds a Problem from parts already in memory.
Problem prepare_problem(Instance instance, MdSet mds, SimilarityRelation sim,
                        const MatchingFunction &mf);

// Loads every given file; errors name the offending file.
Problem load_problem(const ProblemPaths &paths);

}  // namespace mdclean

#endif  // MDCLEAN_IO_H_
