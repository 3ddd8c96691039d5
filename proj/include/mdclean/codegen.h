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

#ifndef MDCLEAN_CODEGEN_H_
#define MDCLEAN_CODEGEN_H_

#include <string>
#include <vector>

#include "mdclean/classify.h"
#include "mdclean/datalog.h"
#include "mdclean/instance.h"
#include "mdclean/matching.h"
#include "mdclean/md.h"
#include "mdclean/similarity.h"

namespace mdclean {

struct AspBlock {
  int number = 0;
  std::string title;
  std::vector<datalog::Rule> rules;
};

// The disjunctive cleaning program, blocks 1 to 7.
struct AspProgram {
  std::vector<AspBlock> blocks;

  const AspBlock &block(int number) const;
  // Solver-ready text; `%` comments label the blocks.
  std::string text() const;
};

// Lower-case predicate names used by the generated programs.
std::string relation_predicate(const std::string &relation);
std::string clean_predicate(const std::string &relation);
std::string version_predicate(const std::string &relation);
std::string old_version_predicate(const std::string &relation);
std::string match_predicate(const std::string &md);
std::string not_match_predicate(const std::string &md);
std::string mf_predicate(const std::string &domain);
std::string sim_predicate(const std::string &domain);

// Upper bound on the number of values materialized for a built-in matching
// function or similarity in block 1.
inline constexpr std::size_t kMaxMaterializedValues = 256;

// `mf` must be saturated and the MDs bound.
AspProgram emit_general_asp(const MdSet &mds, const Instance &instance,
                            const SimilarityRelation &sim,
                            const MatchingFunction &mf);

// Stratified program whose clean_predicate(R) relations hold the single clean
// instance. Throws NotSci for a General classification.
datalog::Program emit_residual_datalog(const MdSet &mds,
                                       const Instance &instance,
                                       const SimilarityRelation &sim,
                                       const MatchingFunction &mf,
                                       const Classification &classification);

// Rows (tid, values...) of one relation of an instance.
datalog::Relation instance_rows(const Instance &instance,
                                const std::string &relation);

}  // namespace mdclean

#endif  // MDCLEAN_CODEGEN_H_
