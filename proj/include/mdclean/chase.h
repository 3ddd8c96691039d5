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

#ifndef MDCLEAN_CHASE_H_
#define MDCLEAN_CHASE_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdclean/instance.h"
#include "mdclean/matching.h"
#include "mdclean/md.h"
#include "mdclean/similarity.h"

namespace mdclean {

// One attribute slot overwritten by an enforcement.
struct Write {
  Tid tid;
  std::size_t position = 0;
  Value old_value;
};

// Applying one MD to one pair of tuples: both RHS slots get m(old1, old2).
struct EnforcementStep {
  std::string md;
  std::size_t md_index = 0;
  std::string domain;
  // Tuple identifier variable -> tuple identifier, context atoms included.
  std::vector<std::pair<std::string, Tid>> assignment;
  std::array<Write, 2> writes;
  // m(old1, old2), or empty when the matching function is undefined there.
  std::optional<Value> new_value;

  std::string describe() const;
};

struct ChaseOptions {
  // Upper bound on the length of one chase sequence.
  std::size_t step_limit = 100000;
  // chase_all refuses instances with more tuples than this.
  std::size_t max_exhaustive_tuples = 12;
  // Explore applicable steps in reverse order (for order-independence checks).
  bool reverse_exploration = false;
};

struct CleanInstance {
  Instance instance;
  // One chase sequence reaching `instance` from the initial instance.
  std::vector<EnforcementStep> witness;
};

// C(D0, Σ): distinct stable instances, sorted by canonical key.
struct CleanInstanceSet {
  std::vector<CleanInstance> members;
  std::size_t states_explored = 0;

  std::size_t size() const { return members.size(); }
};

// Every way to enforce an MD on the current instance, one step per distinct
// effect, ordered by MD then by tuple identifiers.
std::vector<EnforcementStep> applicable_steps(const Instance &instance,
                                              const MdSet &mds,
                                              const SimilarityRelation &sim,
                                              const MatchingFunction &mf);

// Throws PreconditionViolation if `step` does not apply to `instance`, and
// UndefinedMatch if the matching function has no result for it.
Instance enforce(const Instance &instance, const EnforcementStep &step);

bool is_stable(const Instance &instance, const MdSet &mds,
               const SimilarityRelation &sim, const MatchingFunction &mf);

// Exhaustive search over all chase sequences, memoized on current values.
CleanInstanceSet chase_all(const Instance &initial, const MdSet &mds,
                           const SimilarityRelation &sim,
                           const MatchingFunction &mf,
                           const ChaseOptions &options = {});

// Priorities used by chase_one to pick among applicable steps.
struct ChaseOrder {
  // md_rank[i] is the priority of the i-th MD (lower goes first).
  std::vector<std::size_t> md_rank;
  // Optional tuple identifier permutation; natural order when empty.
  std::map<Tid, std::size_t> tid_rank;

  // Seed 0 keeps declaration and natural tuple order; other seeds shuffle
  // both deterministically.
  static ChaseOrder from_seed(std::uint64_t seed, const MdSet &mds,
                              const Instance &instance);
  // Puts the named MDs first, in the given order.
  static ChaseOrder prefer(const std::vector<std::string> &md_names,
                           const MdSet &mds);
};

// A single chase sequence taking the least applicable step under `order`.
CleanInstance chase_one(const Instance &initial, const MdSet &mds,
                        const SimilarityRelation &sim,
                        const MatchingFunction &mf, const ChaseOrder &order,
                        const ChaseOptions &options = {});

}  // namespace mdclean

#endif  // MDCLEAN_CHASE_H_
