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

#ifndef MDCLEAN_CLASSIFY_H_
#define MDCLEAN_CLASSIFY_H_

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "mdclean/instance.h"
#include "mdclean/matching.h"
#include "mdclean/md.h"
#include "mdclean/query.h"
#include "mdclean/similarity.h"

namespace mdclean {

enum class Verdict { kNonInteracting, kSimilarityPreserving, kSfai, kGeneral };

const char *to_string(Verdict verdict);

// md1 writes `attribute`, md2 reads it.
struct InteractionPair {
  std::string md1;
  std::string md2;
  AttributeRef attribute;

  auto operator<=>(const InteractionPair &) const = default;
};

// Ordered pairs of bound MDs (an MD with itself included), one entry per
// shared attribute, in declaration order.
std::vector<InteractionPair> interaction_pairs(const MdSet &mds);

// a ~ a1 holds but a is not similar to m(a1, a2).
struct PreservationViolation {
  std::string domain;
  Value a;
  Value a1;
  Value a2;
  Value merged;
};

struct PreservationCheck {
  bool preserving = true;
  // Every violation found; pairs of distinct similar values come first.
  std::vector<PreservationViolation> violations;
};

// Checks a ~ a1 => a ~ m(a1, a2) over the active values of every RHS domain.
PreservationCheck check_similarity_preservation(const MdSet &mds,
                                                const SimilarityRelation &sim,
                                                const MatchingFunction &mf,
                                                const ActiveValues &active);

bool is_similarity_preserving(const MdSet &mds, const SimilarityRelation &sim,
                              const MatchingFunction &mf,
                              const ActiveValues &active);

// Values of the instance plus those mentioned by the matching and similarity
// tables, per domain.
ActiveValues collect_active_values(const Instance &instance,
                                   const SimilarityRelation &sim,
                                   const MatchingFunction &mf);

struct SfaiQuery {
  std::string name;
  InteractionPair pair;
  // Boolean query; tuple identifiers of one relation are pairwise distinct.
  ConjunctiveQuery query;
};

// One Boolean query per interaction pair and choice of atoms to overlap,
// deduplicated up to variable renaming.
std::vector<SfaiQuery> sfai_queries(const MdSet &mds);

struct QueryOutcome {
  std::string name;
  bool satisfied = false;
  std::optional<Binding> witness;
};

struct SfaiCheck {
  bool sfai = true;
  std::vector<QueryOutcome> outcomes;
};

SfaiCheck check_sfai(const MdSet &mds, const Instance &instance,
                     const SimilarityRelation &sim);

bool is_sfai(const MdSet &mds, const Instance &instance,
             const SimilarityRelation &sim);

struct Classification {
  Verdict verdict = Verdict::kGeneral;
  std::vector<InteractionPair> pairs;
  // Set when interaction pairs exist.
  std::optional<PreservationCheck> preservation;
  std::vector<QueryOutcome> queries;
};

// First of NonInteracting, SimilarityPreserving, SFAI that holds, else
// General. `mf` must be saturated.
Classification classify(const MdSet &mds, const Instance &instance,
                        const SimilarityRelation &sim,
                        const MatchingFunction &mf);

}  // namespace mdclean

#endif  // MDCLEAN_CLASSIFY_H_
