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

#ifndef MDCLEAN_MD_H_
#define MDCLEAN_MD_H_

#include <array>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mdclean/matching.h"
#include "mdclean/schema.h"

namespace mdclean {

struct SourcePos {
  int line = 0;
  int column = 0;
};

// R(t; x1, ..., xn): a database atom of an MD body.
struct MdAtom {
  std::string relation;
  std::string tid_var;
  std::vector<std::string> vars;
  bool leading = false;
  SourcePos pos;
};

// x ~D~ y. `domain` is empty when the source left it implicit.
struct SimilarityConstraint {
  std::string left;
  std::string right;
  std::string domain;
  SourcePos pos;
};

// Where a variable occurs: atom index and attribute position.
struct VarOccurrence {
  std::size_t atom;
  std::size_t position;
};

// A (relational) matching dependency:
//   leading atoms + context atoms + similarities -> rhs_left := rhs_right.
// Variables repeated across attribute positions are implicit equality joins.
struct Md {
  std::string name;
  std::vector<MdAtom> atoms;
  std::vector<SimilarityConstraint> similarities;
  // rhs_left occurs in atoms[leading[0]], rhs_right in atoms[leading[1]].
  std::string rhs_left;
  std::string rhs_right;
  std::array<std::size_t, 2> leading{0, 1};
  std::string source;
  SourcePos pos;

  // Filled in by bind_mds().
  bool bound = false;
  std::array<std::size_t, 2> rhs_position{0, 0};
  std::string rhs_domain;
  std::map<std::string, std::string> var_domain;
  std::map<std::string, std::vector<VarOccurrence>> occurrences;
  // refs[atom][position] is the attribute at that slot.
  std::vector<std::vector<AttributeRef>> refs;

  const MdAtom &leading_atom(int side) const { return atoms.at(leading.at(side)); }
  // Similarity domain after binding (explicit or inferred).
  const std::string &domain_of(const SimilarityConstraint &s) const {
    return var_domain.at(s.left);
  }
};

// Syntactic equality, ignoring source positions and binding data.
bool same_syntax(const Md &a, const Md &b);

class MdSet {
 public:
  // Throws ValidationError on a duplicate name.
  void add(Md md);

  const std::vector<Md> &mds() const { return mds_; }
  std::vector<Md> &mutable_mds() { return mds_; }
  const Md *find(const std::string &name) const;
  std::size_t size() const { return mds_.size(); }
  bool empty() const { return mds_.empty(); }

  auto begin() const { return mds_.begin(); }
  auto end() const { return mds_.end(); }

 private:
  std::vector<Md> mds_;
  std::map<std::string, std::size_t> index_;
};

// Parses MD text:
//
//   md NAME: [lead] R(t; x, y), ..., x ~ y, x ~DOM~ y, ... -> y1 := y2;
//
// and checks the schema-independent invariants (two leading atoms, RHS
// variables drawn one from each leading atom, ...). Throws ParseError or
// ValidationError.
MdSet parse_mds(std::string_view text, std::string_view source = "<mds>");

// Pretty-printer; parse_mds(print_mds(s)) is syntactically equal to s.
std::string print_mds(const MdSet &mds);
std::string print_md(const Md &md);

// Resolves every MD against the schema: relations, arities, variable domains,
// similarity domains and RHS attribute positions. Throws ValidationError or
// UnknownRelation.
void bind_mds(MdSet &mds, const Schema &schema);

// Rejects MDs whose RHS domain has no matching function.
void check_rhs_matchers(const MdSet &mds, const MatchingFunction &mf);

// Attributes read by the LHS: explicit similarities and implicit equalities.
std::set<AttributeRef> alhs(const Md &md);
// Attributes written by the RHS identity.
std::set<AttributeRef> arhs(const Md &md);

}  // namespace mdclean

#endif  // MDCLEAN_MD_H_
