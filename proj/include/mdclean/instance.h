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

#ifndef MDCLEAN_INSTANCE_H_
#define MDCLEAN_INSTANCE_H_

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mdclean/schema.h"

namespace mdclean {

using TupleMap = std::map<Tid, Tuple, NaturalLess>;

// A database instance with identified tuples. Besides the current version of
// every tuple it keeps the set of all versions each identifier has held, which
// the chase appends to when it overwrites values.
class Instance {
 public:
  explicit Instance(std::shared_ptr<const Schema> schema);

  const Schema &schema() const { return *schema_; }
  const std::shared_ptr<const Schema> &schema_ptr() const { return schema_; }

  // Throws UnknownRelation, or ValidationError on arity mismatch or a tuple
  // identifier already used anywhere in the instance.
  void insert(const std::string &relation, const Tid &tid, Tuple values);

  // Replaces the current version of `tid`, recording the old one.
  void update(const Tid &tid, Tuple values);

  // Tuples of one relation; empty map for a relation without tuples.
  const TupleMap &tuples(const std::string &relation) const;
  const Tuple &at(const Tid &tid) const;
  const std::string &relation_of(const Tid &tid) const;
  bool contains(const Tid &tid) const { return owner_.count(tid) != 0; }

  std::size_t size() const { return owner_.size(); }
  bool empty() const { return owner_.empty(); }

  // Every version `tid` has held, the current one included.
  const std::set<Tuple> &versions(const Tid &tid) const;

  // Per domain, the set of values currently stored under attributes of that
  // domain.
  std::map<std::string, std::set<Value>> active_values() const;

  // Canonical text of the current values only; equal keys mean equal
  // instances up to version history.
  std::string canonical_key() const;

  // Compares current values only.
  bool operator==(const Instance &other) const;

 private:
  std::shared_ptr<const Schema> schema_;
  std::map<std::string, TupleMap> relations_;
  std::map<Tid, std::string> owner_;
  std::map<Tid, std::set<Tuple>> history_;
};

}  // namespace mdclean

#endif  // MDCLEAN_INSTANCE_H_
