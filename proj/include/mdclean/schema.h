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

#ifndef MDCLEAN_SCHEMA_H_
#define MDCLEAN_SCHEMA_H_

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mdclean {

// Attribute values are opaque strings; only built-in similarity and matching
// rules look inside them.
using Value = std::string;
using Tid = std::string;
// Attribute values of one tuple, in schema order, without the identifier.
using Tuple = std::vector<Value>;

struct Attribute {
  std::string name;
  std::string domain;
};

// A relation R(T, A1, ..., An). The identifier column T is implicit and not
// listed in attributes().
class Relation {
 public:
  Relation(std::string name, std::vector<Attribute> attributes);

  const std::string &name() const { return name_; }
  const std::vector<Attribute> &attributes() const { return attributes_; }
  std::size_t arity() const { return attributes_.size(); }

  std::optional<std::size_t> position_of(const std::string &attribute) const;
  const std::string &domain_at(std::size_t position) const {
    return attributes_.at(position).domain;
  }

 private:
  std::string name_;
  std::vector<Attribute> attributes_;
};

// R[A]: an attribute qualified by its relation.
struct AttributeRef {
  std::string relation;
  std::string attribute;

  auto operator<=>(const AttributeRef &) const = default;
  std::string str() const { return relation + "[" + attribute + "]"; }
};

class Schema {
 public:
  Schema() = default;

  // Throws ValidationError on a duplicate relation name.
  void add_relation(Relation relation);

  const std::vector<Relation> &relations() const { return relations_; }
  const Relation *find(const std::string &name) const;
  // Throws UnknownRelation.
  const Relation &at(const std::string &name) const;

  std::set<std::string> domains() const;
  bool has_domain(const std::string &domain) const;

 private:
  std::vector<Relation> relations_;
};

// Orders tuple identifiers so that "t2" sorts before "t10".
struct NaturalLess {
  bool operator()(const std::string &a, const std::string &b) const;
};

}  // namespace mdclean

#endif  // MDCLEAN_SCHEMA_H_
