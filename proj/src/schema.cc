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

#include "mdclean/schema.h"

#include <cctype>
#include <string_view>

#include "mdclean/error.h"

namespace mdclean {

Relation::Relation(std::string name, std::vector<Attribute> attributes)
    : name_(std::move(name)), attributes_(std::move(attributes)) {
  std::set<std::string> seen;
  for (const Attribute &a : attributes_) {
    if (a.name.empty()) {
      throw ValidationError("relation " + name_ + ": empty attribute name");
    }
    if (a.domain.empty()) {
      throw ValidationError("relation " + name_ + ": attribute " + a.name +
                            " has no domain");
    }
    if (!seen.insert(a.name).second) {
      throw ValidationError("relation " + name_ + ": duplicate attribute " +
                            a.name);
    }
  }
}

std::optional<std::size_t> Relation::position_of(
    const std::string &attribute) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == attribute) return i;
  }
  return std::nullopt;
}

void Schema::add_relation(Relation relation) {
  if (find(relation.name()) != nullptr) {
    throw ValidationError("duplicate relation " + relation.name());
  }
  relations_.push_back(std::move(relation));
}

const Relation *Schema::find(const std::string &name) const {
  for (const Relation &r : relations_) {
    if (r.name() == name) return &r;
  }
  return nullptr;
}

const Relation &Schema::at(const std::string &name) const {
  const Relation *r = find(name);
  if (r == nullptr) throw UnknownRelation("unknown relation " + name);
  return *r;
}

std::set<std::string> Schema::domains() const {
  std::set<std::string> result;
  for (const Relation &r : relations_) {
    for (const Attribute &a : r.attributes()) result.insert(a.domain);
  }
  return result;
}

bool Schema::has_domain(const std::string &domain) const {
  for (const Relation &r : relations_) {
    for (const Attribute &a : r.attributes()) {
      if (a.domain == domain) return true;
    }
  }
  return false;
}

bool NaturalLess::operator()(const std::string &a, const std::string &b) const {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i]));
    const bool db = std::isdigit(static_cast<unsigned char>(b[j]));
    if (da && db) {
      std::size_t ei = i, ej = j;
      while (ei < a.size() && std::isdigit(static_cast<unsigned char>(a[ei]))) ++ei;
      while (ej < b.size() && std::isdigit(static_cast<unsigned char>(b[ej]))) ++ej;
      std::string_view na(a.data() + i, ei - i), nb(b.data() + j, ej - j);
      while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ei;
      j = ej;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
  // Equal under natural order ("t01" vs "t1"); fall back to plain order.
  return a < b;
}

}  // namespace mdclean
