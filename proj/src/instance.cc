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

#include "mdclean/instance.h"

#include "mdclean/error.h"

namespace mdclean {

namespace {

const TupleMap &EmptyTupleMap() {
  static const TupleMap kEmpty;
  return kEmpty;
}

void AppendField(std::string &out, const std::string &field) {
  out += std::to_string(field.size());
  out += ':';
  out += field;
}

}  // namespace

Instance::Instance(std::shared_ptr<const Schema> schema)
    : schema_(std::move(schema)) {
  if (!schema_) throw ValidationError("instance requires a schema");
}

void Instance::insert(const std::string &relation, const Tid &tid,
                      Tuple values) {
  const Relation &rel = schema_->at(relation);
  if (values.size() != rel.arity()) {
    throw ValidationError("tuple " + tid + " of " + relation + " has " +
                          std::to_string(values.size()) + " values, expected " +
                          std::to_string(rel.arity()));
  }
  if (tid.empty()) throw ValidationError("empty tuple identifier in " + relation);
  if (!owner_.emplace(tid, relation).second) {
    throw ValidationError("tuple identifier " + tid +
                          " is not unique across the instance");
  }
  history_[tid].insert(values);
  relations_[relation].emplace(tid, std::move(values));
}

void Instance::update(const Tid &tid, Tuple values) {
  const std::string &relation = relation_of(tid);
  Tuple &current = relations_.at(relation).at(tid);
  if (values.size() != current.size()) {
    throw ValidationError("arity mismatch updating " + tid);
  }
  history_[tid].insert(values);
  current = std::move(values);
}

const TupleMap &Instance::tuples(const std::string &relation) const {
  auto it = relations_.find(relation);
  return it == relations_.end() ? EmptyTupleMap() : it->second;
}

const Tuple &Instance::at(const Tid &tid) const {
  return relations_.at(relation_of(tid)).at(tid);
}

const std::string &Instance::relation_of(const Tid &tid) const {
  auto it = owner_.find(tid);
  if (it == owner_.end()) {
    throw ValidationError("unknown tuple identifier " + tid);
  }
  return it->second;
}

const std::set<Tuple> &Instance::versions(const Tid &tid) const {
  auto it = history_.find(tid);
  if (it == history_.end()) {
    throw ValidationError("unknown tuple identifier " + tid);
  }
  return it->second;
}

std::map<std::string, std::set<Value>> Instance::active_values() const {
  std::map<std::string, std::set<Value>> result;
  for (const auto &[name, tuples] : relations_) {
    const Relation &rel = schema_->at(name);
    for (const auto &[tid, values] : tuples) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        result[rel.domain_at(i)].insert(values[i]);
      }
    }
  }
  return result;
}

std::string Instance::canonical_key() const {
  std::string key;
  for (const auto &[name, tuples] : relations_) {
    if (tuples.empty()) continue;
    AppendField(key, name);
    for (const auto &[tid, values] : tuples) {
      AppendField(key, tid);
      for (const Value &v : values) AppendField(key, v);
      key += ';';
    }
    key += '\n';
  }
  return key;
}

bool Instance::operator==(const Instance &other) const {
  return canonical_key() == other.canonical_key();
}

}  // namespace mdclean
