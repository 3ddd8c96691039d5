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

#include "mdclean/matching.h"

#include <cstdlib>

#include "mdclean/error.h"
#include "mdclean/tokens.h"

namespace mdclean {

namespace {

std::optional<double> AsNumber(const Value &v) {
  if (v.empty()) return std::nullopt;
  char *end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size()) return std::nullopt;
  return d;
}

bool ValueLess(const Value &a, const Value &b) {
  auto na = AsNumber(a);
  auto nb = AsNumber(b);
  if (na && nb && *na != *nb) return *na < *nb;
  return a < b;
}

Value ApplyBuiltin(MatchBuiltin builtin, const Value &a, const Value &b) {
  if (a == b) return a;
  switch (builtin) {
    case MatchBuiltin::kTokenUnion: {
      std::set<std::string> t = tokens_of(a);
      t.merge(tokens_of(b));
      return join_tokens(t);
    }
    case MatchBuiltin::kValueMin:
      return ValueLess(b, a) ? b : a;
    case MatchBuiltin::kValueMax:
      return ValueLess(a, b) ? b : a;
    case MatchBuiltin::kNone:
      break;
  }
  return a;
}

// Dense join table over interned values of one domain.
class ClosureTable {
 public:
  ClosureTable(const std::string &domain, std::vector<Value> values)
      : domain_(domain), values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      index_.emplace(values_[i], static_cast<int>(i));
    }
    cells_.assign(values_.size() * values_.size(), -1);
  }

  int id(const Value &v) const { return index_.at(v); }
  std::size_t size() const { return values_.size(); }
  int get(int a, int b) const { return cells_[a * values_.size() + b]; }

  // Records m(a,b) = m(b,a) = r; returns true when the table grew.
  bool set(int a, int b, int r) {
    bool grew = false;
    for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
      int &cell = cells_[x * values_.size() + y];
      if (cell == r) continue;
      if (cell != -1) {
        throw SemilatticeViolation(
            "matching function for domain " + domain_ + " maps (" +
            values_[x] + ", " + values_[y] + ") to both " + values_[cell] +
            " and " + values_[r]);
      }
      cell = r;
      grew = true;
    }
    return grew;
  }

  MatchingFunction::Table export_table() const {
    MatchingFunction::Table out;
    const int n = static_cast<int>(values_.size());
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const int r = get(a, b);
        if (r != -1) out.emplace(std::pair{values_[a], values_[b]}, values_[r]);
      }
    }
    return out;
  }

 private:
  std::string domain_;
  std::vector<Value> values_;
  std::map<Value, int> index_;
  std::vector<int> cells_;
};

// Associativity closure: whenever m(x,y)=u and m(y,z)=w are both known, the
// values m(u,z) and m(x,w) must agree, so a known one defines the other.
void CloseUnderAssociativity(ClosureTable &t) {
  const int n = static_cast<int>(t.size());
  bool changed = true;
  while (changed) {
    changed = false;
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        const int u = t.get(x, y);
        if (u == -1) continue;
        for (int z = 0; z < n; ++z) {
          const int w = t.get(y, z);
          if (w == -1) continue;
          const int left = t.get(u, z);
          const int right = t.get(x, w);
          if (left != -1 && right == -1) {
            changed |= t.set(x, w, left);
          } else if (right != -1 && left == -1) {
            changed |= t.set(u, z, right);
          } else if (left != -1 && left != right) {
            // set() reports the clash with both candidate results.
            t.set(x, w, left);
          }
        }
      }
    }
  }
}

}  // namespace

void MatchingFunction::add_domain(const std::string &domain) {
  domains_[domain];
  saturated_ = false;
}

void MatchingFunction::declare(const std::string &domain, const Value &a,
                               const Value &b, const Value &result) {
  DomainFunction &f = domains_[domain];
  if (f.builtin != MatchBuiltin::kNone) {
    throw ValidationError("domain " + domain +
                          " has a built-in matching function; triples are not "
                          "allowed");
  }
  f.declared.push_back({a, b, result});
  saturated_ = false;
}

void MatchingFunction::set_builtin(const std::string &domain,
                                   MatchBuiltin builtin) {
  DomainFunction &f = domains_[domain];
  if (!f.declared.empty() && builtin != MatchBuiltin::kNone) {
    throw ValidationError("domain " + domain +
                          " has declared triples; a built-in is not allowed");
  }
  f.builtin = builtin;
  saturated_ = false;
}

std::set<std::string> MatchingFunction::domains() const {
  std::set<std::string> result;
  for (const auto &[name, f] : domains_) result.insert(name);
  return result;
}

const MatchingFunction::DomainFunction &MatchingFunction::lookup(
    const std::string &domain) const {
  auto it = domains_.find(domain);
  if (it == domains_.end()) {
    throw UnknownDomain("no matching function for domain " + domain);
  }
  return it->second;
}

MatchBuiltin MatchingFunction::builtin(const std::string &domain) const {
  return lookup(domain).builtin;
}

const std::vector<MatchTriple> &MatchingFunction::declared(
    const std::string &domain) const {
  return lookup(domain).declared;
}

std::optional<Value> MatchingFunction::try_match(const std::string &domain,
                                                 const Value &a,
                                                 const Value &b) const {
  if (!saturated_) {
    throw PreconditionViolation("matching function used before saturation");
  }
  auto it = domains_.find(domain);
  if (it == domains_.end()) return std::nullopt;
  const DomainFunction &f = it->second;
  if (f.builtin != MatchBuiltin::kNone) return ApplyBuiltin(f.builtin, a, b);
  if (a == b) return a;
  auto cell = f.table.find({a, b});
  if (cell == f.table.end()) return std::nullopt;
  return cell->second;
}

const MatchingFunction::Table &MatchingFunction::table(
    const std::string &domain) const {
  return lookup(domain).table;
}

std::set<Value> MatchingFunction::table_values(const std::string &domain) const {
  std::set<Value> out;
  for (const auto &[key, result] : lookup(domain).table) {
    out.insert(key.first);
    out.insert(key.second);
    out.insert(result);
  }
  return out;
}

MatchingFunction saturate_mf(const MatchingFunction &mf,
                             const ActiveValues &active) {
  MatchingFunction out = mf;
  for (auto &[domain, f] : out.domains_) {
    f.table.clear();
    if (f.builtin != MatchBuiltin::kNone) continue;
    std::set<Value> values;
    for (const MatchTriple &t : f.declared) {
      values.insert(t.left);
      values.insert(t.right);
      values.insert(t.result);
    }
    if (auto it = active.find(domain); it != active.end()) {
      values.insert(it->second.begin(), it->second.end());
    }
    ClosureTable table(domain, std::vector<Value>(values.begin(), values.end()));
    for (int v = 0; v < static_cast<int>(table.size()); ++v) table.set(v, v, v);
    for (const MatchTriple &t : f.declared) {
      table.set(table.id(t.left), table.id(t.right), table.id(t.result));
    }
    CloseUnderAssociativity(table);
    f.table = table.export_table();
  }
  out.saturated_ = true;
  return out;
}

Value match_values(const MatchingFunction &mf, const std::string &domain,
                   const Value &a, const Value &b) {
  if (!mf.has_domain(domain)) {
    throw UndefinedMatch("no matching function for domain " + domain +
                         " (needed for " + a + ", " + b + ")");
  }
  std::optional<Value> r = mf.try_match(domain, a, b);
  if (!r) {
    throw UndefinedMatch("matching function for domain " + domain +
                         " is undefined on (" + a + ", " + b + ")");
  }
  return *r;
}

bool precedes(const MatchingFunction &mf, const std::string &domain,
              const Value &a, const Value &b) {
  if (!mf.has_domain(domain)) return a == b;
  std::optional<Value> r = mf.try_match(domain, a, b);
  return r && *r == b;
}

bool tuple_precedes(const MatchingFunction &mf,
                    std::span<const std::string> domains, const Tuple &lhs,
                    const Tuple &rhs) {
  if (lhs.size() != rhs.size() || lhs.size() != domains.size()) {
    throw PreconditionViolation("tuple_precedes on tuples of unequal arity");
  }
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (!precedes(mf, domains[i], lhs[i], rhs[i])) return false;
  }
  return true;
}

const char *to_string(MatchBuiltin builtin) {
  switch (builtin) {
    case MatchBuiltin::kNone:
      return "none";
    case MatchBuiltin::kTokenUnion:
      return "token-union";
    case MatchBuiltin::kValueMin:
      return "value-min";
    case MatchBuiltin::kValueMax:
      return "value-max";
  }
  return "none";
}

}  // namespace mdclean
