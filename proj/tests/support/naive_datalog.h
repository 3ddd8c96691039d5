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

// Naive bottom-up evaluation used as an oracle for the Datalog engine. It
// recomputes every rule over the whole database until nothing changes, one
// stratum at a time, with strata found by iterated level relaxation.

#ifndef MDCLEAN_TESTS_NAIVE_DATALOG_H_
#define MDCLEAN_TESTS_NAIVE_DATALOG_H_

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdclean/datalog.h"
#include "mdclean/matching.h"

namespace mdclean::testing {

inline std::map<std::string, int> naive_levels(const datalog::Program &p) {
  std::map<std::string, int> level;
  for (const datalog::Rule &r : p.rules) {
    for (const auto &h : r.head) level[h.name];
    for (const auto &b : r.body) {
      if (b.kind == datalog::LiteralKind::kAtom) level[b.name];
    }
  }
  const int limit = static_cast<int>(level.size()) + 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (const datalog::Rule &r : p.rules) {
      for (const auto &h : r.head) {
        for (const auto &b : r.body) {
          if (b.kind != datalog::LiteralKind::kAtom) continue;
          int need = level[b.name] + (b.negated ? 1 : 0);
          if (level[h.name] < need) {
            level[h.name] = need;
            changed = true;
            if (need > limit) throw std::runtime_error("not stratifiable");
          }
        }
      }
    }
  }
  return level;
}

class NaiveEvaluator {
 public:
  NaiveEvaluator(const datalog::Program &p, const datalog::Database &facts)
      : program_(p),
        mf_(p.mf.saturated() ? p.mf : saturate_mf(p.mf, {})),
        db_(facts) {}

  datalog::Database run() {
    std::map<std::string, int> level = naive_levels(program_);
    int top = 0;
    for (const auto &[_, l] : level) top = std::max(top, l);
    for (int l = 0; l <= top; ++l) {
      for (bool changed = true; changed;) {
        changed = false;
        for (const datalog::Rule &r : program_.rules) {
          if (r.head.size() != 1 || level[r.head[0].name] != l) continue;
          std::vector<datalog::Row> derived;
          std::map<std::string, std::string> env;
          std::vector<bool> done(r.body.size(), false);
          solve(r, done, env, derived);
          for (datalog::Row &row : derived) {
            if (db_[r.head[0].name].insert(std::move(row)).second) changed = true;
          }
        }
      }
    }
    return db_;
  }

 private:
  using Env = std::map<std::string, std::string>;

  static bool bound(const Term &t, const Env &env) {
    return !t.is_variable() || env.count(t.text);
  }
  static std::string value(const Term &t, const Env &env) {
    return t.is_variable() ? env.at(t.text) : t.text;
  }
  // Binds or checks one term; returns false on a clash.
  static bool bind(const Term &t, const std::string &v, Env &env) {
    if (!t.is_variable()) return t.text == v;
    auto [it, inserted] = env.emplace(t.text, v);
    return inserted || it->second == v;
  }

  bool ready(const datalog::Literal &l, const Env &env) const {
    using datalog::LiteralKind;
    switch (l.kind) {
      case LiteralKind::kAtom:
        if (!l.negated) return true;
        [[fallthrough]];
      case LiteralKind::kSim:
      case LiteralKind::kPrecedes:
      case LiteralKind::kNotEqual:
        for (const Term &t : l.args) if (!bound(t, env)) return false;
        for (const Term &t : l.rhs) if (!bound(t, env)) return false;
        return true;
      case LiteralKind::kMatch:
        return bound(l.args[0], env) && bound(l.args[1], env);
      case LiteralKind::kEqual:
        for (std::size_t i = 0; i < l.args.size(); ++i) {
          if (!bound(l.args[i], env) && !bound(l.rhs[i], env)) return false;
        }
        return true;
    }
    return false;
  }

  void solve(const datalog::Rule &r, std::vector<bool> &done, Env &env,
             std::vector<datalog::Row> &out) {
    // Positive atoms in textual order first, then whatever is evaluable.
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < r.body.size() && !pick; ++i) {
      const auto &l = r.body[i];
      if (!done[i] && l.kind == datalog::LiteralKind::kAtom && !l.negated) pick = i;
    }
    for (std::size_t i = 0; i < r.body.size() && !pick; ++i) {
      if (!done[i] && ready(r.body[i], env)) pick = i;
    }
    if (!pick) {
      if (std::find(done.begin(), done.end(), false) != done.end()) {
        throw std::runtime_error("unsafe rule in oracle");
      }
      datalog::Row row;
      for (const Term &t : r.head[0].args) row.push_back(value(t, env));
      out.push_back(std::move(row));
      return;
    }
    const datalog::Literal &l = r.body[*pick];
    done[*pick] = true;
    auto recurse = [&](Env next) { solve(r, done, next, out); };
    using datalog::LiteralKind;
    switch (l.kind) {
      case LiteralKind::kAtom:
        if (!l.negated) {
          for (const datalog::Row &row : db_[l.name]) {
            if (row.size() != l.args.size()) continue;
            Env next = env;
            bool ok = true;
            for (std::size_t k = 0; ok && k < row.size(); ++k) {
              ok = bind(l.args[k], row[k], next);
            }
            if (ok) recurse(std::move(next));
          }
        } else {
          datalog::Row row;
          for (const Term &t : l.args) row.push_back(value(t, env));
          if (!db_[l.name].count(row)) recurse(env);
        }
        break;
      case LiteralKind::kSim: {
        std::string a = value(l.args[0], env), b = value(l.args[1], env);
        bool holds = program_.sim.has_domain(l.name)
                         ? program_.sim.similar(l.name, a, b)
                         : a == b;
        if (holds) recurse(env);
        break;
      }
      case LiteralKind::kPrecedes: {
        std::string a = value(l.args[0], env), b = value(l.args[1], env);
        if (precedes(mf_, l.name, a, b)) recurse(env);
        break;
      }
      case LiteralKind::kMatch: {
        auto m = mf_.try_match(l.name, value(l.args[0], env),
                               value(l.args[1], env));
        Env next = env;
        if (m && bind(l.args[2], *m, next)) recurse(std::move(next));
        break;
      }
      case LiteralKind::kNotEqual: {
        bool differ = false;
        for (std::size_t k = 0; k < l.args.size(); ++k) {
          differ = differ || value(l.args[k], env) != value(l.rhs[k], env);
        }
        if (differ) recurse(env);
        break;
      }
      case LiteralKind::kEqual: {
        Env next = env;
        bool ok = true;
        for (std::size_t k = 0; ok && k < l.args.size(); ++k) {
          if (bound(l.args[k], next)) {
            ok = bind(l.rhs[k], value(l.args[k], next), next);
          } else {
            ok = bind(l.args[k], value(l.rhs[k], next), next);
          }
        }
        if (ok) recurse(std::move(next));
        break;
      }
    }
    done[*pick] = false;
  }

  const datalog::Program &program_;
  MatchingFunction mf_;
  datalog::Database db_;
};

inline datalog::Database naive_evaluate(const datalog::Program &p,
                                        const datalog::Database &facts = {}) {
  return NaiveEvaluator(p, facts).run();
}

}  // namespace mdclean::testing

#endif  // MDCLEAN_TESTS_NAIVE_DATALOG_H_
