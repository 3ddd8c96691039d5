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

#include "mdclean/chase.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <tuple>
#include <unordered_set>

#include "mdclean/error.h"
#include "mdclean/query.h"

namespace mdclean {

namespace {

// Steps of every MD on one instance, with the LHS queries compiled once.
class StepFinder {
 public:
  StepFinder(const MdSet &mds, const SimilarityRelation &sim,
             const MatchingFunction &mf)
      : mds_(mds), sim_(sim), mf_(mf) {
    for (const Md &md : mds_) {
      queries_.push_back(lhs_query(md));
      std::vector<std::string> vars = query_variables(queries_.back());
      auto index_of = [&](const std::string &v) {
        return static_cast<std::size_t>(std::find(vars.begin(), vars.end(), v) -
                                        vars.begin());
      };
      Columns c;
      c.rhs = {index_of(md.rhs_left), index_of(md.rhs_right)};
      c.lead = {index_of(md.leading_atom(0).tid_var),
                index_of(md.leading_atom(1).tid_var)};
      for (const MdAtom &a : md.atoms) c.tids.push_back(index_of(a.tid_var));
      columns_.push_back(std::move(c));
    }
  }

  std::vector<EnforcementStep> find(const Instance &instance) const {
    std::vector<EnforcementStep> steps;
    for (std::size_t i = 0; i < mds_.size(); ++i) find_for(i, instance, steps);
    return steps;
  }

 private:
  void find_for(std::size_t index, const Instance &instance,
                std::vector<EnforcementStep> &out) const {
    const Md &md = mds_.mds()[index];
    const Columns &col = columns_[index];
    // Effect (both written slots, unordered) -> step; a same-relation MD
    // reaches each effect in both orientations and a relational MD possibly
    // through several context tuples.
    using Slot = std::pair<Tid, std::size_t>;
    std::map<std::pair<Slot, Slot>, EnforcementStep> by_effect;
    NaturalLess less;
    for_each_row(instance, sim_, queries_[index], [&](const auto &row) {
      const Value &v0 = *row[col.rhs[0]];
      const Value &v1 = *row[col.rhs[1]];
      if (v0 == v1) return true;
      EnforcementStep step;
      step.md = md.name;
      step.md_index = index;
      step.domain = md.rhs_domain;
      step.writes[0] = {*row[col.lead[0]], md.rhs_position[0], v0};
      step.writes[1] = {*row[col.lead[1]], md.rhs_position[1], v1};
      for (std::size_t i = 0; i < md.atoms.size(); ++i) {
        step.assignment.emplace_back(md.atoms[i].tid_var, *row[col.tids[i]]);
      }
      Slot s0{step.writes[0].tid, step.writes[0].position};
      Slot s1{step.writes[1].tid, step.writes[1].position};
      auto slot_less = [&](const Slot &x, const Slot &y) {
        if (x.first != y.first) return less(x.first, y.first);
        return x.second < y.second;
      };
      auto key = slot_less(s1, s0) ? std::pair{s1, s0} : std::pair{s0, s1};
      auto it = by_effect.find(key);
      if (it == by_effect.end()) {
        step.new_value = mf_.try_match(md.rhs_domain, v0, v1);
        by_effect.emplace(key, std::move(step));
      } else if (prefer(step, it->second)) {
        step.new_value = std::move(it->second.new_value);
        it->second = std::move(step);
      }
      return true;
    });
    std::vector<EnforcementStep> found;
    for (auto &[key, step] : by_effect) found.push_back(std::move(step));
    std::sort(found.begin(), found.end(), [&](const auto &a, const auto &b) {
      return assignment_less(a, b);
    });
    for (auto &s : found) out.push_back(std::move(s));
  }

  static bool assignment_less(const EnforcementStep &a,
                              const EnforcementStep &b) {
    NaturalLess less;
    for (std::size_t i = 0; i < a.assignment.size() && i < b.assignment.size();
         ++i) {
      const Tid &x = a.assignment[i].second;
      const Tid &y = b.assignment[i].second;
      if (x != y) return less(x, y);
    }
    return a.assignment.size() < b.assignment.size();
  }

  // Canonical representative of an effect: the least assignment.
  static bool prefer(const EnforcementStep &candidate,
                     const EnforcementStep &current) {
    return assignment_less(candidate, current);
  }

  // Positions of the variables a step needs within a query answer.
  struct Columns {
    std::array<std::size_t, 2> rhs;
    std::array<std::size_t, 2> lead;
    std::vector<std::size_t> tids;
  };

  const MdSet &mds_;
  const SimilarityRelation &sim_;
  const MatchingFunction &mf_;
  std::vector<ConjunctiveQuery> queries_;
  std::vector<Columns> columns_;
};

// Key of the current values after applying `step` (or of `instance` itself),
// without materializing the successor.
std::string StateKey(const Instance &instance, const EnforcementStep *step) {
  std::string key;
  for (const Relation &r : instance.schema().relations()) {
    for (const auto &[tid, values] : instance.tuples(r.name())) {
      key += tid;
      key += '\x1f';
      for (std::size_t i = 0; i < values.size(); ++i) {
        const Value *v = &values[i];
        if (step) {
          for (const Write &w : step->writes) {
            if (w.tid == tid && w.position == i) v = &*step->new_value;
          }
        }
        key += *v;
        key += '\x1f';
      }
      key += '\x1e';
    }
  }
  return key;
}

}  // namespace

std::string EnforcementStep::describe() const {
  std::string out = md + "(";
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (i) out += ",";
    out += assignment[i].second;
  }
  out += "): " + writes[0].old_value + ", " + writes[1].old_value + " -> " +
         (new_value ? *new_value : std::string("<undefined>"));
  return out;
}

std::vector<EnforcementStep> applicable_steps(const Instance &instance,
                                              const MdSet &mds,
                                              const SimilarityRelation &sim,
                                              const MatchingFunction &mf) {
  return StepFinder(mds, sim, mf).find(instance);
}

Instance enforce(const Instance &instance, const EnforcementStep &step) {
  for (const Write &w : step.writes) {
    if (!instance.contains(w.tid) ||
        instance.at(w.tid).at(w.position) != w.old_value) {
      throw PreconditionViolation("step " + step.describe() +
                                  " does not match the current instance");
    }
  }
  if (step.writes[0].old_value == step.writes[1].old_value) {
    throw PreconditionViolation("step " + step.describe() +
                                " is not applicable: RHS values already equal");
  }
  if (!step.new_value) {
    throw UndefinedMatch("md " + step.md + " on " + step.writes[0].tid + ", " +
                         step.writes[1].tid + ": matching function for " +
                         step.domain + " is undefined on (" +
                         step.writes[0].old_value + ", " +
                         step.writes[1].old_value + ")");
  }
  Instance next = instance;
  std::map<Tid, Tuple> changed;
  for (const Write &w : step.writes) {
    auto it = changed.find(w.tid);
    if (it == changed.end()) it = changed.emplace(w.tid, instance.at(w.tid)).first;
    it->second[w.position] = *step.new_value;
  }
  for (auto &[tid, tuple] : changed) next.update(tid, std::move(tuple));
  return next;
}

bool is_stable(const Instance &instance, const MdSet &mds,
               const SimilarityRelation &sim, const MatchingFunction &mf) {
  return applicable_steps(instance, mds, sim, mf).empty();
}

CleanInstanceSet chase_all(const Instance &initial, const MdSet &mds,
                           const SimilarityRelation &sim,
                           const MatchingFunction &mf,
                           const ChaseOptions &options) {
  if (initial.size() > options.max_exhaustive_tuples) {
    throw InstanceTooLarge("exhaustive chase is limited to " +
                           std::to_string(options.max_exhaustive_tuples) +
                           " tuples; the instance has " +
                           std::to_string(initial.size()));
  }
  const StepFinder finder(mds, sim, mf);
  // Chase sequences form a tree; each node keeps the step that reached it.
  struct TraceNode {
    std::size_t parent;
    EnforcementStep step;
  };
  constexpr std::size_t kRoot = static_cast<std::size_t>(-1);
  std::vector<TraceNode> trace;
  auto witness = [&](std::size_t at) {
    std::vector<EnforcementStep> path;
    for (; at != kRoot; at = trace[at].parent) path.push_back(trace[at].step);
    std::reverse(path.begin(), path.end());
    return path;
  };
  struct Node {
    Instance instance;
    std::size_t trace;
    std::size_t depth;
  };
  std::vector<Node> stack;
  std::unordered_set<std::string> visited;
  std::map<std::string, CleanInstance> endpoints;
  CleanInstanceSet result;

  visited.insert(StateKey(initial, nullptr));
  stack.push_back({initial, kRoot, 0});
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    ++result.states_explored;
    std::vector<EnforcementStep> steps = finder.find(node.instance);
    if (steps.empty()) {
      std::string key = node.instance.canonical_key();
      endpoints.emplace(std::move(key), CleanInstance{std::move(node.instance),
                                                      witness(node.trace)});
      continue;
    }
    if (node.depth >= options.step_limit) {
      throw StepLimitExceeded("chase sequence exceeded " +
                              std::to_string(options.step_limit) + " steps");
    }
    // The stack pops the last pushed child first.
    if (!options.reverse_exploration) std::reverse(steps.begin(), steps.end());
    for (EnforcementStep &step : steps) {
      if (step.new_value &&
          !visited.insert(StateKey(node.instance, &step)).second) {
        continue;
      }
      Instance next = enforce(node.instance, step);
      trace.push_back({node.trace, std::move(step)});
      stack.push_back({std::move(next), trace.size() - 1, node.depth + 1});
    }
  }
  for (auto &[key, clean] : endpoints) result.members.push_back(std::move(clean));
  return result;
}

ChaseOrder ChaseOrder::from_seed(std::uint64_t seed, const MdSet &mds,
                                 const Instance &instance) {
  ChaseOrder order;
  order.md_rank.resize(mds.size());
  std::iota(order.md_rank.begin(), order.md_rank.end(), 0);
  if (seed == 0) return order;
  std::mt19937_64 rng(seed);
  std::shuffle(order.md_rank.begin(), order.md_rank.end(), rng);
  std::vector<Tid> tids;
  for (const Relation &r : instance.schema().relations()) {
    for (const auto &[tid, tuple] : instance.tuples(r.name())) tids.push_back(tid);
  }
  std::sort(tids.begin(), tids.end(), NaturalLess{});
  std::vector<std::size_t> ranks(tids.size());
  std::iota(ranks.begin(), ranks.end(), 0);
  std::shuffle(ranks.begin(), ranks.end(), rng);
  for (std::size_t i = 0; i < tids.size(); ++i) order.tid_rank[tids[i]] = ranks[i];
  return order;
}

ChaseOrder ChaseOrder::prefer(const std::vector<std::string> &md_names,
                              const MdSet &mds) {
  ChaseOrder order;
  order.md_rank.assign(mds.size(), 0);
  std::size_t next = 0;
  std::vector<bool> placed(mds.size(), false);
  for (const std::string &name : md_names) {
    for (std::size_t i = 0; i < mds.size(); ++i) {
      if (mds.mds()[i].name == name && !placed[i]) {
        order.md_rank[i] = next++;
        placed[i] = true;
      }
    }
  }
  for (std::size_t i = 0; i < mds.size(); ++i) {
    if (!placed[i]) order.md_rank[i] = next++;
  }
  return order;
}

CleanInstance chase_one(const Instance &initial, const MdSet &mds,
                        const SimilarityRelation &sim,
                        const MatchingFunction &mf, const ChaseOrder &order,
                        const ChaseOptions &options) {
  const StepFinder finder(mds, sim, mf);
  NaturalLess natural;
  auto tid_less = [&](const Tid &a, const Tid &b) {
    if (order.tid_rank.empty()) return natural(a, b);
    auto ia = order.tid_rank.find(a);
    auto ib = order.tid_rank.find(b);
    if (ia == order.tid_rank.end() || ib == order.tid_rank.end()) {
      return natural(a, b);
    }
    return ia->second < ib->second;
  };
  auto md_rank = [&](std::size_t i) {
    return i < order.md_rank.size() ? order.md_rank[i] : i;
  };
  auto step_less = [&](const EnforcementStep &a, const EnforcementStep &b) {
    if (md_rank(a.md_index) != md_rank(b.md_index)) {
      return md_rank(a.md_index) < md_rank(b.md_index);
    }
    for (std::size_t i = 0; i < a.assignment.size() && i < b.assignment.size();
         ++i) {
      const Tid &x = a.assignment[i].second;
      const Tid &y = b.assignment[i].second;
      if (x != y) return tid_less(x, y);
    }
    return false;
  };

  CleanInstance run{initial, {}};
  while (true) {
    std::vector<EnforcementStep> steps = finder.find(run.instance);
    if (steps.empty()) return run;
    if (run.witness.size() >= options.step_limit) {
      throw StepLimitExceeded("chase sequence exceeded " +
                              std::to_string(options.step_limit) + " steps");
    }
    auto best = std::min_element(steps.begin(), steps.end(), step_less);
    run.instance = enforce(run.instance, *best);
    run.witness.push_back(std::move(*best));
  }
}

}  // namespace mdclean
