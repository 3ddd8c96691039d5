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

#include "mdclean/classify.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace mdclean {

const char *to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kNonInteracting:
      return "NonInteracting";
    case Verdict::kSimilarityPreserving:
      return "SimilarityPreserving";
    case Verdict::kSfai:
      return "SFAI";
    case Verdict::kGeneral:
      return "General";
  }
  return "?";
}

std::vector<InteractionPair> interaction_pairs(const MdSet &mds) {
  std::vector<InteractionPair> out;
  for (const Md &m1 : mds) {
    std::set<AttributeRef> written = arhs(m1);
    for (const Md &m2 : mds) {
      for (const AttributeRef &a : alhs(m2)) {
        if (written.count(a)) out.push_back({m1.name, m2.name, a});
      }
    }
  }
  return out;
}

ActiveValues collect_active_values(const Instance &instance,
                                   const SimilarityRelation &sim,
                                   const MatchingFunction &mf) {
  ActiveValues active = instance.active_values();
  for (const std::string &d : mf.domains()) {
    for (const Value &v : mf.table_values(d)) active[d].insert(v);
    for (const MatchTriple &t : mf.declared(d)) {
      active[d].insert({t.left, t.right, t.result});
    }
  }
  for (const std::string &d : sim.domains()) {
    for (const auto &[a, b] : sim.declared(d)) active[d].insert({a, b});
  }
  return active;
}

PreservationCheck check_similarity_preservation(const MdSet &mds,
                                                const SimilarityRelation &sim,
                                                const MatchingFunction &mf,
                                                const ActiveValues &active) {
  PreservationCheck check;
  std::set<std::string> domains;
  for (const Md &md : mds) domains.insert(md.rhs_domain);
  // A written attribute that some MD reads through a repeated variable is
  // compared by equality, which merging must preserve as well.
  std::set<AttributeRef> written;
  for (const Md &md : mds) {
    std::set<AttributeRef> w = arhs(md);
    written.insert(w.begin(), w.end());
  }
  std::set<std::string> joined;
  for (const Md &md : mds) {
    for (const auto &[var, occ] : md.occurrences) {
      if (occ.size() < 2) continue;
      for (const VarOccurrence &o : occ) {
        if (written.count(md.refs[o.atom][o.position])) joined.insert(md.var_domain.at(var));
      }
    }
  }
  for (const std::string &d : domains) {
    auto it = active.find(d);
    if (it == active.end()) continue;
    const std::set<Value> &values = it->second;
    auto similar_in = [&](const Value &a, const Value &b) {
      return sim.has_domain(d) ? sim.similar(d, a, b) : a == b;
    };
    std::vector<std::pair<Value, Value>> similar_pairs;
    for (const Value &a : values) {
      for (const Value &a1 : values) {
        if (a != a1 && similar_in(a, a1)) similar_pairs.emplace_back(a, a1);
      }
    }
    for (const Value &a : values) similar_pairs.emplace_back(a, a);
    for (const auto &[a, a1] : similar_pairs) {
      for (const Value &a2 : values) {
        std::optional<Value> merged = mf.try_match(d, a1, a2);
        if (merged && !similar_in(a, *merged)) {
          check.preserving = false;
          check.violations.push_back({d, a, a1, a2, *merged});
        }
      }
    }
    if (!joined.count(d)) continue;
    for (const Value &a1 : values) {
      for (const Value &a2 : values) {
        std::optional<Value> merged = mf.try_match(d, a1, a2);
        if (merged && *merged != a1) {
          check.preserving = false;
          check.violations.push_back({d, a1, a1, a2, *merged});
        }
      }
    }
  }
  return check;
}

bool is_similarity_preserving(const MdSet &mds, const SimilarityRelation &sim,
                              const MatchingFunction &mf,
                              const ActiveValues &active) {
  return check_similarity_preservation(mds, sim, mf, active).preserving;
}

namespace {

class UnionFind {
 public:
  const std::string &find(const std::string &x) {
    auto it = parent_.find(x);
    if (it == parent_.end()) it = parent_.emplace(x, x).first;
    if (it->second == x) return it->first;
    std::string root = find(it->second);
    it->second = root;
    return parent_.find(root)->first;
  }
  void join(const std::string &a, const std::string &b) {
    std::string ra = find(a), rb = find(b);
    if (ra != rb) parent_[std::max(ra, rb)] = std::min(ra, rb);
  }

 private:
  std::map<std::string, std::string> parent_;
};

struct RawAtom {
  std::string relation;
  std::string tid;
  std::vector<std::string> vars;
  auto operator<=>(const RawAtom &) const = default;
};

struct RawSim {
  std::string left;
  std::string right;
  std::string domain;
  auto operator<=>(const RawSim &) const = default;
};

struct RawQuery {
  std::vector<RawAtom> atoms;
  std::vector<RawSim> sims;
  std::vector<std::pair<std::string, std::string>> distinct;
};

RawQuery Overlap(const Md &m1, std::size_t atom1, const Md &m2,
                 std::size_t atom2) {
  auto key = [](int side, const std::string &v) {
    return std::to_string(side) + ":" + v;
  };
  UnionFind uf;
  const MdAtom &a = m1.atoms[atom1];
  const MdAtom &b = m2.atoms[atom2];
  uf.join(key(1, a.tid_var), key(2, b.tid_var));
  for (std::size_t p = 0; p < a.vars.size(); ++p) {
    uf.join(key(1, a.vars[p]), key(2, b.vars[p]));
  }
  RawQuery q;
  std::set<RawAtom> seen_atoms;
  std::set<RawSim> seen_sims;
  auto add = [&](int side, const Md &md) {
    for (const MdAtom &atom : md.atoms) {
      RawAtom r{atom.relation, uf.find(key(side, atom.tid_var)), {}};
      for (const std::string &v : atom.vars) r.vars.push_back(uf.find(key(side, v)));
      if (seen_atoms.insert(r).second) q.atoms.push_back(std::move(r));
    }
    for (const SimilarityConstraint &s : md.similarities) {
      std::string l = uf.find(key(side, s.left));
      std::string r = uf.find(key(side, s.right));
      if (l == r) continue;
      if (r < l) std::swap(l, r);
      RawSim sim{l, r, md.domain_of(s)};
      if (seen_sims.insert(sim).second) q.sims.push_back(std::move(sim));
    }
  };
  add(1, m1);
  add(2, m2);
  // Each application joins two different tuples, and two applications of
  // one MD to the same pair of tuples count as one application. Context
  // atoms may be shared freely.
  std::set<std::pair<std::string, std::string>> distinct;
  auto differ = [&](int side1, const MdAtom &x, int side2, const MdAtom &y) {
    std::string l = uf.find(key(side1, x.tid_var));
    std::string r = uf.find(key(side2, y.tid_var));
    if (x.relation != y.relation || l == r) return;
    if (r < l) std::swap(l, r);
    if (distinct.insert({l, r}).second) q.distinct.emplace_back(l, r);
  };
  differ(1, m1.leading_atom(0), 1, m1.leading_atom(1));
  differ(2, m2.leading_atom(0), 2, m2.leading_atom(1));
  if (m1.name == m2.name && a.leading && b.leading) {
    int s1 = m1.leading[0] == atom1 ? 1 : 0;
    int s2 = m2.leading[0] == atom2 ? 1 : 0;
    differ(1, m1.leading_atom(s1), 2, m2.leading_atom(s2));
  }
  return q;
}

// Variables renamed by first appearance, atoms in the given order.
std::string CanonicalText(const RawQuery &q, const std::vector<std::size_t> &order) {
  std::map<std::string, std::string> rename;
  auto name = [&](const std::string &v) -> const std::string & {
    auto it = rename.find(v);
    if (it == rename.end()) {
      it = rename.emplace(v, "v" + std::to_string(rename.size())).first;
    }
    return it->second;
  };
  std::string out;
  for (std::size_t i : order) {
    const RawAtom &a = q.atoms[i];
    out += a.relation + "(" + name(a.tid);
    for (const std::string &v : a.vars) out += "," + name(v);
    out += ")";
  }
  std::vector<std::string> sims;
  for (const RawSim &s : q.sims) {
    std::string l = name(s.left), r = name(s.right);
    if (r < l) std::swap(l, r);
    sims.push_back(l + "~" + s.domain + "~" + r);
  }
  std::sort(sims.begin(), sims.end());
  std::vector<std::string> distinct;
  for (const auto &[l0, r0] : q.distinct) {
    std::string l = name(l0), r = name(r0);
    if (r < l) std::swap(l, r);
    distinct.push_back(l + "!=" + r);
  }
  std::sort(distinct.begin(), distinct.end());
  for (const std::string &s : sims) out += ";" + s;
  for (const std::string &s : distinct) out += ";" + s;
  return out;
}

// Minimum text over atom orders; identity order only for large queries.
std::string CanonicalForm(const RawQuery &q) {
  std::vector<std::size_t> order(q.atoms.size());
  std::iota(order.begin(), order.end(), 0);
  if (q.atoms.size() > 7) return CanonicalText(q, order);
  std::string best = CanonicalText(q, order);
  while (std::next_permutation(order.begin(), order.end())) {
    best = std::min(best, CanonicalText(q, order));
  }
  return best;
}

ConjunctiveQuery ToQuery(const RawQuery &raw, const std::string &name) {
  std::map<std::string, std::string> rename;
  int tids = 0, vars = 0;
  for (const RawAtom &a : raw.atoms) {
    if (!rename.count(a.tid)) rename[a.tid] = "T" + std::to_string(++tids);
  }
  for (const RawAtom &a : raw.atoms) {
    for (const std::string &v : a.vars) {
      if (!rename.count(v)) rename[v] = "X" + std::to_string(++vars);
    }
  }
  ConjunctiveQuery q;
  q.name = name;
  for (const RawAtom &a : raw.atoms) {
    QueryAtom atom{a.relation, Term::var(rename.at(a.tid)), {}};
    for (const std::string &v : a.vars) atom.args.push_back(Term::var(rename.at(v)));
    q.atoms.push_back(std::move(atom));
  }
  for (const RawSim &s : raw.sims) {
    q.similarities.push_back(
        {Term::var(rename.at(s.left)), Term::var(rename.at(s.right)), s.domain});
  }
  for (const auto &[l, r] : raw.distinct) {
    q.distinct.push_back({Term::var(rename.at(l)), Term::var(rename.at(r))});
  }
  return q;
}

}  // namespace

std::vector<SfaiQuery> sfai_queries(const MdSet &mds) {
  std::vector<SfaiQuery> out;
  for (const InteractionPair &pair : interaction_pairs(mds)) {
    const Md &m1 = *mds.find(pair.md1);
    const Md &m2 = *mds.find(pair.md2);
    // Leading atoms of m1 whose written attribute is the shared one.
    std::vector<std::size_t> writers;
    for (int side = 0; side < 2; ++side) {
      std::size_t atom = m1.leading[side];
      if (m1.refs[atom][m1.rhs_position[side]] == pair.attribute) {
        writers.push_back(atom);
      }
    }
    // Atoms of m2 where the shared attribute is compared.
    std::set<std::string> compared;
    for (const SimilarityConstraint &s : m2.similarities) {
      compared.insert(s.left);
      compared.insert(s.right);
    }
    for (const auto &[var, occ] : m2.occurrences) {
      if (occ.size() > 1) compared.insert(var);
    }
    std::set<std::size_t> readers;
    for (const std::string &var : compared) {
      for (const VarOccurrence &o : m2.occurrences.at(var)) {
        if (m2.refs[o.atom][o.position] == pair.attribute) readers.insert(o.atom);
      }
    }
    std::set<std::string> seen;
    std::string base = "Q(" + pair.md1 + "," + pair.md2 + "," +
                       pair.attribute.str() + ")";
    int count = 0;
    for (std::size_t w : writers) {
      for (std::size_t r : readers) {
        RawQuery raw = Overlap(m1, w, m2, r);
        if (!seen.insert(CanonicalForm(raw)).second) continue;
        std::string name = base;
        if (++count > 1) name += "#" + std::to_string(count);
        out.push_back({name, pair, ToQuery(raw, name)});
      }
    }
  }
  return out;
}

SfaiCheck check_sfai(const MdSet &mds, const Instance &instance,
                     const SimilarityRelation &sim) {
  SfaiCheck check;
  for (const SfaiQuery &q : sfai_queries(mds)) {
    QueryOutcome outcome{q.name, false, std::nullopt};
    if (std::optional<Binding> b = first_binding(instance, sim, q.query)) {
      outcome.satisfied = true;
      outcome.witness = std::move(b);
      check.sfai = false;
    }
    check.outcomes.push_back(std::move(outcome));
  }
  return check;
}

bool is_sfai(const MdSet &mds, const Instance &instance,
             const SimilarityRelation &sim) {
  return check_sfai(mds, instance, sim).sfai;
}

Classification classify(const MdSet &mds, const Instance &instance,
                        const SimilarityRelation &sim,
                        const MatchingFunction &mf) {
  Classification c;
  c.pairs = interaction_pairs(mds);
  if (c.pairs.empty()) {
    c.verdict = Verdict::kNonInteracting;
    return c;
  }
  c.preservation = check_similarity_preservation(
      mds, sim, mf, collect_active_values(instance, sim, mf));
  SfaiCheck sfai = check_sfai(mds, instance, sim);
  c.queries = std::move(sfai.outcomes);
  if (c.preservation->preserving) {
    c.verdict = Verdict::kSimilarityPreserving;
  } else if (sfai.sfai) {
    c.verdict = Verdict::kSfai;
  } else {
    c.verdict = Verdict::kGeneral;
  }
  return c;
}

}  // namespace mdclean
