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

#include "mdclean/codegen.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>

#include "mdclean/error.h"

namespace mdclean {

using datalog::Literal;
using datalog::LiteralKind;
using datalog::Rule;

namespace {

std::string Lower(const std::string &name) {
  std::string out;
  for (char c : name) {
    if (c == '\'') {
      out += "_p";
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      out += '_';
    }
  }
  if (out.empty() || !std::islower(static_cast<unsigned char>(out[0]))) {
    out = "p_" + out;
  }
  return out;
}

// Rule variables derived from MD variables, plus fresh ones.
class VarNamer {
 public:
  const std::string &of(const std::string &md_var) {
    auto it = names_.find(md_var);
    if (it != names_.end()) return it->second;
    std::string base;
    for (char c : md_var) base += c == '\'' ? std::string("_p") : std::string(1, c);
    base[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(base[0])));
    if (!std::isupper(static_cast<unsigned char>(base[0]))) base = "V" + base;
    return names_.emplace(md_var, claim(base)).first->second;
  }
  std::string fresh(const std::string &hint) { return claim(hint); }

 private:
  std::string claim(std::string name) {
    while (used_.count(name)) name += "_";
    used_.insert(name);
    return name;
  }
  std::map<std::string, std::string> names_;
  std::set<std::string> used_;
};

Term V(const std::string &name) { return Term::var(name); }

Literal Atom(const std::string &pred, std::vector<Term> args, bool neg = false) {
  return Literal::atom(pred, std::move(args), neg);
}

Literal Builtin(LiteralKind kind, const std::string &domain,
                std::vector<Term> args) {
  Literal l;
  l.kind = kind;
  l.name = domain;
  l.args = std::move(args);
  return l;
}

Literal Compare(LiteralKind kind, std::vector<Term> lhs, std::vector<Term> rhs) {
  Literal l;
  l.kind = kind;
  l.args = std::move(lhs);
  l.rhs = std::move(rhs);
  return l;
}

Rule Fact(const std::string &pred, const std::vector<std::string> &values) {
  std::vector<Term> args;
  for (const std::string &v : values) args.push_back(Term::constant(v));
  return {{Atom(pred, std::move(args))}, {}};
}

// Terms (tid, vars...) of an MD atom under `names`.
std::vector<Term> AtomTerms(const MdAtom &atom, VarNamer &names) {
  std::vector<Term> out{V(names.of(atom.tid_var))};
  for (const std::string &v : atom.vars) out.push_back(V(names.of(v)));
  return out;
}

std::vector<Term> Concat(std::vector<Term> a, const std::vector<Term> &b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<std::string> AttributeDomains(const Relation &r) {
  std::vector<std::string> out;
  for (const Attribute &a : r.attributes()) out.push_back(a.domain);
  return out;
}

// Relations that receive new tuple versions: those of leading atoms.
std::set<std::string> VersionedRelations(const MdSet &mds) {
  std::set<std::string> out;
  for (const Md &md : mds) {
    out.insert(md.leading_atom(0).relation);
    out.insert(md.leading_atom(1).relation);
  }
  return out;
}

// Values for which block 1 lists matching-function facts of `domain`.
std::set<Value> MaterializedValues(const std::string &domain,
                                   const ActiveValues &active,
                                   const MatchingFunction &mf) {
  std::set<Value> values;
  if (auto it = active.find(domain); it != active.end()) values = it->second;
  for (const Value &v : mf.table_values(domain)) values.insert(v);
  if (mf.builtin(domain) == MatchBuiltin::kNone) return values;
  // Close under the built-in join; stop growing at the cap.
  bool grew = true;
  while (grew && values.size() < kMaxMaterializedValues) {
    grew = false;
    std::vector<Value> current(values.begin(), values.end());
    for (std::size_t i = 0; i < current.size(); ++i) {
      for (std::size_t j = i + 1; j < current.size(); ++j) {
        std::optional<Value> r = mf.try_match(domain, current[i], current[j]);
        if (r && values.size() < kMaxMaterializedValues &&
            values.insert(*r).second) {
          grew = true;
        }
      }
    }
  }
  return values;
}

// Tuple order as body literals: MF attributes compared with `precedes`,
// the others required equal. `lhs` and `rhs` receive the variables.
void VersionOrder(const std::vector<std::string> &domains,
                  const MatchingFunction &mf, const std::string &lhs_prefix,
                  const std::string &rhs_prefix, bool asp, VarNamer &names,
                  std::vector<Term> &lhs, std::vector<Term> &rhs,
                  std::vector<Literal> &body) {
  std::vector<Term> diff_l, diff_r;
  for (std::size_t i = 0; i < domains.size(); ++i) {
    std::string l = names.fresh(lhs_prefix + std::to_string(i + 1));
    lhs.push_back(V(l));
    if (!mf.has_domain(domains[i])) {
      rhs.push_back(V(l));
      continue;
    }
    std::string r = names.fresh(rhs_prefix + std::to_string(i + 1));
    rhs.push_back(V(r));
    diff_l.push_back(V(l));
    diff_r.push_back(V(r));
    if (asp) {
      body.push_back(Atom(mf_predicate(domains[i]), {V(l), V(r), V(r)}));
    } else {
      body.push_back(Builtin(LiteralKind::kPrecedes, domains[i], {V(l), V(r)}));
    }
  }
  if (!diff_l.empty()) {
    body.push_back(Compare(LiteralKind::kNotEqual, diff_l, diff_r));
  } else {
    // No attribute can grow: never an old version.
    body.push_back(Compare(LiteralKind::kNotEqual, {lhs[0]}, {lhs[0]}));
  }
}

// Match atom layout of one MD: the two leading atoms' (tid, vars...).
struct MatchShape {
  std::string md;
  std::array<std::string, 2> relation;
  std::array<std::size_t, 2> arity{0, 0};
  std::array<std::size_t, 2> rhs_position{0, 0};
  std::string rhs_domain;

  std::size_t width() const { return arity[0] + arity[1] + 2; }
};

MatchShape ShapeOf(const Md &md) {
  MatchShape s;
  s.md = md.name;
  for (int side = 0; side < 2; ++side) {
    s.relation[side] = md.leading_atom(side).relation;
    s.arity[side] = md.leading_atom(side).vars.size();
    s.rhs_position[side] = md.rhs_position[side];
  }
  s.rhs_domain = md.rhs_domain;
  return s;
}

}  // namespace

std::string relation_predicate(const std::string &relation) {
  return Lower(relation);
}
std::string clean_predicate(const std::string &relation) {
  return Lower(relation) + "_c";
}
std::string version_predicate(const std::string &relation) {
  return Lower(relation) + "_prime";
}
std::string old_version_predicate(const std::string &relation) {
  return "oldversion_" + Lower(relation);
}
std::string match_predicate(const std::string &md) { return "match_" + Lower(md); }
std::string not_match_predicate(const std::string &md) {
  return "notmatch_" + Lower(md);
}
std::string mf_predicate(const std::string &domain) { return "m_" + Lower(domain); }
std::string sim_predicate(const std::string &domain) {
  return "sim_" + Lower(domain);
}

const AspBlock &AspProgram::block(int number) const {
  for (const AspBlock &b : blocks) {
    if (b.number == number) return b;
  }
  throw ValidationError("no block " + std::to_string(number));
}

std::string AspProgram::text() const {
  std::string out;
  for (const AspBlock &b : blocks) {
    out += "% " + std::to_string(b.number) + ". " + b.title + "\n";
    out += datalog::print_rules(b.rules);
    out += "\n";
  }
  return out;
}

datalog::Relation instance_rows(const Instance &instance,
                                const std::string &relation) {
  datalog::Relation rows;
  for (const auto &[tid, tuple] : instance.tuples(relation)) {
    datalog::Row row{tid};
    row.insert(row.end(), tuple.begin(), tuple.end());
    rows.insert(std::move(row));
  }
  return rows;
}

AspProgram emit_general_asp(const MdSet &mds, const Instance &instance,
                            const SimilarityRelation &sim,
                            const MatchingFunction &mf) {
  const Schema &schema = instance.schema();
  const std::set<std::string> versioned = VersionedRelations(mds);
  AspProgram program;
  program.blocks = {{1, "facts", {}},
                    {2, "match or not, old versions, enforcement", {}},
                    {3, "new tuple versions", {}},
                    {4, "order of matchings on different versions", {}},
                    {5, "order of matchings on one version", {}},
                    {6, "matching order is a partial order", {}},
                    {7, "clean relations", {}}};
  auto block = [&](int n) -> std::vector<Rule> & {
    return program.blocks[n - 1].rules;
  };

  // 1. Facts.
  for (const Relation &r : schema.relations()) {
    for (const auto &[tid, tuple] : instance.tuples(r.name())) {
      std::vector<std::string> values{tid};
      values.insert(values.end(), tuple.begin(), tuple.end());
      block(1).push_back(Fact(version_predicate(r.name()), values));
    }
  }
  const ActiveValues active = collect_active_values(instance, sim, mf);
  std::set<std::string> rhs_domains, sim_domains;
  for (const Md &md : mds) {
    rhs_domains.insert(md.rhs_domain);
    for (const SimilarityConstraint &s : md.similarities) {
      sim_domains.insert(md.domain_of(s));
    }
  }
  // Versioned relations compare whole tuples, so every MF domain they use
  // needs its table.
  std::set<std::string> order_domains = rhs_domains;
  for (const std::string &r : versioned) {
    for (const std::string &d : AttributeDomains(schema.at(r))) {
      if (mf.has_domain(d)) order_domains.insert(d);
    }
  }
  std::map<std::string, std::set<Value>> universe;
  for (const std::string &d : order_domains) {
    universe[d] = MaterializedValues(d, active, mf);
    for (const Value &a : universe[d]) {
      for (const Value &b : universe[d]) {
        if (std::optional<Value> r = mf.try_match(d, a, b)) {
          block(1).push_back(Fact(mf_predicate(d), {a, b, *r}));
        }
      }
    }
  }
  for (const std::string &d : sim_domains) {
    std::set<Value> values = universe.count(d) ? universe[d] : std::set<Value>{};
    if (auto it = active.find(d); it != active.end()) {
      values.insert(it->second.begin(), it->second.end());
    }
    for (const Value &a : values) {
      for (const Value &b : values) {
        bool holds = sim.has_domain(d) ? sim.similar(d, a, b) : a == b;
        if (holds) block(1).push_back(Fact(sim_predicate(d), {a, b}));
      }
    }
  }

  // 2. Match or NotMatch, symmetry, old versions, and the NotMatch filter.
  for (const Md &md : mds) {
    VarNamer names;
    const MdAtom &lead0 = md.leading_atom(0);
    const MdAtom &lead1 = md.leading_atom(1);
    std::vector<Term> side0 = AtomTerms(lead0, names);
    std::vector<Term> side1 = AtomTerms(lead1, names);
    std::vector<Literal> body{Atom(version_predicate(lead0.relation), side0),
                              Atom(version_predicate(lead1.relation), side1)};
    for (std::size_t i = 0; i < md.atoms.size(); ++i) {
      if (i == md.leading[0] || i == md.leading[1]) continue;
      body.push_back(Atom(version_predicate(md.atoms[i].relation),
                          AtomTerms(md.atoms[i], names)));
    }
    for (const SimilarityConstraint &s : md.similarities) {
      body.push_back(Atom(sim_predicate(md.domain_of(s)),
                          {V(names.of(s.left)), V(names.of(s.right))}));
    }
    body.push_back(Compare(LiteralKind::kNotEqual, {V(names.of(md.rhs_left))},
                           {V(names.of(md.rhs_right))}));
    std::vector<Term> args = Concat(side0, side1);
    block(2).push_back({{Atom(match_predicate(md.name), args),
                         Atom(not_match_predicate(md.name), args)},
                        body});
    if (lead0.relation == lead1.relation) {
      block(2).push_back({{Atom(match_predicate(md.name), Concat(side1, side0))},
                          {Atom(match_predicate(md.name), args)}});
    }
  }
  for (const std::string &r : versioned) {
    VarNamer names;
    std::vector<Term> lhs{V(names.fresh("T1"))}, rhs{lhs[0]};
    std::vector<Literal> order;
    VersionOrder(AttributeDomains(schema.at(r)), mf, "Z", "W", true, names, lhs,
                 rhs, order);
    std::vector<Literal> body{Atom(version_predicate(r), lhs),
                              Atom(version_predicate(r), rhs)};
    body.insert(body.end(), order.begin(), order.end());
    block(2).push_back({{Atom(old_version_predicate(r), lhs)}, body});
  }
  for (const Md &md : mds) {
    VarNamer names;
    std::vector<Term> side0 = AtomTerms(md.leading_atom(0), names);
    std::vector<Term> side1 = AtomTerms(md.leading_atom(1), names);
    block(2).push_back(
        {{},
         {Atom(not_match_predicate(md.name), Concat(side0, side1)),
          Atom(old_version_predicate(md.leading_atom(0).relation), side0, true),
          Atom(old_version_predicate(md.leading_atom(1).relation), side1,
               true)}});
  }

  // 3. New versions of both matched tuples.
  for (const Md &md : mds) {
    VarNamer names;
    std::vector<Term> side0 = AtomTerms(md.leading_atom(0), names);
    std::vector<Term> side1 = AtomTerms(md.leading_atom(1), names);
    std::string merged = names.fresh("Y3");
    for (int side = 0; side < 2; ++side) {
      std::vector<Term> head = side == 0 ? side0 : side1;
      head[1 + md.rhs_position[side]] = V(merged);
      block(3).push_back(
          {{Atom(version_predicate(md.leading_atom(side).relation), head)},
           {Atom(match_predicate(md.name), Concat(side0, side1)),
            Atom(mf_predicate(md.rhs_domain),
                 {V(names.of(md.rhs_left)), V(names.of(md.rhs_right)),
                  V(merged)})}});
    }
  }

  // 4-6. Prec over pairs of Match tuples, padded to a common width.
  std::vector<MatchShape> shapes;
  std::size_t width = 0;
  for (const Md &md : mds) {
    shapes.push_back(ShapeOf(md));
    width = std::max(width, shapes.back().width());
  }
  auto pad = [&](std::vector<Term> terms) {
    while (terms.size() < width) terms.push_back(Term::constant("nil"));
    return terms;
  };
  // Match arguments with the shared tuple on side `common`.
  auto match_args = [](const MatchShape &s, int common,
                       const std::vector<Term> &shared,
                       const std::string &other_tid,
                       const std::string &other_prefix, VarNamer &names) {
    std::vector<Term> other{V(names.fresh(other_tid))};
    for (std::size_t i = 0; i < s.arity[1 - common]; ++i) {
      other.push_back(V(names.fresh(other_prefix + std::to_string(i + 1))));
    }
    return common == 0 ? Concat(shared, other) : Concat(other, shared);
  };
  for (const MatchShape &si : shapes) {
    for (const MatchShape &sj : shapes) {
      for (int p = 0; p < 2; ++p) {
        for (int q = 0; q < 2; ++q) {
          if (si.relation[p] != sj.relation[q]) continue;
          const std::string &rel = si.relation[p];
          std::vector<std::string> domains = AttributeDomains(schema.at(rel));
          {
            // 4. The matching on the smaller version goes first.
            VarNamer names;
            std::string t1 = names.fresh("T1");
            std::vector<Term> z{V(t1)}, z2{V(t1)};
            std::vector<Literal> order;
            VersionOrder(domains, mf, "Z", "W", true, names, z, z2, order);
            std::vector<Term> a = match_args(si, p, z, "T2", "U", names);
            std::vector<Term> b = match_args(sj, q, z2, "T3", "S", names);
            std::vector<Literal> body{Atom(match_predicate(si.md), a),
                                      Atom(match_predicate(sj.md), b)};
            body.insert(body.end(), order.begin(), order.end());
            block(4).push_back({{Atom("prec", Concat(pad(a), pad(b)))}, body});
          }
          {
            // 5. On one version, the matching that changes it goes last.
            VarNamer names;
            std::vector<Term> z{V(names.fresh("T1"))};
            for (std::size_t i = 0; i < domains.size(); ++i) {
              z.push_back(V(names.fresh("Z" + std::to_string(i + 1))));
            }
            std::vector<Term> a = match_args(si, p, z, "T2", "U", names);
            std::vector<Term> b = match_args(sj, q, z, "T3", "S", names);
            const Term &own = b[(q == 0 ? 0 : sj.arity[0] + 1) + 1 +
                                sj.rhs_position[q]];
            const Term &other = b[(q == 0 ? sj.arity[0] + 1 : 0) + 1 +
                                  sj.rhs_position[1 - q]];
            std::string merged = names.fresh("Y4");
            std::vector<Literal> body{
                Atom(match_predicate(si.md), a),
                Atom(match_predicate(sj.md), b),
                Atom(mf_predicate(sj.rhs_domain), {own, other, V(merged)}),
                Compare(LiteralKind::kNotEqual, {own}, {V(merged)})};
            block(5).push_back({{Atom("prec", Concat(pad(a), pad(b)))}, body});
          }
        }
      }
    }
  }
  for (const MatchShape &s : shapes) {
    VarNamer names;
    std::vector<Term> z{V(names.fresh("T1"))};
    for (std::size_t i = 0; i < s.arity[0]; ++i) {
      z.push_back(V(names.fresh("Z" + std::to_string(i + 1))));
    }
    std::vector<Term> a = match_args(s, 0, z, "T2", "U", names);
    block(6).push_back(
        {{Atom("prec", Concat(pad(a), pad(a)))}, {Atom(match_predicate(s.md), a)}});
  }
  if (!shapes.empty()) {
    std::vector<Term> p, q, r;
    for (std::size_t i = 0; i < width; ++i) {
      p.push_back(V("P" + std::to_string(i + 1)));
      q.push_back(V("Q" + std::to_string(i + 1)));
      r.push_back(V("R" + std::to_string(i + 1)));
    }
    block(6).push_back({{},
                        {Atom("prec", Concat(p, q)), Atom("prec", Concat(q, p)),
                         Compare(LiteralKind::kNotEqual, p, q)}});
    block(6).push_back({{},
                        {Atom("prec", Concat(p, q)), Atom("prec", Concat(q, r)),
                         Atom("prec", Concat(p, r), true)}});
  }

  // 7. Clean relations: versions never superseded.
  for (const Relation &r : schema.relations()) {
    std::vector<Term> z{V("T1")};
    for (std::size_t i = 0; i < r.arity(); ++i) {
      z.push_back(V("Z" + std::to_string(i + 1)));
    }
    std::vector<Literal> body{Atom(version_predicate(r.name()), z)};
    if (versioned.count(r.name())) {
      body.push_back(Atom(old_version_predicate(r.name()), z, true));
    }
    block(7).push_back({{Atom(clean_predicate(r.name()), z)}, body});
  }
  return program;
}

datalog::Program emit_residual_datalog(const MdSet &mds,
                                       const Instance &instance,
                                       const SimilarityRelation &sim,
                                       const MatchingFunction &mf,
                                       const Classification &classification) {
  if (classification.verdict == Verdict::kGeneral) {
    throw NotSci(
        "the MDs and instance are classified General; the residual program "
        "is only sound for single-clean-instance inputs");
  }
  const Schema &schema = instance.schema();
  const std::set<std::string> versioned = VersionedRelations(mds);
  datalog::Program program;
  program.sim = sim;
  program.mf = mf;
  std::vector<Rule> &rules = program.rules;

  for (const Relation &r : schema.relations()) {
    for (const auto &[tid, tuple] : instance.tuples(r.name())) {
      std::vector<std::string> values{tid};
      values.insert(values.end(), tuple.begin(), tuple.end());
      rules.push_back(Fact(relation_predicate(r.name()), values));
    }
  }
  // Matches over every version, no choice and no ordering.
  for (const Md &md : mds) {
    VarNamer names;
    std::vector<Term> side0 = AtomTerms(md.leading_atom(0), names);
    std::vector<Term> side1 = AtomTerms(md.leading_atom(1), names);
    std::vector<Literal> body{
        Atom(relation_predicate(md.leading_atom(0).relation), side0),
        Atom(relation_predicate(md.leading_atom(1).relation), side1)};
    for (std::size_t i = 0; i < md.atoms.size(); ++i) {
      if (i == md.leading[0] || i == md.leading[1]) continue;
      body.push_back(Atom(relation_predicate(md.atoms[i].relation),
                          AtomTerms(md.atoms[i], names)));
    }
    for (const SimilarityConstraint &s : md.similarities) {
      body.push_back(Builtin(LiteralKind::kSim, md.domain_of(s),
                             {V(names.of(s.left)), V(names.of(s.right))}));
    }
    body.push_back(Compare(LiteralKind::kNotEqual, {V(names.of(md.rhs_left))},
                           {V(names.of(md.rhs_right))}));
    rules.push_back({{Atom(match_predicate(md.name), Concat(side0, side1))}, body});
  }
  for (const Md &md : mds) {
    VarNamer names;
    std::vector<Term> side0 = AtomTerms(md.leading_atom(0), names);
    std::vector<Term> side1 = AtomTerms(md.leading_atom(1), names);
    std::string merged = names.fresh("Y3");
    for (int side = 0; side < 2; ++side) {
      std::vector<Term> head = side == 0 ? side0 : side1;
      head[1 + md.rhs_position[side]] = V(merged);
      rules.push_back(
          {{Atom(relation_predicate(md.leading_atom(side).relation), head)},
           {Atom(match_predicate(md.name), Concat(side0, side1)),
            Builtin(LiteralKind::kMatch, md.rhs_domain,
                    {V(names.of(md.rhs_left)), V(names.of(md.rhs_right)),
                     V(merged)})}});
    }
  }
  for (const std::string &r : versioned) {
    VarNamer names;
    std::vector<Term> lhs{V(names.fresh("T1"))}, rhs{lhs[0]};
    std::vector<Literal> order;
    VersionOrder(AttributeDomains(schema.at(r)), mf, "Z", "W", false, names,
                 lhs, rhs, order);
    std::vector<Literal> body{Atom(relation_predicate(r), lhs),
                              Atom(relation_predicate(r), rhs)};
    body.insert(body.end(), order.begin(), order.end());
    rules.push_back({{Atom(old_version_predicate(r), lhs)}, body});
  }
  for (const Relation &r : schema.relations()) {
    std::vector<Term> z{V("T1")};
    for (std::size_t i = 0; i < r.arity(); ++i) {
      z.push_back(V("Z" + std::to_string(i + 1)));
    }
    std::vector<Literal> body{Atom(relation_predicate(r.name()), z)};
    if (versioned.count(r.name())) {
      body.push_back(Atom(old_version_predicate(r.name()), z, true));
    }
    rules.push_back({{Atom(clean_predicate(r.name()), z)}, body});
  }
  return program;
}

}  // namespace mdclean
