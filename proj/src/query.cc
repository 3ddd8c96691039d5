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

#include "mdclean/query.h"

#include <cctype>

#include "mdclean/error.h"
#include "scanner.h"

namespace mdclean {

namespace {

using internal::Scanner;
using internal::Token;

bool LooksLikeVariable(const std::string &s) {
  return !s.empty() &&
         (std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_');
}

Term ParseTerm(Scanner &in) {
  Token t = in.next();
  if (t.kind == Token::Kind::kString) return Term::constant(t.text);
  if (t.kind != Token::Kind::kIdent) in.fail(t, "expected a term");
  return LooksLikeVariable(t.text) ? Term::var(t.text) : Term::constant(t.text);
}

std::string PrintTerm(const Term &t) {
  if (t.is_variable()) return t.text;
  if (internal::is_plain_identifier(t.text) && !LooksLikeVariable(t.text)) {
    return t.text;
  }
  return internal::quote(t.text);
}

// Compiled form of a query: variables numbered, atoms ordered so that each
// one shares as many variables as possible with its predecessors, and every
// constraint attached to the first level where its variables are bound.
struct Plan {
  struct Slot {
    bool is_var = false;
    int var = -1;
    std::string constant;
  };
  struct Atom {
    std::string relation;
    Slot tid;
    std::vector<Slot> args;
  };
  struct Check {
    enum class Kind { kSimilar, kDistinct } kind;
    Slot left;
    Slot right;
    std::string domain;
  };

  std::vector<std::string> var_names;
  std::vector<Atom> atoms;
  // checks[k] run after atoms[0..k] are matched; checks_before run first.
  std::vector<std::vector<Check>> checks;
  std::vector<Check> checks_before;
};

Plan Compile(const ConjunctiveQuery &q) {
  Plan plan;
  std::map<std::string, int> ids;
  auto slot = [&](const Term &t) {
    Plan::Slot s;
    if (t.is_variable()) {
      s.is_var = true;
      auto [it, inserted] = ids.emplace(t.text, static_cast<int>(ids.size()));
      if (inserted) plan.var_names.push_back(t.text);
      s.var = it->second;
    } else {
      s.constant = t.text;
    }
    return s;
  };

  std::vector<bool> used(q.atoms.size(), false);
  std::set<std::string> bound;
  std::vector<std::set<std::string>> bound_after;
  for (std::size_t step = 0; step < q.atoms.size(); ++step) {
    std::size_t best = q.atoms.size();
    int best_score = -1;
    for (std::size_t i = 0; i < q.atoms.size(); ++i) {
      if (used[i]) continue;
      const QueryAtom &a = q.atoms[i];
      int score = 0;
      if (!a.tid.is_variable() || bound.count(a.tid.text)) score += 1000;
      for (const Term &t : a.args) {
        if (!t.is_variable() || bound.count(t.text)) ++score;
      }
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    used[best] = true;
    const QueryAtom &a = q.atoms[best];
    Plan::Atom pa;
    pa.relation = a.relation;
    pa.tid = slot(a.tid);
    if (a.tid.is_variable()) bound.insert(a.tid.text);
    for (const Term &t : a.args) {
      pa.args.push_back(slot(t));
      if (t.is_variable()) bound.insert(t.text);
    }
    plan.atoms.push_back(std::move(pa));
    bound_after.push_back(bound);
  }
  plan.checks.resize(plan.atoms.size());

  auto attach = [&](Plan::Check check, const Term &l, const Term &r) {
    auto ready = [&](const std::set<std::string> &b) {
      return (!l.is_variable() || b.count(l.text)) &&
             (!r.is_variable() || b.count(r.text));
    };
    if (ready({})) {
      plan.checks_before.push_back(std::move(check));
      return;
    }
    for (std::size_t k = 0; k < bound_after.size(); ++k) {
      if (ready(bound_after[k])) {
        plan.checks[k].push_back(std::move(check));
        return;
      }
    }
    throw ValidationError("query " + q.name + ": variable in " + l.text +
                          " / " + r.text + " does not occur in a body atom");
  };
  for (const QuerySimilarity &s : q.similarities) {
    attach({Plan::Check::Kind::kSimilar, slot(s.left), slot(s.right), s.domain},
           s.left, s.right);
  }
  for (const QueryDistinct &d : q.distinct) {
    attach({Plan::Check::Kind::kDistinct, slot(d.left), slot(d.right), {}},
           d.left, d.right);
  }
  return plan;
}

class Matcher {
 public:
  Matcher(const Instance &instance, const SimilarityRelation &sim,
          const Plan &plan,
          const std::function<bool(const std::vector<const std::string *> &)>
              &visit)
      : instance_(instance), sim_(sim), plan_(plan), visit_(visit),
        values_(plan.var_names.size(), nullptr) {}

  bool run() {
    if (!checks_pass(plan_.checks_before)) return true;
    return match(0);
  }

 private:
  const std::string &value(const Plan::Slot &s) const {
    return s.is_var ? *values_[s.var] : s.constant;
  }

  bool checks_pass(const std::vector<Plan::Check> &checks) const {
    for (const Plan::Check &c : checks) {
      const std::string &l = value(c.left);
      const std::string &r = value(c.right);
      if (c.kind == Plan::Check::Kind::kDistinct) {
        if (l == r) return false;
      } else if (!sim_.similar(c.domain, l, r)) {
        return false;
      }
    }
    return true;
  }

  // Binds `s` to `v` or checks it; records newly bound variables.
  bool unify(const Plan::Slot &s, const std::string &v,
             std::vector<int> &newly) {
    if (!s.is_var) return s.constant == v;
    if (values_[s.var] != nullptr) return *values_[s.var] == v;
    values_[s.var] = &v;
    newly.push_back(s.var);
    return true;
  }

  bool try_tuple(std::size_t level, const Tid &tid, const Tuple &tuple) {
    const Plan::Atom &atom = plan_.atoms[level];
    std::vector<int> newly;
    bool ok = unify(atom.tid, tid, newly);
    for (std::size_t i = 0; ok && i < atom.args.size(); ++i) {
      ok = unify(atom.args[i], tuple[i], newly);
    }
    bool keep_going = true;
    if (ok && checks_pass(plan_.checks[level])) keep_going = match(level + 1);
    for (int v : newly) values_[v] = nullptr;
    return keep_going;
  }

  bool match(std::size_t level) {
    if (level == plan_.atoms.size()) return visit_(values_);
    const Plan::Atom &atom = plan_.atoms[level];
    const bool tid_known = !atom.tid.is_var || values_[atom.tid.var] != nullptr;
    if (tid_known) {
      const std::string &tid = value(atom.tid);
      if (!instance_.contains(tid) ||
          instance_.relation_of(tid) != atom.relation) {
        return true;
      }
      const TupleMap &tuples = instance_.tuples(atom.relation);
      auto it = tuples.find(tid);
      return try_tuple(level, it->first, it->second);
    }
    for (const auto &[tid, tuple] : instance_.tuples(atom.relation)) {
      if (!try_tuple(level, tid, tuple)) return false;
    }
    return true;
  }

  const Instance &instance_;
  const SimilarityRelation &sim_;
  const Plan &plan_;
  const std::function<bool(const std::vector<const std::string *> &)> &visit_;
  std::vector<const std::string *> values_;
};

std::vector<bool> TidOnlyVariables(const ConjunctiveQuery &q) {
  std::set<std::string> at_tid;
  std::set<std::string> at_attr;
  for (const QueryAtom &a : q.atoms) {
    if (a.tid.is_variable()) at_tid.insert(a.tid.text);
    for (const Term &t : a.args) {
      if (t.is_variable()) at_attr.insert(t.text);
    }
  }
  std::vector<bool> out;
  for (const Term &h : q.head) {
    out.push_back(h.is_variable() && at_tid.count(h.text) &&
                  !at_attr.count(h.text));
  }
  return out;
}

}  // namespace

ConjunctiveQuery parse_query(std::string_view text, std::string_view source) {
  Scanner in(text, std::string(source), "%#");
  ConjunctiveQuery q;
  q.name = in.expect_ident("query name").text;
  in.expect("(");
  if (!in.is_punct(")")) {
    q.head.push_back(ParseTerm(in));
    while (in.accept(",")) q.head.push_back(ParseTerm(in));
  }
  in.expect(")");
  in.expect(":-");
  do {
    if (in.peek().kind == Token::Kind::kIdent && in.is_punct("(", 1)) {
      QueryAtom atom;
      atom.relation = in.next().text;
      in.expect("(");
      atom.tid = ParseTerm(in);
      while (in.accept(",")) atom.args.push_back(ParseTerm(in));
      in.expect(")");
      q.atoms.push_back(std::move(atom));
      continue;
    }
    Term left = ParseTerm(in);
    if (in.accept("!=")) {
      q.distinct.push_back({left, ParseTerm(in)});
      continue;
    }
    in.expect("~");
    QuerySimilarity s;
    s.left = left;
    if (in.peek().kind == Token::Kind::kIdent && in.is_punct("~", 1)) {
      s.domain = in.next().text;
      in.next();
    }
    s.right = ParseTerm(in);
    q.similarities.push_back(std::move(s));
  } while (in.accept(","));
  in.expect(".");
  if (!in.at_end()) in.fail(in.peek(), "trailing input after the query");
  return q;
}

std::string print_query(const ConjunctiveQuery &q) {
  std::string out = q.name + "(";
  for (std::size_t i = 0; i < q.head.size(); ++i) {
    if (i) out += ", ";
    out += PrintTerm(q.head[i]);
  }
  out += ") :- ";
  bool first = true;
  auto sep = [&] {
    if (!first) out += ", ";
    first = false;
  };
  for (const QueryAtom &a : q.atoms) {
    sep();
    out += a.relation + "(" + PrintTerm(a.tid);
    for (const Term &t : a.args) out += ", " + PrintTerm(t);
    out += ")";
  }
  for (const QuerySimilarity &s : q.similarities) {
    sep();
    out += PrintTerm(s.left) +
           (s.domain.empty() ? " ~ " : " ~" + s.domain + "~ ") +
           PrintTerm(s.right);
  }
  for (const QueryDistinct &d : q.distinct) {
    sep();
    out += PrintTerm(d.left) + " != " + PrintTerm(d.right);
  }
  out += ".";
  return out;
}

void resolve_query(ConjunctiveQuery &q, const Schema &schema) {
  std::map<std::string, std::string> var_domain;
  std::set<std::string> vars;
  for (const QueryAtom &a : q.atoms) {
    const Relation &rel = schema.at(a.relation);
    if (a.args.size() != rel.arity()) {
      throw ValidationError("query " + q.name + ": atom " + a.relation +
                            " has " + std::to_string(a.args.size() + 1) +
                            " arguments, expected " +
                            std::to_string(rel.arity() + 1) +
                            " (identifier first)");
    }
    if (a.tid.is_variable()) vars.insert(a.tid.text);
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (!a.args[i].is_variable()) continue;
      vars.insert(a.args[i].text);
      var_domain.emplace(a.args[i].text, rel.domain_at(i));
    }
  }
  for (const Term &h : q.head) {
    if (h.is_variable() && !vars.count(h.text)) {
      throw ValidationError("query " + q.name + ": head variable " + h.text +
                            " does not occur in the body");
    }
  }
  for (QuerySimilarity &s : q.similarities) {
    std::string inferred;
    for (const Term *t : {&s.left, &s.right}) {
      if (!t->is_variable()) continue;
      auto it = var_domain.find(t->text);
      if (it == var_domain.end()) {
        throw ValidationError("query " + q.name + ": similarity variable " +
                              t->text +
                              " does not occur at an attribute position");
      }
      if (!inferred.empty() && inferred != it->second) {
        throw ValidationError("query " + q.name +
                              ": similarity relates incomparable domains " +
                              inferred + " and " + it->second);
      }
      inferred = it->second;
    }
    if (s.domain.empty()) {
      if (inferred.empty()) {
        throw ValidationError("query " + q.name +
                              ": similarity between constants needs a domain");
      }
      s.domain = inferred;
    } else if (!inferred.empty() && inferred != s.domain) {
      throw ValidationError("query " + q.name + ": similarity domain " +
                            s.domain + " does not match attribute domain " +
                            inferred);
    }
  }
  for (const QueryDistinct &d : q.distinct) {
    for (const Term *t : {&d.left, &d.right}) {
      if (t->is_variable() && !vars.count(t->text)) {
        throw ValidationError("query " + q.name + ": variable " + t->text +
                              " does not occur in a body atom");
      }
    }
  }
}

bool for_each_binding(const Instance &instance, const SimilarityRelation &sim,
                      const ConjunctiveQuery &query,
                      const std::function<bool(const Binding &)> &visit) {
  const Plan plan = Compile(query);
  std::function<bool(const std::vector<const std::string *> &)> adapter =
      [&](const std::vector<const std::string *> &values) {
        Binding b;
        for (std::size_t i = 0; i < values.size(); ++i) {
          b.emplace(plan.var_names[i], *values[i]);
        }
        return visit(b);
      };
  Matcher m(instance, sim, plan, adapter);
  return m.run();
}

std::vector<std::string> query_variables(const ConjunctiveQuery &query) {
  return Compile(query).var_names;
}

bool for_each_row(const Instance &instance, const SimilarityRelation &sim,
                  const ConjunctiveQuery &query,
                  const std::function<bool(const std::vector<const std::string *> &)>
                      &visit) {
  const Plan plan = Compile(query);
  Matcher m(instance, sim, plan, visit);
  return m.run();
}

std::optional<Binding> first_binding(const Instance &instance,
                                     const SimilarityRelation &sim,
                                     const ConjunctiveQuery &query) {
  std::optional<Binding> found;
  for_each_binding(instance, sim, query, [&](const Binding &b) {
    found = b;
    return false;
  });
  return found;
}

AnswerSet eval_cq(const Instance &instance, const ConjunctiveQuery &query,
                  const SimilarityRelation &sim) {
  AnswerSet out;
  out.arity = query.head.size();
  for_each_binding(instance, sim, query, [&](const Binding &b) {
    std::vector<Value> row;
    row.reserve(query.head.size());
    for (const Term &h : query.head) {
      row.push_back(h.is_variable() ? b.at(h.text) : h.text);
    }
    out.rows.insert(std::move(row));
    return true;
  });
  return out;
}

AnswerSet certain_answers(std::span<const Instance> clean,
                          const ConjunctiveQuery &query,
                          const SimilarityRelation &sim,
                          CertainAnswerOptions options) {
  if (clean.empty()) {
    throw EmptyCleanSet("certain answers over an empty set of clean instances");
  }
  ConjunctiveQuery projected = query;
  if (!options.include_tids) {
    const std::vector<bool> tid_only = TidOnlyVariables(query);
    projected.head.clear();
    for (std::size_t i = 0; i < query.head.size(); ++i) {
      if (!tid_only[i]) projected.head.push_back(query.head[i]);
    }
  }
  AnswerSet result = eval_cq(clean.front(), projected, sim);
  for (std::size_t i = 1; i < clean.size() && !result.rows.empty(); ++i) {
    const AnswerSet next = eval_cq(clean[i], projected, sim);
    std::set<std::vector<Value>> kept;
    for (const auto &row : result.rows) {
      if (next.rows.count(row)) kept.insert(row);
    }
    result.rows = std::move(kept);
  }
  return result;
}

ConjunctiveQuery lhs_query(const Md &md) {
  if (!md.bound) throw PreconditionViolation("md " + md.name + " is unbound");
  ConjunctiveQuery q;
  q.name = md.name;
  std::vector<std::size_t> order = {md.leading[0], md.leading[1]};
  for (std::size_t i = 0; i < md.atoms.size(); ++i) {
    if (i != md.leading[0] && i != md.leading[1]) order.push_back(i);
  }
  for (std::size_t i : order) {
    const MdAtom &a = md.atoms[i];
    QueryAtom qa;
    qa.relation = a.relation;
    qa.tid = Term::var(a.tid_var);
    for (const std::string &v : a.vars) qa.args.push_back(Term::var(v));
    q.atoms.push_back(std::move(qa));
    q.head.push_back(Term::var(a.tid_var));
  }
  for (const SimilarityConstraint &s : md.similarities) {
    q.similarities.push_back(
        {Term::var(s.left), Term::var(s.right), md.domain_of(s)});
  }
  return q;
}

}  // namespace mdclean
