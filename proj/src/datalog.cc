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

#include "mdclean/datalog.h"

#include <algorithm>
#include <functional>
#include <optional>
#include <unordered_map>

#include "mdclean/error.h"
#include "scanner.h"

namespace mdclean::datalog {

using internal::Scanner;
using internal::Token;

Literal Literal::atom(std::string predicate, std::vector<Term> args,
                      bool negated) {
  Literal l;
  l.kind = LiteralKind::kAtom;
  l.negated = negated;
  l.name = std::move(predicate);
  l.args = std::move(args);
  return l;
}

namespace {

bool IsVariableName(std::string_view s) {
  return !s.empty() && (std::isupper(static_cast<unsigned char>(s[0])) ||
                        s[0] == '_');
}

// ---------------------------------------------------------------- parsing

class Parser {
 public:
  Parser(std::string_view text, std::string_view source)
      : scan_(text, std::string(source), "%") {}

  std::vector<Rule> rules() {
    std::vector<Rule> out;
    while (!scan_.at_end()) out.push_back(statement());
    return out;
  }

 private:
  Rule statement() {
    Rule r;
    if (!scan_.is_punct(":-")) {
      r.head.push_back(head_atom());
      while (scan_.accept("|")) r.head.push_back(head_atom());
    }
    if (scan_.accept(":-")) {
      r.body.push_back(literal());
      while (scan_.accept(",")) r.body.push_back(literal());
    }
    scan_.expect(".");
    return r;
  }

  Term term() {
    Token t = scan_.next();
    if (t.kind == Token::Kind::kString) return Term::constant(t.text);
    if (t.kind != Token::Kind::kIdent) scan_.fail(t, "expected a term");
    if (IsVariableName(t.text)) return Term::var(t.text);
    return Term::constant(t.text);
  }

  std::vector<Term> term_list() {
    std::vector<Term> out;
    scan_.expect("(");
    if (!scan_.is_punct(")")) {
      out.push_back(term());
      while (scan_.accept(",")) out.push_back(term());
    }
    scan_.expect(")");
    return out;
  }

  Literal head_atom() {
    Token name = scan_.expect_ident("predicate name");
    if (IsVariableName(name.text)) {
      scan_.fail(name, "predicate names must start with a lower-case letter");
    }
    std::vector<Term> args;
    if (scan_.is_punct("(")) args = term_list();
    return Literal::atom(name.text, std::move(args));
  }

  Literal literal() {
    if (scan_.is_ident("not") && scan_.peek(1).kind == Token::Kind::kIdent) {
      scan_.next();
      Literal l = head_atom();
      l.negated = true;
      return l;
    }
    if (scan_.is_punct("(")) {
      Literal l;
      l.args = term_list();
      comparison(l);
      l.rhs = term_list();
      if (l.args.size() != l.rhs.size()) {
        scan_.fail(scan_.peek(), "tuple comparison of different widths");
      }
      return l;
    }
    const Token &first = scan_.peek();
    if (first.kind == Token::Kind::kIdent && !IsVariableName(first.text) &&
        !scan_.is_punct("!=", 1) && !scan_.is_punct("=", 1)) {
      Token name = first;
      Literal l = head_atom();
      static const std::map<std::string, std::pair<LiteralKind, std::size_t>>
          kBuiltins = {{"sim", {LiteralKind::kSim, 3}},
                       {"mf", {LiteralKind::kMatch, 4}},
                       {"pre", {LiteralKind::kPrecedes, 3}}};
      auto it = kBuiltins.find(l.name);
      if (it == kBuiltins.end()) return l;
      auto [kind, arity] = it->second;
      if (l.args.size() != arity || l.args[0].is_variable()) {
        scan_.fail(name, l.name + " takes a domain name and " +
                             std::to_string(arity - 1) + " arguments");
      }
      Literal b;
      b.kind = kind;
      b.name = l.args[0].text;
      b.args.assign(l.args.begin() + 1, l.args.end());
      return b;
    }
    Literal l;
    l.args.push_back(term());
    comparison(l);
    l.rhs.push_back(term());
    return l;
  }

  void comparison(Literal &l) {
    if (scan_.accept("!=")) {
      l.kind = LiteralKind::kNotEqual;
    } else if (scan_.accept("=")) {
      l.kind = LiteralKind::kEqual;
    } else {
      scan_.fail(scan_.peek(), "expected != or =");
    }
  }

  Scanner scan_;
};

std::string PrintTerm(const Term &t) {
  return t.is_variable() ? t.text : print_constant(t.text);
}

std::string PrintTerms(const std::vector<Term> &terms) {
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) out += ", ";
    out += PrintTerm(terms[i]);
  }
  return out;
}

std::string PrintLiteral(const Literal &l) {
  switch (l.kind) {
    case LiteralKind::kAtom: {
      std::string out = l.negated ? "not " + l.name : l.name;
      if (!l.args.empty()) out += "(" + PrintTerms(l.args) + ")";
      return out;
    }
    case LiteralKind::kSim:
    case LiteralKind::kMatch:
    case LiteralKind::kPrecedes: {
      const char *name = l.kind == LiteralKind::kSim     ? "sim"
                         : l.kind == LiteralKind::kMatch ? "mf"
                                                         : "pre";
      return std::string(name) + "(" + print_constant(l.name) + ", " +
             PrintTerms(l.args) + ")";
    }
    case LiteralKind::kNotEqual:
    case LiteralKind::kEqual: {
      const char *op = l.kind == LiteralKind::kNotEqual ? " != " : " = ";
      if (l.args.size() == 1) {
        return PrintTerm(l.args[0]) + op + PrintTerm(l.rhs[0]);
      }
      return "(" + PrintTerms(l.args) + ")" + op + "(" + PrintTerms(l.rhs) +
             ")";
    }
  }
  return {};
}

std::string ConstantOf(const Term &t, const char *what) {
  if (t.is_variable()) {
    throw ValidationError(std::string(what) + " facts must be ground");
  }
  return t.text;
}

}  // namespace

std::string print_constant(const std::string &value) {
  bool plain = !value.empty() && value[0] >= 'a' && value[0] <= 'z' &&
               value != "not";
  for (char c : value) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
      plain = false;
    }
  }
  return plain ? value : internal::quote(value);
}

std::vector<Rule> parse_rules(std::string_view text, std::string_view source) {
  return Parser(text, source).rules();
}

Program parse_program(std::string_view text, std::string_view source) {
  Program p;
  MatchingFunction mf;
  for (Rule &r : parse_rules(text, source)) {
    if (r.head.size() != 1) {
      throw ValidationError(std::string(source) +
                            ": disjunctive rules and constraints cannot be "
                            "evaluated: " +
                            print_rule(r));
    }
    const Literal &h = r.head[0];
    if (r.body.empty()) {
      if (h.name == "sim" && h.args.size() == 3) {
        std::string d = ConstantOf(h.args[0], "sim");
        p.sim.add_domain(d);
        p.sim.declare(d, ConstantOf(h.args[1], "sim"),
                      ConstantOf(h.args[2], "sim"));
        continue;
      }
      if (h.name == "mf" && h.args.size() == 4) {
        std::string d = ConstantOf(h.args[0], "mf");
        mf.add_domain(d);
        mf.declare(d, ConstantOf(h.args[1], "mf"), ConstantOf(h.args[2], "mf"),
                   ConstantOf(h.args[3], "mf"));
        continue;
      }
      if (h.name == "sim_builtin" && h.args.size() == 2) {
        std::string d = ConstantOf(h.args[0], "sim_builtin");
        std::string b = ConstantOf(h.args[1], "sim_builtin");
        p.sim.add_domain(d);
        if (b == "token-overlap") {
          p.sim.set_builtin(d, SimilarityBuiltin::kTokenOverlap);
        } else if (b == "equality") {
          p.sim.set_builtin(d, SimilarityBuiltin::kEquality);
        } else {
          throw ValidationError("unknown similarity builtin " + b);
        }
        continue;
      }
      if (h.name == "mf_builtin" && h.args.size() == 2) {
        std::string d = ConstantOf(h.args[0], "mf_builtin");
        std::string b = ConstantOf(h.args[1], "mf_builtin");
        if (b == "token-union") {
          mf.set_builtin(d, MatchBuiltin::kTokenUnion);
        } else if (b == "value-min") {
          mf.set_builtin(d, MatchBuiltin::kValueMin);
        } else if (b == "value-max") {
          mf.set_builtin(d, MatchBuiltin::kValueMax);
        } else {
          throw ValidationError("unknown matching builtin " + b);
        }
        continue;
      }
    }
    p.rules.push_back(std::move(r));
  }
  p.mf = saturate_mf(mf, {});
  return p;
}

std::string print_rule(const Rule &r) {
  std::string out;
  for (std::size_t i = 0; i < r.head.size(); ++i) {
    if (i) out += " | ";
    out += PrintLiteral(r.head[i]);
  }
  if (!r.body.empty()) {
    out += r.head.empty() ? ":- " : " :- ";
    for (std::size_t i = 0; i < r.body.size(); ++i) {
      if (i) out += ", ";
      out += PrintLiteral(r.body[i]);
    }
  }
  return out + ".";
}

std::string print_rules(const std::vector<Rule> &rules) {
  std::string out;
  for (const Rule &r : rules) out += print_rule(r) + "\n";
  return out;
}

std::string print_program(const Program &p) {
  std::string out = print_rules(p.rules);
  for (const std::string &d : p.sim.domains()) {
    SimilarityBuiltin b = p.sim.builtin(d);
    if (b == SimilarityBuiltin::kTokenOverlap) {
      out += "sim_builtin(" + print_constant(d) + ", \"token-overlap\").\n";
    } else if (b == SimilarityBuiltin::kEquality) {
      out += "sim_builtin(" + print_constant(d) + ", \"equality\").\n";
    }
    for (const auto &[a, c] : p.sim.declared(d)) {
      out += "sim(" + print_constant(d) + ", " + print_constant(a) + ", " +
             print_constant(c) + ").\n";
    }
  }
  for (const std::string &d : p.mf.domains()) {
    MatchBuiltin b = p.mf.builtin(d);
    if (b != MatchBuiltin::kNone) {
      out += "mf_builtin(" + print_constant(d) + ", \"" + to_string(b) +
             "\").\n";
      continue;
    }
    for (const auto &[pair, r] : p.mf.table(d)) {
      out += "mf(" + print_constant(d) + ", " + print_constant(pair.first) +
             ", " + print_constant(pair.second) + ", " + print_constant(r) +
             ").\n";
    }
  }
  return out;
}

std::set<std::string> idb_predicates(const Program &p) {
  std::set<std::string> out;
  for (const Rule &r : p.rules) {
    if (!r.body.empty()) {
      for (const Literal &h : r.head) out.insert(h.name);
    }
  }
  return out;
}

// ---------------------------------------------------------- stratification

std::vector<std::vector<std::string>> stratify(const Program &p) {
  std::vector<std::string> names;
  std::map<std::string, int> id;
  auto node = [&](const std::string &n) {
    auto [it, inserted] = id.emplace(n, static_cast<int>(names.size()));
    if (inserted) names.push_back(n);
    return it->second;
  };
  struct Edge {
    int to;
    bool negative;
  };
  std::vector<std::vector<Edge>> out_edges;
  auto grow = [&] { out_edges.resize(names.size()); };
  for (const Rule &r : p.rules) {
    for (const Literal &h : r.head) node(h.name);
    for (const Literal &l : r.body) {
      if (l.kind == LiteralKind::kAtom) node(l.name);
    }
  }
  grow();
  for (const Rule &r : p.rules) {
    for (const Literal &h : r.head) {
      for (const Literal &l : r.body) {
        if (l.kind != LiteralKind::kAtom) continue;
        out_edges[id[l.name]].push_back({id[h.name], l.negated});
      }
    }
  }
  const int n = static_cast<int>(names.size());

  // Tarjan's strongly connected components.
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int counter = 0, comps = 0;
  std::function<void(int)> connect = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (const Edge &e : out_edges[v]) {
      if (index[e.to] < 0) {
        connect(e.to);
        low[v] = std::min(low[v], low[e.to]);
      } else if (on_stack[e.to]) {
        low[v] = std::min(low[v], index[e.to]);
      }
    }
    if (low[v] == index[v]) {
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = comps;
      } while (w != v);
      ++comps;
    }
  };
  for (int v = 0; v < n; ++v) {
    if (index[v] < 0) connect(v);
  }

  for (int v = 0; v < n; ++v) {
    for (const Edge &e : out_edges[v]) {
      if (!e.negative || comp[v] != comp[e.to]) continue;
      // Recover a path e.to -> ... -> v inside the component.
      std::map<int, int> parent{{e.to, -1}};
      std::vector<int> frontier{e.to};
      while (!frontier.empty() && !parent.count(v)) {
        std::vector<int> next;
        for (int u : frontier) {
          for (const Edge &f : out_edges[u]) {
            if (comp[f.to] == comp[v] && !parent.count(f.to)) {
              parent[f.to] = u;
              next.push_back(f.to);
            }
          }
        }
        frontier = std::move(next);
      }
      std::vector<std::string> path;
      for (int u = v; u != -1; u = parent.count(u) ? parent[u] : -1) {
        path.push_back(names[u]);
        if (u == e.to) break;
      }
      std::reverse(path.begin(), path.end());
      std::string cycle = "not " + names[v] + " -> " + names[e.to];
      for (std::size_t i = 1; i < path.size(); ++i) cycle += " -> " + path[i];
      throw NotStratifiable("program is not stratifiable: cycle through "
                            "negation " +
                            cycle);
    }
  }

  // Tarjan numbers components in reverse topological order.
  std::vector<int> level(comps, 0);
  for (int c = comps - 1; c >= 0; --c) {
    for (int v = 0; v < n; ++v) {
      if (comp[v] != c) continue;
      for (const Edge &e : out_edges[v]) {
        if (comp[e.to] == c) continue;
        level[comp[e.to]] =
            std::max(level[comp[e.to]], level[c] + (e.negative ? 1 : 0));
      }
    }
  }
  std::map<int, std::vector<std::string>> by_level;
  for (int v = 0; v < n; ++v) by_level[level[comp[v]]].push_back(names[v]);
  std::vector<std::vector<std::string>> strata;
  for (auto &[lvl, preds] : by_level) {
    std::sort(preds.begin(), preds.end());
    strata.push_back(std::move(preds));
  }
  return strata;
}

// -------------------------------------------------------------- evaluation

const Relation &Model::at(const std::string &predicate) const {
  static const Relation kEmpty;
  auto it = relations.find(predicate);
  return it == relations.end() ? kEmpty : it->second;
}

namespace {

// Variable slots of one rule.
struct Slots {
  std::map<std::string, int> index;
  int of(const std::string &name) {
    return index.emplace(name, static_cast<int>(index.size())).first->second;
  }
};

// Argument compiled to a slot (>= 0) or a constant.
struct Arg {
  int slot = -1;
  std::string constant;
};

struct Step {
  const Literal *literal = nullptr;
  std::vector<Arg> args;
  std::vector<Arg> rhs;
  bool delta = false;
  // For atoms: positions already bound when the step runs.
  std::vector<bool> bound;
};

struct Plan {
  std::vector<Step> steps;
  std::vector<Arg> head;
  int slots = 0;
};

Arg Compile(const Term &t, Slots &slots) {
  if (t.is_variable()) return {slots.of(t.text), {}};
  return {-1, t.text};
}

std::string RuleText(const Rule &r) { return print_rule(r); }

// Orders the body: the delta atom first, then positive atoms by number of
// bound arguments, each filter placed as soon as its inputs are bound.
Plan MakePlan(const Rule &rule, int delta_index) {
  Plan plan;
  Slots slots;
  std::set<std::string> bound;
  auto is_bound = [&](const Term &t) {
    return !t.is_variable() || bound.count(t.text) != 0;
  };
  auto all_bound = [&](const std::vector<Term> &ts) {
    return std::all_of(ts.begin(), ts.end(), is_bound);
  };
  std::vector<bool> placed(rule.body.size(), false);

  auto add_step = [&](std::size_t i, bool delta) {
    const Literal &l = rule.body[i];
    Step s;
    s.literal = &l;
    s.delta = delta;
    for (const Term &t : l.args) {
      s.bound.push_back(is_bound(t));
      s.args.push_back(Compile(t, slots));
    }
    for (const Term &t : l.rhs) s.rhs.push_back(Compile(t, slots));
    placed[i] = true;
    plan.steps.push_back(std::move(s));
  };
  auto bind_all = [&](const std::vector<Term> &ts) {
    for (const Term &t : ts) {
      if (t.is_variable()) bound.insert(t.text);
    }
  };
  auto place_filters = [&] {
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t i = 0; i < rule.body.size(); ++i) {
        if (placed[i]) continue;
        const Literal &l = rule.body[i];
        bool ready = false;
        switch (l.kind) {
          case LiteralKind::kAtom:
            ready = l.negated && all_bound(l.args);
            break;
          case LiteralKind::kSim:
          case LiteralKind::kPrecedes:
          case LiteralKind::kNotEqual:
            ready = all_bound(l.args) && all_bound(l.rhs);
            break;
          case LiteralKind::kMatch:
            ready = is_bound(l.args[0]) && is_bound(l.args[1]);
            break;
          case LiteralKind::kEqual: {
            ready = true;
            for (std::size_t k = 0; k < l.args.size(); ++k) {
              if (!is_bound(l.args[k]) && !is_bound(l.rhs[k])) ready = false;
            }
            break;
          }
        }
        if (!ready) continue;
        add_step(i, false);
        bind_all(l.args);
        bind_all(l.rhs);
        progress = true;
      }
    }
  };

  place_filters();
  if (delta_index >= 0) {
    add_step(static_cast<std::size_t>(delta_index), true);
    bind_all(rule.body[delta_index].args);
    place_filters();
  }
  while (true) {
    int best = -1;
    int best_score = -1;
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
      const Literal &l = rule.body[i];
      if (placed[i] || l.kind != LiteralKind::kAtom || l.negated) continue;
      int score = 0;
      for (const Term &t : l.args) score += is_bound(t) ? 1 : 0;
      if (score > best_score) {
        best = static_cast<int>(i);
        best_score = score;
      }
    }
    if (best < 0) break;
    add_step(static_cast<std::size_t>(best), false);
    bind_all(rule.body[best].args);
    place_filters();
  }
  for (std::size_t i = 0; i < rule.body.size(); ++i) {
    if (placed[i]) continue;
    const Literal &l = rule.body[i];
    if (l.kind == LiteralKind::kAtom) {
      throw ValidationError("unsafe rule, negated literal " + PrintLiteral(l) +
                            " has unbound variables: " + RuleText(rule));
    }
    throw UnboundBuiltin("built-in " + PrintLiteral(l) +
                         " is called with unbound arguments in rule: " +
                         RuleText(rule));
  }
  for (const Term &t : rule.head[0].args) {
    if (!is_bound(t)) {
      throw ValidationError("unsafe rule, head variable " + t.text +
                            " does not occur in a positive body literal: " +
                            RuleText(rule));
    }
    plan.head.push_back(Compile(t, slots));
  }
  plan.slots = static_cast<int>(slots.index.size());
  return plan;
}

struct RowHash {
  std::size_t operator()(const Row &r) const {
    std::size_t h = 0;
    for (const std::string &s : r) {
      h = h * 1000003u ^ std::hash<std::string>{}(s);
    }
    return h;
  }
};

// Hash index of one relation on a set of bound positions.
using Index = std::unordered_map<Row, std::vector<const Row *>, RowHash>;

class Evaluator {
 public:
  Evaluator(const Program &program, Model &model)
      : program_(program), model_(model) {
    if (!program.mf.saturated()) {
      owned_mf_ = saturate_mf(program.mf, {});
      mf_ = &*owned_mf_;
    } else {
      mf_ = &program.mf;
    }
  }

  void run_stratum(const std::vector<const Rule *> &rules,
                   const std::set<std::string> &preds) {
    // Plans: one full plan per rule, one per recursive body atom for deltas.
    struct Variant {
      const Rule *rule;
      Plan plan;
    };
    std::vector<Variant> initial;
    std::vector<Variant> incremental;
    for (const Rule *r : rules) {
      initial.push_back({r, MakePlan(*r, -1)});
      for (std::size_t i = 0; i < r->body.size(); ++i) {
        const Literal &l = r->body[i];
        if (l.kind == LiteralKind::kAtom && !l.negated && preds.count(l.name)) {
          incremental.push_back({r, MakePlan(*r, static_cast<int>(i))});
        }
      }
    }
    Database delta;
    for (const Variant &v : initial) fire(*v.rule, v.plan, delta);
    ++model_.iterations;
    merge(delta);
    while (!delta.empty()) {
      delta_ = std::move(delta);
      delta.clear();
      for (const Variant &v : incremental) fire(*v.rule, v.plan, delta);
      ++model_.iterations;
      merge(delta);
    }
    delta_.clear();
  }

 private:
  void merge(Database &fresh) {
    indexes_.clear();
    for (auto it = fresh.begin(); it != fresh.end();) {
      Relation &full = model_.relations[it->first];
      for (auto r = it->second.begin(); r != it->second.end();) {
        if (full.insert(*r).second) {
          ++r;
        } else {
          r = it->second.erase(r);
        }
      }
      it = it->second.empty() ? fresh.erase(it) : std::next(it);
    }
  }

  const Relation &source(const std::string &pred, bool delta) {
    static const Relation kEmpty;
    const Database &db = delta ? delta_ : model_.relations;
    auto it = db.find(pred);
    return it == db.end() ? kEmpty : it->second;
  }

  const Index &index_for(const std::string &pred, bool delta,
                         const std::vector<bool> &bound) {
    std::string key = (delta ? "d:" : "f:") + pred + ":";
    for (bool b : bound) key += b ? '1' : '0';
    auto it = indexes_.find(key);
    if (it != indexes_.end()) return it->second;
    Index index;
    for (const Row &row : source(pred, delta)) {
      if (row.size() != bound.size()) continue;
      Row k;
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (bound[i]) k.push_back(row[i]);
      }
      index[std::move(k)].push_back(&row);
    }
    return indexes_.emplace(std::move(key), std::move(index)).first->second;
  }

  void fire(const Rule &rule, const Plan &plan, Database &out) {
    std::vector<std::string> values(plan.slots);
    std::vector<bool> set(plan.slots, false);
    const std::string &head = rule.head[0].name;
    const Relation &known = source(head, false);
    std::function<void(std::size_t)> step = [&](std::size_t k) {
      if (k == plan.steps.size()) {
        Row row;
        for (const Arg &a : plan.head) {
          row.push_back(a.slot >= 0 ? values[a.slot] : a.constant);
        }
        if (!known.count(row)) out[head].insert(std::move(row));
        return;
      }
      run_step(plan.steps[k], values, set, [&] { step(k + 1); });
    };
    step(0);
  }

  const std::string &value_of(const Arg &a,
                              const std::vector<std::string> &values) {
    return a.slot >= 0 ? values[a.slot] : a.constant;
  }

  // Binds `a` to `v` if free; reports whether the binding is consistent.
  static bool unify(const Arg &a, const std::string &v,
                    std::vector<std::string> &values, std::vector<bool> &set,
                    std::vector<int> &trail) {
    if (a.slot < 0) return a.constant == v;
    if (set[a.slot]) return values[a.slot] == v;
    values[a.slot] = v;
    set[a.slot] = true;
    trail.push_back(a.slot);
    return true;
  }

  static void undo(std::vector<int> &trail, std::vector<bool> &set) {
    for (int s : trail) set[s] = false;
    trail.clear();
  }

  void run_step(const Step &s, std::vector<std::string> &values,
                std::vector<bool> &set, const std::function<void()> &next) {
    const Literal &l = *s.literal;
    std::vector<int> trail;
    switch (l.kind) {
      case LiteralKind::kAtom: {
        if (l.negated) {
          Row row;
          for (const Arg &a : s.args) row.push_back(value_of(a, values));
          if (!source(l.name, false).count(row)) next();
          return;
        }
        Row key;
        for (std::size_t i = 0; i < s.args.size(); ++i) {
          if (s.bound[i]) key.push_back(value_of(s.args[i], values));
        }
        const Index &index = index_for(l.name, s.delta, s.bound);
        auto it = index.find(key);
        if (it == index.end()) return;
        for (const Row *row : it->second) {
          bool ok = true;
          for (std::size_t i = 0; ok && i < s.args.size(); ++i) {
            if (!s.bound[i]) ok = unify(s.args[i], (*row)[i], values, set, trail);
          }
          if (ok) next();
          undo(trail, set);
        }
        return;
      }
      case LiteralKind::kSim: {
        const std::string &a = value_of(s.args[0], values);
        const std::string &b = value_of(s.args[1], values);
        bool holds = program_.sim.has_domain(l.name)
                         ? program_.sim.similar(l.name, a, b)
                         : a == b;
        if (holds) next();
        return;
      }
      case LiteralKind::kPrecedes: {
        if (precedes(*mf_, l.name, value_of(s.args[0], values),
                     value_of(s.args[1], values))) {
          next();
        }
        return;
      }
      case LiteralKind::kMatch: {
        const std::string &a = value_of(s.args[0], values);
        const std::string &b = value_of(s.args[1], values);
        std::optional<Value> r = mf_->try_match(l.name, a, b);
        if (!r) {
          std::string msg = "mf(" + l.name + ", " + a + ", " + b +
                            ") is undefined; rule not fired";
          if (warned_.insert(msg).second) model_.warnings.push_back({msg});
          return;
        }
        if (unify(s.args[2], *r, values, set, trail)) next();
        undo(trail, set);
        return;
      }
      case LiteralKind::kNotEqual: {
        bool differ = false;
        for (std::size_t i = 0; i < s.args.size(); ++i) {
          if (value_of(s.args[i], values) != value_of(s.rhs[i], values)) {
            differ = true;
          }
        }
        if (differ) next();
        return;
      }
      case LiteralKind::kEqual: {
        bool ok = true;
        for (std::size_t i = 0; ok && i < s.args.size(); ++i) {
          const Arg &x = s.args[i];
          const Arg &y = s.rhs[i];
          bool xb = x.slot < 0 || set[x.slot];
          if (xb) {
            ok = unify(y, value_of(x, values), values, set, trail);
          } else {
            ok = unify(x, value_of(y, values), values, set, trail);
          }
        }
        if (ok) next();
        undo(trail, set);
        return;
      }
    }
  }

  const Program &program_;
  Model &model_;
  std::optional<MatchingFunction> owned_mf_;
  const MatchingFunction *mf_ = nullptr;
  Database delta_;
  std::map<std::string, Index> indexes_;
  std::set<std::string> warned_;
};

}  // namespace

Model evaluate(const Program &program, const Database &facts) {
  Model model;
  for (const auto &[pred, rows] : facts) {
    model.relations[pred].insert(rows.begin(), rows.end());
  }
  std::vector<const Rule *> rules;
  for (const Rule &r : program.rules) {
    if (r.head.size() != 1) {
      throw ValidationError(
          "disjunctive rules and constraints cannot be evaluated: " +
          print_rule(r));
    }
    if (r.head[0].negated || r.head[0].kind != LiteralKind::kAtom) {
      throw ValidationError("rule head must be a positive atom: " +
                            print_rule(r));
    }
    if (r.body.empty()) {
      Row row;
      for (const Term &t : r.head[0].args) {
        if (t.is_variable()) {
          throw ValidationError("unsafe fact with variable " + t.text + ": " +
                                print_rule(r));
        }
        row.push_back(t.text);
      }
      model.relations[r.head[0].name].insert(std::move(row));
      continue;
    }
    rules.push_back(&r);
  }
  Evaluator evaluator(program, model);
  for (const std::vector<std::string> &stratum : stratify(program)) {
    std::set<std::string> preds(stratum.begin(), stratum.end());
    std::vector<const Rule *> here;
    for (const Rule *r : rules) {
      if (preds.count(r->head[0].name)) here.push_back(r);
    }
    if (!here.empty()) evaluator.run_stratum(here, preds);
  }
  return model;
}

}  // namespace mdclean::datalog
