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

#include "mdclean/md.h"

#include <algorithm>

#include "mdclean/error.h"
#include "scanner.h"

namespace mdclean {

namespace {

using internal::Scanner;
using internal::Token;

std::string Where(const Md &md, const SourcePos &pos) {
  return md.source + ":" + std::to_string(pos.line) + ":" +
         std::to_string(pos.column) + ": md " + md.name + ": ";
}

MdAtom ParseAtom(Scanner &in, bool leading) {
  MdAtom atom;
  atom.leading = leading;
  Token rel = in.expect_ident("relation name");
  atom.relation = rel.text;
  atom.pos = {rel.line, rel.column};
  in.expect("(");
  atom.tid_var = in.expect_ident("tuple identifier variable").text;
  if (!in.accept(";")) {
    in.fail(in.peek(), "expected ';' after the tuple identifier variable");
  }
  if (!in.is_punct(")")) {
    atom.vars.push_back(in.expect_ident("attribute variable").text);
    while (in.accept(",")) {
      atom.vars.push_back(in.expect_ident("attribute variable").text);
    }
  }
  in.expect(")");
  return atom;
}

Md ParseMd(Scanner &in) {
  Md md;
  md.source = in.source();
  Token kw = in.expect_ident("'md'");
  if (kw.text != "md") in.fail(kw, "expected 'md' but found '" + kw.text + "'");
  md.pos = {kw.line, kw.column};
  md.name = in.expect_ident("dependency name").text;
  in.expect(":");
  do {
    if (in.is_ident("lead") && in.peek(1).kind == Token::Kind::kIdent) {
      in.next();
      md.atoms.push_back(ParseAtom(in, true));
    } else if (in.peek().kind == Token::Kind::kIdent && in.is_punct("(", 1)) {
      md.atoms.push_back(ParseAtom(in, false));
    } else {
      SimilarityConstraint sim;
      Token left = in.expect_ident("atom or similarity");
      sim.left = left.text;
      sim.pos = {left.line, left.column};
      in.expect("~");
      Token second = in.expect_ident("variable or domain");
      if (in.accept("~")) {
        sim.domain = second.text;
        sim.right = in.expect_ident("variable").text;
      } else {
        sim.right = second.text;
      }
      md.similarities.push_back(std::move(sim));
    }
  } while (in.accept(","));
  in.expect("->");
  md.rhs_left = in.expect_ident("variable").text;
  in.expect(":=");
  md.rhs_right = in.expect_ident("variable").text;
  in.expect(";");
  return md;
}

// Checks that need no schema, and normalizes leading atoms and the RHS.
void CheckStructure(Md &md) {
  if (md.atoms.size() < 2) {
    throw ValidationError(Where(md, md.pos) +
                          "an MD needs at least two database atoms");
  }
  std::vector<std::size_t> leads;
  for (std::size_t i = 0; i < md.atoms.size(); ++i) {
    if (md.atoms[i].leading) leads.push_back(i);
  }
  if (leads.empty() && md.atoms.size() == 2) {
    md.atoms[0].leading = md.atoms[1].leading = true;
    leads = {0, 1};
  }
  if (leads.size() != 2) {
    throw ValidationError(Where(md, md.pos) +
                          "exactly two atoms must be marked 'lead' (found " +
                          std::to_string(leads.size()) + ")");
  }
  md.leading = {leads[0], leads[1]};

  std::set<std::string> tid_vars;
  std::set<std::string> attr_vars;
  for (const MdAtom &a : md.atoms) {
    if (!tid_vars.insert(a.tid_var).second) {
      throw ValidationError(Where(md, a.pos) + "tuple identifier variable " +
                            a.tid_var + " is used by two atoms");
    }
    attr_vars.insert(a.vars.begin(), a.vars.end());
  }
  for (const std::string &t : tid_vars) {
    if (attr_vars.count(t)) {
      throw ValidationError(Where(md, md.pos) + "variable " + t +
                            " is used both as a tuple identifier and as an "
                            "attribute variable");
    }
  }
  for (const SimilarityConstraint &s : md.similarities) {
    for (const std::string &v : {s.left, s.right}) {
      if (!attr_vars.count(v)) {
        throw ValidationError(Where(md, s.pos) + "similarity variable " + v +
                              " does not occur in an attribute position");
      }
    }
  }

  auto count_in = [](const MdAtom &a, const std::string &v) {
    return std::count(a.vars.begin(), a.vars.end(), v);
  };
  const MdAtom &lead0 = md.atoms[md.leading[0]];
  const MdAtom &lead1 = md.atoms[md.leading[1]];
  if (md.rhs_left == md.rhs_right) {
    throw ValidationError(Where(md, md.pos) +
                          "the RHS must identify two different variables");
  }
  if (!(count_in(lead0, md.rhs_left) && count_in(lead1, md.rhs_right))) {
    if (count_in(lead1, md.rhs_left) && count_in(lead0, md.rhs_right)) {
      std::swap(md.rhs_left, md.rhs_right);
    } else {
      for (const std::string &v : {md.rhs_left, md.rhs_right}) {
        if (!count_in(lead0, v) && !count_in(lead1, v)) {
          throw ValidationError(Where(md, md.pos) + "RHS variable " + v +
                                " does not occur in a leading atom");
        }
      }
      throw ValidationError(Where(md, md.pos) +
                            "RHS variables must come one from each leading "
                            "atom");
    }
  }
  if (count_in(lead0, md.rhs_left) != 1 || count_in(lead1, md.rhs_right) != 1) {
    throw ValidationError(Where(md, md.pos) +
                          "an RHS variable occurs twice in its leading atom");
  }
}

}  // namespace

bool same_syntax(const Md &a, const Md &b) {
  if (a.name != b.name || a.rhs_left != b.rhs_left ||
      a.rhs_right != b.rhs_right || a.atoms.size() != b.atoms.size() ||
      a.similarities.size() != b.similarities.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.atoms.size(); ++i) {
    const MdAtom &x = a.atoms[i];
    const MdAtom &y = b.atoms[i];
    if (x.relation != y.relation || x.tid_var != y.tid_var ||
        x.vars != y.vars || x.leading != y.leading) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.similarities.size(); ++i) {
    const SimilarityConstraint &x = a.similarities[i];
    const SimilarityConstraint &y = b.similarities[i];
    if (x.left != y.left || x.right != y.right || x.domain != y.domain) {
      return false;
    }
  }
  return true;
}

void MdSet::add(Md md) {
  if (index_.count(md.name)) {
    throw ValidationError("duplicate MD name " + md.name);
  }
  index_.emplace(md.name, mds_.size());
  mds_.push_back(std::move(md));
}

const Md *MdSet::find(const std::string &name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &mds_[it->second];
}

MdSet parse_mds(std::string_view text, std::string_view source) {
  Scanner in(text, std::string(source), "#");
  MdSet result;
  while (!in.at_end()) {
    Md md = ParseMd(in);
    CheckStructure(md);
    if (result.find(md.name) != nullptr) {
      throw ValidationError(Where(md, md.pos) + "duplicate MD name");
    }
    result.add(std::move(md));
  }
  return result;
}

std::string print_md(const Md &md) {
  std::string out = "md " + md.name + ": ";
  bool first = true;
  auto sep = [&] {
    if (!first) out += ", ";
    first = false;
  };
  for (const MdAtom &a : md.atoms) {
    sep();
    if (a.leading) out += "lead ";
    out += a.relation + "(" + a.tid_var + ";";
    for (std::size_t i = 0; i < a.vars.size(); ++i) {
      out += (i == 0 ? " " : ", ") + a.vars[i];
    }
    out += ")";
  }
  for (const SimilarityConstraint &s : md.similarities) {
    sep();
    out += s.left + (s.domain.empty() ? " ~ " : " ~" + s.domain + "~ ") +
           s.right;
  }
  out += " -> " + md.rhs_left + " := " + md.rhs_right + ";";
  return out;
}

std::string print_mds(const MdSet &mds) {
  std::string out;
  for (const Md &md : mds) out += print_md(md) + "\n";
  return out;
}

void bind_mds(MdSet &mds, const Schema &schema) {
  for (Md &md : mds.mutable_mds()) {
    md.var_domain.clear();
    md.occurrences.clear();
    md.refs.clear();
    for (std::size_t i = 0; i < md.atoms.size(); ++i) {
      const MdAtom &atom = md.atoms[i];
      const Relation *rel = schema.find(atom.relation);
      if (rel == nullptr) {
        throw UnknownRelation(Where(md, atom.pos) + "unknown relation " +
                              atom.relation);
      }
      if (rel->arity() != atom.vars.size()) {
        throw ValidationError(Where(md, atom.pos) + "atom " + atom.relation +
                              " has " + std::to_string(atom.vars.size()) +
                              " attribute variables, schema arity is " +
                              std::to_string(rel->arity()));
      }
      std::vector<AttributeRef> refs;
      for (std::size_t p = 0; p < atom.vars.size(); ++p) {
        const std::string &v = atom.vars[p];
        const std::string &dom = rel->domain_at(p);
        refs.push_back({rel->name(), rel->attributes()[p].name});
        auto [it, inserted] = md.var_domain.emplace(v, dom);
        if (!inserted && it->second != dom) {
          throw ValidationError(Where(md, atom.pos) + "variable " + v +
                                " joins attributes of incomparable domains " +
                                it->second + " and " + dom);
        }
        md.occurrences[v].push_back({i, p});
      }
      md.refs.push_back(std::move(refs));
    }
    for (const SimilarityConstraint &s : md.similarities) {
      const std::string &dl = md.var_domain.at(s.left);
      const std::string &dr = md.var_domain.at(s.right);
      if (dl != dr) {
        throw ValidationError(Where(md, s.pos) + "similarity " + s.left +
                              " ~ " + s.right +
                              " relates incomparable domains " + dl + " and " +
                              dr);
      }
      if (!s.domain.empty() && s.domain != dl) {
        throw ValidationError(Where(md, s.pos) + "similarity " + s.left +
                              " ~" + s.domain + "~ " + s.right +
                              ": variables have domain " + dl);
      }
    }
    const MdAtom &lead0 = md.atoms[md.leading[0]];
    const MdAtom &lead1 = md.atoms[md.leading[1]];
    auto pos_in = [](const MdAtom &a, const std::string &v) {
      return static_cast<std::size_t>(
          std::find(a.vars.begin(), a.vars.end(), v) - a.vars.begin());
    };
    md.rhs_position = {pos_in(lead0, md.rhs_left), pos_in(lead1, md.rhs_right)};
    const std::string &d0 = md.var_domain.at(md.rhs_left);
    const std::string &d1 = md.var_domain.at(md.rhs_right);
    if (d0 != d1) {
      throw ValidationError(Where(md, md.pos) + "RHS " + md.rhs_left +
                            " := " + md.rhs_right +
                            " identifies incomparable domains " + d0 +
                            " and " + d1);
    }
    md.rhs_domain = d0;
    md.bound = true;
  }
}

void check_rhs_matchers(const MdSet &mds, const MatchingFunction &mf) {
  for (const Md &md : mds) {
    if (!md.bound) throw PreconditionViolation("md " + md.name + " is unbound");
    if (!mf.has_domain(md.rhs_domain)) {
      throw ValidationError(Where(md, md.pos) + "RHS domain " + md.rhs_domain +
                            " has no matching function");
    }
  }
}

std::set<AttributeRef> alhs(const Md &md) {
  if (!md.bound) throw PreconditionViolation("md " + md.name + " is unbound");
  std::set<AttributeRef> out;
  auto add_var = [&](const std::string &v) {
    for (const VarOccurrence &o : md.occurrences.at(v)) {
      out.insert(md.refs[o.atom][o.position]);
    }
  };
  for (const SimilarityConstraint &s : md.similarities) {
    add_var(s.left);
    add_var(s.right);
  }
  for (const auto &[var, occ] : md.occurrences) {
    if (occ.size() > 1) add_var(var);
  }
  return out;
}

std::set<AttributeRef> arhs(const Md &md) {
  if (!md.bound) throw PreconditionViolation("md " + md.name + " is unbound");
  return {md.refs[md.leading[0]][md.rhs_position[0]],
          md.refs[md.leading[1]][md.rhs_position[1]]};
}

}  // namespace mdclean
