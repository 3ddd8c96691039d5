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

#include "mdclean/io.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "mdclean/error.h"
#include "mdclean/tokens.h"

namespace mdclean {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading " + path.string());
  return buf.str();
}

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

// Reads a line-oriented file: calls `handle` with each non-blank line with
// comments removed, and its 1-based number.
template <typename F>
void ForEachLine(std::string_view text, F handle) {
  int number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++number;
    // A '#' outside double quotes starts a comment.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '\\' && quoted) {
        ++i;
      } else if (line[i] == '"') {
        quoted = !quoted;
      } else if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    if (!Trim(line).empty()) handle(line, number);
    start = end + 1;
  }
}

// Cursor over one line for the small line formats.
class LineReader {
 public:
  LineReader(std::string_view line, std::string source, int number)
      : line_(line), source_(std::move(source)), number_(number) {}

  [[noreturn]] void fail(const std::string &message) const {
    throw ParseError(source_, number_, static_cast<int>(pos_) + 1, message);
  }
  void skip_space() {
    while (pos_ < line_.size() &&
           std::isspace(static_cast<unsigned char>(line_[pos_]))) {
      ++pos_;
    }
  }
  bool accept(std::string_view s) {
    skip_space();
    if (line_.substr(pos_, s.size()) != s) return false;
    pos_ += s.size();
    return true;
  }
  void expect(std::string_view s) {
    if (!accept(s)) fail("expected '" + std::string(s) + "'");
  }
  bool at_end() {
    skip_space();
    return pos_ >= line_.size();
  }
  // A quoted string, or the trimmed text up to one of `stops` (or the end).
  std::string value(std::string_view stops) {
    skip_space();
    if (pos_ < line_.size() && line_[pos_] == '"') {
      std::string out;
      ++pos_;
      while (pos_ < line_.size() && line_[pos_] != '"') {
        if (line_[pos_] == '\\' && pos_ + 1 < line_.size()) ++pos_;
        out += line_[pos_++];
      }
      if (pos_ >= line_.size()) fail("unterminated string");
      ++pos_;
      return out;
    }
    std::size_t end = pos_;
    while (end < line_.size() && stops.find(line_[end]) == std::string_view::npos) {
      ++end;
    }
    std::string out(Trim(line_.substr(pos_, end - pos_)));
    if (out.empty()) fail("expected a value");
    pos_ = end;
    return out;
  }
  std::string rest() {
    skip_space();
    std::string out(Trim(line_.substr(pos_)));
    pos_ = line_.size();
    return out;
  }

 private:
  std::string_view line_;
  std::string source_;
  int number_;
  std::size_t pos_ = 0;
};

bool IsName(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
    return false;
  }
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::string DomainPrefix(LineReader &r) {
  std::string domain = r.value(":");
  if (!IsName(domain)) r.fail("invalid domain name '" + domain + "'");
  r.expect(":");
  return domain;
}

// RFC 4180 records.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text,
                                               const std::string &source) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, field_started = false;
  int line = 1;
  auto end_field = [&] {
    row.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r') {
      continue;
    } else if (c == '\n') {
      end_row();
      ++line;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw ParseError(source, line, 1, "unterminated quoted field");
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

std::vector<fs::path> CsvFiles(const fs::path &path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw IoError("no such file or directory: " + path.string());
  if (!fs::is_directory(path, ec)) return {path};
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(path, ec)) {
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  if (ec) throw IoError("cannot list " + path.string());
  std::sort(files.begin(), files.end());
  return files;
}

std::string JsonValue(const json &v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

json ParseJson(std::string_view text, std::string_view source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw ParseError(std::string(source), 1, static_cast<int>(e.byte),
                     std::string("invalid JSON: ") + e.what());
  }
}

[[noreturn]] void Rethrow(const Error &e, const std::string &context) {
  if (dynamic_cast<const ParseError *>(&e)) throw;
  throw Error(e.error_class(), e.code(), context + ": " + e.what());
}

}  // namespace

Schema parse_schema(std::string_view text, std::string_view source) {
  Schema schema;
  ForEachLine(text, [&](std::string_view line, int number) {
    LineReader r(line, std::string(source), number);
    std::string name = r.value("(");
    if (!IsName(name)) r.fail("invalid relation name '" + name + "'");
    r.expect("(");
    std::vector<Attribute> attrs;
    if (!r.accept(")")) {
      do {
        std::string attr = r.value(",:)");
        if (!IsName(attr)) r.fail("invalid attribute name '" + attr + "'");
        std::string domain = attr;
        if (r.accept(":")) {
          domain = r.value(",)");
          if (!IsName(domain)) r.fail("invalid domain name '" + domain + "'");
        }
        attrs.push_back({attr, domain});
      } while (r.accept(","));
      r.expect(")");
    }
    if (!r.at_end()) r.fail("unexpected text after relation");
    try {
      schema.add_relation(Relation(name, std::move(attrs)));
    } catch (const ValidationError &e) {
      r.fail(e.what());
    }
  });
  return schema;
}

SimilarityRelation parse_similarity(std::string_view text,
                                    std::string_view source) {
  SimilarityRelation sim;
  ForEachLine(text, [&](std::string_view line, int number) {
    LineReader r(line, std::string(source), number);
    std::string domain = DomainPrefix(r);
    sim.add_domain(domain);
    if (r.accept("builtin ")) {
      std::string name = r.rest();
      if (name == "token-overlap") {
        sim.set_builtin(domain, SimilarityBuiltin::kTokenOverlap);
      } else if (name == "equality") {
        sim.set_builtin(domain, SimilarityBuiltin::kEquality);
      } else {
        r.fail("unknown similarity builtin '" + name + "'");
      }
      return;
    }
    std::string a = r.value("~");
    r.expect("~");
    std::string b = r.value("");
    if (!r.at_end()) r.fail("unexpected text after similarity pair");
    sim.declare(domain, a, b);
  });
  return sim;
}

MatchingFunction parse_matching(std::string_view text, std::string_view source) {
  MatchingFunction mf;
  ForEachLine(text, [&](std::string_view line, int number) {
    LineReader r(line, std::string(source), number);
    std::string domain = DomainPrefix(r);
    try {
      if (r.accept("builtin ")) {
        std::string name = r.rest();
        if (name == "token-union") {
          mf.set_builtin(domain, MatchBuiltin::kTokenUnion);
        } else if (name == "value-min") {
          mf.set_builtin(domain, MatchBuiltin::kValueMin);
        } else if (name == "value-max") {
          mf.set_builtin(domain, MatchBuiltin::kValueMax);
        } else {
          r.fail("unknown matching builtin '" + name + "'");
        }
        return;
      }
      r.expect("m(");
      std::string a = r.value(",");
      r.expect(",");
      std::string b = r.value(")");
      r.expect(")");
      r.expect("=");
      std::string c = r.value("");
      if (!r.at_end()) r.fail("unexpected text after matching triple");
      mf.declare(domain, a, b, c);
    } catch (const ParseError &) {
      throw;
    } catch (const Error &e) {
      r.fail(e.what());
    }
  });
  return mf;
}

Schema infer_schema_json(std::string_view text, std::string_view source) {
  json doc = ParseJson(text, source);
  if (!doc.is_object()) {
    throw ValidationError(std::string(source) + ": instance JSON must be an object");
  }
  Schema schema;
  for (const auto &[relation, tuples] : doc.items()) {
    std::vector<Attribute> attrs;
    if (tuples.is_array() && !tuples.empty() && tuples[0].is_object()) {
      for (const auto &[key, value] : tuples[0].items()) {
        if (key != "tid") attrs.push_back({key, key});
      }
    }
    schema.add_relation(Relation(relation, std::move(attrs)));
  }
  return schema;
}

Instance parse_instance_json(std::string_view text, std::string_view source,
                             std::shared_ptr<const Schema> schema) {
  json doc = ParseJson(text, source);
  const std::string src(source);
  if (!doc.is_object()) throw ValidationError(src + ": instance JSON must be an object");
  Instance instance(schema);
  for (const auto &[relation, tuples] : doc.items()) {
    const Relation &rel = schema->at(relation);
    if (!tuples.is_array()) {
      throw ValidationError(src + ": relation " + relation + " must map to an array");
    }
    for (const json &t : tuples) {
      if (!t.is_object() || !t.contains("tid")) {
        throw ValidationError(src + ": every " + relation +
                              " tuple must be an object with a tid");
      }
      Tuple values;
      for (const Attribute &a : rel.attributes()) {
        if (!t.contains(a.name)) {
          throw ValidationError(src + ": tuple " + JsonValue(t["tid"]) +
                                " lacks attribute " + a.name);
        }
        values.push_back(JsonValue(t[a.name]));
      }
      if (t.size() != rel.arity() + 1) {
        throw ValidationError(src + ": tuple " + JsonValue(t["tid"]) +
                              " has attributes not in relation " + relation);
      }
      instance.insert(relation, JsonValue(t["tid"]), std::move(values));
    }
  }
  return instance;
}

Schema infer_schema_csv(const fs::path &path) {
  Schema schema;
  for (const fs::path &file : CsvFiles(path)) {
    auto rows = ParseCsv(read_file(file), file.string());
    if (rows.empty()) throw ValidationError(file.string() + ": missing header row");
    std::vector<Attribute> attrs;
    for (std::size_t i = 1; i < rows[0].size(); ++i) {
      attrs.push_back({rows[0][i], rows[0][i]});
    }
    schema.add_relation(Relation(file.stem().string(), std::move(attrs)));
  }
  return schema;
}

Instance load_instance_csv(const fs::path &path,
                           std::shared_ptr<const Schema> schema) {
  Instance instance(schema);
  for (const fs::path &file : CsvFiles(path)) {
    const std::string src = file.string();
    auto rows = ParseCsv(read_file(file), src);
    if (rows.empty()) throw ValidationError(src + ": missing header row");
    const std::vector<std::string> &header = rows[0];
    if (header.empty() || header[0] != "tid") {
      throw ValidationError(src + ": the first column must be tid");
    }
    const Relation &rel = schema->at(file.stem().string());
    std::vector<std::size_t> column(rel.arity());
    if (header.size() != rel.arity() + 1) {
      throw ValidationError(src + ": header does not match relation " + rel.name());
    }
    for (std::size_t i = 1; i < header.size(); ++i) {
      std::optional<std::size_t> pos = rel.position_of(header[i]);
      if (!pos) {
        throw ValidationError(src + ": column " + header[i] +
                              " is not an attribute of " + rel.name());
      }
      column[*pos] = i;
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() != header.size()) {
        throw ValidationError(src + ": record " + std::to_string(r + 1) +
                              " has " + std::to_string(rows[r].size()) +
                              " fields, expected " + std::to_string(header.size()));
      }
      Tuple values(rel.arity());
      for (std::size_t p = 0; p < rel.arity(); ++p) values[p] = rows[r][column[p]];
      try {
        instance.insert(rel.name(), rows[r][0], std::move(values));
      } catch (const Error &e) {
        Rethrow(e, src);
      }
    }
  }
  return instance;
}

json instance_to_json(const Instance &instance) {
  json out = json::object();
  for (const Relation &r : instance.schema().relations()) {
    json tuples = json::array();
    for (const auto &[tid, tuple] : instance.tuples(r.name())) {
      json t = json::object();
      t["tid"] = tid;
      for (std::size_t i = 0; i < r.arity(); ++i) {
        t[r.attributes()[i].name] = tuple[i];
      }
      tuples.push_back(std::move(t));
    }
    out[r.name()] = std::move(tuples);
  }
  return out;
}

Problem prepare_problem(Instance instance, MdSet mds, SimilarityRelation sim,
                        const MatchingFunction &mf) {
  std::shared_ptr<const Schema> schema = instance.schema_ptr();
  std::set<std::string> token_domains;
  for (const std::string &d : mf.domains()) {
    if (mf.builtin(d) == MatchBuiltin::kTokenUnion) token_domains.insert(d);
  }
  Instance canonical(schema);
  for (const Relation &r : schema->relations()) {
    for (const auto &[tid, tuple] : instance.tuples(r.name())) {
      Tuple values = tuple;
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (token_domains.count(r.domain_at(i))) {
          values[i] = canonical_token_value(values[i]);
        }
      }
      canonical.insert(r.name(), tid, std::move(values));
    }
  }
  for (const std::string &d : schema->domains()) {
    if (!sim.has_domain(d)) sim.add_domain(d);
  }
  bind_mds(mds, *schema);
  check_rhs_matchers(mds, mf);
  MatchingFunction saturated = saturate_mf(mf, canonical.active_values());
  return Problem{schema, std::move(canonical), std::move(mds), std::move(sim),
                 std::move(saturated)};
}

Problem load_problem(const ProblemPaths &paths) {
  auto label = [](const std::optional<fs::path> &p) { return p->string(); };
  if (!paths.instance) throw ValidationError("an instance file is required");
  if (!paths.mds) throw ValidationError("an MD file is required");
  const bool is_json = paths.instance->extension() == ".json";

  std::shared_ptr<const Schema> schema;
  if (paths.schema) {
    std::string text = read_file(*paths.schema);
    schema = std::make_shared<const Schema>(parse_schema(text, label(paths.schema)));
  } else if (is_json) {
    std::string text = read_file(*paths.instance);
    schema = std::make_shared<const Schema>(
        infer_schema_json(text, label(paths.instance)));
  } else {
    schema = std::make_shared<const Schema>(infer_schema_csv(*paths.instance));
  }

  std::optional<Instance> instance;
  try {
    if (is_json) {
      instance = parse_instance_json(read_file(*paths.instance),
                                     label(paths.instance), schema);
    } else {
      instance = load_instance_csv(*paths.instance, schema);
    }
  } catch (const Error &e) {
    if (e.error_class() == ErrorClass::kIo) throw;
    Rethrow(e, label(paths.instance));
  }

  MdSet mds = parse_mds(read_file(*paths.mds), label(paths.mds));
  SimilarityRelation sim;
  if (paths.sim) sim = parse_similarity(read_file(*paths.sim), label(paths.sim));
  MatchingFunction mf;
  if (paths.mf) mf = parse_matching(read_file(*paths.mf), label(paths.mf));

  try {
    return prepare_problem(std::move(*instance), std::move(mds), std::move(sim), mf);
  } catch (const Error &e) {
    std::string context = label(paths.mds);
    if (e.code() == "SemilatticeViolation" && paths.mf) context = label(paths.mf);
    Rethrow(e, context);
  }
}

}  // namespace mdclean
