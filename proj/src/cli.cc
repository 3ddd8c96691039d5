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

#include "mdclean/cli.h"

#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "mdclean/chase.h"
#include "mdclean/classify.h"
#include "mdclean/codegen.h"
#include "mdclean/datalog.h"
#include "mdclean/error.h"
#include "mdclean/io.h"
#include "mdclean/query.h"

namespace mdclean::cli {

namespace {

using json = nlohmann::ordered_json;

struct Options {
  std::string schema, instance, mds, sim, mf, query, out;
  std::string format = "json";
  std::uint64_t seed = 0;
  std::size_t step_limit = ChaseOptions{}.step_limit;
  bool all = false;
  bool one = false;
  bool include_tids = false;
};

std::shared_ptr<spdlog::logger> MakeLogger(std::ostream &err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("mdclean", sink);
  logger->set_pattern("mdclean: %l: %v");
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char *env = std::getenv("MDCLEAN_LOG")) {
    level = spdlog::level::from_str(env);
  }
  logger->set_level(level);
  return logger;
}

ProblemPaths PathsOf(const Options &o) {
  ProblemPaths p;
  if (!o.schema.empty()) p.schema = o.schema;
  if (!o.instance.empty()) p.instance = o.instance;
  if (!o.mds.empty()) p.mds = o.mds;
  if (!o.sim.empty()) p.sim = o.sim;
  if (!o.mf.empty()) p.mf = o.mf;
  return p;
}

json PairJson(const InteractionPair &p) {
  return json{{"md1", p.md1}, {"md2", p.md2}, {"attribute", p.attribute.str()}};
}

json ClassificationJson(const Classification &c, const MdSet &mds) {
  json out;
  out["verdict"] = to_string(c.verdict);
  out["interaction_pairs"] = json::array();
  for (const InteractionPair &p : c.pairs) out["interaction_pairs"].push_back(PairJson(p));
  std::map<std::string, std::string> texts;
  for (const SfaiQuery &q : sfai_queries(mds)) texts[q.name] = print_query(q.query);
  out["queries"] = json::array();
  for (const QueryOutcome &q : c.queries) {
    json j{{"name", q.name}, {"query", texts[q.name]}, {"satisfied", q.satisfied}};
    if (q.witness) j["witness"] = *q.witness;
    out["queries"].push_back(std::move(j));
  }
  if (c.preservation && !c.preservation->violations.empty()) {
    const PreservationViolation &v = c.preservation->violations.front();
    out["preservation_counterexample"] = {{"domain", v.domain},
                                          {"a", v.a},
                                          {"a1", v.a1},
                                          {"a2", v.a2},
                                          {"merged", v.merged}};
  }
  return out;
}

std::string InstanceText(const Instance &instance) {
  std::string out;
  for (const Relation &r : instance.schema().relations()) {
    for (const auto &[tid, tuple] : instance.tuples(r.name())) {
      out += r.name() + "(" + tid;
      for (const Value &v : tuple) out += ", " + v;
      out += ")\n";
    }
  }
  return out;
}

json CleanJson(const CleanInstance &c) {
  json steps = json::array();
  for (const EnforcementStep &s : c.witness) steps.push_back(s.describe());
  return json{{"instance", instance_to_json(c.instance)}, {"steps", steps}};
}

// The clean instance held by the residual program's clean relations.
Instance CleanFromModel(const datalog::Model &model,
                        const std::shared_ptr<const Schema> &schema) {
  Instance clean(schema);
  for (const Relation &r : schema->relations()) {
    for (const datalog::Row &row : model.at(clean_predicate(r.name()))) {
      if (clean.contains(row[0])) {
        throw NotSci("the residual program left several current versions of " +
                     row[0]);
      }
      clean.insert(r.name(), row[0], Tuple(row.begin() + 1, row.end()));
    }
  }
  return clean;
}

struct Solved {
  Classification classification;
  Instance clean;
  std::vector<datalog::Diagnostic> warnings;
};

Solved Solve(const Problem &p, spdlog::logger &log) {
  Classification c = classify(p.mds, p.instance, p.sim, p.mf);
  log.info("verdict {}", to_string(c.verdict));
  datalog::Program program = emit_residual_datalog(p.mds, p.instance, p.sim, p.mf, c);
  datalog::Model model = datalog::evaluate(program);
  for (const datalog::Diagnostic &d : model.warnings) log.warn("{}", d.message);
  return {std::move(c), CleanFromModel(model, p.schema), model.warnings};
}

class Runner {
 public:
  Runner(const Options &o, std::ostream &out, spdlog::logger &log)
      : o_(o), out_(out), log_(log) {}

  void validate() {
    Problem p = load_problem(PathsOf(o_));
    if (text()) {
      out_ << "ok: " << p.schema->relations().size() << " relations, "
           << p.instance.size() << " tuples, " << p.mds.size() << " MDs\n";
      return;
    }
    emit(json{{"valid", true},
              {"relations", p.schema->relations().size()},
              {"tuples", p.instance.size()},
              {"mds", p.mds.size()}});
  }

  void classify_cmd() {
    Problem p = load_problem(PathsOf(o_));
    Classification c = classify(p.mds, p.instance, p.sim, p.mf);
    json report = ClassificationJson(c, p.mds);
    if (text()) {
      out_ << "verdict: " << report["verdict"].get<std::string>() << "\n";
      for (const json &pair : report["interaction_pairs"]) {
        out_ << "interaction: " << pair["md1"].get<std::string>() << " -> "
             << pair["md2"].get<std::string>() << " on "
             << pair["attribute"].get<std::string>() << "\n";
      }
      for (const json &q : report["queries"]) {
        out_ << q["name"].get<std::string>() << ": "
             << (q["satisfied"].get<bool>() ? "satisfied" : "false") << "\n";
      }
      return;
    }
    emit(report);
  }

  void chase() {
    Problem p = load_problem(PathsOf(o_));
    ChaseOptions options;
    options.step_limit = o_.step_limit;
    json result;
    std::vector<CleanInstance> members;
    bool one = o_.one;
    if (!one && p.instance.size() > options.max_exhaustive_tuples) {
      log_.warn("{} tuples exceed the exhaustive chase bound of {}; running a "
                "single chase sequence",
                p.instance.size(), options.max_exhaustive_tuples);
      one = true;
    }
    if (one) {
      ChaseOrder order = ChaseOrder::from_seed(o_.seed, p.mds, p.instance);
      members.push_back(chase_one(p.instance, p.mds, p.sim, p.mf, order, options));
      result["mode"] = "one";
      result["seed"] = o_.seed;
    } else {
      CleanInstanceSet set = chase_all(p.instance, p.mds, p.sim, p.mf, options);
      result["mode"] = "all";
      result["states_explored"] = set.states_explored;
      members = std::move(set.members);
    }
    if (text()) {
      for (std::size_t i = 0; i < members.size(); ++i) {
        out_ << "# clean instance " << i + 1 << "\n" << InstanceText(members[i].instance);
        for (const EnforcementStep &s : members[i].witness) {
          out_ << "#   " << s.describe() << "\n";
        }
      }
      return;
    }
    result["clean_instances"] = json::array();
    for (const CleanInstance &c : members) result["clean_instances"].push_back(CleanJson(c));
    emit(result);
  }

  void emit_asp() {
    Problem p = load_problem(PathsOf(o_));
    out_ << emit_general_asp(p.mds, p.instance, p.sim, p.mf).text();
  }

  void emit_datalog() {
    Problem p = load_problem(PathsOf(o_));
    Classification c = classify(p.mds, p.instance, p.sim, p.mf);
    datalog::Program program = emit_residual_datalog(p.mds, p.instance, p.sim, p.mf, c);
    out_ << "% residual program, verdict " << to_string(c.verdict) << "\n";
    out_ << datalog::print_program(program);
  }

  void solve() {
    Problem p = load_problem(PathsOf(o_));
    Solved s = Solve(p, log_);
    if (text()) {
      out_ << InstanceText(s.clean);
      return;
    }
    json warnings = json::array();
    for (const datalog::Diagnostic &d : s.warnings) warnings.push_back(d.message);
    emit(json{{"verdict", to_string(s.classification.verdict)},
              {"clean", instance_to_json(s.clean)},
              {"warnings", warnings}});
  }

  void answer() {
    if (o_.query.empty()) throw ValidationError("answer requires --query");
    Problem p = load_problem(PathsOf(o_));
    ConjunctiveQuery q = parse_query(read_file(o_.query), o_.query);
    try {
      resolve_query(q, *p.schema);
    } catch (const Error &e) {
      throw Error(e.error_class(), e.code(), o_.query + ": " + e.what());
    }
    std::vector<Instance> clean;
    std::string method;
    Classification c = classify(p.mds, p.instance, p.sim, p.mf);
    if (c.verdict != Verdict::kGeneral) {
      clean.push_back(Solve(p, log_).clean);
      method = "datalog";
    } else {
      ChaseOptions options;
      options.step_limit = o_.step_limit;
      for (CleanInstance &m : chase_all(p.instance, p.mds, p.sim, p.mf, options).members) {
        clean.push_back(std::move(m.instance));
      }
      method = "chase";
    }
    AnswerSet answers =
        certain_answers(clean, q, p.sim, CertainAnswerOptions{o_.include_tids});
    if (text()) {
      for (const auto &row : answers.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out_ << (i ? "\t" : "") << row[i];
        out_ << "\n";
      }
      return;
    }
    json rows = json::array();
    for (const auto &row : answers.rows) rows.push_back(row);
    emit(json{{"query", print_query(q)},
              {"method", method},
              {"clean_instances", clean.size()},
              {"answers", rows}});
  }

 private:
  bool text() const { return o_.format == "text"; }
  void emit(const json &j) { out_ << j.dump(2) << "\n"; }

  const Options &o_;
  std::ostream &out_;
  spdlog::logger &log_;
};

int StatusOf(const Error &e) {
  switch (e.error_class()) {
    case ErrorClass::kValidation:
      return kValidationFailure;
    case ErrorClass::kSemantic:
      return kSemanticFailure;
    case ErrorClass::kIo:
      return kIoFailure;
  }
  return kSemanticFailure;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  Options o;
  CLI::App app{"Entity resolution with matching dependencies", "mdclean"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--schema", o.schema, "Schema file");
  app.add_option("--instance", o.instance, "Instance: .json, .csv, or a directory of .csv files");
  app.add_option("--mds", o.mds, "Matching dependencies");
  app.add_option("--sim", o.sim, "Similarity relation");
  app.add_option("--mf", o.mf, "Matching functions");
  app.add_option("--query", o.query, "Conjunctive query");
  app.add_option("--seed", o.seed, "Seed for chase --one");
  app.add_option("--step-limit", o.step_limit, "Maximum chase sequence length");
  app.add_option("--out,-o", o.out, "Write results to this file");
  app.add_option("--format", o.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_flag("--include-tids", o.include_tids,
               "Keep identifier-only head variables in certain answers");

  std::string command;
  auto sub = [&](const char *name, const char *help) {
    CLI::App *s = app.add_subcommand(name, help);
    s->callback([&command, name] { command = name; });
    return s;
  };
  sub("validate", "Load all inputs and check every invariant");
  sub("classify", "Report the single-clean-instance class");
  CLI::App *chase = sub("chase", "Enumerate clean instances");
  chase->add_flag("--all", o.all, "Every clean instance (default)");
  chase->add_flag("--one", o.one, "One chase sequence");
  sub("emit-asp", "Write the disjunctive cleaning program");
  sub("emit-datalog", "Write the residual stratified program");
  sub("solve", "Evaluate the residual program and print the clean instance");
  sub("answer", "Certain answers to --query");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidationFailure;
  }

  auto logger = MakeLogger(err);
  std::ostringstream buffer;
  try {
    if (o.all && o.one) throw ValidationError("chase takes --all or --one, not both");
    Runner runner(o, buffer, *logger);
    if (command == "validate") runner.validate();
    if (command == "classify") runner.classify_cmd();
    if (command == "chase") runner.chase();
    if (command == "emit-asp") runner.emit_asp();
    if (command == "emit-datalog") runner.emit_datalog();
    if (command == "solve") runner.solve();
    if (command == "answer") runner.answer();
    if (o.out.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(o.out, std::ios::binary);
      if (!file) throw IoError("cannot write " + o.out);
      file << buffer.str();
      if (!file) throw IoError("error while writing " + o.out);
    }
  } catch (const Error &e) {
    err << "mdclean: " << e.code() << ": " << e.what() << "\n";
    return StatusOf(e);
  }
  return kOk;
}

}  // namespace mdclean::cli
