// SPDX-License-Identifier: Apache-2.0
//
// prefq: answer multi-stakeholder preference queries on induced or explicit
// preference graphs, cross-check the three engines, display translations,
// generate random instances, and run the benchmark harness.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prefq/bench.hpp"
#include "prefq/direct.hpp"
#include "prefq/dsl.hpp"
#include "prefq/gen.hpp"
#include "prefq/mucalc.hpp"
#include "prefq/translate.hpp"

namespace {

using nlohmann::json;
using namespace prefq;

constexpr int kSchemaVersion = 1;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitSemantic = 2;
constexpr int kExitInternal = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file '" + path + "'", {0, 0});
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file '" + path + "'", {0, 0});
  out << content;
}

struct Instance {
  PreferenceGraph graph;
  bool abstract_nodes = false;  // explicit graph file: print node indices
};

Instance load_instance(const std::string& spec_path,
                       const std::string& graph_path) {
  if (spec_path.empty() == graph_path.empty())
    throw ParseError("exactly one of --spec and --graph is required", {0, 0});
  if (!spec_path.empty())
    return {PreferenceGraph::from_profile(parse_profile(read_file(spec_path))),
            false};
  return {parse_graph_text(read_file(graph_path)), true};
}

std::string render_node(const Instance& inst, NodeId n) {
  if (inst.abstract_nodes) return std::to_string(n);
  return inst.graph.node_to_string(n);
}

NodeSet run_engine(const Query& q, const PreferenceGraph& g,
                   SemanticsMode mode, const std::string& engine,
                   const EngineOptions& opts) {
  if (engine == "direct") return eval_direct(q, g, mode, opts);
  Translation t = translate(q, mode);
  if (engine == "mc-global") {
    NodeSet s = eval_global(t.formula, g, opts);
    return s.without_bottom();
  }
  LocalEvaluator local(t.formula, g, opts);
  NodeSet out = g.empty_set();
  for (std::uint64_t n = 0; n < g.outcome_count(); ++n)
    if (local.check(static_cast<NodeId>(n))) out.insert(static_cast<NodeId>(n));
  return out;
}

EngineOptions options_for(std::int64_t timeout_ms) {
  EngineOptions opts;
  if (timeout_ms > 0) opts.deadline = Deadline::after_ms(timeout_ms);
  return opts;
}

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

const std::vector<SemanticsMode> kAllModes = {
    SemanticsMode::Consensus, SemanticsMode::W1A2, SemanticsMode::W1A1,
    SemanticsMode::W2A2, SemanticsMode::W2A1};

int cmd_eval(const std::string& spec_path, const std::string& graph_path,
             const std::string& query_text, const std::string& semantics,
             const std::string& engine, bool json_out, bool paranoid,
             std::int64_t timeout_ms) {
  Instance inst = load_instance(spec_path, graph_path);
  const PreferenceGraph& g = inst.graph;
  StakeholderSet all = g.stakeholders();
  QueryPtr q = parse_query(query_text, &g.schema(), &all);
  SemanticsMode mode = semantics_from_string(semantics);

  auto start = std::chrono::steady_clock::now();
  NodeSet answer = run_engine(*q, g, mode, engine, options_for(timeout_ms));
  double elapsed = ms_since(start);

  if (paranoid) {
    for (const char* other : {"direct", "mc-global", "mc-local"}) {
      if (other == engine) continue;
      NodeSet cross = run_engine(*q, g, mode, other, options_for(timeout_ms));
      if (!(cross == answer))
        throw InternalError(std::string("engine disagreement: ") + other +
                            " differs from " + engine);
    }
  }

  if (json_out) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["query"] = query_text;
    doc["semantics"] = semantics;
    doc["engine"] = engine;
    json results = json::array();
    answer.for_each([&](NodeId n) { results.push_back(render_node(inst, n)); });
    doc["results"] = std::move(results);
    doc["result_size"] = answer.count();
    doc["elapsed_ms"] = elapsed;
    std::cout << doc.dump(2) << "\n";
  } else {
    answer.for_each(
        [&](NodeId n) { std::cout << render_node(inst, n) << "\n"; });
  }
  return kExitOk;
}

// The mode containments (w1a2 inside w1a1 inside w2a1, w1a2 inside w2a2
// inside w2a1) are guaranteed per preference operator, for operators whose
// arguments mean the same thing under every mode. They survive '&' and '|'
// but flip under '!', and a nested operator makes the argument itself
// mode-sensitive. This predicate recognises the query shapes for which the
// chain is an invariant of the whole answer set.
bool lattice_applies(const Query& q, bool positive = true) {
  switch (q.kind) {
    case Query::Kind::True:
    case Query::Kind::False:
    case Query::Kind::Prop:
      return true;
    case Query::Kind::Not:
      return lattice_applies(*q.lhs, !positive);
    case Query::Kind::And:
    case Query::Kind::Or:
      return lattice_applies(*q.lhs, positive) &&
             lattice_applies(*q.rhs, positive);
    case Query::Kind::Pref:
      return positive && nesting_depth(*q.lhs) == 0 &&
             nesting_depth(*q.rhs) == 0;
  }
  return false;
}

int cmd_check(const std::string& spec_path, const std::string& graph_path,
              const std::string& query_text, std::int64_t timeout_ms) {
  Instance inst = load_instance(spec_path, graph_path);
  const PreferenceGraph& g = inst.graph;
  StakeholderSet all = g.stakeholders();
  QueryPtr q = parse_query(query_text, &g.schema(), &all);

  const std::vector<std::string> engines = {"direct", "mc-global", "mc-local"};
  bool ok = true;
  std::string witness;

  std::vector<NodeSet> by_mode;
  for (SemanticsMode mode : kAllModes) {
    std::vector<NodeSet> results;
    for (const std::string& engine : engines)
      results.push_back(
          run_engine(*q, g, mode, engine, options_for(timeout_ms)));
    bool agree = results[1] == results[0] && results[2] == results[0];
    std::cout << to_string(mode) << ":";
    for (std::size_t i = 0; i < engines.size(); ++i)
      std::cout << " " << engines[i] << "=" << results[i].count();
    std::cout << (agree ? " agree" : " DISAGREE") << "\n";
    if (!agree && ok) {
      ok = false;
      // First node on which some engine deviates.
      for (std::size_t i = 1; i < results.size() && witness.empty(); ++i) {
        NodeSet diff = minus(results[i], results[0]) |
                       minus(results[0], results[i]);
        diff.for_each([&](NodeId n) {
          if (witness.empty()) witness = render_node(inst, n);
        });
      }
    }
    by_mode.push_back(results[0]);
  }

  // by_mode order follows kAllModes: cs, w1a2, w1a1, w2a2, w2a1.
  const NodeSet& w1a2 = by_mode[1];
  const NodeSet& w1a1 = by_mode[2];
  const NodeSet& w2a2 = by_mode[3];
  const NodeSet& w2a1 = by_mode[4];
  bool lattice = true;
  if (lattice_applies(*q)) {
    lattice = w1a2.subset_of(w1a1) && w1a1.subset_of(w2a1) &&
              w1a2.subset_of(w2a2) && w2a2.subset_of(w2a1);
    std::cout << "lattice: " << (lattice ? "holds" : "VIOLATED") << "\n";
  } else {
    std::cout << "lattice: n/a (mode-sensitive query shape)\n";
  }
  if (!lattice && witness.empty()) {
    NodeSet bad = minus(w1a2, w1a1) | minus(w1a1, w2a1) | minus(w1a2, w2a2) |
                  minus(w2a2, w2a1);
    bad.for_each([&](NodeId n) {
      if (witness.empty()) witness = render_node(inst, n);
    });
  }

  if (ok && lattice) return kExitOk;
  std::cout << "witness: " << witness << "\n";
  return kExitInternal;
}

int cmd_translate(const std::string& spec_path, const std::string& query_text,
                  const std::string& semantics, bool json_out) {
  const VariableSchema* schema = nullptr;
  const StakeholderSet* all = nullptr;
  PreferenceProfile profile;
  StakeholderSet stakeholders;
  if (!spec_path.empty()) {
    profile = parse_profile(read_file(spec_path));
    stakeholders = profile.stakeholders();
    schema = &profile.schema();
    all = &stakeholders;
  }
  QueryPtr q = parse_query(query_text, schema, all);
  SemanticsMode mode = semantics_from_string(semantics);
  Translation t = translate(*q, mode);
  std::string text = print_formula(t.formula);
  if (json_out) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["query"] = query_text;
    doc["semantics"] = semantics;
    doc["formula"] = text;
    doc["nodes"] = t.stats.node_count;
    doc["binders"] = t.stats.binder_count;
    doc["modalities"] = t.stats.modal_count;
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << text << "\n";
  }
  return kExitOk;
}

int cmd_gen_profile(std::uint64_t seed, int vars, int stakeholders,
                    int statements, const std::string& out_path) {
  ProfileGenConfig cfg;
  cfg.seed = seed;
  cfg.n_variables = vars;
  cfg.n_stakeholders = stakeholders;
  cfg.statements_per_stakeholder = statements;
  ProfileGenResult res = gen_profile(cfg);
  for (const std::string& w : res.warnings)
    std::cerr << "warning: " << w << "\n";
  write_output(out_path, print_profile(res.profile));
  return kExitOk;
}

int cmd_gen_graph(std::uint64_t seed, int stakeholders, int outcomes,
                  int max_edges, const std::string& out_path) {
  GraphGenConfig cfg;
  cfg.seed = seed;
  cfg.n_stakeholders = stakeholders;
  cfg.n_outcomes = outcomes;
  cfg.max_edges_per_stakeholder = max_edges;
  write_output(out_path, print_graph_text(gen_graph(cfg)));
  return kExitOk;
}

GraphGenConfig parse_bench_config(const std::string& text) {
  GraphGenConfig cfg;
  char comma1 = 0, comma2 = 0;
  std::istringstream in(text);
  if (!(in >> cfg.n_stakeholders >> comma1 >> cfg.n_outcomes >> comma2 >>
        cfg.max_edges_per_stakeholder) ||
      comma1 != ',' || comma2 != ',' || (in >> std::ws, !in.eof()))
    throw ParseError("bad --config '" + text +
                         "', expected stakeholders,outcomes,max_edges",
                     {0, 0});
  return cfg;
}

int cmd_bench(const std::vector<std::string>& config_texts,
              const std::vector<std::string>& query_texts,
              const std::string& modes_text, int repeat,
              std::uint64_t base_seed, std::int64_t timeout_ms, int threads,
              const std::string& csv_path) {
  BenchOptions opts;
  for (const std::string& c : config_texts)
    opts.configs.push_back(parse_bench_config(c));
  opts.queries = query_texts;
  std::istringstream in(modes_text);
  std::string word;
  while (std::getline(in, word, ','))
    opts.modes.push_back(semantics_from_string(word));
  opts.repeat = repeat;
  opts.base_seed = base_seed;
  opts.timeout_ms = timeout_ms;
  opts.threads = threads;
  std::vector<BenchRun> rows = run_bench(opts);
  write_output(csv_path, bench_csv(rows));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-stakeholder preference query engine"};
  app.require_subcommand(1);

  std::string spec_path, graph_path, query_text, csv_path, out_path;
  std::string semantics, engine = "mc-local", modes_text;
  bool json_out = false, paranoid = false;
  std::int64_t timeout_ms = 0;
  std::uint64_t seed = 0;
  int repeat = 1, threads = 1;
  int vars = 5, stakeholders = 4, statements = 4, outcomes = 100,
      max_edges = 200;
  std::vector<std::string> config_texts, query_texts;

  const auto semantics_check =
      CLI::IsMember({"cs", "w1a2", "w1a1", "w2a2", "w2a1"});

  CLI::App* eval = app.add_subcommand("eval", "Evaluate a query");
  eval->add_option("--spec", spec_path, "Preference profile file");
  eval->add_option("--graph", graph_path, "Explicit graph file");
  eval->add_option("--query", query_text, "Query text")->required();
  eval->add_option("--semantics", semantics, "Semantics mode")
      ->required()
      ->check(semantics_check);
  eval->add_option("--engine", engine, "direct, mc-global or mc-local")
      ->check(CLI::IsMember({"direct", "mc-global", "mc-local"}));
  eval->add_flag("--json", json_out, "JSON output");
  eval->add_flag("--paranoid", paranoid, "Cross-check all engines");
  eval->add_option("--timeout-ms", timeout_ms, "Per-evaluation budget");

  CLI::App* check = app.add_subcommand(
      "check", "Cross-check all engines and the mode lattice");
  check->add_option("--spec", spec_path, "Preference profile file");
  check->add_option("--graph", graph_path, "Explicit graph file");
  check->add_option("--query", query_text, "Query text")->required();
  check->add_option("--timeout-ms", timeout_ms, "Per-evaluation budget");

  CLI::App* trans = app.add_subcommand("translate", "Show a query's formula");
  trans->add_option("--query", query_text, "Query text")->required();
  trans->add_option("--semantics", semantics, "Semantics mode")
      ->required()
      ->check(semantics_check);
  trans->add_option("--spec", spec_path,
                    "Profile file giving atoms and 'all' their meaning");
  trans->add_flag("--json", json_out, "JSON output");

  CLI::App* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->require_subcommand(1);
  CLI::App* gen_prof = gen->add_subcommand("profile", "Random profile");
  gen_prof->add_option("--seed", seed, "Seed");
  gen_prof->add_option("--vars", vars, "Binary variables");
  gen_prof->add_option("--stakeholders", stakeholders, "Stakeholders");
  gen_prof->add_option("--statements", statements, "Statements each");
  gen_prof->add_option("--out", out_path, "Output file (default stdout)");
  CLI::App* gen_graph_cmd = gen->add_subcommand("graph", "Random graph");
  gen_graph_cmd->add_option("--seed", seed, "Seed");
  gen_graph_cmd->add_option("--stakeholders", stakeholders, "Stakeholders");
  gen_graph_cmd->add_option("--outcomes", outcomes, "Outcome nodes");
  gen_graph_cmd->add_option("--max-edges", max_edges,
                            "Edge cap per stakeholder");
  gen_graph_cmd->add_option("--out", out_path, "Output file (default stdout)");

  CLI::App* bench = app.add_subcommand("bench", "Benchmark harness");
  bench->add_option("--config", config_texts,
                    "stakeholders,outcomes,max_edges (repeatable)")
      ->required();
  bench->add_option("--query", query_texts, "Query text (repeatable)")
      ->required();
  bench->add_option("--modes", modes_text, "Comma-separated semantics modes")
      ->default_val("w1a2,w1a1,w2a2,w2a1");
  bench->add_option("--repeat", repeat, "Replicates per config");
  bench->add_option("--seed", seed, "Base seed");
  bench->add_option("--timeout-ms", timeout_ms, "Per-cell budget")
      ->default_val(120000);
  bench->add_option("--threads", threads, "Worker threads");
  bench->add_option("--csv", csv_path, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (eval->parsed())
      return cmd_eval(spec_path, graph_path, query_text, semantics, engine,
                      json_out, paranoid, timeout_ms);
    if (check->parsed())
      return cmd_check(spec_path, graph_path, query_text, timeout_ms);
    if (trans->parsed())
      return cmd_translate(spec_path, query_text, semantics, json_out);
    if (gen_prof->parsed())
      return cmd_gen_profile(seed, vars, stakeholders, statements, out_path);
    if (gen_graph_cmd->parsed())
      return cmd_gen_graph(seed, stakeholders, outcomes, max_edges, out_path);
    if (bench->parsed())
      return cmd_bench(config_texts, query_texts, modes_text, repeat, seed,
                       timeout_ms, threads, csv_path);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const TimeoutError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSemantic;
  } catch (const SemanticError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSemantic;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSemantic;
  } catch (const InternalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
