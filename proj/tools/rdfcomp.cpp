#include <CLI11.hpp>
#include <json.hpp>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "rdfcomp/bench.h"
#include "rdfcomp/engine.h"
#include "rdfcomp/eval.h"
#include "rdfcomp/oracle.h"
#include "rdfcomp/parse.h"
#include "rdfcomp/service.h"
#include "rdfcomp/store.h"

using namespace rdfcomp;
using nlohmann::json;

namespace {

constexpr int kComplete = 0;
constexpr int kIncomplete = 1;
constexpr int kUndecided = 2;

struct CheckInputs {
  std::string graph;
  std::string statements;
  std::string query;
};

struct CheckFlags {
  bool noEarlyFailure = false;
  bool noSkip = false;
  std::string index = "generic";
  std::size_t maxSteps = 10'000'000;
  long timeoutMs = 0;
  bool trace = false;
};

struct Loaded {
  Graph graph;
  StatementSet statements;
  Query query;
};

Loaded load(const CheckInputs& in) {
  Loaded l;
  l.graph = loadGraphFile(in.graph);
  auto parsed = parseStatements(readFile(in.statements));
  for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
  l.statements = std::move(parsed.statements);
  l.query = parseQuery(readFile(in.query));
  return l;
}

json mappingJson(const Mapping& m) {
  json j = json::object();
  for (const auto& [var, value] : m.bindings())
    j[std::string(var.lexical())] = value.toString();
  return j;
}

json itemJson(const PartiallyMappedBGP& item) {
  return {{"body", item.body.toString()}, {"applied", mappingJson(item.applied)}};
}

int runCheck(const CheckInputs& in, const CheckFlags& f) {
  Loaded l = load(in);
  EntailmentConfig cfg;
  cfg.earlyFailure = !f.noEarlyFailure;
  cfg.completenessSkip = !f.noSkip;
  cfg.maxSteps = f.maxSteps;
  cfg.timeout = std::chrono::milliseconds(f.timeoutMs);
  cfg.indexMode = f.index == "sp" ? IndexMode::SPIndexed : IndexMode::Generic;
  if (f.trace)
    cfg.trace = [](const TraceEvent& e) {
      std::cout << json{{"step", e.step},
                        {"action", std::string(e.action)},
                        {"item", itemJson(e.item)},
                        {"produced", e.produced}}
                       .dump()
                << "\n";
    };
  if (cfg.indexMode == IndexMode::SPIndexed &&
      !std::all_of(l.statements.begin(), l.statements.end(), isSPStatement))
    std::cerr << "warning: statements are not all SP-statements; using the "
                 "generic crucial part\n";

  CompletenessReasoner reasoner(l.statements, l.graph);
  json out = {{"answers", evalQuery(l.query, l.graph).size()}};
  try {
    auto v = reasoner.entails(l.query.body, cfg);
    out["complete"] = v.complete;
    out["index"] = std::string(toString(v.indexMode));
    json omega = json::array();
    for (const auto& m : v.saturatedMappings) omega.push_back(mappingJson(m));
    out["saturated"] = omega;
    if (v.witness)
      out["witness"] = {{"instantiation", mappingJson(v.witness->instantiation)},
                        {"missing", v.witness->missing.toString()}};
    out["stats"] = {{"steps", v.stats.steps},
                    {"epgCalls", v.stats.epgCalls},
                    {"transferCalls", v.stats.transferCalls},
                    {"elapsedUs", v.stats.elapsed.count()}};
    std::cout << out.dump() << "\n";
    return v.complete ? kComplete : kIncomplete;
  } catch (const BudgetExceeded& e) {
    out["complete"] = nullptr;
    out["undecided"] = e.what();
    out["stats"] = {{"steps", e.stats().steps}};
    std::cout << out.dump() << "\n";
    return kUndecided;
  }
}

int runOracleCheck(const CheckInputs& in, const oracle::OracleBound& b) {
  Loaded l = load(in);
  auto r = oracle::bruteForceCheck(l.query.body, l.statements, l.graph, b);
  json out = {{"complete", r.entailed}, {"candidates", r.candidatesTried}};
  if (r.counterexample) out["counterexample"] = mappingJson(*r.counterexample);
  std::cout << out.dump() << "\n";
  return r.entailed ? kComplete : kIncomplete;
}

int runFuzz(std::uint64_t seeds, std::uint64_t start, const std::string& profile,
            std::size_t fresh) {
  oracle::OracleBound bound;
  bound.freshPerVariable = fresh;
  const auto prof = profile == "sp" ? oracle::Profile::SPOnly : oracle::Profile::Mixed;
  std::size_t complete = 0;
  for (std::uint64_t seed = start; seed < start + seeds; ++seed) {
    auto inst = oracle::randomInstance(seed, prof);
    bool expected = oracle::bruteForceEntails(inst.body, inst.statements, inst.graph, bound);
    complete += expected;
    for (IndexMode mode : {IndexMode::Generic, IndexMode::SPIndexed})
      for (bool early : {true, false})
        for (bool skip : {true, false}) {
          EntailmentConfig cfg;
          cfg.indexMode = mode;
          cfg.earlyFailure = early;
          cfg.completenessSkip = skip;
          bool got = entails(inst.body, inst.statements, inst.graph, cfg).complete;
          if (got == expected) continue;
          std::cout << "divergence at seed " << seed << " (index "
                    << toString(mode) << ", earlyFailure " << early
                    << ", skip " << skip << "): engine " << got << ", oracle "
                    << expected << "\n"
                    << "body: " << inst.body.toString() << "\n"
                    << "statements:\n" << serializeStatements(inst.statements)
                    << "graph:\n" << serializeGraph(inst.graph);
          return 1;
        }
  }
  std::cout << "no divergence over " << seeds << " seeds (" << complete
            << " complete, " << seeds - complete << " not complete)\n";
  return 0;
}

int runGen(const std::string& specPath, const std::string& outDir) {
  auto spec = specPath.empty() ? bench::defaultSpec() : bench::loadSpec(specPath);
  auto w = bench::generateWorkload(spec);
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(outDir) / "queries");
  std::ofstream(fs::path(outDir) / "graph.nt") << serializeGraph(w.graph);
  std::ofstream(fs::path(outDir) / "success.stmts") << serializeStatements(w.success);
  std::ofstream(fs::path(outDir) / "failure.stmts") << serializeStatements(w.failure);
  std::size_t n = 0;
  for (const auto& p : w.patterns)
    for (std::size_t i = 0; i < p.queries.size(); ++i, ++n) {
      std::ostringstream name;
      name << p.name << "-" << std::setw(4) << std::setfill('0') << i << ".rq";
      std::ofstream(fs::path(outDir) / "queries" / name.str())
          << serializeQuery(p.queries[i]) << "\n";
    }
  std::cout << json{{"triples", w.graph.size()},
                    {"success", w.success.size()},
                    {"failure", w.failure.size()},
                    {"queries", n}}
                   .dump()
            << "\n";
  return 0;
}

int runBenchCmd(const std::string& specPath, const std::string& out,
                std::string raw, std::size_t parallel, std::size_t reps) {
  auto spec = specPath.empty() ? bench::defaultSpec() : bench::loadSpec(specPath);
  if (reps) spec.repetitions = reps;
  bench::BenchOptions opts;
  opts.threads = parallel == 0 ? 1 : parallel;
  auto report = bench::runBench(spec, opts);
  if (!out.empty()) {
    std::ofstream csv(out);
    bench::writeCsv(report, csv);
    if (raw.empty()) raw = out + ".raw.jsonl";
  } else {
    bench::writeCsv(report, std::cout);
  }
  if (!raw.empty()) {
    std::ofstream f(raw);
    bench::writeRawJsonl(report, f);
  }
  bench::writeTable(report, out.empty() ? std::cerr : std::cout);
  if (!report.trendHolds()) {
    std::cerr << "expected median(success) > median(failure) > median(eval) "
                 "for every pattern\n";
    return 1;
  }
  return 0;
}

std::string env(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

service::HttpService* activeService = nullptr;

int runServe(store::StoreOptions options, std::string bind, long timeoutMs) {
  store::Store store(options);
  service::ServiceConfig cfg;
  if (timeoutMs > 0) cfg.entailmentTimeout = std::chrono::milliseconds(timeoutMs);
  service::HttpService http(store, cfg);
  auto [host, port] = service::parseBindAddress(bind);
  activeService = &http;
  std::signal(SIGINT, [](int) { if (activeService) activeService->stop(); });
  std::signal(SIGTERM, [](int) { if (activeService) activeService->stop(); });
  auto s = store.snapshot();
  std::cerr << "serving " << s->graph->size() << " triples and "
            << s->statements->size() << " statements on " << host << ":" << port
            << "\n";
  bool ok = http.listen(host, port);
  activeService = nullptr;
  if (!ok) {
    std::cerr << "error: cannot listen on " << bind << "\n";
    return 2;
  }
  return 0;
}

void addCheckInputs(CLI::App* cmd, CheckInputs& in) {
  cmd->add_option("--graph", in.graph, "graph file (N-Triples subset)")
      ->required()->check(CLI::ExistingFile);
  cmd->add_option("--statements", in.statements, "completeness statement file")
      ->required()->check(CLI::ExistingFile);
  cmd->add_option("--query", in.query, "query file (SELECT ... WHERE { ... })")
      ->required()->check(CLI::ExistingFile);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Completeness reasoning over RDF graphs"};
  app.require_subcommand(1);

  CheckInputs checkIn;
  CheckFlags flags;
  auto* check = app.add_subcommand("check", "decide whether a query is complete");
  addCheckInputs(check, checkIn);
  check->add_flag("--no-early-failure", flags.noEarlyFailure,
                  "check containment only after saturation finishes");
  check->add_flag("--no-skip", flags.noSkip,
                  "expand items whose crucial part is the whole body");
  check->add_option("--index", flags.index, "crucial part computation")
      ->check(CLI::IsMember({"sp", "generic"}))->capture_default_str();
  check->add_option("--max-steps", flags.maxSteps, "worklist step budget")
      ->check(CLI::PositiveNumber)->capture_default_str();
  check->add_option("--timeout", flags.timeoutMs, "timeout in ms, 0 for none")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  check->add_flag("--trace", flags.trace, "stream worklist decisions as JSON lines");

  CheckInputs oracleIn;
  oracle::OracleBound bound;
  auto* oracleCmd = app.add_subcommand(
      "oracle-check", "decide completeness by brute-force counterexample search");
  addCheckInputs(oracleCmd, oracleIn);
  oracleCmd->add_option("--fresh-per-variable", bound.freshPerVariable,
                        "fresh constants per query variable")
      ->check(CLI::PositiveNumber)->capture_default_str();
  oracleCmd->add_option("--max-candidates", bound.maxCandidates,
                        "enumeration cap")->capture_default_str();

  std::uint64_t seeds = 500;
  std::uint64_t start = 0;
  std::string profile = "mixed";
  std::size_t fresh = 1;
  auto* fuzz = app.add_subcommand("fuzz", "compare the engine with the oracle on random instances");
  fuzz->add_option("--seeds", seeds, "number of seeds")->capture_default_str();
  fuzz->add_option("--start", start, "first seed")->capture_default_str();
  fuzz->add_option("--profile", profile, "instance profile")
      ->check(CLI::IsMember({"mixed", "sp"}))->capture_default_str();
  fuzz->add_option("--fresh-per-variable", fresh, "oracle fresh constants")
      ->check(CLI::PositiveNumber)->capture_default_str();

  std::string genSpec;
  std::string genOut;
  auto* gen = app.add_subcommand("gen", "write a generated workload to a directory");
  gen->add_option("--spec", genSpec, "workload spec (key=value); default: built-in chains");
  gen->add_option("--out-dir", genOut, "output directory")->required();

  std::string benchSpec;
  std::string benchOut;
  std::string benchRaw;
  std::size_t parallel = 1;
  std::size_t reps = 0;
  auto* benchCmd = app.add_subcommand("bench", "time success, failure and evaluation cases");
  benchCmd->add_option("--spec", benchSpec, "workload spec (key=value); default: built-in chains");
  benchCmd->add_option("--out", benchOut, "CSV report path (default: stdout)");
  benchCmd->add_option("--raw", benchRaw, "raw timings JSON lines (default: <out>.raw.jsonl)");
  benchCmd->add_option("--parallel", parallel,
                       "worker threads; timings are then not comparable")
      ->check(CLI::PositiveNumber)->capture_default_str();
  benchCmd->add_option("--repetitions", reps, "override repetitions per query");

  store::StoreOptions storeOpts;
  storeOpts.graphSource = env("GRAPH_FILE");
  storeOpts.statementLog = env("STATEMENT_LOG");
  storeOpts.statementsFile = env("STATEMENTS_FILE");
  storeOpts.labelsFile = env("LABELS_FILE");
  std::string bind = env("BIND_ADDR").empty() ? "127.0.0.1:8080" : env("BIND_ADDR");
  long timeoutMs = env("ENTAILMENT_TIMEOUT_MS").empty()
                       ? 10'000
                       : std::atol(env("ENTAILMENT_TIMEOUT_MS").c_str());
  auto* serve = app.add_subcommand("serve", "run the HTTP API under /api/v1");
  serve->add_option("--graph", storeOpts.graphSource,
                    "graph file or http:// URL [env GRAPH_FILE]");
  serve->add_option("--statements", storeOpts.statementsFile,
                    "initial SP-statements [env STATEMENTS_FILE]");
  serve->add_option("--log", storeOpts.statementLog,
                    "statement log for persistence [env STATEMENT_LOG]");
  serve->add_option("--labels", storeOpts.labelsFile,
                    "TSV of iri and label for search [env LABELS_FILE]");
  serve->add_option("--bind", bind, "host:port [env BIND_ADDR]")->capture_default_str();
  serve->add_option("--timeout", timeoutMs,
                    "default entailment timeout in ms [env ENTAILMENT_TIMEOUT_MS]")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*check) return runCheck(checkIn, flags);
    if (*oracleCmd) return runOracleCheck(oracleIn, bound);
    if (*fuzz) return runFuzz(seeds, start, profile, fresh);
    if (*gen) return runGen(genSpec, genOut);
    if (*benchCmd) return runBenchCmd(benchSpec, benchOut, benchRaw, parallel, reps);
    if (*serve) return runServe(storeOpts, bind, timeoutMs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
