#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rdfcomp/graph.h"
#include "rdfcomp/statement.h"
#include "rdfcomp/triple.h"

namespace rdfcomp::bench {

// A chain query {(?v,p1,?w), (?w,p2,?x), ...}; every node at hop h has
// fanout[h] successors, so a root yields the product of fanouts as answers.
struct PatternSpec {
  std::string name;
  std::vector<Term> predicates;
  std::vector<std::size_t> fanout;
};

struct WorkloadSpec {
  std::string name = "workload";
  std::vector<PatternSpec> patterns;
  std::size_t roots = 120;      // generated roots (queries) per pattern
  std::size_t queries = 40;     // sampled queries per pattern and case
  double dropFraction = 0.2;
  std::size_t noise = 0;        // unrelated triples added to the graph
  std::uint64_t seed = 1;
  std::size_t repetitions = 10;
  std::size_t warmup = 1;

  // Throws Error on an invalid combination.
  void validate() const;
};

// key=value lines, '#' comments:
//   name, roots, queries, drop_fraction, noise, seed, repetitions, warmup
//   pattern.<name>.predicates = <iri> <iri> ...
//   pattern.<name>.fanout = 1 2 2
WorkloadSpec parseSpec(std::string_view text);
WorkloadSpec loadSpec(const std::string& path);
// Three chain shapes of length 3 with 1, 4 and 108 answers per root.
WorkloadSpec defaultSpec();

struct PatternQueries {
  std::string name;
  std::vector<Query> queries;  // one per root, ?v instantiated
};

struct Workload {
  Graph graph;
  StatementSet success;  // every generated query is complete
  StatementSet failure;  // success minus dropped, plus as many dummies
  std::vector<PatternQueries> patterns;
};

inline constexpr std::string_view kDummyPrefix = "urn:dummy:";

// Deterministic in spec.seed. Throws Error when no query would be generated.
Workload generateWorkload(const WorkloadSpec& spec);

struct CaseTiming {
  double medianUs = 0;
  std::size_t samples = 0;  // queries measured
};

struct PatternReport {
  std::string name;
  CaseTiming success;
  CaseTiming failure;
  CaseTiming eval;
  bool trendHolds() const {
    return success.medianUs > failure.medianUs &&
           failure.medianUs > eval.medianUs;
  }
};

struct RawTiming {
  std::string pattern;
  std::string kase;  // success | failure | eval
  std::size_t query;
  std::size_t repetition;
  double us;
};

struct BenchReport {
  std::vector<PatternReport> patterns;
  std::vector<RawTiming> raw;
  std::size_t repetitions = 0;
  bool comparable = true;  // false for --parallel runs
  bool trendHolds() const;
};

struct BenchOptions {
  std::size_t threads = 1;  // >1 shards queries; timings become non-comparable
};

// Per query: median over repetitions (warmup excluded). Per case: median of
// those medians. Failure-case queries are sampled among the queries that are
// not complete under the failure set.
BenchReport runBench(const WorkloadSpec& spec, const BenchOptions& opts = {});

void writeCsv(const BenchReport& r, std::ostream& out);
void writeRawJsonl(const BenchReport& r, std::ostream& out);
void writeTable(const BenchReport& r, std::ostream& out);

double median(std::vector<double> values);

}  // namespace rdfcomp::bench
