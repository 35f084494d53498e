#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rdfcomp/bench.h"
#include "rdfcomp/engine.h"
#include "rdfcomp/eval.h"

using namespace rdfcomp;
using namespace rdfcomp::bench;

namespace {

WorkloadSpec smallSpec(std::uint64_t seed = 7) {
  return parseSpec(
      "name = small\n"
      "roots = 25\n"
      "queries = 20\n"
      "seed = " + std::to_string(seed) + "\n"
      "noise = 50\n"
      "repetitions = 3\n"
      "warmup = 0\n"
      "pattern.A.predicates = <http://b.example/p> http://b.example/q\n"
      "pattern.A.fanout = 2 3\n"
      "pattern.B.predicates = http://b.example/r\n"
      "pattern.B.fanout = 1\n");
}

std::set<std::string> ids(const StatementSet& cs) {
  std::set<std::string> out;
  for (const auto& c : cs) out.insert(c.id());
  return out;
}

EntailmentConfig spConfig() {
  EntailmentConfig cfg;
  cfg.indexMode = IndexMode::SPIndexed;
  return cfg;
}

}  // namespace

TEST(BenchSpec, ParsesAllKeys) {
  auto spec = smallSpec();
  EXPECT_EQ(spec.name, "small");
  EXPECT_EQ(spec.roots, 25u);
  EXPECT_EQ(spec.queries, 20u);
  EXPECT_EQ(spec.seed, 7u);
  EXPECT_EQ(spec.noise, 50u);
  EXPECT_EQ(spec.repetitions, 3u);
  EXPECT_EQ(spec.warmup, 0u);
  ASSERT_EQ(spec.patterns.size(), 2u);
  EXPECT_EQ(spec.patterns[0].name, "A");
  EXPECT_EQ(spec.patterns[0].predicates[0], Term::iri("http://b.example/p"));
  EXPECT_EQ(spec.patterns[0].fanout, (std::vector<std::size_t>{2, 3}));
  EXPECT_DOUBLE_EQ(spec.dropFraction, 0.2);
}

TEST(BenchSpec, Errors) {
  const std::string base =
      "pattern.A.predicates = http://b.example/p\npattern.A.fanout = 1\n";
  EXPECT_THROW(parseSpec(base + "roots\n"), ParseError);
  EXPECT_THROW(parseSpec(base + "colour = red\n"), ParseError);
  EXPECT_THROW(parseSpec(base + "roots = -3\n"), ParseError);
  EXPECT_THROW(parseSpec(base + "drop_fraction = 1.5\n"), Error);
  EXPECT_THROW(parseSpec(base + "drop_fraction = -0.1\n"), Error);
  EXPECT_THROW(parseSpec(base + "repetitions = 0\n"), Error);
  EXPECT_THROW(parseSpec("pattern.A.predicates = http://b.example/p\n"), Error);
  EXPECT_THROW(parseSpec("pattern.A.predicates = http://b.example/p\n"
                         "pattern.A.fanout = 0\n"),
               Error);
  EXPECT_THROW(parseSpec("name = x\n"), Error);  // no patterns
  EXPECT_NO_THROW(parseSpec("# comment only line\n" + base));
}

TEST(BenchSpec, ErrorCarriesLine) {
  try {
    parseSpec("name = a\n\nbogus\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(BenchSpec, DefaultShapes) {
  auto spec = defaultSpec();
  ASSERT_EQ(spec.patterns.size(), 3u);
  auto w = generateWorkload(spec);
  const std::vector<std::size_t> expected = {1, 4, 108};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(w.patterns[i].queries.size(), spec.roots);
    EXPECT_EQ(w.patterns[i].queries.front().body.size(), 3u);
    EXPECT_EQ(evalQuery(w.patterns[i].queries.front(), w.graph).size(),
              expected[i])
        << spec.patterns[i].name;
  }
}

TEST(BenchGenerator, SuccessQueriesAreComplete) {
  auto spec = smallSpec();
  auto w = generateWorkload(spec);
  CompletenessReasoner sp(w.success, w.graph);
  CompletenessReasoner generic(w.success, w.graph);
  for (const auto& pq : w.patterns)
    for (const auto& q : pq.queries) {
      EXPECT_TRUE(sp.entails(q.body, spConfig()).complete) << q.body.toString();
      EXPECT_TRUE(generic.entails(q.body).complete) << q.body.toString();
    }
}

TEST(BenchGenerator, FailureSetBreaksSomeQueries) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto w = generateWorkload(smallSpec(seed));
    CompletenessReasoner r(w.failure, w.graph);
    std::size_t incomplete = 0;
    for (const auto& pq : w.patterns)
      for (const auto& q : pq.queries)
        if (!r.entails(q.body, spConfig()).complete) ++incomplete;
    EXPECT_GE(incomplete, 1u) << "seed " << seed;
  }
}

TEST(BenchGenerator, FailureSetSizeAndDummies) {
  auto spec = smallSpec();
  auto w = generateWorkload(spec);
  EXPECT_EQ(w.failure.size(), w.success.size());
  auto dropped = static_cast<std::size_t>(
      std::llround(spec.dropFraction * static_cast<double>(w.success.size())));
  std::size_t dummies = 0;
  for (const auto& c : w.failure) {
    Term s = c.body().patterns().front().subject;
    if (s.lexical().rfind(kDummyPrefix, 0) == 0) ++dummies;
  }
  EXPECT_EQ(dummies, dropped);
}

TEST(BenchGenerator, DropFractionExtremes) {
  auto spec = smallSpec();
  spec.dropFraction = 0.0;
  auto none = generateWorkload(spec);
  EXPECT_EQ(ids(none.failure), ids(none.success));

  spec.dropFraction = 1.0;
  auto all = generateWorkload(spec);
  auto success = ids(all.success);
  for (const auto& c : all.failure) EXPECT_FALSE(success.count(c.id()));
  CompletenessReasoner r(all.failure, all.graph);
  for (const auto& pq : all.patterns)
    for (const auto& q : pq.queries)
      EXPECT_FALSE(r.entails(q.body, spConfig()).complete);
}

TEST(BenchGenerator, Deterministic) {
  auto a = generateWorkload(smallSpec(3));
  auto b = generateWorkload(smallSpec(3));
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(ids(a.success), ids(b.success));
  EXPECT_EQ(ids(a.failure), ids(b.failure));
  auto c = generateWorkload(smallSpec(4));
  EXPECT_NE(ids(a.failure), ids(c.failure));
}

TEST(BenchReportTest, MedianHelper) {
  EXPECT_EQ(median({}), 0);
  EXPECT_EQ(median({3}), 3);
  EXPECT_EQ(median({5, 1, 3}), 3);
  EXPECT_EQ(median({4, 1, 3, 2}), 2.5);
}

TEST(BenchReportTest, CsvRecomputesFromRaw) {
  auto spec = smallSpec();
  auto report = runBench(spec);
  ASSERT_EQ(report.patterns.size(), 2u);
  EXPECT_EQ(report.repetitions, 3u);
  EXPECT_TRUE(report.comparable);

  std::ostringstream raw;
  writeRawJsonl(report, raw);
  // pattern/case -> query -> timings
  std::map<std::pair<std::string, std::string>,
           std::map<std::size_t, std::vector<double>>>
      grouped;
  std::istringstream lines(raw.str());
  std::size_t count = 0;
  for (std::string line; std::getline(lines, line); ++count) {
    auto j = nlohmann::json::parse(line);
    grouped[{j["pattern"], j["case"]}][j["query"].get<std::size_t>()]
        .push_back(j["us"].get<double>());
  }
  EXPECT_EQ(count, report.raw.size());

  std::ostringstream csv;
  writeCsv(report, csv);
  std::istringstream rows(csv.str());
  std::string header;
  std::getline(rows, header);
  EXPECT_EQ(header, "pattern,case,median_us,samples");
  std::size_t n = 0;
  for (std::string row; std::getline(rows, row); ++n) {
    std::istringstream fields(row);
    std::string pattern, kase, med, samples;
    std::getline(fields, pattern, ',');
    std::getline(fields, kase, ',');
    std::getline(fields, med, ',');
    std::getline(fields, samples, ',');
    std::vector<double> perQuery;
    for (auto& [q, ts] : grouped[{pattern, kase}]) {
      EXPECT_EQ(ts.size(), spec.repetitions);
      perQuery.push_back(median(ts));
    }
    EXPECT_EQ(perQuery.size(), std::stoul(samples));
    EXPECT_NEAR(median(perQuery), std::stod(med), 1e-3) << row;
  }
  EXPECT_EQ(n, 6u);

  std::ostringstream table;
  writeTable(report, table);
  EXPECT_NE(table.str().find("medians over 3 repetitions"), std::string::npos);
}

TEST(BenchReportTest, ParallelRunIsMarked) {
  auto spec = smallSpec();
  spec.roots = 6;
  spec.queries = 6;
  BenchOptions opts;
  opts.threads = 2;
  auto report = runBench(spec, opts);
  EXPECT_FALSE(report.comparable);
  EXPECT_EQ(report.patterns[0].success.samples, 6u);
}
