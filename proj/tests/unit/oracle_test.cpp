#include <gtest/gtest.h>

#include "rdfcomp/eval.h"
#include "rdfcomp/oracle.h"
#include "scenario.h"

using namespace rdfcomp;
using namespace scenario;
using namespace rdfcomp::oracle;

TEST(Oracle, ScenarioExamples) {
  EXPECT_TRUE(bruteForceEntails(p0(), all(), graph()));
  auto r = bruteForceCheck(p0(), StatementSet{c1(), c2()}, graph());
  EXPECT_FALSE(r.entailed);
  ASSERT_TRUE(r.counterexample.has_value());
  EXPECT_EQ(r.counterexample->get(V("crew")), I("ted"));
  EXPECT_GT(r.candidatesTried, 0u);
}

TEST(Oracle, NoStatementsAnalytic) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto inst = randomInstance(seed);
    bool expected = inst.body.isGround() && hasMatch(inst.body, inst.graph);
    EXPECT_EQ(bruteForceEntails(inst.body, StatementSet{}, inst.graph), expected)
        << seed;
  }
}

TEST(Oracle, NoValueIsComplete) {
  BGP body{tp(I("ted"), I("child"), V("c"))};
  EXPECT_TRUE(evalBGP(body, graph()).empty());
  EXPECT_TRUE(bruteForceEntails(body, all(), graph()));
  EXPECT_TRUE(entails(body, all(), graph()).complete);
}

TEST(Oracle, MoreFreshConstantsNeverFlipVerdict) {
  OracleBound two;
  two.freshPerVariable = 2;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    auto inst = randomInstance(seed);
    EXPECT_EQ(bruteForceEntails(inst.body, inst.statements, inst.graph),
              bruteForceEntails(inst.body, inst.statements, inst.graph, two))
        << seed;
  }
}

TEST(Oracle, BoundExceeded) {
  OracleBound tiny;
  tiny.maxCandidates = 3;
  EXPECT_THROW(bruteForceEntails(p0(), all(), graph(), tiny), BoundExceeded);
  OracleBound zero;
  zero.freshPerVariable = 0;
  EXPECT_THROW(bruteForceEntails(p0(), all(), graph(), zero), Error);
}

TEST(RandomInstance, Deterministic) {
  auto a = randomInstance(1);
  auto b = randomInstance(1);
  EXPECT_EQ(a.body, b.body);
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(serializeStatements(a.statements), serializeStatements(b.statements));
}

TEST(RandomInstance, WithinBounds) {
  std::size_t complete = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    auto inst = randomInstance(seed);
    EXPECT_LE(inst.graph.size(), 8u);
    EXPECT_GE(inst.body.size(), 1u);
    EXPECT_LE(inst.body.size(), 3u);
    EXPECT_LE(inst.body.variables().size(), 3u);
    EXPECT_LE(inst.statements.size(), 4u);
    complete += bruteForceEntails(inst.body, inst.statements, inst.graph);
  }
  // both verdicts must be well represented for the agreement suite to mean much
  EXPECT_GT(complete, 50u);
  EXPECT_LT(complete, 450u);
}

TEST(RandomInstance, SPOnlyProfile) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto inst = randomInstance(seed, Profile::SPOnly);
    for (const auto& c : inst.statements)
      EXPECT_TRUE(classify(c).has_value()) << seed;
  }
}

TEST(EquivalentUnder, ScenarioGrounding) {
  std::vector<PartiallyMappedBGP> lhs{PartiallyMappedBGP(p0(), Mapping{})};
  std::vector<PartiallyMappedBGP> rhs{
      PartiallyMappedBGP(p1(), map({{"crew", "tony"}})),
      PartiallyMappedBGP(p2(), map({{"crew", "ted"}}))};
  EXPECT_TRUE(equivalentUnder(lhs, rhs, all(), graph()));
  EXPECT_TRUE(equivalentUnder(lhs, lhs, all(), graph()));
  EXPECT_FALSE(equivalentUnder(lhs, {}, all(), graph()));
  // without C1 a third crew member could appear
  EXPECT_FALSE(equivalentUnder(lhs, rhs, StatementSet{c2(), c3()}, graph()));
}
