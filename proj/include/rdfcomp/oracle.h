#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rdfcomp/engine.h"
#include "rdfcomp/graph.h"
#include "rdfcomp/statement.h"

namespace rdfcomp::oracle {

// Brute-force referee for completeness entailment, independent of the
// saturation engine. Only for toy instances.

struct OracleBound {
  std::size_t freshPerVariable = 1;
  std::size_t maxCandidates = 2'000'000;
};

class BoundExceeded : public Error {
 public:
  using Error::Error;
};

struct OracleResult {
  bool entailed = true;
  // ν whose image G ∪ νP is a valid extension with a new answer.
  std::optional<Mapping> counterexample;
  std::size_t candidatesTried = 0;
};

// Decides C, G |= Compl(P) by searching for a counterexample extension.
//
// Small-model argument: if some valid extension G' gains an answer µ, then
// G ∪ µP ⊆ G' is valid as well (T_C is monotone) and still gains µ. Terms of
// µ outside the active domain of G, C and P can be renamed injectively to
// fresh IRIs without changing validity or novelty, and µ uses at most |var(P)|
// such terms. Enumerating ν : var(P) -> adom ∪ {|var(P)| fresh IRIs} and
// testing G ∪ νP therefore covers every counterexample.
//
// Throws BoundExceeded when the candidate count exceeds b.maxCandidates.
OracleResult bruteForceCheck(const BGP& body, const StatementSet& cs,
                             const Graph& g, const OracleBound& b = {});
bool bruteForceEntails(const BGP& body, const StatementSet& cs,
                       const Graph& g, const OracleBound& b = {});

// [[(P, µ)]]G' for a set of partially mapped BGPs: union of µ ∪ ν over
// ν ∈ [[P]]G', sorted.
std::vector<Mapping> evaluatePartial(
    const std::vector<PartiallyMappedBGP>& items, const Graph& g);

// Equivalence under C and G, decided over the bounded family of valid
// extensions G ∪ νP_i (P_i ranging over the bodies of both sets), plus G
// itself. By the same shrinking argument as above, a difference on some valid
// extension shows up on one of these.
bool equivalentUnder(const std::vector<PartiallyMappedBGP>& lhs,
                     const std::vector<PartiallyMappedBGP>& rhs,
                     const StatementSet& cs, const Graph& g,
                     const OracleBound& b = {});

enum class Profile { Mixed, SPOnly };

struct RandomInstance {
  BGP body;
  StatementSet statements;
  Graph graph;
};

// Deterministic in `seed`. Terms come from six IRIs, two predicates and one
// literal; at most 8 triples, 3 body patterns over at most 3 variables, and
// 4 statements.
RandomInstance randomInstance(std::uint64_t seed,
                              Profile profile = Profile::Mixed);

}  // namespace rdfcomp::oracle
