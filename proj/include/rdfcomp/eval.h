#pragma once

#include <vector>

#include "rdfcomp/graph.h"
#include "rdfcomp/triple.h"

namespace rdfcomp {

// [[P]]G: every mapping µ with dom(µ) = var(P) and µP ⊆ G. The empty BGP
// yields the single empty mapping. The result has no duplicates.
//
// Patterns are joined by backtracking; at each level the pattern with the
// fewest matches under the current bindings goes next.
std::vector<Mapping> evalBGP(const BGP& body, GraphView graph);

// True iff [[P]]G is non-empty; stops at the first embedding.
bool hasMatch(const BGP& body, GraphView graph);

// Answers of a query under bag semantics: one projected row per mapping of
// the body, duplicates kept.
std::vector<Mapping> evalQuery(const Query& query, GraphView graph);

}  // namespace rdfcomp
