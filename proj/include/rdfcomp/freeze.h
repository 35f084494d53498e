#pragma once

#include <span>
#include <utility>
#include <vector>

#include "rdfcomp/graph.h"
#include "rdfcomp/triple.h"

namespace rdfcomp {

// Injective map from variables to fresh IRIs `urn:frozen:<name>`.
class FreezeMapping {
 public:
  FreezeMapping() = default;

  // Frozen IRI of `var` (adds it if new).
  Term add(Term var);
  // Null if var is not mapped.
  Term frozen(Term var) const;
  // Variable behind a frozen IRI, or null for any other term.
  Term variableOf(Term iri) const;

  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<std::pair<Term, Term>>& entries() const noexcept {
    return entries_;
  }

  static Term frozenIri(Term var);

 private:
  std::vector<std::pair<Term, Term>> entries_;  // var -> iri, sorted by var
};

struct FrozenBody {
  Graph graph;
  FreezeMapping mapping;
};

// Prototypical graph of `body`. Throws FreezeCollision if the body or any of
// the `forbidden` terms already lives in the frozen namespace.
FrozenBody freeze(const BGP& body, std::span<const Term> forbidden = {});

// Frozen image of a single pattern under `fm`; variables not in fm stay.
TriplePattern freezePattern(const FreezeMapping& fm, const TriplePattern& tp);

// Inverse of freeze: frozen IRIs go back to their variables.
BGP unfreeze(const FreezeMapping& fm, const Graph& g);

}  // namespace rdfcomp
