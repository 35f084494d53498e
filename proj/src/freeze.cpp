#include "rdfcomp/freeze.h"

#include <algorithm>
#include <string>

#include "rdfcomp/error.h"

namespace rdfcomp {

Term FreezeMapping::frozenIri(Term var) {
  return Term::iri(std::string(kFrozenPrefix) + std::string(var.lexical()));
}

Term FreezeMapping::add(Term var) {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), var,
      [](const std::pair<Term, Term>& e, Term v) { return e.first < v; });
  if (it != entries_.end() && it->first == var) return it->second;
  Term iri = frozenIri(var);
  entries_.insert(it, {var, iri});
  return iri;
}

Term FreezeMapping::frozen(Term var) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), var,
      [](const std::pair<Term, Term>& e, Term v) { return e.first < v; });
  return (it != entries_.end() && it->first == var) ? it->second : Term{};
}

Term FreezeMapping::variableOf(Term iri) const {
  if (!iri.isReserved()) return {};
  for (const auto& [var, frozen] : entries_)
    if (frozen == iri) return var;
  return {};
}

TriplePattern freezePattern(const FreezeMapping& fm, const TriplePattern& tp) {
  auto f = [&](Term t) {
    if (!t.isVariable()) return t;
    Term iri = fm.frozen(t);
    return iri.isNull() ? t : iri;
  };
  return TriplePattern(f(tp.subject), f(tp.predicate), f(tp.object));
}

FrozenBody freeze(const BGP& body, std::span<const Term> forbidden) {
  for (Term t : forbidden)
    if (t.isReserved())
      throw FreezeCollision("input term " + t.toString() +
                            " uses the reserved frozen namespace");
  FrozenBody out;
  std::vector<Triple> triples;
  triples.reserve(body.size());
  for (const auto& tp : body) {
    for (Term t : {tp.subject, tp.predicate, tp.object})
      if (t.isReserved())
        throw FreezeCollision("query term " + t.toString() +
                              " uses the reserved frozen namespace");
    for (Term t : {tp.subject, tp.predicate, tp.object})
      if (t.isVariable()) out.mapping.add(t);
    triples.push_back(freezePattern(out.mapping, tp).toTriple());
  }
  out.graph = Graph(std::move(triples));
  return out;
}

BGP unfreeze(const FreezeMapping& fm, const Graph& g) {
  auto back = [&](Term t) {
    Term v = fm.variableOf(t);
    return v.isNull() ? t : v;
  };
  std::vector<TriplePattern> out;
  out.reserve(g.size());
  for (const auto& t : g)
    out.emplace_back(back(t.subject), back(t.predicate), back(t.object));
  return BGP(std::move(out));
}

}  // namespace rdfcomp
