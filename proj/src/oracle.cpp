#include "rdfcomp/oracle.h"

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "rdfcomp/eval.h"

namespace rdfcomp::oracle {
namespace {

void addTerms(std::vector<Term>& out, const BGP& body) {
  for (const auto& tp : body)
    for (Term t : {tp.subject, tp.predicate, tp.object})
      if (t.isGround()) out.push_back(t);
}

std::vector<Term> activeDomain(const Graph& g, const StatementSet& cs) {
  std::vector<Term> out = cs.groundTerms();
  for (const auto& t : g) {
    out.push_back(t.subject);
    out.push_back(t.predicate);
    out.push_back(t.object);
  }
  return out;
}

void normalize(std::vector<Term>& terms) {
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
}

std::vector<Term> freshTerms(std::size_t n) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(Term::iri("urn:oracle:fresh:" + std::to_string(i)));
  return out;
}

std::size_t candidateCount(std::size_t universe, std::size_t vars,
                           std::size_t cap) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < vars; ++i) {
    if (universe != 0 && n > cap / universe) return cap + 1;
    n *= universe;
  }
  return n;
}

// Calls f(ν) for every ν : vars -> universe whose image of `body` is a set of
// well-formed triples. f returns false to stop.
template <typename F>
void forEachGrounding(const BGP& body, const std::vector<Term>& universe,
                      F&& f) {
  const auto vars = body.variables();
  std::vector<std::size_t> digit(vars.size(), 0);
  if (!vars.empty() && universe.empty()) return;
  while (true) {
    Mapping nu;
    for (std::size_t i = 0; i < vars.size(); ++i)
      nu.bind(vars[i], universe[digit[i]]);
    if (auto image = nu.tryApply(body)) {
      bool wellFormed = std::all_of(
          image->begin(), image->end(),
          [](const TriplePattern& tp) { return tp.object.isGround(); });
      if (wellFormed && !f(nu, *image)) return;
    }
    std::size_t i = 0;
    while (i < digit.size() && ++digit[i] == universe.size()) digit[i++] = 0;
    if (i == digit.size()) return;
  }
}

Graph asGraph(const BGP& groundBody) {
  std::vector<Triple> triples;
  for (const auto& tp : groundBody) triples.push_back(tp.toTriple());
  return Graph(std::move(triples));
}

bool validExtension(const StatementSet& cs, const Graph& g,
                    const Graph& added) {
  return transfer(cs, GraphView(g, added)).isSubsetOf(g);
}

}  // namespace

OracleResult bruteForceCheck(const BGP& body, const StatementSet& cs,
                             const Graph& g, const OracleBound& b) {
  if (b.freshPerVariable == 0) throw Error("freshPerVariable must be >= 1");
  const auto vars = body.variables();
  std::vector<Term> universe = activeDomain(g, cs);
  addTerms(universe, body);
  normalize(universe);
  for (Term t : freshTerms(vars.size() * b.freshPerVariable))
    universe.push_back(t);

  if (candidateCount(universe.size(), vars.size(), b.maxCandidates) >
      b.maxCandidates)
    throw BoundExceeded("oracle candidate space exceeds " +
                        std::to_string(b.maxCandidates));

  auto answers = evalBGP(body, g);
  std::sort(answers.begin(), answers.end());

  OracleResult result;
  forEachGrounding(body, universe, [&](const Mapping& nu, const BGP& image) {
    ++result.candidatesTried;
    if (std::binary_search(answers.begin(), answers.end(), nu)) return true;
    // G' = G ∪ νP gains the answer ν; it is a counterexample iff valid
    if (validExtension(cs, g, asGraph(image))) {
      result.entailed = false;
      result.counterexample = nu;
      return false;
    }
    return true;
  });
  return result;
}

bool bruteForceEntails(const BGP& body, const StatementSet& cs,
                       const Graph& g, const OracleBound& b) {
  return bruteForceCheck(body, cs, g, b).entailed;
}

std::vector<Mapping> evaluatePartial(
    const std::vector<PartiallyMappedBGP>& items, const Graph& g) {
  std::set<Mapping> out;
  for (const auto& item : items)
    for (const auto& nu : evalBGP(item.body, g))
      if (auto m = item.applied.merged(nu)) out.insert(std::move(*m));
  return {out.begin(), out.end()};
}

bool equivalentUnder(const std::vector<PartiallyMappedBGP>& lhs,
                     const std::vector<PartiallyMappedBGP>& rhs,
                     const StatementSet& cs, const Graph& g,
                     const OracleBound& b) {
  if (b.freshPerVariable == 0) throw Error("freshPerVariable must be >= 1");
  std::vector<Term> universe = activeDomain(g, cs);
  std::size_t maxVars = 0;
  std::vector<const BGP*> bodies;
  for (const auto* side : {&lhs, &rhs})
    for (const auto& item : *side) {
      addTerms(universe, item.body);
      for (const auto& [var, value] : item.applied.bindings())
        universe.push_back(value);
      maxVars = std::max(maxVars, item.body.variables().size());
      bodies.push_back(&item.body);
    }
  normalize(universe);
  for (Term t : freshTerms(maxVars * b.freshPerVariable)) universe.push_back(t);

  std::size_t total = 0;
  for (const BGP* body : bodies)
    total += candidateCount(universe.size(), body->variables().size(),
                            b.maxCandidates);
  if (total > b.maxCandidates)
    throw BoundExceeded("equivalence check exceeds " +
                        std::to_string(b.maxCandidates) + " extensions");

  auto sameOn = [&](const Graph& ext) {
    return evaluatePartial(lhs, ext) == evaluatePartial(rhs, ext);
  };
  if (!sameOn(g)) return false;

  bool equivalent = true;
  for (const BGP* body : bodies) {
    forEachGrounding(*body, universe, [&](const Mapping&, const BGP& image) {
      Graph added = asGraph(image);
      if (!validExtension(cs, g, added)) return true;
      if (!sameOn(g.unionWith(added))) {
        equivalent = false;
        return false;
      }
      return true;
    });
    if (!equivalent) break;
  }
  return equivalent;
}

RandomInstance randomInstance(std::uint64_t seed, Profile profile) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 1);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto chance = [&](unsigned percent) { return pick(100) < percent; };

  std::vector<Term> entities;
  for (int i = 0; i < 6; ++i)
    entities.push_back(Term::iri("http://example.org/r/e" + std::to_string(i)));
  const std::vector<Term> predicates = {Term::iri("http://example.org/r/p0"),
                                        Term::iri("http://example.org/r/p1")};
  const Term literal = Term::literal("v");
  const std::vector<Term> vars = {Term::variable("x"), Term::variable("y"),
                                  Term::variable("z")};
  auto entity = [&] { return entities[pick(entities.size())]; };
  auto predicate = [&] { return predicates[pick(predicates.size())]; };

  RandomInstance out;

  std::vector<Triple> triples;
  std::size_t nTriples = pick(9);
  for (std::size_t i = 0; i < nTriples; ++i)
    triples.emplace_back(entity(), predicate(),
                         chance(10) ? literal : entity());
  out.graph = Graph(std::move(triples));

  // body: up to 3 patterns, chains favoured by reusing introduced variables
  std::vector<TriplePattern> patterns;
  std::size_t used = 0;
  auto variable = [&](bool preferOld) {
    if (used > 0 && (preferOld || used == vars.size())) return vars[pick(used)];
    return vars[used++];
  };
  std::size_t nPatterns = 1 + pick(3);
  for (std::size_t i = 0; i < nPatterns; ++i) {
    Term s = chance(50) ? variable(true) : entity();
    Term p = chance(10) ? variable(false) : predicate();
    Term o;
    unsigned roll = static_cast<unsigned>(pick(100));
    if (roll < 55) o = variable(false);
    else if (roll < 95) o = entity();
    else o = literal;
    patterns.emplace_back(s, p, o);
  }
  out.body = BGP(std::move(patterns));

  // statement keys lean towards the body and the graph so that complete
  // instances are not rare
  std::vector<std::pair<Term, Term>> keys;
  for (const auto& tp : out.body)
    if (tp.subject.isIri() && tp.predicate.isIri())
      keys.emplace_back(tp.subject, tp.predicate);
  for (const auto& t : out.graph) keys.emplace_back(t.subject, t.predicate);
  auto key = [&]() -> std::pair<Term, Term> {
    if (!keys.empty() && chance(60)) return keys[pick(keys.size())];
    return {entity(), predicate()};
  };
  auto bodyPredicate = [&]() -> Term {
    for (const auto& tp : out.body)
      if (tp.predicate.isIri() && chance(50)) return tp.predicate;
    return predicate();
  };

  std::size_t nStatements = pick(5);
  for (std::size_t i = 0; i < nStatements; ++i) {
    const Term v = Term::variable("v");
    const Term w = Term::variable("w");
    std::vector<TriplePattern> body;
    if (profile == Profile::SPOnly || chance(60)) {
      auto [s, p] = key();
      body.emplace_back(s, p, v);
    } else {
      switch (pick(4)) {
        case 0: body.emplace_back(v, bodyPredicate(), w); break;
        case 1: body.emplace_back(v, bodyPredicate(), entity()); break;
        case 2: {
          auto [s, p] = key();
          body.emplace_back(s, p, v);
          body.emplace_back(v, bodyPredicate(), w);
          break;
        }
        default:
          body.emplace_back(v, bodyPredicate(), w);
          body.emplace_back(w, predicate(), entity());
          break;
      }
    }
    out.statements.add(
        CompletenessStatement(BGP(std::move(body)), "C" + std::to_string(i)));
  }
  return out;
}

}  // namespace rdfcomp::oracle
