#pragma once

#include <string>

#include "rdfcomp/engine.h"
#include "rdfcomp/graph.h"
#include "rdfcomp/statement.h"
#include "rdfcomp/triple.h"

namespace scenario {

using namespace rdfcomp;

inline const std::string kNs = "http://demo.example/";

inline Term I(const std::string& local) { return Term::iri(kNs + local); }
inline Term V(const std::string& name) { return Term::variable(name); }
inline TriplePattern tp(Term s, Term p, Term o) { return {s, p, o}; }
inline Triple tr(const std::string& s, const std::string& p,
                 const std::string& o) {
  return {I(s), I(p), I(o)};
}

inline Graph graph() {
  return Graph{tr("a99", "crew", "tony"), tr("a99", "crew", "ted"),
               tr("tony", "child", "toby")};
}

inline CompletenessStatement c1() {
  return CompletenessStatement(BGP{tp(I("a99"), I("crew"), V("c"))}, "C1");
}
inline CompletenessStatement c2() {
  return CompletenessStatement(BGP{tp(I("tony"), I("child"), V("c"))}, "C2");
}
inline CompletenessStatement c3() {
  return CompletenessStatement(BGP{tp(I("ted"), I("child"), V("c"))}, "C3");
}
inline StatementSet all() { return {c1(), c2(), c3()}; }

// P0 = {(a99,crew,?crew), (?crew,child,?child)}
inline BGP p0() {
  return BGP{tp(I("a99"), I("crew"), V("crew")),
              tp(V("crew"), I("child"), V("child"))};
}
// P1, P2: P0 with ?crew bound to tony / ted
inline BGP p1() {
  return BGP{tp(I("a99"), I("crew"), I("tony")),
              tp(I("tony"), I("child"), V("child"))};
}
inline BGP p2() {
  return BGP{tp(I("a99"), I("crew"), I("ted")),
              tp(I("ted"), I("child"), V("child"))};
}
// P3: fully instantiated
inline BGP p3() {
  return BGP{tp(I("a99"), I("crew"), I("tony")),
              tp(I("tony"), I("child"), I("toby"))};
}

inline Mapping map(std::initializer_list<std::pair<std::string, std::string>> kv) {
  Mapping m;
  for (const auto& [var, local] : kv) m.bind(V(var), I(local));
  return m;
}

}  // namespace scenario
