#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "rdfcomp/graph.h"
#include "rdfcomp/triple.h"

namespace rdfcomp {

// N-Triples subset: `<s> <p> (<o> | "lit"[^^<dt>|@lang]) .` per line, `#`
// comments. Blank nodes are rejected. Throws ParseError.
Graph parseGraph(std::string_view text);
Graph parseGraph(std::istream& in);
Graph loadGraphFile(const std::string& path);

// One triple per line, sorted lexically, so equal graphs serialize equally.
std::string serializeGraph(const Graph& g);

// `SELECT (?v ... | *) WHERE { tp (. tp)* [.] }`. Throws ParseError.
Query parseQuery(std::string_view text);
std::string serializeQuery(const Query& q);

// `tp (. tp)* [.]` without braces.
BGP parseBGP(std::string_view text);

std::string readFile(const std::string& path);

}  // namespace rdfcomp
