#pragma once

#include <vector>

#include "lexer.h"
#include "rdfcomp/triple.h"

namespace rdfcomp::detail {

Term expectTerm(Lexer& lex, const char* position);
TriplePattern parsePattern(Lexer& lex);
// Patterns separated by '.', up to (not consuming) `closer`.
std::vector<TriplePattern> parsePatternList(Lexer& lex, TokenKind closer);

}  // namespace rdfcomp::detail
