#include "rdfcomp/parse.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lexer.h"
#include "parse_internal.h"

namespace rdfcomp {

using detail::Lexer;
using detail::Token;
using detail::TokenKind;

namespace detail {

Term expectTerm(Lexer& lex, const char* position) {
  Token t = lex.next();
  if (t.kind != TokenKind::Iri && t.kind != TokenKind::Literal &&
      t.kind != TokenKind::Variable)
    lex.fail(t, std::string("expected ") + position + ", found " +
                    t.describe());
  return t.toTerm();
}

TriplePattern parsePattern(Lexer& lex) {
  const Token& first = lex.peek();
  std::size_t line = first.line, column = first.column;
  Term s = expectTerm(lex, "subject");
  Term p = expectTerm(lex, "predicate");
  Term o = expectTerm(lex, "object");
  if (s.isLiteral())
    throw ParseError(line, column, "literal in subject position");
  if (p.isLiteral())
    throw ParseError(line, column, "literal in predicate position");
  return TriplePattern(s, p, o);
}

std::vector<TriplePattern> parsePatternList(Lexer& lex, TokenKind closer) {
  std::vector<TriplePattern> out;
  while (lex.peek().kind != closer) {
    out.push_back(parsePattern(lex));
    if (lex.peek().kind == TokenKind::Dot) {
      lex.next();
    } else if (lex.peek().kind != closer) {
      lex.fail(lex.peek(), "expected '.' between triple patterns, found " +
                               lex.peek().describe());
    }
  }
  return out;
}

}  // namespace detail

Graph parseGraph(std::string_view text) {
  Lexer lex(text);
  std::vector<Triple> triples;
  while (lex.peek().kind != TokenKind::End) {
    Token s = lex.next();
    if (s.kind == TokenKind::Literal) lex.fail(s, "literal in subject position");
    if (s.kind != TokenKind::Iri)
      lex.fail(s, "expected subject IRI, found " + s.describe());
    Token p = lex.next();
    if (p.kind != TokenKind::Iri || p.line != s.line)
      lex.fail(p.line == s.line ? p : s,
               "expected predicate IRI, found " + p.describe());
    Token o = lex.next();
    if ((o.kind != TokenKind::Iri && o.kind != TokenKind::Literal) ||
        o.line != s.line)
      lex.fail(o.line == s.line ? o : s,
               "expected object IRI or literal, found " + o.describe());
    Token dot = lex.next();
    if (dot.kind != TokenKind::Dot || dot.line != s.line)
      lex.fail(dot.line == s.line ? dot : s, "expected '.' after object");
    triples.emplace_back(s.toTerm(), p.toTerm(), o.toTerm());
  }
  return Graph(std::move(triples));
}

Graph parseGraph(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseGraph(buf.str());
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Graph loadGraphFile(const std::string& path) {
  return parseGraph(readFile(path));
}

std::string serializeGraph(const Graph& g) {
  std::vector<std::string> lines;
  lines.reserve(g.size());
  for (const auto& t : g) lines.push_back(t.toString());
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

Query parseQuery(std::string_view text) {
  Lexer lex(text);
  Token select = lex.next();
  if (!detail::isKeyword(select, "SELECT"))
    lex.fail(select, "expected SELECT, found " + select.describe());

  bool star = false;
  std::vector<Term> projection;
  std::vector<Token> projectionTokens;
  if (lex.peek().kind == TokenKind::Star) {
    lex.next();
    star = true;
  } else {
    while (lex.peek().kind == TokenKind::Variable) {
      projectionTokens.push_back(lex.next());
      projection.push_back(projectionTokens.back().toTerm());
    }
    if (projection.empty())
      lex.fail(lex.peek(), "expected '*' or variables after SELECT");
  }

  Token where = lex.next();
  if (!detail::isKeyword(where, "WHERE"))
    lex.fail(where, "expected WHERE, found " + where.describe());
  Token open = lex.next();
  if (open.kind != TokenKind::LBrace) lex.fail(open, "expected '{'");
  BGP body(detail::parsePatternList(lex, TokenKind::RBrace));
  Token close = lex.next();
  if (body.empty()) lex.fail(close, "query body must not be empty");
  Token end = lex.next();
  if (end.kind != TokenKind::End)
    lex.fail(end, "unexpected " + end.describe() + " after query");

  auto vars = body.variables();
  if (star) return Query(std::move(vars), std::move(body));
  for (std::size_t i = 0; i < projection.size(); ++i)
    if (!std::binary_search(vars.begin(), vars.end(), projection[i]))
      lex.fail(projectionTokens[i], "projected variable ?" +
                                        projectionTokens[i].text +
                                        " does not occur in the body");
  return Query(std::move(projection), std::move(body));
}

std::string serializeQuery(const Query& q) {
  std::string out = "SELECT";
  if (q.projection.empty()) out += " *";
  for (Term v : q.projection) out += " " + v.toString();
  out += " WHERE { ";
  bool first = true;
  for (const auto& tp : q.body) {
    if (!first) out += " . ";
    first = false;
    out += tp.toString();
  }
  return out + " }";
}

BGP parseBGP(std::string_view text) {
  Lexer lex(text);
  BGP body(detail::parsePatternList(lex, TokenKind::End));
  return body;
}

}  // namespace rdfcomp
