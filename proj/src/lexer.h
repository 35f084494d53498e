#pragma once

// Tokenizer shared by the graph, query and statement parsers.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "rdfcomp/error.h"
#include "rdfcomp/term.h"

namespace rdfcomp::detail {

enum class TokenKind {
  Iri,
  Literal,
  Variable,
  Word,        // bare identifier: SELECT, WHERE, COMPLETE, ...
  Annotation,  // @author, @time, ...
  LBrace,
  RBrace,
  Dot,
  Star,
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;      // IRI, lexical form, variable/word/annotation name
  std::string datatype;  // literals
  std::string language;  // literals
  std::size_t line = 1;
  std::size_t column = 1;

  Term toTerm() const;
  std::string describe() const;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  const Token& peek();
  Token next();
  // Run of non-space characters as a Word token (timestamps and the like).
  Token nextRaw();

  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    throw ParseError(at.line, at.column, message);
  }

 private:
  Token scan();
  void skipSpaceAndComments();
  char cur() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void advance();
  std::string readIriBody(const Token& start);
  std::string readQuoted(const Token& start);
  void appendEscape(std::string& out, const Token& start, bool allowShort);

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  std::optional<Token> lookahead_;
};

bool isKeyword(const Token& t, std::string_view keyword);

}  // namespace rdfcomp::detail
