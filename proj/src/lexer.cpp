#include "lexer.h"

#include <cctype>
#include <cstdint>

namespace rdfcomp::detail {
namespace {

bool isNameChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

void appendUtf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace

Term Token::toTerm() const {
  switch (kind) {
    case TokenKind::Iri: return Term::iri(text);
    case TokenKind::Literal: return Term::literal(text, datatype, language);
    case TokenKind::Variable: return Term::variable(text);
    default: return {};
  }
}

std::string Token::describe() const {
  switch (kind) {
    case TokenKind::Iri: return "IRI <" + text + ">";
    case TokenKind::Literal: return "literal \"" + text + "\"";
    case TokenKind::Variable: return "variable ?" + text;
    case TokenKind::Word: return "'" + text + "'";
    case TokenKind::Annotation: return "annotation @" + text;
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::Dot: return "'.'";
    case TokenKind::Star: return "'*'";
    case TokenKind::End: return "end of input";
  }
  return "?";
}

bool isKeyword(const Token& t, std::string_view keyword) {
  if (t.kind != TokenKind::Word || t.text.size() != keyword.size())
    return false;
  for (std::size_t i = 0; i < keyword.size(); ++i)
    if (std::toupper(static_cast<unsigned char>(t.text[i])) != keyword[i])
      return false;
  return true;
}

void Lexer::advance() {
  if (cur() == '\n') {
    ++line_;
    column_ = 1;
  } else {
    ++column_;
  }
  ++pos_;
}

void Lexer::skipSpaceAndComments() {
  while (pos_ < text_.size()) {
    char c = cur();
    if (c == '#') {
      while (pos_ < text_.size() && cur() != '\n') advance();
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
    } else {
      break;
    }
  }
}

const Token& Lexer::peek() {
  if (!lookahead_) lookahead_ = scan();
  return *lookahead_;
}

Token Lexer::next() {
  if (lookahead_) {
    Token t = std::move(*lookahead_);
    lookahead_.reset();
    return t;
  }
  return scan();
}

Token Lexer::nextRaw() {
  if (lookahead_) fail(*lookahead_, "internal: raw read after peek");
  skipSpaceAndComments();
  Token t;
  t.line = line_;
  t.column = column_;
  t.kind = TokenKind::Word;
  while (pos_ < text_.size() &&
         !std::isspace(static_cast<unsigned char>(cur()))) {
    t.text.push_back(cur());
    advance();
  }
  if (t.text.empty()) t.kind = TokenKind::End;
  return t;
}

void Lexer::appendEscape(std::string& out, const Token& start,
                         bool allowShort) {
  // at the backslash
  advance();
  char c = cur();
  if (c == 'u' || c == 'U') {
    int digits = c == 'u' ? 4 : 8;
    advance();
    std::uint32_t cp = 0;
    for (int i = 0; i < digits; ++i) {
      char h = cur();
      if (!std::isxdigit(static_cast<unsigned char>(h)))
        fail(start, "bad unicode escape");
      cp = cp * 16 + static_cast<std::uint32_t>(
                         std::isdigit(static_cast<unsigned char>(h))
                             ? h - '0'
                             : std::tolower(static_cast<unsigned char>(h)) -
                                   'a' + 10);
      advance();
    }
    appendUtf8(out, cp);
    return;
  }
  if (!allowShort) fail(start, "only \\u escapes are allowed in IRIs");
  switch (c) {
    case 't': out.push_back('\t'); break;
    case 'b': out.push_back('\b'); break;
    case 'n': out.push_back('\n'); break;
    case 'r': out.push_back('\r'); break;
    case 'f': out.push_back('\f'); break;
    case '"': out.push_back('"'); break;
    case '\'': out.push_back('\''); break;
    case '\\': out.push_back('\\'); break;
    default: fail(start, std::string("unknown escape \\") + c);
  }
  advance();
}

std::string Lexer::readIriBody(const Token& start) {
  advance();  // '<'
  std::string out;
  while (true) {
    if (pos_ >= text_.size() || cur() == '\n') fail(start, "unterminated IRI");
    char c = cur();
    if (c == '>') {
      advance();
      break;
    }
    if (c == '\\') {
      appendEscape(out, start, false);
      continue;
    }
    if (c == ' ' || c == '<' || c == '"' || c == '{' || c == '}' ||
        c == '|' || c == '^' || c == '`')
      fail(start, std::string("illegal character '") + c + "' in IRI");
    out.push_back(c);
    advance();
  }
  if (out.empty()) fail(start, "empty IRI");
  return out;
}

std::string Lexer::readQuoted(const Token& start) {
  advance();  // '"'
  std::string out;
  while (true) {
    if (pos_ >= text_.size() || cur() == '\n')
      fail(start, "unterminated literal");
    char c = cur();
    if (c == '"') {
      advance();
      return out;
    }
    if (c == '\\') {
      appendEscape(out, start, true);
      continue;
    }
    out.push_back(c);
    advance();
  }
}

Token Lexer::scan() {
  skipSpaceAndComments();
  Token t;
  t.line = line_;
  t.column = column_;
  if (pos_ >= text_.size()) return t;

  char c = cur();
  switch (c) {
    case '<':
      t.kind = TokenKind::Iri;
      t.text = readIriBody(t);
      return t;
    case '"': {
      t.kind = TokenKind::Literal;
      t.text = readQuoted(t);
      if (cur() == '^' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '^') {
        advance();
        advance();
        if (cur() != '<') fail(t, "expected datatype IRI after ^^");
        t.datatype = readIriBody(t);
      } else if (cur() == '@') {
        advance();
        while (isNameChar(cur()) || cur() == '-') {
          t.language.push_back(cur());
          advance();
        }
        if (t.language.empty()) fail(t, "empty language tag");
      }
      return t;
    }
    case '?':
    case '$': {
      advance();
      t.kind = TokenKind::Variable;
      while (isNameChar(cur())) {
        t.text.push_back(cur());
        advance();
      }
      if (!Term::isValidVariableName(t.text))
        fail(t, "invalid variable name '" + t.text + "'");
      return t;
    }
    case '@': {
      advance();
      t.kind = TokenKind::Annotation;
      while (isNameChar(cur())) {
        t.text.push_back(cur());
        advance();
      }
      if (t.text.empty()) fail(t, "empty annotation name");
      return t;
    }
    case '{': advance(); t.kind = TokenKind::LBrace; return t;
    case '}': advance(); t.kind = TokenKind::RBrace; return t;
    case '.': advance(); t.kind = TokenKind::Dot; return t;
    case '*': advance(); t.kind = TokenKind::Star; return t;
    case '_':
      if (pos_ + 1 < text_.size() && text_[pos_ + 1] == ':')
        fail(t, "blank nodes are not supported");
      break;
    default: break;
  }
  if (isNameChar(c)) {
    t.kind = TokenKind::Word;
    while (isNameChar(cur())) {
      t.text.push_back(cur());
      advance();
    }
    return t;
  }
  fail(t, std::string("unexpected character '") + c + "'");
}

}  // namespace rdfcomp::detail
