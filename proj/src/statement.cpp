#include "rdfcomp/statement.h"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <map>

#include "lexer.h"
#include "parse_internal.h"
#include "rdfcomp/error.h"
#include "rdfcomp/eval.h"

namespace rdfcomp {

using detail::Lexer;
using detail::Token;
using detail::TokenKind;

namespace {

int digits(std::string_view s, std::size_t pos, std::size_t n) {
  if (pos + n > s.size()) throw Error("truncated timestamp");
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw Error("bad digit in timestamp '" + std::string(s) + "'");
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

void expectChar(std::string_view s, std::size_t pos, char c) {
  if (pos >= s.size() || (s[pos] != c && !(c == 'T' && s[pos] == 't')))
    throw Error("malformed timestamp '" + std::string(s) + "'");
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

Timestamp parseTimestamp(std::string_view s) {
  using namespace std::chrono;
  int y = digits(s, 0, 4);
  expectChar(s, 4, '-');
  int mo = digits(s, 5, 2);
  expectChar(s, 7, '-');
  int d = digits(s, 8, 2);
  expectChar(s, 10, 'T');
  int h = digits(s, 11, 2);
  expectChar(s, 13, ':');
  int mi = digits(s, 14, 2);
  expectChar(s, 16, ':');
  int se = digits(s, 17, 2);
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  int offsetMinutes = 0;
  if (pos < s.size() && (s[pos] == 'Z' || s[pos] == 'z')) {
    ++pos;
  } else if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    int sign = s[pos] == '-' ? -1 : 1;
    int oh = digits(s, pos + 1, 2);
    expectChar(s, pos + 3, ':');
    int om = digits(s, pos + 4, 2);
    offsetMinutes = sign * (oh * 60 + om);
    pos += 6;
  } else {
    throw Error("timestamp '" + std::string(s) + "' lacks a zone offset");
  }
  if (pos != s.size())
    throw Error("trailing characters in timestamp '" + std::string(s) + "'");

  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                     day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || se > 60)
    throw Error("timestamp '" + std::string(s) + "' out of range");
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{se} -
         minutes{offsetMinutes};
}

std::string formatTimestamp(Timestamp t) {
  using namespace std::chrono;
  auto dp = floor<days>(t);
  year_month_day ymd{dp};
  hh_mm_ss hms{t - dp};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

CompletenessStatement::CompletenessStatement(BGP body, std::string id,
                                             std::optional<Provenance> prov)
    : body_(std::move(body)), id_(std::move(id)), provenance_(std::move(prov)) {
  if (body_.empty())
    throw Error("completeness statement requires a non-empty BGP");
  if (id_.empty()) id_ = canonicalId(body_);
  if (provenance_ && provenance_->empty()) provenance_.reset();
}

std::string CompletenessStatement::canonicalId(const BGP& body) {
  auto shape = [](const TriplePattern& tp) {
    auto f = [](Term t) { return t.isVariable() ? std::string("?") : t.toString(); };
    return f(tp.subject) + " " + f(tp.predicate) + " " + f(tp.object);
  };
  std::vector<TriplePattern> ordered = body.patterns();
  std::stable_sort(ordered.begin(), ordered.end(),
                   [&](const TriplePattern& a, const TriplePattern& b) {
                     return shape(a) < shape(b);
                   });
  std::map<Term, std::string> names;
  auto rename = [&](Term t) {
    if (!t.isVariable()) return t.toString();
    auto [it, inserted] =
        names.emplace(t, "?v" + std::to_string(names.size()));
    return it->second;
  };
  std::vector<std::string> rows;
  for (const auto& tp : ordered)
    rows.push_back(rename(tp.subject) + " " + rename(tp.predicate) + " " +
                   rename(tp.object));
  std::sort(rows.begin(), rows.end());
  std::string canonical;
  for (const auto& r : rows) canonical += r + "\n";
  char buf[24];
  std::snprintf(buf, sizeof buf, "s%016llx",
                static_cast<unsigned long long>(fnv1a(canonical)));
  return buf;
}

std::string CompletenessStatement::toString() const {
  std::string out = "COMPLETE { ";
  bool first = true;
  for (const auto& tp : body_) {
    if (!first) out += " . ";
    first = false;
    out += tp.toString();
  }
  out += " } @id \"" + escapeLiteral(id_) + "\"";
  if (provenance_) {
    if (provenance_->author)
      out += " @author \"" + escapeLiteral(*provenance_->author) + "\"";
    if (provenance_->timestamp)
      out += " @time " + formatTimestamp(*provenance_->timestamp);
    if (provenance_->reference)
      out += " @ref \"" + escapeLiteral(*provenance_->reference) + "\"";
  }
  return out;
}

StatementSet::StatementSet(
    std::initializer_list<CompletenessStatement> statements) {
  for (const auto& s : statements) add(s);
}

void StatementSet::add(CompletenessStatement statement) {
  if (byId_.count(statement.id()))
    throw Error("duplicate statement id '" + statement.id() + "'");
  byId_.emplace(statement.id(), statements_.size());
  statements_.push_back(std::move(statement));
}

bool StatementSet::remove(const std::string& id) {
  auto it = byId_.find(id);
  if (it == byId_.end()) return false;
  statements_.erase(statements_.begin() +
                    static_cast<std::ptrdiff_t>(it->second));
  byId_.clear();
  for (std::size_t i = 0; i < statements_.size(); ++i)
    byId_.emplace(statements_[i].id(), i);
  return true;
}

const CompletenessStatement* StatementSet::find(const std::string& id) const {
  auto it = byId_.find(id);
  return it == byId_.end() ? nullptr : &statements_[it->second];
}

bool StatementSet::hasReservedTerms() const {
  for (const auto& c : statements_)
    for (const auto& tp : c.body())
      if (tp.subject.isReserved() || tp.predicate.isReserved() ||
          tp.object.isReserved())
        return true;
  return false;
}

std::vector<Term> StatementSet::groundTerms() const {
  std::vector<Term> out;
  for (const auto& c : statements_)
    for (const auto& tp : c.body())
      for (Term t : {tp.subject, tp.predicate, tp.object})
        if (t.isGround()) out.push_back(t);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

StatementParseResult parseStatements(std::string_view text) {
  StatementParseResult result;
  // keyed by canonical form, so bodies equal up to variable names collide
  std::map<std::string, std::string> seenBodies;
  Lexer lex(text);
  while (lex.peek().kind != TokenKind::End) {
    Token kw = lex.next();
    if (!detail::isKeyword(kw, "COMPLETE"))
      lex.fail(kw, "expected COMPLETE, found " + kw.describe());
    Token open = lex.next();
    if (open.kind != TokenKind::LBrace) lex.fail(open, "expected '{'");
    BGP body(detail::parsePatternList(lex, TokenKind::RBrace));
    Token close = lex.next();
    if (body.empty())
      lex.fail(close, "completeness statement needs a non-empty BGP");

    std::string id;
    Provenance prov;
    while (lex.peek().kind == TokenKind::Annotation) {
      Token ann = lex.next();
      auto stringValue = [&](bool allowIri) {
        Token v = lex.next();
        if (v.kind == TokenKind::Literal) return v.text;
        if (allowIri && v.kind == TokenKind::Iri) return v.text;
        if (v.kind == TokenKind::Word) return v.text;
        lex.fail(v, "bad value for @" + ann.text + ": " + v.describe());
      };
      if (ann.text == "id") {
        id = stringValue(false);
      } else if (ann.text == "author") {
        prov.author = stringValue(false);
      } else if (ann.text == "ref") {
        prov.reference = stringValue(true);
      } else if (ann.text == "time") {
        Token v = lex.nextRaw();
        std::string raw = v.text;
        if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
          raw = raw.substr(1, raw.size() - 2);
        try {
          prov.timestamp = parseTimestamp(raw);
        } catch (const Error& e) {
          lex.fail(v, e.what());
        }
      } else {
        lex.fail(ann, "unknown annotation @" + ann.text);
      }
    }

    CompletenessStatement statement(body, id,
                                    prov.empty() ? std::nullopt
                                                 : std::optional(prov));
    if (const auto* existing = result.statements.find(statement.id())) {
      if (CompletenessStatement::canonicalId(existing->body()) !=
          CompletenessStatement::canonicalId(statement.body()))
        lex.fail(kw, "statement id '" + statement.id() +
                         "' already used for a different body");
      result.warnings.push_back("line " + std::to_string(kw.line) +
                                ": duplicate statement '" + statement.id() +
                                "' ignored");
      continue;
    }
    auto [it, fresh] = seenBodies.emplace(
        CompletenessStatement::canonicalId(statement.body()), statement.id());
    if (!fresh)
      result.warnings.push_back(
          "line " + std::to_string(kw.line) + ": statement '" +
          statement.id() + "' repeats the body of '" + it->second + "'");
    result.statements.add(std::move(statement));
  }
  return result;
}

std::string serializeStatements(const StatementSet& statements) {
  std::string out;
  for (const auto& c : statements) out += c.toString() + "\n";
  return out;
}

ExtensionPair::ExtensionPair(Graph b, Graph e)
    : base(std::move(b)), extension(std::move(e)) {
  if (!base.isSubsetOf(extension))
    throw Error("extension pair requires base ⊆ extension");
}

Graph constructQuery(const CompletenessStatement& c, GraphView g) {
  std::vector<Triple> out;
  for (const auto& m : evalBGP(c.body(), g))
    for (const auto& tp : c.body()) out.push_back(m.apply(tp).toTriple());
  return Graph(std::move(out));
}

Graph transfer(const StatementSet& cs, GraphView g) {
  std::vector<Triple> out;
  for (const auto& c : cs)
    for (const auto& m : evalBGP(c.body(), g))
      for (const auto& tp : c.body()) out.push_back(m.apply(tp).toTriple());
  return Graph(std::move(out));
}

bool isValidExtension(const StatementSet& cs, const ExtensionPair& pair) {
  return transfer(cs, pair.extension).isSubsetOf(pair.base);
}

bool isQueryCompleteOver(const BGP& body, const ExtensionPair& pair) {
  auto before = evalBGP(body, pair.base);
  auto after = evalBGP(body, pair.extension);
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  return before == after;
}

bool isQueryCompleteOver(const Query& q, const ExtensionPair& pair) {
  return isQueryCompleteOver(q.body, pair);
}

}  // namespace rdfcomp
