#include "rdfcomp/triple.h"

#include <algorithm>

#include "rdfcomp/error.h"

namespace rdfcomp {

Triple::Triple(Term s, Term p, Term o) : subject(s), predicate(p), object(o) {
  if (!s.isIri()) throw Error("triple subject must be an IRI: " + s.toString());
  if (!p.isIri())
    throw Error("triple predicate must be an IRI: " + p.toString());
  if (!o.isGround())
    throw Error("triple object must be ground: " + o.toString());
}

std::string Triple::toString() const {
  return subject.toString() + " " + predicate.toString() + " " +
         object.toString() + " .";
}

TriplePattern::TriplePattern(Term s, Term p, Term o)
    : subject(s), predicate(p), object(o) {
  if (s.isNull() || p.isNull() || o.isNull())
    throw Error("triple pattern with a null term");
  if (s.isLiteral()) throw Error("literal in subject position: " + s.toString());
  if (p.isLiteral())
    throw Error("literal in predicate position: " + p.toString());
}

std::string TriplePattern::toString() const {
  return subject.toString() + " " + predicate.toString() + " " +
         object.toString();
}

BGP::BGP(std::vector<TriplePattern> patterns) : patterns_(std::move(patterns)) {
  std::sort(patterns_.begin(), patterns_.end());
  patterns_.erase(std::unique(patterns_.begin(), patterns_.end()),
                  patterns_.end());
}

BGP BGP::fromTriples(const std::vector<Triple>& triples) {
  std::vector<TriplePattern> out;
  out.reserve(triples.size());
  for (const auto& t : triples) out.emplace_back(t);
  return BGP(std::move(out));
}

bool BGP::contains(const TriplePattern& tp) const {
  return std::binary_search(patterns_.begin(), patterns_.end(), tp);
}

std::vector<Term> BGP::variables() const {
  std::vector<Term> vars;
  for (const auto& tp : patterns_)
    for (Term t : {tp.subject, tp.predicate, tp.object})
      if (t.isVariable()) vars.push_back(t);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

bool BGP::isGround() const {
  return std::all_of(patterns_.begin(), patterns_.end(),
                     [](const TriplePattern& tp) { return tp.isGround(); });
}

bool BGP::isSubsetOf(const BGP& other) const {
  return std::includes(other.patterns_.begin(), other.patterns_.end(),
                       patterns_.begin(), patterns_.end());
}

std::string BGP::toString() const {
  std::string out = "{";
  for (std::size_t i = 0; i < patterns_.size(); ++i) {
    if (i) out += " . ";
    out += patterns_[i].toString();
  }
  return out + "}";
}

Mapping::Mapping(std::initializer_list<Binding> bindings) {
  for (const auto& [var, value] : bindings)
    if (!bind(var, value))
      throw Error("conflicting bindings for " + var.toString());
}

bool Mapping::bind(Term var, Term value) {
  if (!var.isVariable()) throw Error("mapping key must be a variable");
  if (!value.isGround()) throw Error("mapping value must be ground");
  auto it = std::lower_bound(
      bindings_.begin(), bindings_.end(), var,
      [](const Binding& b, Term v) { return b.first < v; });
  if (it != bindings_.end() && it->first == var) return it->second == value;
  bindings_.insert(it, {var, value});
  return true;
}

Term Mapping::get(Term var) const {
  auto it = std::lower_bound(
      bindings_.begin(), bindings_.end(), var,
      [](const Binding& b, Term v) { return b.first < v; });
  if (it != bindings_.end() && it->first == var) return it->second;
  return {};
}

std::vector<Term> Mapping::domain() const {
  std::vector<Term> out;
  out.reserve(bindings_.size());
  for (const auto& b : bindings_) out.push_back(b.first);
  return out;
}

std::optional<Mapping> Mapping::merged(const Mapping& other) const {
  Mapping out = *this;
  for (const auto& [var, value] : other.bindings_)
    if (!out.bind(var, value)) return std::nullopt;
  return out;
}

Mapping Mapping::projected(const std::vector<Term>& vars) const {
  Mapping out;
  for (const auto& b : bindings_)
    if (std::find(vars.begin(), vars.end(), b.first) != vars.end())
      out.bindings_.push_back(b);
  return out;
}

Term Mapping::apply(Term t) const {
  if (!t.isVariable()) return t;
  Term v = get(t);
  return v.isNull() ? t : v;
}

TriplePattern Mapping::apply(const TriplePattern& tp) const {
  return TriplePattern(apply(tp.subject), apply(tp.predicate),
                       apply(tp.object));
}

BGP Mapping::apply(const BGP& body) const {
  if (bindings_.empty()) return body;
  std::vector<TriplePattern> out;
  out.reserve(body.size());
  for (const auto& tp : body) out.push_back(apply(tp));
  return BGP(std::move(out));
}

std::optional<BGP> Mapping::tryApply(const BGP& body) const {
  std::vector<TriplePattern> out;
  out.reserve(body.size());
  for (const auto& tp : body) {
    Term s = apply(tp.subject);
    Term p = apply(tp.predicate);
    if (s.isLiteral() || p.isLiteral()) return std::nullopt;
    out.emplace_back(s, p, apply(tp.object));
  }
  return BGP(std::move(out));
}

std::string Mapping::toString() const {
  std::string out = "{";
  for (std::size_t i = 0; i < bindings_.size(); ++i) {
    if (i) out += ", ";
    out += bindings_[i].first.toString() + " -> " +
           bindings_[i].second.toString();
  }
  return out + "}";
}

Query::Query(std::vector<Term> proj, BGP b)
    : projection(std::move(proj)), body(std::move(b)) {
  std::vector<Term> unique;
  for (Term v : projection)
    if (std::find(unique.begin(), unique.end(), v) == unique.end())
      unique.push_back(v);
  projection = std::move(unique);
  auto vars = body.variables();
  for (Term v : projection)
    if (!std::binary_search(vars.begin(), vars.end(), v))
      throw Error("projected variable " + v.toString() +
                  " does not occur in the query body");
}

}  // namespace rdfcomp
