#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rdfcomp/term.h"

namespace rdfcomp {

// A ground triple: IRI subject, IRI predicate, IRI or literal object.
struct Triple {
  Term subject;
  Term predicate;
  Term object;

  Triple() = default;
  // Throws Error when the positions hold the wrong kind of term.
  Triple(Term s, Term p, Term o);

  std::string toString() const;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

// Like a triple, but any position may be a variable. Literals stay out of the
// subject and predicate positions.
struct TriplePattern {
  Term subject;
  Term predicate;
  Term object;

  TriplePattern() = default;
  TriplePattern(Term s, Term p, Term o);
  explicit TriplePattern(const Triple& t)
      : subject(t.subject), predicate(t.predicate), object(t.object) {}

  bool isGround() const noexcept {
    return subject.isGround() && predicate.isGround() && object.isGround();
  }
  // Precondition: isGround().
  Triple toTriple() const { return Triple(subject, predicate, object); }
  std::string toString() const;

  friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
  friend auto operator<=>(const TriplePattern&, const TriplePattern&) = default;
};

// Basic graph pattern: a finite set of triple patterns, kept sorted and
// duplicate-free.
class BGP {
 public:
  BGP() = default;
  explicit BGP(std::vector<TriplePattern> patterns);
  BGP(std::initializer_list<TriplePattern> patterns)
      : BGP(std::vector<TriplePattern>(patterns)) {}

  static BGP fromTriples(const std::vector<Triple>& triples);

  const std::vector<TriplePattern>& patterns() const noexcept {
    return patterns_;
  }
  auto begin() const noexcept { return patterns_.begin(); }
  auto end() const noexcept { return patterns_.end(); }
  std::size_t size() const noexcept { return patterns_.size(); }
  bool empty() const noexcept { return patterns_.empty(); }
  bool contains(const TriplePattern& tp) const;

  // var(P), sorted.
  std::vector<Term> variables() const;
  bool isGround() const;
  bool isSubsetOf(const BGP& other) const;

  std::string toString() const;

  friend bool operator==(const BGP&, const BGP&) = default;
  friend auto operator<=>(const BGP&, const BGP&) = default;

 private:
  std::vector<TriplePattern> patterns_;
};

// Finite partial function from variables to ground terms.
class Mapping {
 public:
  using Binding = std::pair<Term, Term>;

  Mapping() = default;
  Mapping(std::initializer_list<Binding> bindings);

  // Adds var -> value. Returns false (and leaves the mapping untouched) when
  // var is already bound to a different value.
  bool bind(Term var, Term value);
  // Term::null when unbound.
  Term get(Term var) const;
  void reserve(std::size_t n) { bindings_.reserve(n); }
  bool binds(Term var) const { return !get(var).isNull(); }

  const std::vector<Binding>& bindings() const noexcept { return bindings_; }
  std::size_t size() const noexcept { return bindings_.size(); }
  bool empty() const noexcept { return bindings_.empty(); }
  std::vector<Term> domain() const;

  // Union of two mappings; nullopt when they disagree on a shared variable.
  std::optional<Mapping> merged(const Mapping& other) const;
  Mapping projected(const std::vector<Term>& vars) const;

  Term apply(Term t) const;
  TriplePattern apply(const TriplePattern& tp) const;
  BGP apply(const BGP& body) const;
  // Like apply(), but nullopt when substitution would put a literal into a
  // subject or predicate position.
  std::optional<BGP> tryApply(const BGP& body) const;

  std::string toString() const;

  friend bool operator==(const Mapping&, const Mapping&) = default;
  friend auto operator<=>(const Mapping&, const Mapping&) = default;

 private:
  std::vector<Binding> bindings_;  // sorted by variable
};

// Replaces bound variables of `body`; unbound ones stay.
inline BGP applyMapping(const Mapping& m, const BGP& body) {
  return m.apply(body);
}

// Query (W, P): projection W over body P.
struct Query {
  std::vector<Term> projection;  // in SELECT order, subset of var(body)
  BGP body;

  Query() = default;
  // Throws Error if a projected variable does not occur in the body.
  Query(std::vector<Term> projection, BGP body);
};

}  // namespace rdfcomp

template <>
struct std::hash<rdfcomp::Triple> {
  std::size_t operator()(const rdfcomp::Triple& t) const noexcept {
    std::hash<rdfcomp::Term> h;
    std::size_t seed = h(t.subject);
    seed ^= h(t.predicate) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    seed ^= h(t.object) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    return seed;
  }
};
