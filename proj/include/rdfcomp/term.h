#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace rdfcomp {

enum class TermKind : std::uint8_t { Iri, Literal, Variable };

// Prefix of the IRIs minted by the freeze mapping. No input term may use it.
inline constexpr std::string_view kFrozenPrefix = "urn:frozen:";

namespace detail {

// Interned term payload. Atoms are created once per distinct term and never
// freed, so a Term is a single pointer and compares by identity.
struct Atom {
  TermKind kind;
  std::uint32_t id;
  std::string text;      // IRI, literal lexical form, or variable name
  std::string datatype;  // literals only, may be empty
  std::string language;  // literals only, may be empty
  bool reserved;         // IRI inside kFrozenPrefix
};

}  // namespace detail

// An RDF term: IRI, literal or variable. A default-constructed Term is the
// null term, used as "unbound" by lookups.
//
// Terms are interned in a process-wide pool. Equality is identity of the
// interned atom; the ordering follows interning order, which is stable for a
// given sequence of inputs but carries no lexical meaning.
class Term {
 public:
  Term() = default;

  static Term iri(std::string_view iri);
  static Term literal(std::string_view lexical, std::string_view datatype = {},
                      std::string_view language = {});
  // `name` without the leading '?'. Must match [A-Za-z_][A-Za-z0-9_]*.
  static Term variable(std::string_view name);

  static bool isValidVariableName(std::string_view name);

  bool isNull() const noexcept { return atom_ == nullptr; }
  TermKind kind() const noexcept { return atom_->kind; }
  bool isIri() const noexcept { return atom_ && atom_->kind == TermKind::Iri; }
  bool isLiteral() const noexcept {
    return atom_ && atom_->kind == TermKind::Literal;
  }
  bool isVariable() const noexcept {
    return atom_ && atom_->kind == TermKind::Variable;
  }
  bool isGround() const noexcept {
    return atom_ && atom_->kind != TermKind::Variable;
  }
  // True for IRIs in the frozen-variable namespace.
  bool isReserved() const noexcept { return atom_ && atom_->reserved; }

  std::string_view lexical() const noexcept { return atom_->text; }
  std::string_view datatype() const noexcept { return atom_->datatype; }
  std::string_view language() const noexcept { return atom_->language; }
  std::uint32_t id() const noexcept { return atom_ ? atom_->id : 0; }

  // N-Triples / query syntax: <iri>, "lex"^^<dt>, "lex"@en, ?name.
  std::string toString() const;

  friend bool operator==(Term a, Term b) noexcept { return a.atom_ == b.atom_; }
  friend std::strong_ordering operator<=>(Term a, Term b) noexcept {
    return a.id() <=> b.id();
  }

 private:
  explicit Term(const detail::Atom* atom) : atom_(atom) {}
  const detail::Atom* atom_ = nullptr;
};

// Escapes a string for use inside a double-quoted literal.
std::string escapeLiteral(std::string_view text);

}  // namespace rdfcomp

template <>
struct std::hash<rdfcomp::Term> {
  std::size_t operator()(rdfcomp::Term t) const noexcept {
    // ids are dense; mix so that pairs of terms spread well
    std::uint64_t x = t.id();
    x *= 0x9E3779B97F4A7C15ULL;
    return static_cast<std::size_t>(x ^ (x >> 29));
  }
};
