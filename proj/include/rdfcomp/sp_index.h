#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rdfcomp/statement.h"

namespace rdfcomp {

// Composite (subject, predicate) key. Kept as a pair of terms rather than a
// concatenated string so no separator can make two keys collide.
struct SPKey {
  Term subject;
  Term predicate;
  friend bool operator==(const SPKey&, const SPKey&) = default;
  friend auto operator<=>(const SPKey&, const SPKey&) = default;
};

}  // namespace rdfcomp

template <>
struct std::hash<rdfcomp::SPKey> {
  std::size_t operator()(const rdfcomp::SPKey& k) const noexcept {
    std::hash<rdfcomp::Term> h;
    std::size_t a = h(k.subject);
    return a ^ (h(k.predicate) + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  }
};

namespace rdfcomp {

// Compl({(s, p, ?v)}) with IRIs s and p.
struct SPStatement {
  Term subject;
  Term predicate;
  std::shared_ptr<const CompletenessStatement> base;

  SPKey key() const { return {subject, predicate}; }
};

// SP view of `c`, or nullopt when c is outside the fragment.
std::optional<SPStatement> classify(const CompletenessStatement& c);
// Shape test only; no allocation.
bool isSPStatement(const CompletenessStatement& c);

// Hash index from (subject, predicate) to the SP-statement with that key.
class SPIndex {
 public:
  SPIndex() = default;

  // Throws FragmentViolation naming the first non-SP statement. For duplicate
  // keys the first statement wins and a warning is appended.
  static SPIndex build(const StatementSet& cs,
                       std::vector<std::string>* warnings = nullptr);

  // False (index unchanged) if the key is already present.
  bool insert(SPStatement statement);
  bool erase(const SPKey& key);

  const SPStatement* find(const SPKey& key) const;
  bool contains(Term subject, Term predicate) const {
    return entries_.count(SPKey{subject, predicate}) != 0;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  // All keys, sorted.
  std::vector<SPKey> keys() const;

 private:
  std::unordered_map<SPKey, SPStatement> entries_;
};

// Crucial part for SP-only statement sets: the patterns of `body` whose IRI
// subject and predicate form an index key. Never touches the graph.
BGP crucialPartSP(const BGP& body, const SPIndex& index);

}  // namespace rdfcomp
