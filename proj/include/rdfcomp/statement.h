#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rdfcomp/graph.h"
#include "rdfcomp/triple.h"

namespace rdfcomp {

using Timestamp = std::chrono::sys_seconds;

// RFC 3339, e.g. 2016-01-01T00:00:00Z or 2016-01-01T01:00:00+01:00.
// Fractional seconds are accepted and truncated. Throws Error.
Timestamp parseTimestamp(std::string_view text);
// Always UTC with a trailing Z.
std::string formatTimestamp(Timestamp t);

// Who asserted a statement, when, and on what basis. Carries no meaning for
// entailment.
struct Provenance {
  std::optional<std::string> author;
  std::optional<Timestamp> timestamp;
  std::optional<std::string> reference;  // IRI or free text

  bool empty() const { return !author && !timestamp && !reference; }
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// Compl(P_C): the graph holds every real-world triple matching P_C.
class CompletenessStatement {
 public:
  // Throws Error on an empty body. An empty id is replaced by canonicalId().
  explicit CompletenessStatement(BGP body, std::string id = {},
                                 std::optional<Provenance> provenance = {});

  const BGP& body() const noexcept { return body_; }
  const std::string& id() const noexcept { return id_; }
  const std::optional<Provenance>& provenance() const noexcept {
    return provenance_;
  }

  // Hash of the body with variables renamed in order of first appearance, so
  // bodies equal up to variable names share an id.
  static std::string canonicalId(const BGP& body);

  std::string toString() const;

 private:
  BGP body_;
  std::string id_;
  std::optional<Provenance> provenance_;
};

// Finite set of statements with unique ids, in insertion order.
class StatementSet {
 public:
  StatementSet() = default;
  StatementSet(std::initializer_list<CompletenessStatement> statements);

  // Throws Error if the id is taken.
  void add(CompletenessStatement statement);
  // Returns false if absent.
  bool remove(const std::string& id);
  const CompletenessStatement* find(const std::string& id) const;

  const std::vector<CompletenessStatement>& statements() const noexcept {
    return statements_;
  }
  auto begin() const noexcept { return statements_.begin(); }
  auto end() const noexcept { return statements_.end(); }
  std::size_t size() const noexcept { return statements_.size(); }
  bool empty() const noexcept { return statements_.empty(); }

  bool hasReservedTerms() const;
  // Ground terms of all statement bodies.
  std::vector<Term> groundTerms() const;

 private:
  std::vector<CompletenessStatement> statements_;
  std::unordered_map<std::string, std::size_t> byId_;
};

struct StatementParseResult {
  StatementSet statements;
  std::vector<std::string> warnings;
};

// One record per `COMPLETE { tp (. tp)* }` block, optionally followed by
// `@id "..."`, `@author "..."`, `@time RFC3339`, `@ref <iri>|"text"`.
// Throws ParseError.
StatementParseResult parseStatements(std::string_view text);
std::string serializeStatements(const StatementSet& statements);

// (G, G') with G ⊆ G'.
struct ExtensionPair {
  Graph base;
  Graph extension;

  // Throws Error unless base ⊆ extension.
  ExtensionPair(Graph base, Graph extension);
};

// [[Q_C]]G for Q_C = CONSTRUCT P_C WHERE P_C.
Graph constructQuery(const CompletenessStatement& c, GraphView g);
// T_C(G): union of constructQuery over the set.
Graph transfer(const StatementSet& cs, GraphView g);

// (G, G') |= C  iff  T_C(G') ⊆ G.
bool isValidExtension(const StatementSet& cs, const ExtensionPair& pair);

// (G, G') |= Compl(Q)  iff  [[P]]G' = [[P]]G on the body. Under bag
// semantics the projection does not matter.
bool isQueryCompleteOver(const Query& q, const ExtensionPair& pair);
bool isQueryCompleteOver(const BGP& body, const ExtensionPair& pair);

}  // namespace rdfcomp
