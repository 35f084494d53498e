#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string_view>
#include <vector>

#include "rdfcomp/error.h"
#include "rdfcomp/graph.h"
#include "rdfcomp/sp_index.h"
#include "rdfcomp/statement.h"
#include "rdfcomp/triple.h"

namespace rdfcomp {

// (P, ν): a BGP together with the mapping already substituted into it.
struct PartiallyMappedBGP {
  BGP body;
  Mapping applied;

  PartiallyMappedBGP() = default;
  // Throws Error if dom(applied) meets var(body).
  PartiallyMappedBGP(BGP body, Mapping applied);

  friend bool operator==(const PartiallyMappedBGP&,
                         const PartiallyMappedBGP&) = default;
  friend auto operator<=>(const PartiallyMappedBGP&,
                          const PartiallyMappedBGP&) = default;
};

enum class IndexMode { Generic, SPIndexed };

std::string_view toString(IndexMode mode);

// One worklist decision, reported through EntailmentConfig::trace.
struct TraceEvent {
  std::size_t step;
  // "expanded", "saturated", "dropped", "skipped", "contained", "failed"
  std::string_view action;
  const PartiallyMappedBGP& item;
  std::size_t produced;  // items pushed by an expansion
};

struct EntailmentConfig {
  bool earlyFailure = true;
  bool completenessSkip = true;
  std::size_t maxSteps = 10'000'000;
  std::chrono::milliseconds timeout{0};  // zero: no limit
  IndexMode indexMode = IndexMode::Generic;
  std::function<void(const TraceEvent&)> trace;
};

struct EntailmentStats {
  std::size_t steps = 0;          // worklist items taken
  std::size_t epgCalls = 0;
  std::size_t transferCalls = 0;  // T_C applications (generic mode only)
  std::chrono::microseconds elapsed{0};
};

struct FailureWitness {
  Mapping instantiation;
  BGP missing;  // patterns of the instantiated body absent from G once frozen
};

struct EntailmentVerdict {
  bool complete = false;
  // Ω: the saturated mappings collected. Items dropped by the completeness
  // skip and mappings after an early failure are not included.
  std::vector<Mapping> saturatedMappings;
  std::optional<FailureWitness> witness;
  EntailmentStats stats;
  IndexMode indexMode = IndexMode::Generic;  // mode actually used
};

// The step budget or timeout ran out before a verdict was reached. The
// question is undecided; this is never a "not complete" answer.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::vector<Mapping> partial,
                 EntailmentStats stats)
      : Error(what), partial_(std::move(partial)), stats_(stats) {}

  const std::vector<Mapping>& partialMappings() const { return partial_; }
  const EntailmentStats& stats() const { return stats_; }

 private:
  std::vector<Mapping> partial_;
  EntailmentStats stats_;
};

// Completeness reasoning over a fixed statement set and graph. Both are
// borrowed and must outlive the reasoner. All member functions are const and
// safe to call concurrently.
class CompletenessReasoner {
 public:
  // Throws FreezeCollision if the graph or a statement uses the frozen
  // namespace.
  CompletenessReasoner(const StatementSet& cs, const Graph& g);
  // Uses a prebuilt index, which must cover exactly the statements of cs.
  CompletenessReasoner(const StatementSet& cs, const Graph& g,
                       std::shared_ptr<const SPIndex> index);

  const StatementSet& statements() const noexcept { return cs_; }
  const Graph& graph() const noexcept { return g_; }

  // True when every statement is an SP-statement.
  bool spApplicable() const noexcept { return spApplicable_; }
  // Null unless spApplicable().
  const SPIndex* spIndex() const;

  // cruc(P, C, G) = P ∩ ~id⁻¹(T_C(~P ∪ G)). SPIndexed mode falls back to the
  // generic computation when the statements are not all SP.
  BGP crucialPart(const BGP& body, IndexMode mode = IndexMode::Generic,
                  EntailmentStats* stats = nullptr) const;

  // epg((P,ν), C, G) = {(µP, ν ∪ µ) | µ ∈ [[cruc(P,C,G)]]G}. Instantiations
  // that would put a literal in subject or predicate position match no graph
  // and are left out.
  std::vector<PartiallyMappedBGP> epg(const PartiallyMappedBGP& item,
                                      IndexMode mode = IndexMode::Generic,
                                      EntailmentStats* stats = nullptr) const;

  // epg((P, ∅)) = {(P, ∅)}, i.e. [[cruc(P)]]G = {∅}.
  bool isSaturated(const BGP& body, IndexMode mode = IndexMode::Generic) const;

  // Ω = sat(P, C, G): the worklist loop without early failure or skip.
  // Throws BudgetExceeded.
  std::vector<Mapping> saturate(const BGP& body,
                                const EntailmentConfig& cfg = {}) const;

  // C, G |= Compl(P) iff ~(µP) ⊆ G for every µ ∈ sat(P, C, G).
  // Throws BudgetExceeded.
  EntailmentVerdict entails(const BGP& body,
                            const EntailmentConfig& cfg = {}) const;

 private:
  IndexMode effectiveMode(IndexMode requested) const;
  BGP crucialPartGeneric(const BGP& body, EntailmentStats* stats) const;
  std::vector<Mapping> groundings(const BGP& body, IndexMode mode,
                                  EntailmentStats* stats) const;

  const StatementSet& cs_;
  const Graph& g_;
  bool spApplicable_ = false;
  mutable std::once_flag indexOnce_;
  mutable std::shared_ptr<const SPIndex> index_;
};

// Convenience wrappers building a throwaway reasoner.
BGP crucialPart(const BGP& body, const StatementSet& cs, const Graph& g);
std::vector<PartiallyMappedBGP> epg(const PartiallyMappedBGP& item,
                                    const StatementSet& cs, const Graph& g);
bool isSaturated(const BGP& body, const StatementSet& cs, const Graph& g);
std::vector<Mapping> saturate(const BGP& body, const StatementSet& cs,
                              const Graph& g, const EntailmentConfig& cfg = {});
EntailmentVerdict entails(const BGP& body, const StatementSet& cs,
                          const Graph& g, const EntailmentConfig& cfg = {});

// Frozen triples of `body` missing from `g`, as patterns of `body`.
BGP missingFromGraph(const BGP& body, const Graph& g);

}  // namespace rdfcomp
