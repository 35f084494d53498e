#include "rdfcomp/engine.h"

#include <algorithm>
#include <set>

#include "rdfcomp/eval.h"
#include "rdfcomp/freeze.h"

namespace rdfcomp {

PartiallyMappedBGP::PartiallyMappedBGP(BGP b, Mapping m)
    : body(std::move(b)), applied(std::move(m)) {
  for (Term v : body.variables())
    if (applied.binds(v))
      throw Error("partially mapped BGP: " + v.toString() +
                  " is both applied and free");
}

std::string_view toString(IndexMode mode) {
  return mode == IndexMode::SPIndexed ? "sp" : "generic";
}

BGP missingFromGraph(const BGP& body, const Graph& g) {
  std::vector<TriplePattern> missing;
  if (!g.hasReservedTerms()) {
    // frozen IRIs never occur in g, so a pattern with a variable is missing
    for (const auto& tp : body)
      if (!tp.isGround() || !g.contains(tp.toTriple())) missing.push_back(tp);
    return BGP(std::move(missing));
  }
  FreezeMapping fm;
  for (const auto& tp : body) {
    for (Term t : {tp.subject, tp.predicate, tp.object})
      if (t.isVariable()) fm.add(t);
    if (!g.contains(freezePattern(fm, tp).toTriple())) missing.push_back(tp);
  }
  return BGP(std::move(missing));
}

CompletenessReasoner::CompletenessReasoner(const StatementSet& cs,
                                           const Graph& g)
    : cs_(cs), g_(g) {
  if (g_.hasReservedTerms())
    throw FreezeCollision("graph uses the reserved namespace " +
                          std::string(kFrozenPrefix));
  if (cs_.hasReservedTerms())
    throw FreezeCollision("a statement uses the reserved namespace " +
                          std::string(kFrozenPrefix));
  spApplicable_ = std::all_of(cs_.begin(), cs_.end(), isSPStatement);
}

CompletenessReasoner::CompletenessReasoner(const StatementSet& cs,
                                           const Graph& g,
                                           std::shared_ptr<const SPIndex> index)
    : CompletenessReasoner(cs, g) {
  if (spApplicable_ && index) index_ = std::move(index);
}

const SPIndex* CompletenessReasoner::spIndex() const {
  if (!spApplicable_) return nullptr;
  std::call_once(indexOnce_, [this] {
    if (!index_) index_ = std::make_shared<const SPIndex>(SPIndex::build(cs_));
  });
  return index_.get();
}

IndexMode CompletenessReasoner::effectiveMode(IndexMode requested) const {
  return requested == IndexMode::SPIndexed && spApplicable_
             ? IndexMode::SPIndexed
             : IndexMode::Generic;
}

BGP CompletenessReasoner::crucialPartGeneric(const BGP& body,
                                             EntailmentStats* stats) const {
  FrozenBody frozen = freeze(body);
  Graph image = transfer(cs_, GraphView(g_, frozen.graph));
  if (stats) ++stats->transferCalls;
  // P ∩ ~id⁻¹(T): a pattern survives iff its frozen triple was produced
  std::vector<TriplePattern> out;
  for (const auto& tp : body)
    if (image.contains(freezePattern(frozen.mapping, tp).toTriple()))
      out.push_back(tp);
  return BGP(std::move(out));
}

BGP CompletenessReasoner::crucialPart(const BGP& body, IndexMode mode,
                                      EntailmentStats* stats) const {
  if (effectiveMode(mode) == IndexMode::SPIndexed)
    return crucialPartSP(body, *spIndex());
  return crucialPartGeneric(body, stats);
}

std::vector<Mapping> CompletenessReasoner::groundings(
    const BGP& body, IndexMode mode, EntailmentStats* stats) const {
  return evalBGP(crucialPart(body, mode, stats), g_);
}

std::vector<PartiallyMappedBGP> CompletenessReasoner::epg(
    const PartiallyMappedBGP& item, IndexMode mode,
    EntailmentStats* stats) const {
  if (stats) ++stats->epgCalls;
  std::vector<PartiallyMappedBGP> out;
  for (const auto& mu : groundings(item.body, mode, stats)) {
    auto body = mu.tryApply(item.body);
    if (!body) continue;
    auto applied = item.applied.merged(mu);
    out.emplace_back(std::move(*body), std::move(*applied));
  }
  return out;
}

bool CompletenessReasoner::isSaturated(const BGP& body, IndexMode mode) const {
  auto ms = groundings(body, mode, nullptr);
  return ms.size() == 1 && ms.front().empty();
}

namespace {

struct LoopFlags {
  bool earlyFailure;
  bool skip;
  bool checkContainment;
};

}  // namespace

static EntailmentVerdict runWorklist(
    const CompletenessReasoner& r, const BGP& body,
    const EntailmentConfig& cfg, IndexMode mode, LoopFlags flags) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  for (const auto& tp : body)
    for (Term t : {tp.subject, tp.predicate, tp.object})
      if (t.isReserved())
        throw FreezeCollision("query term " + t.toString() +
                              " uses the reserved frozen namespace");
  EntailmentVerdict verdict;
  verdict.indexMode = mode;
  EntailmentStats& stats = verdict.stats;
  std::set<Mapping> omega;

  auto finish = [&] {
    verdict.saturatedMappings.assign(omega.begin(), omega.end());
    stats.elapsed =
        std::chrono::duration_cast<std::chrono::microseconds>(clock::now() -
                                                              start);
  };
  auto trace = [&](std::string_view action, const PartiallyMappedBGP& item,
                   std::size_t produced) {
    if (cfg.trace) cfg.trace(TraceEvent{stats.steps, action, item, produced});
  };

  std::vector<PartiallyMappedBGP> work;
  work.emplace_back(body, Mapping{});
  while (!work.empty()) {
    if (stats.steps >= cfg.maxSteps || (cfg.timeout.count() > 0 &&
                                        clock::now() - start > cfg.timeout)) {
      finish();
      throw BudgetExceeded(stats.steps >= cfg.maxSteps
                               ? "step budget exhausted"
                               : "entailment timeout",
                           verdict.saturatedMappings, stats);
    }
    // takeOne: LIFO
    PartiallyMappedBGP item = std::move(work.back());
    work.pop_back();
    ++stats.steps;

    BGP crucial = r.crucialPart(item.body, mode, &stats);
    if (flags.skip && crucial.size() == item.body.size()) {
      // complete for the whole body: every instantiation lies in G
      trace("skipped", item, 0);
      continue;
    }

    ++stats.epgCalls;
    auto ms = evalBGP(crucial, r.graph());
    if (ms.empty()) {
      trace("dropped", item, 0);
      continue;
    }
    if (ms.size() == 1 && ms.front().empty()) {
      omega.insert(item.applied);
      if (flags.earlyFailure) {
        BGP missing = missingFromGraph(item.body, r.graph());
        if (!missing.empty()) {
          trace("failed", item, 0);
          verdict.complete = false;
          verdict.witness = FailureWitness{item.applied, std::move(missing)};
          finish();
          return verdict;
        }
        trace("contained", item, 0);
      } else {
        trace("saturated", item, 0);
      }
      continue;
    }

    std::size_t pushed = 0;
    // reversed so that the first grounding is taken next
    for (auto it = ms.rbegin(); it != ms.rend(); ++it) {
      auto child = it->tryApply(item.body);
      if (!child) continue;
      work.emplace_back(std::move(*child), *item.applied.merged(*it));
      ++pushed;
    }
    trace("expanded", item, pushed);
  }

  verdict.complete = true;
  if (flags.checkContainment && !flags.earlyFailure) {
    for (const auto& mu : omega) {
      BGP missing = missingFromGraph(mu.apply(body), r.graph());
      if (!missing.empty()) {
        verdict.complete = false;
        verdict.witness = FailureWitness{mu, std::move(missing)};
        break;
      }
    }
  }
  finish();
  return verdict;
}

std::vector<Mapping> CompletenessReasoner::saturate(
    const BGP& body, const EntailmentConfig& cfg) const {
  return runWorklist(*this, body, cfg, effectiveMode(cfg.indexMode),
                     {false, false, false})
      .saturatedMappings;
}

EntailmentVerdict CompletenessReasoner::entails(
    const BGP& body, const EntailmentConfig& cfg) const {
  return runWorklist(*this, body, cfg, effectiveMode(cfg.indexMode),
                     {cfg.earlyFailure, cfg.completenessSkip, true});
}

BGP crucialPart(const BGP& body, const StatementSet& cs, const Graph& g) {
  return CompletenessReasoner(cs, g).crucialPart(body);
}

std::vector<PartiallyMappedBGP> epg(const PartiallyMappedBGP& item,
                                    const StatementSet& cs, const Graph& g) {
  return CompletenessReasoner(cs, g).epg(item);
}

bool isSaturated(const BGP& body, const StatementSet& cs, const Graph& g) {
  return CompletenessReasoner(cs, g).isSaturated(body);
}

std::vector<Mapping> saturate(const BGP& body, const StatementSet& cs,
                              const Graph& g, const EntailmentConfig& cfg) {
  return CompletenessReasoner(cs, g).saturate(body, cfg);
}

EntailmentVerdict entails(const BGP& body, const StatementSet& cs,
                          const Graph& g, const EntailmentConfig& cfg) {
  return CompletenessReasoner(cs, g).entails(body, cfg);
}

}  // namespace rdfcomp
