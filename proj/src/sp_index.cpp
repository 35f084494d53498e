#include "rdfcomp/sp_index.h"

#include <algorithm>

#include "rdfcomp/error.h"

namespace rdfcomp {

bool isSPStatement(const CompletenessStatement& c) {
  if (c.body().size() != 1) return false;
  const TriplePattern& tp = c.body().patterns().front();
  return tp.subject.isIri() && tp.predicate.isIri() && tp.object.isVariable();
}

std::optional<SPStatement> classify(const CompletenessStatement& c) {
  if (!isSPStatement(c)) return std::nullopt;
  const TriplePattern& tp = c.body().patterns().front();
  return SPStatement{tp.subject, tp.predicate,
                     std::make_shared<const CompletenessStatement>(c)};
}

SPIndex SPIndex::build(const StatementSet& cs,
                       std::vector<std::string>* warnings) {
  SPIndex index;
  index.entries_.reserve(cs.size());
  for (const auto& c : cs) {
    auto sp = classify(c);
    if (!sp)
      throw FragmentViolation("statement '" + c.id() +
                              "' is not an SP-statement");
    const SPKey key = sp->key();
    if (!index.insert(std::move(*sp)) && warnings)
      warnings->push_back("statement '" + c.id() + "' duplicates key (" +
                          key.subject.toString() + ", " +
                          key.predicate.toString() + "); keeping '" +
                          index.find(key)->base->id() + "'");
  }
  return index;
}

bool SPIndex::insert(SPStatement statement) {
  SPKey key = statement.key();
  return entries_.emplace(key, std::move(statement)).second;
}

bool SPIndex::erase(const SPKey& key) { return entries_.erase(key) != 0; }

const SPStatement* SPIndex::find(const SPKey& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<SPKey> SPIndex::keys() const {
  std::vector<SPKey> out;
  out.reserve(entries_.size());
  for (const auto& [key, _] : entries_) out.push_back(key);
  std::sort(out.begin(), out.end());
  return out;
}

BGP crucialPartSP(const BGP& body, const SPIndex& index) {
  std::vector<TriplePattern> out;
  for (const auto& tp : body)
    if (tp.subject.isIri() && tp.predicate.isIri() &&
        index.contains(tp.subject, tp.predicate))
      out.push_back(tp);
  return BGP(std::move(out));
}

}  // namespace rdfcomp
