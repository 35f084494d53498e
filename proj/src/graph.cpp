#include "rdfcomp/graph.h"

#include <algorithm>
#include <tuple>
#include <type_traits>

namespace rdfcomp {
namespace {

// Orderings of the three permutations.
struct PosLess {
  bool operator()(const Triple& a, const Triple& b) const {
    return std::tie(a.predicate, a.object, a.subject) <
           std::tie(b.predicate, b.object, b.subject);
  }
};
struct OspLess {
  bool operator()(const Triple& a, const Triple& b) const {
    return std::tie(a.object, a.subject, a.predicate) <
           std::tie(b.object, b.subject, b.predicate);
  }
};

// Prefix key over a permutation: up to three leading components, compared
// through member pointers.
struct PrefixKey {
  std::array<Term Triple::*, 3> order;
  std::array<Term, 3> values;
  int length;

  int compare(const Triple& t) const {
    for (int i = 0; i < length; ++i) {
      Term v = t.*order[i];
      if (v < values[i]) return -1;
      if (values[i] < v) return 1;
    }
    return 0;
  }
};

std::span<const Triple> prefixRange(const std::vector<Triple>& v,
                                    const PrefixKey& key) {
  if (key.length == 0) return v;
  auto lo = std::partition_point(v.begin(), v.end(), [&](const Triple& t) {
    return key.compare(t) < 0;
  });
  auto hi = std::partition_point(lo, v.end(), [&](const Triple& t) {
    return key.compare(t) <= 0;
  });
  return {lo, hi};
}

bool bound(Term t) { return !t.isNull() && !t.isVariable(); }

}  // namespace

Graph::Graph(std::vector<Triple> triples) : spo_(std::move(triples)) {
  std::sort(spo_.begin(), spo_.end());
  spo_.erase(std::unique(spo_.begin(), spo_.end()), spo_.end());
  sp_.reserve(spo_.size());
  for (std::size_t i = 0; i < spo_.size();) {
    std::size_t j = i + 1;
    while (j < spo_.size() && spo_[j].subject == spo_[i].subject &&
           spo_[j].predicate == spo_[i].predicate)
      ++j;
    sp_.emplace(std::pair{spo_[i].subject, spo_[i].predicate},
                std::pair{static_cast<std::uint32_t>(i),
                          static_cast<std::uint32_t>(j)});
    i = j;
  }
  pos_ = spo_;
  std::sort(pos_.begin(), pos_.end(), PosLess{});
  for (std::size_t i = 0; i < pos_.size();) {
    std::size_t j = i + 1;
    while (j < pos_.size() && pos_[j].predicate == pos_[i].predicate) ++j;
    p_.emplace(pos_[i].predicate, std::pair{static_cast<std::uint32_t>(i),
                                            static_cast<std::uint32_t>(j)});
    i = j;
  }
  osp_ = spo_;
  std::sort(osp_.begin(), osp_.end(), OspLess{});
  reserved_ = std::any_of(spo_.begin(), spo_.end(), [](const Triple& t) {
    return t.subject.isReserved() || t.predicate.isReserved() ||
           t.object.isReserved();
  });
}

bool Graph::contains(const Triple& t) const {
  auto it = sp_.find({t.subject, t.predicate});
  if (it == sp_.end()) return false;
  return std::binary_search(spo_.begin() + it->second.first,
                            spo_.begin() + it->second.second, t);
}

std::span<const Triple> Graph::match(Term s, Term p, Term o) const {
  const bool bs = bound(s), bp = bound(p), bo = bound(o);
  using T = Triple;
  if (bs) {
    if (bp) {
      auto it = sp_.find({s, p});
      if (it == sp_.end()) return {};
      std::span<const Triple> r(spo_.data() + it->second.first,
                                it->second.second - it->second.first);
      if (!bo) return r;
      auto [lo, hi] = std::equal_range(
          r.begin(), r.end(), o,
          [](const auto& a, const auto& b) {
            if constexpr (std::is_same_v<std::decay_t<decltype(a)>, Triple>)
              return a.object < b;
            else
              return a < b.object;
          });
      return {lo, hi};
    }
    if (bo)
      return prefixRange(osp_, {{&T::object, &T::subject, &T::predicate},
                                {o, s, {}}, 2});
    return prefixRange(spo_, {{&T::subject, &T::predicate, &T::object},
                              {s, {}, {}}, 1});
  }
  if (bp) {
    auto it = p_.find(p);
    if (it == p_.end()) return {};
    std::span<const Triple> r(pos_.data() + it->second.first,
                              it->second.second - it->second.first);
    if (!bo) return r;
    return prefixRange(pos_, {{&T::predicate, &T::object, &T::subject},
                              {p, o, {}}, 2});
  }
  if (bo)
    return prefixRange(osp_, {{&T::object, &T::subject, &T::predicate},
                              {o, {}, {}}, 1});
  return spo_;
}

bool Graph::isSubsetOf(const Graph& other) const {
  return std::includes(other.spo_.begin(), other.spo_.end(), spo_.begin(),
                       spo_.end());
}

Graph Graph::unionWith(const Graph& other) const {
  std::vector<Triple> all;
  all.reserve(spo_.size() + other.spo_.size());
  std::set_union(spo_.begin(), spo_.end(), other.spo_.begin(),
                 other.spo_.end(), std::back_inserter(all));
  return Graph(std::move(all));
}

Graph Graph::unionWith(const std::vector<Triple>& extra) const {
  std::vector<Triple> all = spo_;
  all.insert(all.end(), extra.begin(), extra.end());
  return Graph(std::move(all));
}

bool GraphView::contains(const Triple& t) const {
  for (std::size_t i = 0; i < count_; ++i)
    if (layers_[i]->contains(t)) return true;
  return false;
}

std::size_t GraphView::estimate(Term s, Term p, Term o) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < count_; ++i) n += layers_[i]->count(s, p, o);
  return n;
}

}  // namespace rdfcomp
