#include "rdfcomp/eval.h"

#include <algorithm>
#include <array>
#include <limits>

namespace rdfcomp {
namespace {

class Join {
 public:
  Join(const BGP& body, GraphView graph)
      : patterns_(body.patterns()), graph_(graph), vars_(body.variables()) {
    values_.resize(vars_.size());
    done_.assign(patterns_.size(), 0);
    slots_.reserve(patterns_.size());
    for (const auto& tp : patterns_)
      slots_.push_back({slotOf(tp.subject), slotOf(tp.predicate),
                        slotOf(tp.object)});
  }

  // visit() returns false to stop the enumeration
  template <typename Visit>
  void run(Visit&& visit) {
    stop_ = false;
    step(patterns_.size(), visit);
  }

  Mapping current() const {
    Mapping m;
    m.reserve(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) m.bind(vars_[i], values_[i]);
    return m;
  }

 private:
  static constexpr int kConst = -1;

  int slotOf(Term t) const {
    if (!t.isVariable()) return kConst;
    return static_cast<int>(std::lower_bound(vars_.begin(), vars_.end(), t) -
                            vars_.begin());
  }

  // Resolves a pattern position under the current bindings; null = free.
  Term resolve(Term t, int slot) const {
    return slot == kConst ? t : values_[static_cast<std::size_t>(slot)];
  }

  template <typename Visit>
  void step(std::size_t remaining, Visit& visit) {
    if (stop_) return;
    if (remaining == 0) {
      if (!visit()) stop_ = true;
      return;
    }

    // without an overlay the range found while estimating is reused
    const Graph* single = graph_.single();
    std::span<const Triple> range;
    std::size_t best = patterns_.size();
    std::size_t bestCount = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < patterns_.size(); ++i) {
      if (done_[i]) continue;
      const auto& tp = patterns_[i];
      const auto& sl = slots_[i];
      Term rs = resolve(tp.subject, sl[0]), rp = resolve(tp.predicate, sl[1]),
           ro = resolve(tp.object, sl[2]);
      std::size_t n;
      if (single) {
        auto r = single->match(rs, rp, ro);
        n = r.size();
        if (n < bestCount) range = r;
      } else {
        n = remaining == 1 ? 0 : graph_.estimate(rs, rp, ro);
      }
      if (n < bestCount) {
        best = i;
        bestCount = n;
        if (n == 0 && (single || remaining > 1)) return;
      }
      if (remaining == 1) break;
    }

    const TriplePattern& tp = patterns_[best];
    const auto& sl = slots_[best];
    Term s = resolve(tp.subject, sl[0]), p = resolve(tp.predicate, sl[1]),
         o = resolve(tp.object, sl[2]);
    done_[best] = 1;
    auto onTriple = [&](const Triple& t) {
      if (stop_) return;
      // bind the free positions; a repeated variable must agree with itself
      std::array<std::size_t, 3> newly{};
      std::size_t n = 0;
      bool ok = true;
      auto bindPos = [&](int slot, Term resolved, Term value) {
        if (!ok || !resolved.isNull()) return;
        auto k = static_cast<std::size_t>(slot);
        if (values_[k].isNull()) {
          values_[k] = value;
          newly[n++] = k;
        } else if (values_[k] != value) {
          ok = false;
        }
      };
      bindPos(sl[0], s, t.subject);
      bindPos(sl[1], p, t.predicate);
      bindPos(sl[2], o, t.object);
      if (ok) step(remaining - 1, visit);
      for (std::size_t i = 0; i < n; ++i) values_[newly[i]] = Term{};
    };
    if (single) {
      for (const Triple& t : range) onTriple(t);
    } else {
      graph_.forEachMatch(s, p, o, onTriple);
    }
    done_[best] = 0;
  }

  const std::vector<TriplePattern>& patterns_;
  GraphView graph_;
  std::vector<Term> vars_;
  std::vector<Term> values_;
  std::vector<std::array<int, 3>> slots_;
  std::vector<char> done_;
  bool stop_ = false;
};

}  // namespace

std::vector<Mapping> evalBGP(const BGP& body, GraphView graph) {
  std::vector<Mapping> out;
  Join join(body, graph);
  join.run([&] {
    out.push_back(join.current());
    return true;
  });
  return out;
}

bool hasMatch(const BGP& body, GraphView graph) {
  bool found = false;
  Join join(body, graph);
  join.run([&] {
    found = true;
    return false;
  });
  return found;
}

std::vector<Mapping> evalQuery(const Query& query, GraphView graph) {
  auto mappings = evalBGP(query.body, graph);
  for (auto& m : mappings) m = m.projected(query.projection);
  return mappings;
}

}  // namespace rdfcomp
