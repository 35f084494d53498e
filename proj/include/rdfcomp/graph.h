#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rdfcomp/triple.h"

namespace rdfcomp {

// Immutable RDF graph (set of ground triples).
//
// The triples are held in three sorted permutations (SPO, POS, OSP), so every
// combination of bound positions resolves to one contiguous range.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::vector<Triple> triples);
  Graph(std::initializer_list<Triple> triples)
      : Graph(std::vector<Triple>(triples)) {}

  std::size_t size() const noexcept { return spo_.size(); }
  bool empty() const noexcept { return spo_.empty(); }
  // SPO order (by term id).
  const std::vector<Triple>& triples() const noexcept { return spo_; }
  auto begin() const noexcept { return spo_.begin(); }
  auto end() const noexcept { return spo_.end(); }

  bool contains(const Triple& t) const;

  // Triples matching the bound (non-null) positions. Null terms are
  // wildcards; variables are treated as wildcards too.
  std::span<const Triple> match(Term s, Term p, Term o) const;
  std::size_t count(Term s, Term p, Term o) const {
    return match(s, p, o).size();
  }

  // True if some triple uses an IRI from the frozen namespace.
  bool hasReservedTerms() const noexcept { return reserved_; }

  bool isSubsetOf(const Graph& other) const;
  Graph unionWith(const Graph& other) const;
  Graph unionWith(const std::vector<Triple>& extra) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.spo_ == b.spo_;
  }

 private:
  std::vector<Triple> spo_;
  std::vector<Triple> pos_;
  std::vector<Triple> osp_;
  struct PairHash {
    std::size_t operator()(const std::pair<Term, Term>& k) const noexcept {
      return std::hash<Term>{}(k.first) * 31 + std::hash<Term>{}(k.second);
    }
  };
  // (s,p) -> [begin, end) in spo_
  std::unordered_map<std::pair<Term, Term>, std::pair<std::uint32_t, std::uint32_t>,
                     PairHash>
      sp_;
  // p -> [begin, end) in pos_
  std::unordered_map<Term, std::pair<std::uint32_t, std::uint32_t>> p_;
  bool reserved_ = false;
};

// Read-only union of up to two graphs, used to evaluate over G and a small
// overlay (such as a frozen body) without copying G.
class GraphView {
 public:
  GraphView(const Graph& g) : layers_{&g, nullptr}, count_(1) {}  // NOLINT
  GraphView(const Graph& base, const Graph& overlay)
      : layers_{&base, &overlay}, count_(2) {}

  bool contains(const Triple& t) const;
  // The graph itself when the view has no overlay.
  const Graph* single() const noexcept { return count_ == 1 ? layers_[0] : nullptr; }
  // Upper bound on the matches (overlay duplicates counted twice).
  std::size_t estimate(Term s, Term p, Term o) const;

  // Calls f(const Triple&) once per distinct matching triple.
  template <typename F>
  void forEachMatch(Term s, Term p, Term o, F&& f) const {
    for (const Triple& t : layers_[0]->match(s, p, o)) f(t);
    if (count_ == 2)
      for (const Triple& t : layers_[1]->match(s, p, o))
        if (!layers_[0]->contains(t)) f(t);
  }

 private:
  std::array<const Graph*, 2> layers_;
  std::size_t count_;
};

}  // namespace rdfcomp
