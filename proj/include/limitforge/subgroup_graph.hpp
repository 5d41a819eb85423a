// Stallings graphs of finitely generated subgroups of free groups.

#ifndef LIMITFORGE_SUBGROUP_GRAPH_HPP_
#define LIMITFORGE_SUBGROUP_GRAPH_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "limitforge/word.hpp"

namespace limitforge {

//! Folded core graph with base vertex 0. Vertices are numbered breadth-first
//! from the base, exploring edge labels in the order a, a^-1, b, b^-1, ...
class SubgroupGraph {
 public:
  static constexpr int kNone = -1;

  std::size_t ambient_rank() const noexcept { return rank_; }
  std::size_t vertex_count() const noexcept { return out_.size(); }
  std::size_t edge_count() const noexcept;  // positive edges only
  // Target of the edge labelled by the letter, or kNone.
  int follow(int vertex, Letter l) const { return out_[vertex][letter_code(l)]; }

  const std::vector<Word>& generators() const noexcept { return generators_; }
  // Free basis read off the spanning tree; basis()[i] is the symbol s_{i+1}.
  const std::vector<Word>& basis() const noexcept { return basis_; }

  // w rewritten over basis() (generator i = basis()[i]), or nullopt.
  std::optional<Word> member(const Word& w) const;
  bool contains(const Word& w) const { return member(w).has_value(); }

  std::size_t rank() const noexcept { return edge_count() + 1 - vertex_count(); }
  // Index in the ambient free group when finite (full cover), else nullopt.
  std::optional<std::size_t> index() const;

  friend SubgroupGraph fold(std::size_t rank, const std::vector<Word>& S);

 private:
  std::size_t rank_ = 0;
  std::vector<std::vector<int>> out_;   // [vertex][letter code]
  std::vector<std::vector<int>> basis_id_;  // [vertex][letter code] -> basis symbol or kNone
  std::vector<Word> generators_;
  std::vector<Word> basis_;
};

SubgroupGraph fold(std::size_t rank, const std::vector<Word>& S);

struct RankIndex {
  std::size_t rank;
  std::optional<std::size_t> index;  // nullopt = infinite
};
RankIndex graph_rank_index(const SubgroupGraph& g);

}  // namespace limitforge

#endif  // LIMITFORGE_SUBGROUP_GRAPH_HPP_
