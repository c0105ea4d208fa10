#pragma once

// Stallings subgroup graphs of finitely generated subgroups H < F_r.
//
// Graphs are stored in canonical form: vertex 0 is the basepoint and the
// remaining vertices are numbered in breadth-first order, scanning at each
// vertex the letters a, a^-1, b, b^-1, ... So two subgroups are equal iff
// their graphs compare equal.

#include "fcomm/word.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fcomm {

struct ResourceBound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class SubgroupGraph {
 public:
  /// Out-edge identifier: vertex * rank + generator.
  using EdgeKey = int;

  SubgroupGraph() = default;
  /// From a (partial) coset table; the table is folded, cored and
  /// canonicalized. Entries of -1 mean undefined.
  static SubgroupGraph from_table(int rank, const std::vector<std::vector<int>>& out);
  /// Whole group F_r.
  static SubgroupGraph whole(int rank);

  int ambient_rank() const { return rank_; }
  int vertex_count() const { return static_cast<int>(out_.size()); }
  int target(int v, int generator) const { return out_[static_cast<std::size_t>(v)][static_cast<std::size_t>(generator)]; }
  int source(int v, int generator) const { return in_[static_cast<std::size_t>(v)][static_cast<std::size_t>(generator)]; }
  /// Follows a letter from v, -1 if undefined.
  int step(int v, Letter l) const { return l > 0 ? target(v, generator_of(l)) : source(v, generator_of(l)); }
  /// Endpoint of the path spelled by w from v, or -1 if it leaves the graph.
  int trace(int v, const Word& w) const;

  bool contains(const Word& w) const { return trace(0, w) == 0; }
  bool is_complete() const;
  /// Index [F : H] when finite.
  std::optional<int> index() const;
  int edge_count() const;
  /// Rank of H (first Betti number of the graph).
  int subgroup_rank() const { return edge_count() - vertex_count() + 1; }

  /// Edges of the breadth-first spanning tree used by default.
  std::vector<EdgeKey> default_tree() const;
  /// Every spanning tree (as sorted edge lists), in lexicographic order, at
  /// most `cap` of them.
  std::vector<std::vector<EdgeKey>> spanning_trees(std::size_t cap) const;

  /// Free basis of H: one element per non-tree edge, in edge-key order.
  std::vector<Word> schreier_basis() const { return schreier_basis(default_tree()); }
  std::vector<Word> schreier_basis(const std::vector<EdgeKey>& tree) const;
  /// Writes h in the Schreier basis for `tree`. Throws if h is not in H.
  Word express(const Word& h) const { return express(h, default_tree()); }
  Word express(const Word& h, const std::vector<EdgeKey>& tree) const;
  /// Tree words from the basepoint to every vertex (right coset
  /// representatives H w when the graph is complete).
  std::vector<Word> coset_representatives() const;

  /// Coset table export, one row per vertex.
  std::string to_csv() const;

  bool operator==(const SubgroupGraph&) const = default;
  auto operator<=>(const SubgroupGraph& o) const {
    if (auto c = rank_ <=> o.rank_; c != 0) return c;
    return out_ <=> o.out_;
  }

 private:
  friend class SubgroupGraphBuilder;
  int rank_ = 0;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;

  std::vector<Word> tree_words(const std::vector<EdgeKey>& tree) const;
};

struct TrackedFold {
  SubgroupGraph graph;
  /// For every out-edge key of `graph`, a word in the input generators that
  /// maps onto the edge label once both endpoints are joined to the base by
  /// consistent paths. The product of tags along a closed path at the base
  /// expresses that element in the generators.
  std::vector<Word> tags;
  /// True when folding identified two distinct edges with the same
  /// endpoints and different tags, i.e. the generators satisfy a relation.
  bool relation_found = false;

  /// Expression of h (an element of the subgroup) in the generators.
  Word express_in_generators(const Word& h) const;
};

/// Stallings folding of the subgroup generated by `generators` in F_rank,
/// tracking how every edge is expressed in the generators.
TrackedFold fold_with_tracking(int rank, std::span<const Word> generators);

/// Folded core graph of <generators>.
SubgroupGraph fold_subgroup_graph(int rank, std::span<const Word> generators);

/// Permutation tuples visited by enumerate_subgroups(rank, index).
double enumeration_cost(int rank, int index);
inline constexpr std::size_t default_tuple_cap = 20'000'000;

/// Every subgroup of index m in F_r, each once, sorted by canonical table.
/// Throws ResourceBound when the search would exceed `tuple_cap` permutation
/// tuples.
std::vector<SubgroupGraph> enumerate_subgroups(int rank, int index, std::size_t tuple_cap = default_tuple_cap);

/// Number of index-m subgroups of F_r by Hall's recursion.
long long hall_count(int rank, int index);

SubgroupGraph subgroup_intersection(const SubgroupGraph& a, const SubgroupGraph& b);

/// Largest normal subgroup of F contained in H (kernel of the action on the
/// cosets). Requires finite index.
SubgroupGraph normal_core(const SubgroupGraph& h);

/// Subgroup w H w^-1.
SubgroupGraph conjugate_subgroup(const SubgroupGraph& h, const Word& w);

}  // namespace fcomm
