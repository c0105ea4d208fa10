#pragma once

// Finite covers of marked graphs, lifts of maps, and extension of
// automorphisms from finite-index subgroups.

#include "fcomm/automorphism.hpp"
#include "fcomm/graph_map.hpp"
#include "fcomm/subgroup.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace fcomm {

struct InfiniteIndex : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverBound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Cover of `base` for a finite-index subgroup H of its basis group. Total
/// vertices and edges are listed sheet by sheet; vertex (v, c) is named
/// "v.c" and edge (e, c) is "e.c". The total marking uses the lifted base
/// tree plus the lifts of the default spanning tree of H, so its basis is the
/// Schreier basis of H in order.
struct CoveringMap {
  MarkedGraph total;
  MarkedGraph base;
  SubgroupGraph subgroup;
  int sheets = 0;
  std::vector<VertexId> vertex_projection;
  std::vector<EdgeId> edge_projection;
  /// lift_table[v][e]: the lift of base edge e starting at total vertex v,
  /// or -1 when e does not start at the projection of v.
  std::vector<std::vector<EdgeId>> lift_table;

  VertexId vertex_over(VertexId base_vertex, int sheet) const { return sheet * base.vertex_count() + base_vertex; }
  int sheet_of(VertexId total_vertex) const { return total_vertex / base.vertex_count(); }
  /// Lift of a base path from a total vertex over its start.
  EdgePath lift_path(const EdgePath& p, VertexId from) const;
  EdgePath project(const EdgePath& p) const;
  /// Empty when the projection is a covering map of constant degree.
  std::vector<std::string> check() const;
};

/// Throws InfiniteIndex unless H is complete.
CoveringMap build_cover(const MarkedGraph& base, const SubgroupGraph& h);

/// Least k <= k_max with phi^k(H) = H.
std::optional<int> smallest_invariant_power(const Automorphism& phi, const SubgroupGraph& h, int k_max);

struct LiftResult {
  std::optional<GraphMap> lift;
  /// Sheet over g^k(base vertex) receiving the base vertex of the total.
  int fiber_choice = -1;
  bool exists() const { return lift.has_value(); }
};

/// Lift of f^k with the basepoint sent to the given sheet, if consistent.
std::optional<GraphMap> lift_with_choice(const GraphMap& fk, const CoveringMap& c, int sheet);
/// Every lift of f^k, by fiber choice.
std::vector<LiftResult> enumerate_lifts(const GraphMap& f, const CoveringMap& c, int k);
/// A lift exists iff phi^k(H) = H (tested through the fiber choice along the
/// tree path); the least valid fiber choice is returned.
LiftResult lift_map(const GraphMap& f, const CoveringMap& c, int k);

struct ExtensionResult {
  enum class Kind { UniqueExtension, NoExtension };
  Kind kind = Kind::NoExtension;
  Automorphism extension;
  bool found() const { return kind == Kind::UniqueExtension; }
};

/// Unique automorphism of F restricting to `restricted` (given on the
/// Schreier basis of H for `tree`). Throws SolverBound when the normal core
/// of H exceeds `core_index_cap`.
ExtensionResult extend_restriction(const Automorphism& restricted, const SubgroupGraph& h,
                                   const std::vector<SubgroupGraph::EdgeKey>& tree, int core_index_cap = 720);
inline ExtensionResult extend_restriction(const Automorphism& restricted, const SubgroupGraph& h) {
  return extend_restriction(restricted, h, h.default_tree());
}

}  // namespace fcomm
