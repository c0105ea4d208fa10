#pragma once

// Stallings folds of train track maps and folding two points together.

#include "fcomm/graph_map.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace fcomm {

struct PreconditionFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FoldEvent {
  std::string e1;
  std::string e2;
  /// Name of the vertex merged away (empty when the fold merges none) and of
  /// the vertex it was merged into.
  std::string merged_vertex;
  std::string into_vertex;
  /// Old oriented edge -> new oriented edge.
  std::vector<EdgeId> edge_quotient;
  /// Old vertex -> new vertex.
  std::vector<VertexId> vertex_quotient;
};

struct FoldResult {
  GraphMap map;
  FoldEvent event;
  bool train_track = false;
};

/// Folds e2 onto e1. Both must leave the same vertex, have equal images, and
/// end at different vertices; f must be a train track map.
FoldResult stallings_fold(const GraphMap& f, EdgeId e1, EdgeId e2);

/// Quotient of a path under a fold, tightened.
EdgePath push_path(const MarkedGraph& folded, const FoldEvent& ev, const EdgePath& p);

struct SubdivisionEvent {
  std::string edge;
  Rational t;
  std::string vertex;
};

struct FoldStep {
  enum class Kind { Subdivide, Fold };
  Kind kind = Kind::Fold;
  SubdivisionEvent subdivision;
  FoldEvent fold;
  /// Tie-break record when several folds were possible.
  std::string note;
};

struct FoldSequence {
  GraphMap start;
  GraphMap result;
  std::vector<FoldStep> steps;
  /// Least k with g^k_#[x, y] trivial, and the path used.
  int power = 0;
  std::string connecting_path;
  bool train_track = false;
  /// Vertex of the result where x and y meet.
  std::string meeting_vertex;
};

struct IdentifyResult {
  enum class Kind { Identified, NotIdentifiable };
  Kind kind = Kind::NotIdentifiable;
  FoldSequence sequence;
  std::string reason;
  bool identified() const { return kind == Kind::Identified; }
};

/// Looks for a reduced path [x, y] of at most `path_bound` segments and the
/// least k <= k_max with g^k_#[x, y] trivial, then realizes the
/// identification by subdivisions and full-edge folds.
IdentifyResult fold_to_identify(const GraphMap& f, const GraphPoint& x, const GraphPoint& y, int k_max, int path_bound = 8);

}  // namespace fcomm
