#pragma once

// Periodic directions, principal vertices and rotationless powers of train
// track maps; stable local Whitehead graphs, geometric index, and graph
// symmetry / angle labels.

#include "fcomm/graph_map.hpp"
#include "fcomm/maps.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fcomm {

struct NotRotationless : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Periodic directions with their least periods under Dg.
std::map<Direction, int> periodic_directions(const GraphMap& f);

struct NielsenBounds {
  int period_bound = 1;
  int length_bound = 4;
};

struct PrincipalVertices {
  std::vector<VertexId> vertices;
  /// Vertices added only because they end an indivisible Nielsen path.
  std::vector<VertexId> nielsen_endpoints;
  /// No principal vertex at all, which a train track representative of a
  /// fully irreducible class cannot have.
  bool suspicious = false;
};

PrincipalVertices principal_vertices(const GraphMap& f, NielsenBounds bounds = {});

/// Least k <= k_max such that f^k fixes every principal vertex and every
/// periodic direction at one.
std::optional<int> rotationless_power(const GraphMap& f, int k_max, NielsenBounds bounds = {});

struct LeafSegment {
  EdgeId edge = 0;
  int power = 0;
  EdgePath segment;
};

LeafSegment leaf_segment(const GraphMap& f, EdgeId e, int n);

/// Simple graph on vertices 0..n-1. `names` and `labels` are optional per
/// vertex decorations; `directions` records the direction behind each vertex
/// when the graph comes from a map.
struct WhiteheadGraph {
  VertexId principal = -1;
  std::string principal_name;
  std::vector<Direction> directions;
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(names.size()); }
  static WhiteheadGraph abstract(int n, std::vector<std::pair<int, int>> edges);
  bool adjacent(int u, int v) const;
  std::vector<int> degrees() const;
  /// Connected components, each sorted, ordered by least vertex.
  std::vector<std::vector<int>> components() const;
  /// Induced subgraph on the given vertices (decorations kept).
  WhiteheadGraph induced(const std::vector<int>& vertices) const;
};

/// One graph per principal vertex: periodic directions joined by taken turns.
/// Requires f rotationless.
std::vector<WhiteheadGraph> stable_whitehead_graphs(const GraphMap& f, int n_saturation = 256,
                                                    NielsenBounds bounds = {});

struct IndexEntry {
  VertexId vertex = -1;
  std::string name;
  int fixed_directions = 0;
};

struct IndexReport {
  std::vector<IndexEntry> classes;
  int fixed_directions = 0;
  int index = 0;
  int rank = 0;
  /// index < rank - 2.
  bool ageometric = false;
  /// No indivisible Nielsen path found within the search bounds; the index
  /// proxy is only meaningful in that case.
  bool nielsen_free = true;
  std::string convention = "ageometric iff index < rank - 2";
};

/// Requires f an expanding, rotationless train track map.
IndexReport geometric_index(const GraphMap& f, NielsenBounds bounds = {});

/// A permutation p with (u, v) an edge iff (p[u], p[v]) is.
using VertexPermutation = std::vector<int>;

/// Strong generating set of the automorphism group, identity excluded.
std::vector<VertexPermutation> graph_automorphisms(const WhiteheadGraph& w);
long long automorphism_group_order(const WhiteheadGraph& w);
bool is_asymmetric(const WhiteheadGraph& w);

/// Canonical form: the lexicographically least adjacency string over all
/// relabelings, and a relabeling reaching it (position of each vertex).
std::pair<std::string, std::vector<int>> canonical_form(const WhiteheadGraph& w);

struct AngleLabeling {
  enum class Kind { Labeled, SymmetricComponent };
  Kind kind = Kind::Labeled;
  std::vector<WhiteheadGraph> graphs;
  /// Offending component, e.g. "v: {~b, a, ~a}".
  std::string offender;
  bool labeled() const { return kind == Kind::Labeled; }
};

/// Labels each vertex by "<canonical code>#<position>" of its component.
AngleLabeling angle_labeling(std::vector<WhiteheadGraph> graphs);
AngleLabeling angle_labeling(const GraphMap& f, NielsenBounds bounds = {});

std::string to_dot(const WhiteheadGraph& w);

}  // namespace fcomm
