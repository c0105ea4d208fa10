#pragma once

// Self-maps of marked graphs that send vertices to vertices and edges to
// reduced nonempty edge paths (topological representatives).

#include "fcomm/graph.hpp"

#include <map>
#include <vector>

namespace fcomm {

using IntMatrix = std::vector<std::vector<long long>>;

struct NotHomotopyEquivalence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class GraphMap {
 public:
  GraphMap() = default;

  /// `images[o]` is the image of the positive edge of orbit o. Throws
  /// std::invalid_argument if an image is empty, unreduced, or has the wrong
  /// endpoints.
  static GraphMap build(MarkedGraph g, std::vector<VertexId> vertex_image, std::vector<EdgePath> images);
  /// Same, without enforcing nonempty/reduced images (used for composites
  /// that still have to be checked).
  static GraphMap build_unchecked(MarkedGraph g, std::vector<VertexId> vertex_image, std::vector<EdgePath> images);

  /// Map on the rose with the given edge names; images use the path syntax.
  static GraphMap rose_map(const std::vector<std::string>& names, const std::vector<std::string>& images);
  static GraphMap identity(const MarkedGraph& g);

  const MarkedGraph& graph() const { return graph_; }
  VertexId vertex_image(VertexId v) const { return vertex_image_.at(static_cast<std::size_t>(v)); }
  const EdgePath& edge_image(EdgeId e) const { return edge_image_.at(static_cast<std::size_t>(e)); }
  const std::vector<VertexId>& vertex_images() const { return vertex_image_; }

  /// Empty list iff every topological-representative invariant holds.
  std::vector<std::string> check() const;

 private:
  MarkedGraph graph_;
  std::vector<VertexId> vertex_image_;
  std::vector<EdgePath> edge_image_;  // per oriented edge
};

/// Tightened image of a path. Throws UnknownEdge for edges outside the graph.
EdgePath apply_map(const GraphMap& f, const EdgePath& p);
/// Image before tightening.
EdgePath apply_map_untightened(const GraphMap& f, const EdgePath& p);
/// f^n_#(p) by n successive applications.
EdgePath iterate_map(const GraphMap& f, const EdgePath& p, int n);

/// f o g on a common graph. Throws NotHomotopyEquivalence when an edge
/// image collapses.
GraphMap compose(const GraphMap& f, const GraphMap& g);
GraphMap power(const GraphMap& f, int n);

/// entry[i][j] = occurrences of orbit i in the image of orbit j.
IntMatrix transition_matrix(const GraphMap& f);
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);
IntMatrix matrix_power(const IntMatrix& m, int n);

Rational path_length(const MarkedGraph& g, const EdgePath& p);

/// A vertex, or a point in the interior of a positive edge at relative
/// position t in (0, 1).
struct GraphPoint {
  VertexId vertex = -1;
  EdgeId edge = -1;
  Rational t = 0;

  static GraphPoint at_vertex(VertexId v) { return {v, -1, 0}; }
  /// Normalizes to a positive edge; t in {0, 1} becomes the endpoint vertex.
  static GraphPoint on_edge(const MarkedGraph& g, EdgeId e, const Rational& t);

  bool is_vertex() const { return vertex >= 0; }
  bool operator==(const GraphPoint&) const = default;
  auto operator<=>(const GraphPoint& o) const {
    if (auto c = vertex <=> o.vertex; c != 0) return c;
    if (auto c = edge <=> o.edge; c != 0) return c;
    if (t < o.t) return std::strong_ordering::less;
    if (o.t < t) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
};

/// Image of a point when each edge is mapped linearly, by length, onto its
/// image path.
GraphPoint image_point(const GraphMap& f, const GraphPoint& x);

struct Subdivision {
  GraphMap map;
  /// New vertex for each subdivided point, keyed by the point.
  std::map<GraphPoint, VertexId> point_vertex;
  /// Old oriented edge -> path in the new graph.
  std::vector<EdgePath> edge_path;
  /// Old vertex id -> new vertex id (old vertices keep their names).
  std::vector<VertexId> vertex_map;
};

/// Subdivides at interior points. Every point must map to a vertex or to
/// another point of the set, so the result is again a graph map. Throws
/// std::invalid_argument otherwise.
Subdivision subdivide_at(const GraphMap& f, const std::vector<GraphPoint>& points);

/// Carries a path of the old graph into a subdivision.
EdgePath transport(const Subdivision& s, const EdgePath& p);

}  // namespace fcomm
