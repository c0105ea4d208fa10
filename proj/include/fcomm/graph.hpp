#pragma once

// Finite marked metric graphs.
//
// Every geometric edge is stored as two oriented edges related by an explicit
// reversal involution. Vertices and oriented edges are addressed by dense
// indices; string ids are kept for interchange. Reversed edges print as the
// positive id with a leading '~'.
//
// The marking is a spanning tree plus an ordered list of the non-tree edge
// orbits; the i-th basis element of pi_1(G, base) is the loop
// [base, from(e_i)]_T . e_i . [to(e_i), base]_T.

#include "fcomm/numeric.hpp"
#include "fcomm/word.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fcomm {

using VertexId = int;
using EdgeId = int;

struct DisconnectedGraph : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonIncidentEdges : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotALoop : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownEdge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OrientedEdge {
  std::string id;  // positive id; reversed edges share it and print with '~'
  VertexId from = 0;
  VertexId to = 0;
  EdgeId reverse = 0;
  Rational length = 1;
  bool positive = true;
};

/// Unoriented edge data used to build graphs.
struct EdgeSpec {
  std::string id;
  std::string from;
  std::string to;
  Rational length = 1;
};

struct EdgePath {
  VertexId start = 0;
  std::vector<EdgeId> edges;

  bool empty() const { return edges.empty(); }
  std::size_t size() const { return edges.size(); }
  bool operator==(const EdgePath&) const = default;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

class MarkedGraph {
 public:
  MarkedGraph() = default;

  /// Builds the graph. `tree` lists positive edge ids of the spanning tree;
  /// when empty a breadth-first tree from the first vertex is chosen.
  /// Structural problems that prevent indexing (unknown endpoint, duplicate
  /// id) throw std::invalid_argument; everything else is left for validate().
  static MarkedGraph build(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges,
                           const std::vector<std::string>& tree = {});

  /// Single vertex with one loop per name.
  static MarkedGraph rose(const std::vector<std::string>& names);
  static MarkedGraph rose(int rank) { return rose(Alphabet::standard(rank).names()); }

  int vertex_count() const { return static_cast<int>(vertex_names_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }  // oriented
  int orbit_count() const { return edge_count() / 2; }
  const std::string& vertex_name(VertexId v) const { return vertex_names_.at(static_cast<std::size_t>(v)); }
  const std::vector<std::string>& vertex_names() const { return vertex_names_; }
  const OrientedEdge& edge(EdgeId e) const { return edges_.at(static_cast<std::size_t>(e)); }
  EdgeId reverse(EdgeId e) const { return edge(e).reverse; }
  /// Orbit index of an oriented edge; orbits are numbered in input order.
  int orbit(EdgeId e) const { return e / 2; }
  EdgeId positive_edge(int orbit) const { return 2 * orbit; }
  VertexId base() const { return 0; }

  std::optional<VertexId> find_vertex(const std::string& name) const;
  /// Accepts "a" or "~a".
  std::optional<EdgeId> find_edge(const std::string& token) const;
  std::string edge_name(EdgeId e) const;

  /// Oriented edges with from(e) == v, in index order.
  const std::vector<EdgeId>& star(VertexId v) const { return stars_.at(static_cast<std::size_t>(v)); }
  int valence(VertexId v) const { return static_cast<int>(star(v).size()); }

  bool in_tree(int orbit) const { return in_tree_.at(static_cast<std::size_t>(orbit)); }
  const std::vector<int>& tree_orbits() const { return tree_orbits_; }
  /// Non-tree orbits in basis order.
  const std::vector<int>& basis_orbits() const { return basis_orbits_; }
  /// Basis position of a non-tree orbit, or -1.
  int basis_index(int orbit) const { return basis_index_.at(static_cast<std::size_t>(orbit)); }
  Alphabet basis_alphabet() const;

  bool connected() const;
  /// Reduced tree path from u to v.
  EdgePath tree_path(VertexId u, VertexId v) const;
  /// Based loop of the i-th basis element.
  EdgePath basis_loop(int i) const;

  ValidationReport validate() const;

  std::string format_path(const EdgePath& p) const;
  /// Parses a space separated edge list starting at `start`; an empty string
  /// gives the empty path.
  EdgePath parse_path(const std::string& text, VertexId start) const;

 private:
  void index();

  std::vector<std::string> vertex_names_;
  std::vector<OrientedEdge> edges_;
  std::vector<std::vector<EdgeId>> stars_;
  std::vector<bool> in_tree_;
  std::vector<int> tree_orbits_;
  std::vector<int> basis_orbits_;
  std::vector<int> basis_index_;
  std::vector<EdgeId> parent_edge_;  // tree edge into v from its parent, -1 at base
  std::vector<int> depth_;
  bool tree_valid_ = false;
  std::vector<std::string> tree_problems_;
};

/// First Betti number; throws DisconnectedGraph.
int rank(const MarkedGraph& g);

VertexId path_end(const MarkedGraph& g, const EdgePath& p);
bool is_path(const MarkedGraph& g, const EdgePath& p);
EdgePath reverse_path(const MarkedGraph& g, const EdgePath& p);
/// Concatenation without tightening; throws NonIncidentEdges on mismatch.
EdgePath concat(const MarkedGraph& g, const EdgePath& a, const EdgePath& b);
/// Cancels backtracks; throws NonIncidentEdges when p is not a path.
EdgePath tighten(const MarkedGraph& g, const EdgePath& p);
bool is_reduced(const MarkedGraph& g, const EdgePath& p);

/// Word of a loop at `basepoint`, read through the marking after conjugating
/// by the tree path from the marking base. Throws NotALoop.
Word path_to_word(const MarkedGraph& g, const EdgePath& loop, VertexId basepoint);
Word path_to_word(const MarkedGraph& g, const EdgePath& loop);
/// Reduced loop at `basepoint` representing w.
EdgePath word_to_path(const MarkedGraph& g, const Word& w, VertexId basepoint);
EdgePath word_to_path(const MarkedGraph& g, const Word& w);

}  // namespace fcomm
