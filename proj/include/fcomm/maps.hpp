#pragma once

// Train track analysis of topological representatives: directions, turns,
// gates, Nielsen paths and periodic conjugacy classes.

#include "fcomm/automorphism.hpp"
#include "fcomm/graph_map.hpp"

#include <optional>
#include <set>
#include <vector>

namespace fcomm {

/// A direction is an oriented edge seen as a germ at its initial vertex.
using Direction = EdgeId;

/// Unordered pair of directions at a common vertex, stored with first <= second.
struct Turn {
  Direction first = 0;
  Direction second = 0;

  static Turn make(Direction a, Direction b) { return a <= b ? Turn{a, b} : Turn{b, a}; }
  bool degenerate() const { return first == second; }
  auto operator<=>(const Turn&) const = default;
};

/// Dg: the first edge of the image of e. Throws if the image is empty.
Direction direction_map(const GraphMap& f, Direction d);
Turn turn_map(const GraphMap& f, const Turn& t);

/// Turns crossed by a path.
std::vector<Turn> turns_of(const MarkedGraph& g, const EdgePath& p);
/// Turns crossed by edge images.
std::set<Turn> image_turns(const GraphMap& f);
/// Closure of image_turns under Dg: every turn crossed by some g^n(e).
std::set<Turn> taken_turns(const GraphMap& f);
bool is_illegal(const GraphMap& f, const Turn& t);
/// Nondegenerate illegal turns, sorted.
std::vector<Turn> illegal_turns(const GraphMap& f);
/// Gate partition: directions are equivalent when some Dg-iterates agree.
/// Gates are listed by smallest member.
std::vector<std::vector<Direction>> gates(const GraphMap& f);

/// Strong connectivity of the digraph of a square nonnegative matrix.
bool is_irreducible(const IntMatrix& m);

struct TrainTrackVerdict {
  enum class Kind { TrainTrack, NotTrainTrack };
  Kind kind = Kind::TrainTrack;
  std::vector<std::vector<Direction>> gates;
  std::vector<Turn> illegal;
  bool irreducible = false;
  /// Some edge image has length at least two.
  bool expanding = false;
  /// For NotTrainTrack: least n <= power bound (then least edge) such that
  /// g^n(e) needs tightening; -1 when the first cancellation lies beyond
  /// the bound.
  int witness_power = -1;
  Direction witness_edge = -1;

  bool train_track() const { return kind == Kind::TrainTrack; }
};

TrainTrackVerdict is_train_track(const GraphMap& f, int power_bound);

/// Images of the marking basis. Loops at g(base) are brought back along the
/// tree path. Throws NotHomotopyEquivalence when the images are not a basis.
Automorphism induced_outer_automorphism(const GraphMap& f);

struct NielsenPath {
  int period = 1;
  /// Endpoints in the original graph.
  GraphPoint start;
  GraphPoint end;
  /// The path in the subdivision at the fixed points of g^period.
  EdgePath path;
  std::string text;
  /// Not a concatenation of two shorter Nielsen paths.
  bool indivisible = true;
};

struct NielsenSearch {
  std::vector<NielsenPath> paths;
  bool none_found_within_bounds() const { return paths.empty(); }
};

/// Interior fixed points of f, sorted.
std::vector<GraphPoint> interior_fixed_points(const GraphMap& f);

/// Every nontrivial path of at most `length_bound` segments between fixed
/// points of g^p with g^p_#(sigma) = sigma, p <= period_bound, reported at
/// its least period.
NielsenSearch find_nielsen_paths(const GraphMap& f, int period_bound, int length_bound);

struct ToroidalVerdict {
  enum class Kind { Toroidal, NoWitnessWithinBounds };
  Kind kind = Kind::NoWitnessWithinBounds;
  Word witness;
  int power = 0;
  bool toroidal() const { return kind == Kind::Toroidal; }
};

/// Least (k, |w|, w) with phi^k fixing the conjugacy class of w.
ToroidalVerdict is_atoroidal(const Automorphism& phi, int power_bound, int length_bound);
ToroidalVerdict is_atoroidal(const GraphMap& f, int power_bound, int length_bound);

}  // namespace fcomm
