#include "doctest.h"
#include "fixtures.hpp"

#include "fcomm/folds.hpp"
#include "fcomm/maps.hpp"
#include "fcomm/spectral.hpp"

using namespace fcomm;

namespace {

MarkedGraph two_vertex() {
  return MarkedGraph::build({"v", "u"}, {{"e1", "v", "v", 1}, {"e2", "v", "u", 1}, {"e3", "u", "v", 1}}, {"e2"});
}

GraphMap on_two_vertex(const std::vector<std::string>& images, const std::vector<std::string>& vimg) {
  MarkedGraph g = two_vertex();
  std::vector<VertexId> vi;
  for (const auto& n : vimg) vi.push_back(*g.find_vertex(n));
  std::vector<EdgePath> ims;
  for (int o = 0; o < 3; ++o) ims.push_back(g.parse_path(images[static_cast<std::size_t>(o)], vi[static_cast<std::size_t>(g.edge(2 * o).from)]));
  return GraphMap::build(g, vi, ims);
}

// Folds onto the golden mean map.
GraphMap foldable() { return on_two_vertex({"e2 e3", "e2 e3", "e1"}, {"v", "v"}); }
// Needs a subdivision before the fold.
GraphMap partial() { return on_two_vertex({"e2 e3", "e2 e3 e2", "e3 e1"}, {"v", "u"}); }

}  // namespace

TEST_CASE("stallings fold of two edges with equal images") {
  GraphMap f = foldable();
  REQUIRE(f.check().empty());
  REQUIRE(is_train_track(f, 4).train_track());
  const MarkedGraph& g = f.graph();
  auto r = stallings_fold(f, *g.find_edge("e1"), *g.find_edge("e2"));
  CHECK(r.map.check().empty());
  CHECK(r.map.graph().orbit_count() == g.orbit_count() - 1);
  CHECK(r.map.graph().vertex_count() == 1);
  CHECK(r.train_track);
  CHECK(r.event.merged_vertex == "u");
  CHECK(r.event.into_vertex == "v");
  // Same growth before and after.
  auto before = pf_data(transition_matrix(f));
  auto after = pf_data(transition_matrix(r.map));
  CHECK(before.minimal_poly == after.minimal_poly);
  CHECK(after.minimal_poly.to_string() == "x^2 - x - 1");
  // Rank is preserved and the induced outer class is the golden mean one up to relabeling.
  CHECK(rank(r.map.graph()) == rank(g));
  CHECK(r.map.graph().format_path(r.map.edge_image(*r.map.graph().find_edge("e1"))) == "e1 e3");
  CHECK(r.map.graph().format_path(r.map.edge_image(*r.map.graph().find_edge("e3"))) == "e1");
}

TEST_CASE("fold preconditions") {
  GraphMap f = foldable();
  const MarkedGraph& g = f.graph();
  CHECK_THROWS_AS(stallings_fold(f, *g.find_edge("e1"), *g.find_edge("e3")), PreconditionFailed);
  CHECK_THROWS_AS(stallings_fold(f, *g.find_edge("e1"), *g.find_edge("e1")), PreconditionFailed);
  GraphMap p = partial();
  CHECK_THROWS_AS(stallings_fold(p, *p.graph().find_edge("e1"), *p.graph().find_edge("e2")), PreconditionFailed);
  GraphMap fib = fx::fib();
  CHECK_THROWS_AS(stallings_fold(fib, 0, 2), PreconditionFailed);
}

TEST_CASE("pushing paths through a fold") {
  GraphMap f = foldable();
  const MarkedGraph& g = f.graph();
  auto r = stallings_fold(f, *g.find_edge("e1"), *g.find_edge("e2"));
  const MarkedGraph& h = r.map.graph();
  CHECK(push_path(h, r.event, g.parse_path("~e1 e2", 0)).empty());
  CHECK(h.format_path(push_path(h, r.event, g.parse_path("e2 e3", 0))) == "e1 e3");
  // Folding commutes with the maps on closed loops.
  for (const char* loop : {"e1", "e2 e3", "e1 e2 e3 ~e1"}) {
    EdgePath p = g.parse_path(loop, 0);
    CHECK(push_path(h, r.event, apply_map(f, p)) == apply_map(r.map, push_path(h, r.event, p)));
  }
}

TEST_CASE("identifying equal points needs no steps") {
  GraphMap f = fx::fib();
  auto r = fold_to_identify(f, GraphPoint::at_vertex(0), GraphPoint::at_vertex(0), 3);
  CHECK(r.identified());
  CHECK(r.sequence.steps.empty());
}

TEST_CASE("partial fold: one subdivision then one fold") {
  GraphMap f = partial();
  REQUIRE(f.check().empty());
  REQUIRE(is_train_track(f, 4).train_track());
  const MarkedGraph& g = f.graph();
  GraphPoint y = GraphPoint::on_edge(g, *g.find_edge("e2"), Rational(2, 3));
  CHECK(image_point(f, y) == GraphPoint::at_vertex(*g.find_vertex("v")));
  auto r = fold_to_identify(f, GraphPoint::at_vertex(*g.find_vertex("v")), y, 3);
  REQUIRE(r.identified());
  CHECK(r.sequence.power == 1);
  REQUIRE(r.sequence.steps.size() == 2);
  CHECK(r.sequence.steps[0].kind == FoldStep::Kind::Subdivide);
  CHECK(r.sequence.steps[0].subdivision.edge == "e2");
  CHECK(r.sequence.steps[0].subdivision.t == Rational(2, 3));
  CHECK(r.sequence.steps[1].kind == FoldStep::Kind::Fold);
  CHECK(r.sequence.result.check().empty());
  CHECK(r.sequence.train_track);
  CHECK(rank(r.sequence.result.graph()) == 2);
  auto before = pf_data(transition_matrix(f));
  auto after = pf_data(transition_matrix(r.sequence.result));
  CHECK(before.minimal_poly == after.minimal_poly);
}

TEST_CASE("points of the golden mean rose that never come together") {
  GraphMap f = fx::fib();
  // The point a@1/3 is periodic of period 3 and no short path from the
  // vertex to it dies under the first three iterates.
  GraphPoint x = GraphPoint::at_vertex(0);
  GraphPoint y = GraphPoint::on_edge(f.graph(), 0, Rational(1, 3));
  auto r = fold_to_identify(f, x, y, 3, 6);
  CHECK_FALSE(r.identified());
  CHECK_FALSE(r.reason.empty());
  // The midpoint of b reaches the vertex after two steps, so it does meet x.
  auto m = fold_to_identify(f, x, GraphPoint::on_edge(f.graph(), 2, Rational(1, 2)), 3, 6);
  CHECK(m.identified());
  CHECK(m.sequence.result.check().empty());
}
