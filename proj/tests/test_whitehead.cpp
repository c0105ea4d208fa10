#include "doctest.h"
#include "fixtures.hpp"

#include "fcomm/covers.hpp"
#include "fcomm/whitehead.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

using namespace fcomm;

namespace {

std::map<std::string, int> named(const GraphMap& f, const std::map<Direction, int>& m) {
  std::map<std::string, int> out;
  for (const auto& [d, p] : m) out[f.graph().edge_name(d)] = p;
  return out;
}

// Periodic iff some power of Dg returns, found by brute iteration of the
// first letters of iterated images.
std::map<std::string, int> periodic_oracle(const GraphMap& f) {
  std::map<std::string, int> out;
  const MarkedGraph& g = f.graph();
  for (EdgeId d = 0; d < g.edge_count(); ++d) {
    EdgePath p{g.edge(d).from, {d}};
    for (int k = 1; k <= 12; ++k) {
      p = apply_map(f, p);
      if (p.edges.front() == d) {
        out[g.edge_name(d)] = k;
        break;
      }
    }
  }
  return out;
}

std::set<std::pair<std::string, std::string>> edge_names(const WhiteheadGraph& w) {
  std::set<std::pair<std::string, std::string>> out;
  for (auto [a, b] : w.edges) out.insert(std::minmax(w.names[static_cast<std::size_t>(a)], w.names[static_cast<std::size_t>(b)]));
  return out;
}

// Turns crossed by long iterates of edges, restricted to the given directions.
std::set<Turn> leaf_turn_oracle(const GraphMap& f, const std::vector<Direction>& dirs, int n) {
  std::set<Turn> out;
  for (EdgeId e = 0; e < f.graph().edge_count(); ++e) {
    EdgePath p = leaf_segment(f, e, n).segment;
    for (const Turn& t : turns_of(f.graph(), p))
      if (std::count(dirs.begin(), dirs.end(), t.first) && std::count(dirs.begin(), dirs.end(), t.second)) out.insert(t);
  }
  return out;
}

bool is_automorphism_of(const WhiteheadGraph& w, const std::vector<int>& p) {
  for (auto [a, b] : w.edges)
    if (!w.adjacent(p[static_cast<std::size_t>(a)], p[static_cast<std::size_t>(b)])) return false;
  return true;
}

long long brute_order(const WhiteheadGraph& w) {
  std::vector<int> p(static_cast<std::size_t>(w.size()));
  std::iota(p.begin(), p.end(), 0);
  long long count = 0;
  do count += is_automorphism_of(w, p);
  while (std::next_permutation(p.begin(), p.end()));
  return count;
}

WhiteheadGraph spider() { return WhiteheadGraph::abstract(7, {{0, 1}, {0, 2}, {2, 3}, {0, 4}, {4, 5}, {5, 6}}); }

}  // namespace

TEST_CASE("periodic directions") {
  auto fib = fx::fib();
  CHECK(named(fib, periodic_directions(fib)) == std::map<std::string, int>{{"a", 1}, {"~a", 2}, {"~b", 2}});
  auto plast = fx::plast();
  CHECK(named(plast, periodic_directions(plast)) ==
        std::map<std::string, int>{{"a", 3}, {"b", 3}, {"c", 3}, {"~b", 2}, {"~c", 2}});
  auto id = GraphMap::identity(MarkedGraph::rose(3));
  CHECK(periodic_directions(id).size() == 6);
  for (auto [d, p] : periodic_directions(id)) CHECK(p == 1);
  for (const auto& f : {fib, plast, power(fib, 3), GraphMap::rose_map({"a", "b"}, {"b a", "b a b"})})
    CHECK(named(f, periodic_directions(f)) == periodic_oracle(f));
}

TEST_CASE("principal vertices and rotationless powers") {
  CHECK(principal_vertices(fx::fib()).vertices == std::vector<VertexId>{0});
  CHECK(principal_vertices(fx::plast()).vertices == std::vector<VertexId>{0});
  CHECK_FALSE(principal_vertices(fx::fib()).suspicious);
  CHECK(rotationless_power(fx::fib(), 10) == 2);
  CHECK(rotationless_power(fx::plast(), 10) == 6);
  CHECK(rotationless_power(fx::plast(), 5) == std::nullopt);
  CHECK(rotationless_power(GraphMap::identity(MarkedGraph::rose(2)), 10) == 1);
  // The rotationless power is rotationless.
  CHECK(rotationless_power(power(fx::plast(), 6), 10) == 1);

  // Two periodic directions, no Nielsen path within the bounds.
  auto two = GraphMap::rose_map({"a", "b"}, {"a b", "a b b"});
  REQUIRE(is_train_track(two, 4).train_track());
  CHECK(periodic_directions(two).size() == 2);
  auto pv = principal_vertices(two, {1, 1});
  CHECK(pv.vertices.empty());
  CHECK(pv.suspicious);
}

TEST_CASE("leaf segments") {
  auto fib = fx::fib();
  CHECK(fib.graph().format_path(leaf_segment(fib, 0, 2).segment) == "a b a");
  auto plast = fx::plast();
  CHECK(plast.graph().format_path(leaf_segment(plast, 4, 2).segment) == "b c");
  CHECK(plast.graph().format_path(leaf_segment(plast, 5, 0).segment) == "~c");
  // Train track: iterating equals tightening the untightened image.
  for (int n = 1; n <= 6; ++n) {
    auto s = leaf_segment(plast, 0, n).segment;
    CHECK(s == tighten(plast.graph(), s));
    CHECK(s == apply_map(plast, leaf_segment(plast, 0, n - 1).segment));
  }
}

TEST_CASE("stable Whitehead graphs") {
  auto f2 = power(fx::fib(), 2);
  auto ws = stable_whitehead_graphs(f2);
  REQUIRE(ws.size() == 1);
  CHECK(ws[0].names == std::vector<std::string>{"a", "~a", "~b"});
  CHECK(edge_names(ws[0]) == std::set<std::pair<std::string, std::string>>{{"a", "~a"}, {"a", "~b"}});
  CHECK(ws[0].degrees() == std::vector<int>{2, 1, 1});

  CHECK_THROWS_AS(stable_whitehead_graphs(fx::fib()), NotRotationless);
  auto id = stable_whitehead_graphs(GraphMap::identity(MarkedGraph::rose(2)));
  REQUIRE(id.size() == 1);
  CHECK(id[0].edges.empty());
  CHECK(id[0].size() == 4);

  auto p6 = power(fx::plast(), 6);
  auto wp = stable_whitehead_graphs(p6);
  REQUIRE(wp.size() == 1);
  CHECK(wp[0].names == std::vector<std::string>{"a", "b", "~b", "c", "~c"});
  CHECK(wp[0].components().size() == 1);
  CHECK(edge_names(wp[0]) == std::set<std::pair<std::string, std::string>>{
                                 {"a", "~b"}, {"a", "~c"}, {"b", "~b"}, {"b", "~c"}, {"c", "~b"}, {"c", "~c"}});

  // Oracle: turns inside long leaf segments.
  for (const auto& [f, n] : std::vector<std::pair<GraphMap, int>>{{f2, 4}, {p6, 3}}) {
    for (const auto& w : stable_whitehead_graphs(f)) {
      std::set<Turn> mine;
      for (auto [a, b] : w.edges) mine.insert(Turn::make(w.directions[static_cast<std::size_t>(a)], w.directions[static_cast<std::size_t>(b)]));
      CHECK(mine == leaf_turn_oracle(f, w.directions, n));
      // Dg carries leaf turns to leaf turns.
      for (const Turn& t : mine) CHECK(mine.contains(turn_map(f, t)));
    }
  }
}

TEST_CASE("geometric index") {
  auto r2 = geometric_index(power(fx::fib(), 2));
  CHECK(r2.fixed_directions == 3);
  CHECK(r2.index == 1);
  CHECK(r2.rank == 2);
  CHECK_FALSE(r2.ageometric);
  auto r6 = geometric_index(power(fx::plast(), 6));
  CHECK(r6.fixed_directions == 5);
  CHECK(r6.index == 3);
  CHECK(r6.rank == 3);
  CHECK_FALSE(r6.ageometric);
  // Stable under further powers.
  for (int k = 2; k <= 4; ++k) {
    auto rk = geometric_index(power(fx::fib(), 2 * k));
    CHECK(rk.index == r2.index);
    CHECK(rk.fixed_directions == r2.fixed_directions);
  }
  CHECK_THROWS_AS(geometric_index(fx::fib()), NotRotationless);
  CHECK_THROWS_AS(geometric_index(GraphMap::identity(MarkedGraph::rose(2))), std::invalid_argument);
}

TEST_CASE("index doubles on the double cover") {
  std::vector<Word> gens{fx::w("a"), fx::w("b b"), fx::w("b a ~b")};
  auto cover = build_cover(MarkedGraph::rose(2), fold_subgroup_graph(2, gens));
  auto f6 = power(fx::fib(), 6);
  auto lift = lift_map(fx::fib(), cover, 6);
  REQUIRE(lift.exists());
  auto k = rotationless_power(*lift.lift, 12);
  REQUIRE(k.has_value());
  auto up = geometric_index(power(*lift.lift, *k));
  auto down = geometric_index(power(f6, *k));
  CHECK(up.index == 2 * down.index);
  CHECK(up.rank - 1 == 2 * (down.rank - 1));
}

TEST_CASE("graph automorphisms of small graphs") {
  auto edge = WhiteheadGraph::abstract(2, {{0, 1}});
  CHECK(graph_automorphisms(edge) == std::vector<VertexPermutation>{{1, 0}});
  auto path = WhiteheadGraph::abstract(3, {{0, 1}, {1, 2}});
  CHECK(graph_automorphisms(path) == std::vector<VertexPermutation>{{2, 1, 0}});
  CHECK(automorphism_group_order(path) == 2);
  CHECK(graph_automorphisms(stable_whitehead_graphs(power(fx::fib(), 2))[0]) == std::vector<VertexPermutation>{{0, 2, 1}});
  CHECK(is_asymmetric(spider()));
  CHECK(brute_order(spider()) == 1);
  // Smallest asymmetric graphs have six vertices.
  auto six = WhiteheadGraph::abstract(6, {{0, 2}, {0, 3}, {0, 5}, {1, 2}, {1, 4}, {2, 3}});
  CHECK(is_asymmetric(six));
  CHECK(brute_order(six) == 1);
  CHECK(automorphism_group_order(WhiteheadGraph::abstract(5, {})) == 120);
}

TEST_CASE("automorphism groups agree with brute force on every graph up to six vertices") {
  int asymmetric6 = 0;
  for (int n = 1; n <= 6; ++n) {
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) slots.emplace_back(i, j);
    const long total = 1L << slots.size();
    for (long mask = 0; mask < total; ++mask) {
      std::vector<std::pair<int, int>> es;
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (mask >> s & 1) es.push_back(slots[s]);
      auto w = WhiteheadGraph::abstract(n, es);
      const auto gens = graph_automorphisms(w);
      const long long order = automorphism_group_order(w);
      const long long oracle = brute_order(w);
      if (order != oracle) FAIL("order mismatch for n=" << n << " mask=" << mask);
      for (const auto& g : gens)
        if (!is_automorphism_of(w, g)) FAIL("bad generator for n=" << n << " mask=" << mask);
      if (is_asymmetric(w) != (oracle == 1)) FAIL("asymmetry mismatch");
      if (n == 6 && oracle == 1) ++asymmetric6;
    }
  }
  // 8 unlabeled asymmetric graphs on six vertices, each with 720 labelings.
  CHECK(asymmetric6 == 8 * 720);
}

TEST_CASE("angle labels") {
  auto fib = angle_labeling(power(fx::fib(), 2));
  CHECK(fib.kind == AngleLabeling::Kind::SymmetricComponent);
  CHECK(fib.offender.find("a") != std::string::npos);

  auto empty = angle_labeling(std::vector<WhiteheadGraph>{});
  CHECK(empty.labeled());
  CHECK(empty.graphs.empty());

  auto sp = angle_labeling(std::vector<WhiteheadGraph>{spider()});
  REQUIRE(sp.labeled());
  const auto& labels = sp.graphs[0].labels;
  CHECK(std::set<std::string>(labels.begin(), labels.end()).size() == 7);

  // Labels are carried along by any relabeling of the vertices.
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> p(7);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    std::vector<std::pair<int, int>> es;
    for (auto [a, b] : spider().edges) es.emplace_back(p[static_cast<std::size_t>(a)], p[static_cast<std::size_t>(b)]);
    auto moved = angle_labeling(std::vector<WhiteheadGraph>{WhiteheadGraph::abstract(7, es)});
    REQUIRE(moved.labeled());
    for (int v = 0; v < 7; ++v) CHECK(moved.graphs[0].labels[static_cast<std::size_t>(p[static_cast<std::size_t>(v)])] == labels[static_cast<std::size_t>(v)]);
  }

  auto dot = to_dot(sp.graphs[0]);
  CHECK(dot.find("\"0\" -- \"1\"") != std::string::npos);
  CHECK(dot.find("angle=") != std::string::npos);
}
