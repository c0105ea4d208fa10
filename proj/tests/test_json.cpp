#include "doctest.h"
#include "fixtures.hpp"

#include "fcomm/json_io.hpp"

using namespace fcomm;
using fx::w;

namespace {

bool same_map(const GraphMap& a, const GraphMap& b) {
  const auto& ga = a.graph();
  const auto& gb = b.graph();
  if (ga.vertex_names() != gb.vertex_names() || ga.edge_count() != gb.edge_count()) return false;
  if (ga.tree_orbits() != gb.tree_orbits()) return false;
  for (EdgeId e = 0; e < ga.edge_count(); ++e) {
    if (ga.edge(e).id != gb.edge(e).id || ga.edge(e).length != gb.edge(e).length) return false;
    if (a.edge_image(e) != b.edge_image(e)) return false;
  }
  return a.vertex_images() == b.vertex_images();
}

}  // namespace

TEST_CASE("graph documents") {
  auto g = fx::cov2b();
  Json j = to_json(g);
  CHECK(j.dump() ==
        R"({"vertices":["v0","v1"],"edges":[{"id":"a0","from":"v0","to":"v0","length":"1"},{"id":"a1","from":"v1","to":"v1","length":"1"},)"
        R"({"id":"b0","from":"v0","to":"v1","length":"1"},{"id":"b1","from":"v1","to":"v0","length":"1"}],"tree":["b0"]})");
  auto back = graph_from_json(j);
  CHECK(back.vertex_names() == g.vertex_names());
  CHECK(back.tree_orbits() == g.tree_orbits());
  CHECK(to_json(back) == j);

  Json lengths = Json::parse(R"({"vertices":["p"],"edges":[{"id":"x","from":"p","to":"p","length":"3/2"},{"id":"y","from":"p","to":"p","length":"0.25"}]})");
  auto gl = graph_from_json(lengths);
  CHECK(gl.edge(0).length == Rational(3, 2));
  CHECK(gl.edge(2).length == Rational(1, 4));
  CHECK(to_json(gl)["edges"][1]["length"] == "1/4");

  CHECK_THROWS_AS(graph_from_json(Json::parse(R"({"edges":[]})")), SchemaError);
  CHECK_THROWS_AS(graph_from_json(Json::parse(R"({"vertices":["p"],"edges":[{"id":"x","from":"p","to":"q"}]})")), SchemaError);
  CHECK_THROWS_AS(graph_from_json(Json::parse(R"({"vertices":["p"],"edges":[{"id":"x","from":"p","to":"p","length":1.5}]})")), SchemaError);
}

TEST_CASE("graph map documents") {
  Json j = to_json(fx::fib());
  CHECK(j["edge_map"].dump() == R"({"a":"a b","b":"a"})");
  CHECK(j["vertex_map"].dump() == R"({"v0":"v0"})");
  CHECK(same_map(map_from_json(j), fx::fib()));
  for (const auto& f : {fx::plast(), fx::lift3(), power(fx::fib(), 3)}) {
    Json d = to_json(f);
    CHECK(same_map(map_from_json(d), f));
    CHECK(to_json(map_from_json(Json::parse(d.dump()))).dump() == d.dump());
  }
  // Reversed edges use the '~' convention.
  auto inv = GraphMap::rose_map({"a", "b"}, {"~b", "a"});
  CHECK(to_json(inv)["edge_map"]["a"] == "~b");

  Json bad = j;
  bad["edge_map"]["b"] = "c";
  CHECK_THROWS_AS(map_from_json(bad), SchemaError);
  bad = j;
  bad["edge_map"]["b"] = "a ~a";
  CHECK_THROWS_AS(map_from_json(bad), SchemaError);
  CHECK(map_from_json(bad, false).check().size() >= 1);
  bad = j;
  bad["vertex_map"].erase("v0");
  CHECK_THROWS_AS(map_from_json(bad), SchemaError);
}

TEST_CASE("automorphism and outer documents") {
  auto a = Automorphism::parse(Alphabet::standard(3), {"b", "c", "a b"});
  Json j = to_json(a);
  CHECK(j.dump() == R"({"rank":3,"images":["b","c","a b"]})");
  CHECK(automorphism_from_json(j) == a);
  CHECK_THROWS_AS(automorphism_from_json(Json::parse(R"({"rank":2,"images":["a","a"]})")), SchemaError);
  CHECK_THROWS_AS(automorphism_from_json(Json::parse(R"({"rank":2,"images":["a"]})")), SchemaError);

  auto o = outer_from_json(to_json(fx::lift3()));
  CHECK(o.rank() == 3);
  REQUIRE(o.representative);
  CHECK(o.aut == induced_outer_automorphism(fx::lift3()));
  CHECK(outer_from_json(j).aut == a);
  CHECK_FALSE(outer_from_json(j).representative);
  CHECK_THROWS_AS(outer_from_json(Json::parse(R"({"x":1})")), SchemaError);
}

TEST_CASE("subgroup documents") {
  for (int m = 1; m <= 3; ++m)
    for (const auto& h : enumerate_subgroups(2, m)) {
      Json j = to_json(h);
      CHECK(j["basepoint"] == "0");
      CHECK(j["index"] == m);
      CHECK(subgroup_from_json(j) == h);
      CHECK(subgroup_from_json(Json::parse(j.dump())) == h);
    }
  // Moving the basepoint to v conjugates by the coset representative.
  auto h = fx::b_parity();
  auto reps = h.coset_representatives();
  for (int v = 0; v < h.vertex_count(); ++v) {
    Json j = to_json(h);
    j["basepoint"] = std::to_string(v);
    auto hv = subgroup_from_json(j);
    for (const auto& g : h.schreier_basis()) CHECK(hv.contains(inverse(reps[static_cast<std::size_t>(v)]) * g * reps[static_cast<std::size_t>(v)]));
  }
  std::vector<Word> gens{w("a b ~a")};
  auto inf = fold_subgroup_graph(2, gens);
  CHECK(to_json(inf)["index"].is_null());
  CHECK(subgroup_from_json(to_json(inf)) == inf);
}

TEST_CASE("exact numbers") {
  Polynomial p({BigInt(-1), BigInt(-1), BigInt(1)});
  CHECK(to_json(p).dump() == "[-1,-1,1]");
  CHECK(polynomial_from_json(to_json(p)) == p);
  BigInt huge = BigInt(1) << 100;
  Polynomial q({huge, BigInt(1)});
  CHECK(to_json(q)[0] == huge.str());
  CHECK(polynomial_from_json(to_json(q)) == q);
  CHECK(rational_from_json(to_json(Rational(-7, 3))) == Rational(-7, 3));

  auto s = pf_data(transition_matrix(fx::fib()));
  Json e = to_json(s.enclosure);
  CHECK(parse_rational("1.6180339887") <= rational_from_json(e["lower"]));
  CHECK(rational_from_json(e["upper"]) <= parse_rational("1.6180339888"));
  // Decimal renderings are rounded outward.
  CHECK(parse_rational(e["lower_decimal"].get<std::string>()) <= s.enclosure.lower);
  CHECK(parse_rational(e["upper_decimal"].get<std::string>()) >= s.enclosure.upper);
  CHECK(e["lower_decimal"].get<std::string>().rfind("1.618033988", 0) == 0);
  RootEnclosure neg{Rational(-3, 2), Rational(-1, 3), false};
  CHECK(to_json(neg, 2)["upper_decimal"] == "-0.33");
  CHECK(to_json(neg, 2)["lower_decimal"] == "-1.50");
  CHECK(to_json(s)["char_poly"].dump() == "[-1,-1,1]");
}

TEST_CASE("certificates replay after a round trip") {
  auto lift = OuterAutomorphism::from_map(fx::lift3());
  auto fib = OuterAutomorphism::from_map(fx::fib());
  auto r = covers_relation(lift, fib, 3);
  REQUIRE(r.found());
  Json c = certificate_json(r.witness, lift.aut, fib.aut);
  auto back = certificate_from_json(Json::parse(c.dump()));
  CHECK(back.psi == lift.aut);
  CHECK(back.phi == fib.aut);
  CHECK(back.witness.k == 3);
  CHECK(back.witness.subgroup == r.witness.subgroup);
  CHECK(back.witness.identification == r.witness.identification);
  CHECK(replay(back.witness, back.psi, back.phi).empty());
  Json tampered = c;
  tampered["witness"]["k"] = 1;
  auto t = certificate_from_json(tampered);
  CHECK_FALSE(replay(t.witness, t.psi, t.phi).empty());
  tampered = c;
  tampered["witness"]["identification"].erase(0);
  CHECK_THROWS_AS(certificate_from_json(tampered), SchemaError);
}

TEST_CASE("fold event log and reports") {
  auto f = GraphMap::rose_map({"a", "b"}, {"a b", "a"});
  const auto& g = f.graph();
  auto id = fold_to_identify(f, GraphPoint::at_vertex(0), GraphPoint::on_edge(g, *g.find_edge("b"), Rational(1, 2)), 3, 6);
  REQUIRE(id.identified());
  Json log = to_json(id.sequence);
  CHECK(log["events"].size() == id.sequence.steps.size());
  CHECK(log["power"] == id.sequence.power);
  for (const auto& ev : log["events"]) CHECK((ev["kind"] == "fold" || ev["kind"] == "subdivide"));
  CHECK(same_map(map_from_json(log["result"]), id.sequence.result));

  auto f2 = power(fx::fib(), 2);
  Json ix = to_json(geometric_index(f2));
  CHECK(ix["fixed_directions"] == 3);
  CHECK(ix["index"] == 1);
  CHECK(ix["rank"] == 2);
  CHECK(ix["ageometric"] == false);
  auto wg = stable_whitehead_graphs(f2);
  REQUIRE(wg.size() == 1);
  Json wj = to_json(wg[0]);
  CHECK(wj["directions"].dump() == R"(["a","~a","~b"])");
  CHECK(wj["automorphism_group_order"] == 2);
  CHECK(to_json(angle_labeling(f2))["labeled"] == false);

  auto tv = is_atoroidal(fx::fib(), 2, 6);
  Json tj = to_json(tv, Alphabet::standard(2));
  CHECK(tj["toroidal"] == true);
  CHECK(tj["power"] == 2);
  CHECK(are_conjugate(w(tj["witness"].get<std::string>()), w("a b ~a ~b")));

  Json tt = to_json(is_train_track(fx::fib(), 4), fx::fib().graph());
  CHECK(tt["train_track"] == true);
  CHECK(tt["illegal_turns"].dump() == R"([["a","b"]])");
}
