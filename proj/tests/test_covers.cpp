#include "doctest.h"
#include "fixtures.hpp"

#include "fcomm/covers.hpp"
#include "fcomm/maps.hpp"
#include "fcomm/spectral.hpp"

#include <random>

using namespace fcomm;
using fx::w;

namespace {

SubgroupGraph b_parity() {
  std::vector<Word> gens{w("a"), w("b b"), w("b a ~b")};
  return fold_subgroup_graph(2, gens);
}

Automorphism fib_aut() { return Automorphism::parse(Alphabet::standard(2), {"a b", "a"}); }

// Mod-2 character oracle: a subgroup of index 2 is the kernel of one of the
// three nonzero characters F_2 -> Z/2.
std::pair<int, int> character_of(const SubgroupGraph& h) {
  return {h.contains(w("a")) ? 0 : 1, h.contains(w("b")) ? 0 : 1};
}

}  // namespace

TEST_CASE("cover of the rose for the b-parity kernel") {
  auto c = build_cover(MarkedGraph::rose(2), b_parity());
  CHECK(c.check().empty());
  CHECK(c.sheets == 2);
  CHECK(c.total.vertex_count() == 2);
  CHECK(c.total.orbit_count() == 4);
  CHECK(rank(c.total) == 3);
  CHECK(c.total.validate().ok());
  // One a-loop per sheet and two b-edges crossing.
  int loops = 0;
  int crossing = 0;
  for (EdgeId e = 0; e < c.total.edge_count(); e += 2) {
    const auto& ed = c.total.edge(e);
    if (ed.from == ed.to) {
      ++loops;
      CHECK(c.edge_projection[static_cast<std::size_t>(e)] == 0);
    } else {
      ++crossing;
    }
  }
  CHECK(loops == 2);
  CHECK(crossing == 2);
  // Basis loops project to the Schreier basis.
  auto sb = c.subgroup.schreier_basis();
  for (int i = 0; i < rank(c.total); ++i)
    CHECK(path_to_word(c.base, c.project(c.total.basis_loop(i))) == sb[static_cast<std::size_t>(i)]);
}

TEST_CASE("trivial and Euler-scaled covers") {
  auto whole = build_cover(MarkedGraph::rose(2), SubgroupGraph::whole(2));
  CHECK(whole.sheets == 1);
  CHECK(whole.total.orbit_count() == 2);
  for (int r = 2; r <= 3; ++r)
    for (int m = 1; m <= 4; ++m) {
      if (r == 3 && m == 4) continue;
      for (const auto& h : enumerate_subgroups(r, m)) {
        auto c = build_cover(MarkedGraph::rose(r), h);
        CHECK(rank(c.total) - 1 == m * (r - 1));
      }
    }
  std::vector<Word> gens{w("a")};
  CHECK_THROWS_AS(build_cover(MarkedGraph::rose(2), fold_subgroup_graph(2, gens)), InfiniteIndex);
}

TEST_CASE("invariant powers") {
  auto hb = b_parity();
  CHECK(smallest_invariant_power(Automorphism::identity(2), hb, 4) == 1);
  CHECK(smallest_invariant_power(fib_aut(), SubgroupGraph::whole(2), 4) == 1);
  for (const auto& h : enumerate_subgroups(2, 2)) {
    CHECK(smallest_invariant_power(fib_aut(), h, 4) == 3);
    // Character oracle: the transported character cycles with period 3.
    auto ch = character_of(h);
    auto img = character_of(image_subgroup(fib_aut(), h));
    CHECK(img != ch);
  }
  CHECK(character_of(image_subgroup(fib_aut(), hb)) == std::pair<int, int>{1, 1});
}

TEST_CASE("lifts of FIB to the double cover") {
  auto c = build_cover(MarkedGraph::rose(2), b_parity());
  auto id = lift_map(GraphMap::identity(MarkedGraph::rose(2)), c, 1);
  REQUIRE(id.exists());
  CHECK(induced_outer_automorphism(*id.lift) == Automorphism::identity(3));
  CHECK_FALSE(lift_map(fx::fib(), c, 1).exists());
  auto l3 = lift_map(fx::fib(), c, 3);
  REQUIRE(l3.exists());
  CHECK(l3.lift->check().empty());
  // Projection commutes: p o g' = g^3 o p on every edge.
  auto f3 = power(fx::fib(), 3);
  for (EdgeId e = 0; e < c.total.edge_count(); ++e)
    CHECK(c.project(l3.lift->edge_image(e)) == f3.edge_image(c.edge_projection[static_cast<std::size_t>(e)]));
  auto s = pf_data(transition_matrix(*l3.lift));
  auto base = pf_data(transition_matrix(fx::fib()));
  auto lr = log_ratio(base, s, 10);
  REQUIRE(lr.rational());
  CHECK(lr.p == 3);
  CHECK(lr.q == 1);
  CHECK(induced_outer_automorphism(*l3.lift) == restrict_to(power(fib_aut(), 3), c.subgroup));
  CHECK(enumerate_lifts(fx::fib(), c, 3).size() == 2);
  for (int k = 1; k <= 6; ++k) CHECK(lift_map(fx::fib(), c, k).exists() == (k % 3 == 0));
}

TEST_CASE("extension from a finite-index subgroup") {
  auto hb = b_parity();
  auto r = extend_restriction(Automorphism::identity(3), hb);
  REQUIRE(r.found());
  CHECK(r.extension == Automorphism::identity(2));
  auto f3 = power(fib_aut(), 3);
  auto e3 = extend_restriction(restrict_to(f3, hb), hb);
  REQUIRE(e3.found());
  CHECK(e3.extension == f3);
  // Swapping two basis elements of the kernel is not a restriction.
  auto rest = restrict_to(Automorphism::identity(2), hb);
  std::swap(rest.images[0], rest.images[1]);
  CHECK_FALSE(extend_restriction(rest, hb).found());
}

TEST_CASE("extension round trip on random automorphisms") {
  std::mt19937 rng(2024);
  auto a2 = Alphabet::standard(2);
  int tested = 0;
  std::vector<Automorphism> elementary{Automorphism::parse(a2, {"a b", "b"}), Automorphism::parse(a2, {"b", "a"}),
                                       Automorphism::parse(a2, {"~a", "b"}), Automorphism::parse(a2, {"b a", "b"})};
  std::vector<SubgroupGraph> subs;
  for (int m = 2; m <= 3; ++m)
    for (auto& h : enumerate_subgroups(2, m)) subs.push_back(h);
  while (tested < 30) {
    Automorphism phi = Automorphism::identity(2);
    for (int i = 0; i < 4; ++i) phi = compose(elementary[rng() % elementary.size()], phi);
    const auto& h = subs[rng() % subs.size()];
    auto k = smallest_invariant_power(phi, h, 12);
    if (!k) continue;
    auto pk = power(phi, *k);
    auto e = extend_restriction(restrict_to(pk, h), h);
    REQUIRE(e.found());
    CHECK(e.extension == pk);
    ++tested;
  }
}
