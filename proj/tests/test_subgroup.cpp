#include "doctest.h"
#include "fixtures.hpp"

#include "fcomm/automorphism.hpp"
#include "fcomm/subgroup.hpp"

#include <random>

using namespace fcomm;
using fx::w;

namespace {

// b-parity kernel: words with an even number of b letters.
bool even_b(const Word& x) {
  int n = 0;
  for (Letter l : x.letters) n += generator_of(l) == 1;
  return n % 2 == 0;
}

Word random_word(std::mt19937& rng, int rank, int len) {
  std::uniform_int_distribution<int> g(0, 2 * rank - 1);
  Word x;
  for (int i = 0; i < len; ++i) {
    int k = g(rng);
    x.letters.push_back(letter_of(k / 2, k % 2));
  }
  return free_reduce(x);
}

SubgroupGraph kernel(int ca, int cb) {
  std::vector<Word> gens;
  // Kernel of x -> ca*|x|_a + cb*|x|_b mod 2 on F_2.
  for (const auto& s : {"a a", "b b", "a b", "b a", "a", "b", "a b ~a", "b a ~b"}) {
    Word g = w(s);
    int na = 0;
    int nb = 0;
    for (Letter l : g.letters) (generator_of(l) == 0 ? na : nb)++;
    if ((ca * na + cb * nb) % 2 == 0) gens.push_back(g);
  }
  return fold_subgroup_graph(2, gens);
}

}  // namespace

TEST_CASE("folding basics") {
  std::vector<Word> ga{w("a")};
  auto h = fold_subgroup_graph(2, ga);
  CHECK(h.vertex_count() == 1);
  CHECK(h.target(0, 0) == 0);
  CHECK(h.target(0, 1) == -1);
  std::vector<Word> gaa{w("a"), w("a")};
  CHECK(fold_subgroup_graph(2, gaa) == h);
  std::vector<Word> none;
  CHECK(fold_subgroup_graph(2, none).vertex_count() == 1);
  CHECK(fold_subgroup_graph(2, none).edge_count() == 0);
}

TEST_CASE("b-parity kernel") {
  std::vector<Word> gens{w("a"), w("b b"), w("b a ~b")};
  auto h = fold_subgroup_graph(2, gens);
  CHECK(h.index() == 2);
  CHECK(h.subgroup_rank() == 3);
  std::vector<Word> shuffled{w("b a ~b"), w("a"), w("b b")};
  CHECK(fold_subgroup_graph(2, shuffled) == h);
  std::mt19937 rng(5);
  for (int t = 0; t < 1000; ++t) {
    Word x = random_word(rng, 2, 10);
    CHECK(h.contains(x) == even_b(x));
  }
  auto basis = h.schreier_basis();
  CHECK(basis.size() == 3);
  for (const auto& b : basis) CHECK(h.contains(b));
  for (int t = 0; t < 200; ++t) {
    Word x = random_word(rng, 2, 10);
    if (!h.contains(x)) continue;
    CHECK(substitute(h.express(x), basis) == x);
  }
}

TEST_CASE("tracked folding expresses members in the generators") {
  std::mt19937 rng(9);
  for (int t = 0; t < 200; ++t) {
    std::vector<Word> gens;
    for (int i = 0; i < 3; ++i) gens.push_back(random_word(rng, 2, 5));
    auto tf = fold_with_tracking(2, gens);
    for (int k = 0; k < 5; ++k) {
      Word e;
      for (int j = 0; j < 3; ++j) {
        Word x = random_word(rng, 3, 3);
        e = e * substitute(x, gens);
      }
      REQUIRE(tf.graph.contains(e));
      CHECK(substitute(tf.express_in_generators(e), gens) == e);
    }
  }
}

TEST_CASE("subgroup enumeration matches Hall's recursion") {
  CHECK(hall_count(2, 1) == 1);
  CHECK(hall_count(2, 2) == 3);
  CHECK(hall_count(2, 3) == 13);
  for (int r = 2; r <= 3; ++r)
    for (int m = 1; m <= (r == 2 ? 4 : 3); ++m) {
      auto subs = enumerate_subgroups(r, m);
      CHECK(static_cast<long long>(subs.size()) == hall_count(r, m));
      for (const auto& h : subs) {
        CHECK(h.index() == m);
        CHECK(h.subgroup_rank() - 1 == m * (r - 1));
      }
    }
  auto one = enumerate_subgroups(2, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == SubgroupGraph::whole(2));
  CHECK_THROWS_AS(enumerate_subgroups(3, 6, 1000), ResourceBound);
}

TEST_CASE("intersections") {
  auto hb = kernel(0, 1);
  auto ha = kernel(1, 0);
  CHECK(subgroup_intersection(SubgroupGraph::whole(2), hb) == hb);
  CHECK(subgroup_intersection(hb, hb) == hb);
  auto both = subgroup_intersection(hb, ha);
  CHECK(both.index() == 4);
  std::mt19937 rng(1);
  for (int t = 0; t < 500; ++t) {
    Word x = random_word(rng, 2, 9);
    CHECK(both.contains(x) == (ha.contains(x) && hb.contains(x)));
  }
  for (const auto& h1 : enumerate_subgroups(2, 2))
    for (const auto& h2 : enumerate_subgroups(2, 3)) CHECK(*subgroup_intersection(h1, h2).index() <= 6);
}

TEST_CASE("normal core and conjugates") {
  for (const auto& h : enumerate_subgroups(2, 3)) {
    auto n = normal_core(h);
    REQUIRE(n.index());
    CHECK(*n.index() % 3 == 0);
    for (const auto& r : h.coset_representatives()) {
      CHECK(conjugate_subgroup(n, r) == n);
      for (const auto& b : n.schreier_basis()) CHECK(h.contains(conjugate_by(r, b)));
    }
    auto g = conjugate_subgroup(h, w("a b"));
    for (const auto& b : h.schreier_basis()) CHECK(g.contains(conjugate_by(w("a b"), b)));
  }
}

TEST_CASE("automorphisms") {
  auto a2 = Alphabet::standard(2);
  auto fib = Automorphism::parse(a2, {"a b", "a"});
  auto inv = inverse(fib);
  CHECK(compose(fib, inv) == Automorphism::identity(2));
  CHECK(compose(inv, fib) == Automorphism::identity(2));
  CHECK(power(fib, 3).format(a2) == std::vector<std::string>{"a b a a b", "a b a"});
  CHECK_FALSE(is_automorphism(Automorphism::parse(a2, {"a a", "b"})));
  CHECK_THROWS_AS(inverse(Automorphism::parse(a2, {"a b", "b a"})), NotAnAutomorphism);
  auto tw = twist(fib, w("b ~a"));
  CHECK(outer_equal(tw, fib));
  CHECK_FALSE(outer_equal(fib, power(fib, 2)));
}

TEST_CASE("image subgroups follow the character action") {
  auto fib = Automorphism::parse(Alphabet::standard(2), {"a b", "a"});
  auto hb = kernel(0, 1);
  CHECK(image_subgroup(Automorphism::identity(2), hb) == hb);
  // Phi(ker chi) = ker(chi o Phi^-1); chi_b o Phi^-1 = chi_a + chi_b.
  CHECK(image_subgroup(fib, hb) == kernel(1, 1));
  CHECK(image_subgroup(power(fib, 3), hb) == hb);
  auto r = restrict_to(power(fib, 3), hb);
  CHECK(r.rank == 3);
  CHECK(is_automorphism(r));
}
