#pragma once

#include "fcomm/covers.hpp"
#include "fcomm/graph_map.hpp"

namespace fx {

inline fcomm::GraphMap fib() { return fcomm::GraphMap::rose_map({"a", "b"}, {"a b", "a"}); }
inline fcomm::GraphMap plast() { return fcomm::GraphMap::rose_map({"a", "b", "c"}, {"b", "c", "a b"}); }

// Double cover of the rose for the b-parity character.
inline fcomm::MarkedGraph cov2b() {
  return fcomm::MarkedGraph::build({"v0", "v1"},
                                   {{"a0", "v0", "v0", 1}, {"a1", "v1", "v1", 1}, {"b0", "v0", "v1", 1}, {"b1", "v1", "v0", 1}},
                                   {"b0"});
}

inline fcomm::SubgroupGraph b_parity() {
  std::vector<fcomm::Word> gens{fcomm::Alphabet::standard(2).parse("a"), fcomm::Alphabet::standard(2).parse("b b"),
                                fcomm::Alphabet::standard(2).parse("b a ~b")};
  return fcomm::fold_subgroup_graph(2, gens);
}

// Lift of the third power of the golden mean map to the b-parity double cover.
inline fcomm::GraphMap lift3() {
  auto cover = fcomm::build_cover(fcomm::MarkedGraph::rose(2), b_parity());
  return *fcomm::lift_map(fib(), cover, 3).lift;
}

inline fcomm::Word w(const std::string& s, int rank = 2) { return fcomm::Alphabet::standard(rank).parse(s); }

}  // namespace fx
