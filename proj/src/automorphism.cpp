#include "fcomm/automorphism.hpp"

namespace fcomm {

Automorphism Automorphism::identity(int rank) {
  Automorphism f{rank, {}};
  for (int i = 0; i < rank; ++i) f.images.push_back(Word::generator(i));
  return f;
}

Automorphism Automorphism::parse(const Alphabet& alphabet, const std::vector<std::string>& images) {
  if (static_cast<int>(images.size()) != alphabet.rank())
    throw std::invalid_argument("expected one image per generator");
  Automorphism f{alphabet.rank(), {}};
  for (const auto& s : images) f.images.push_back(free_reduce(alphabet.parse(s)));
  return f;
}

std::vector<std::string> Automorphism::format(const Alphabet& alphabet) const {
  std::vector<std::string> out;
  for (const auto& w : images) out.push_back(alphabet.format(w));
  return out;
}

Automorphism compose(const Automorphism& f, const Automorphism& g) {
  if (f.rank != g.rank) throw std::invalid_argument("composing automorphisms of different ranks");
  Automorphism h{f.rank, {}};
  for (const auto& w : g.images) h.images.push_back(f.apply(w));
  return h;
}

Automorphism power(const Automorphism& f, long long n) {
  Automorphism base = n < 0 ? inverse(f) : f;
  unsigned long long e = static_cast<unsigned long long>(n < 0 ? -n : n);
  Automorphism acc = Automorphism::identity(f.rank);
  while (e) {
    if (e & 1) acc = compose(acc, base);
    e >>= 1;
    if (e) base = compose(base, base);
  }
  return acc;
}

Automorphism twist(const Automorphism& f, const Word& w) {
  Automorphism h{f.rank, {}};
  for (const auto& x : f.images) h.images.push_back(conjugate_by(w, x));
  return h;
}

bool is_automorphism(const Automorphism& f) {
  if (static_cast<int>(f.images.size()) != f.rank) return false;
  return fold_subgroup_graph(f.rank, f.images) == SubgroupGraph::whole(f.rank);
}

Automorphism inverse(const Automorphism& f) {
  if (static_cast<int>(f.images.size()) != f.rank) throw NotAnAutomorphism("wrong number of images");
  auto fold = fold_with_tracking(f.rank, f.images);
  // r elements generating F_r form a basis (free groups are Hopfian).
  if (fold.graph != SubgroupGraph::whole(f.rank)) throw NotAnAutomorphism("images do not generate the free group");
  Automorphism g{f.rank, {}};
  for (int i = 0; i < f.rank; ++i) g.images.push_back(fold.express_in_generators(Word::generator(i)));
  return g;
}

std::optional<Word> outer_conjugator(const Automorphism& f, const Automorphism& g) {
  if (f.rank != g.rank || f.images.size() != g.images.size()) return std::nullopt;
  return simultaneous_conjugator(g.images, f.images);
}

SubgroupGraph image_subgroup(const Automorphism& f, const SubgroupGraph& h) {
  std::vector<Word> gens;
  for (const auto& b : h.schreier_basis()) gens.push_back(f.apply(b));
  return fold_subgroup_graph(f.rank, gens);
}

Automorphism restrict_to(const Automorphism& f, const SubgroupGraph& h, const std::vector<SubgroupGraph::EdgeKey>& tree) {
  if (image_subgroup(f, h) != h) throw std::invalid_argument("subgroup is not invariant");
  Automorphism r{h.subgroup_rank(), {}};
  for (const auto& b : h.schreier_basis(tree)) r.images.push_back(h.express(f.apply(b), tree));
  return r;
}

}  // namespace fcomm
