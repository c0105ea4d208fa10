#include "fcomm/covers.hpp"

#include "fcomm/maps.hpp"

#include <set>

namespace fcomm {

EdgePath CoveringMap::lift_path(const EdgePath& p, VertexId from) const {
  EdgePath out{from, {}};
  VertexId at = from;
  for (EdgeId e : p.edges) {
    const EdgeId x = lift_table.at(static_cast<std::size_t>(at)).at(static_cast<std::size_t>(e));
    if (x < 0) throw NonIncidentEdges("path does not start over the given vertex");
    out.edges.push_back(x);
    at = total.edge(x).to;
  }
  return out;
}

EdgePath CoveringMap::project(const EdgePath& p) const {
  EdgePath out{vertex_projection.at(static_cast<std::size_t>(p.start)), {}};
  for (EdgeId e : p.edges) out.edges.push_back(edge_projection.at(static_cast<std::size_t>(e)));
  return out;
}

std::vector<std::string> CoveringMap::check() const {
  std::vector<std::string> out;
  std::vector<int> fiber(static_cast<std::size_t>(base.vertex_count()), 0);
  for (VertexId v = 0; v < total.vertex_count(); ++v) {
    const VertexId pv = vertex_projection[static_cast<std::size_t>(v)];
    ++fiber[static_cast<std::size_t>(pv)];
    std::multiset<EdgeId> img;
    for (EdgeId e : total.star(v)) img.insert(edge_projection[static_cast<std::size_t>(e)]);
    std::multiset<EdgeId> want(base.star(pv).begin(), base.star(pv).end());
    if (img != want) out.push_back("star of '" + total.vertex_name(v) + "' does not map bijectively");
  }
  for (EdgeId e = 0; e < total.edge_count(); ++e) {
    const EdgeId pe = edge_projection[static_cast<std::size_t>(e)];
    if (edge_projection[static_cast<std::size_t>(total.reverse(e))] != base.reverse(pe)) out.push_back("projection does not commute with reversal");
    if (vertex_projection[static_cast<std::size_t>(total.edge(e).from)] != base.edge(pe).from) out.push_back("projection does not commute with incidence");
  }
  for (int n : fiber)
    if (n != sheets) out.push_back("fibers have different sizes");
  return out;
}

CoveringMap build_cover(const MarkedGraph& base, const SubgroupGraph& h) {
  if (!h.is_complete()) throw InfiniteIndex("subgroup has infinite index");
  if (h.ambient_rank() != rank(base)) throw std::invalid_argument("subgroup lives in a free group of another rank");
  CoveringMap c;
  c.base = base;
  c.subgroup = h;
  c.sheets = h.vertex_count();
  const int nv = base.vertex_count();
  const int no = base.orbit_count();
  std::vector<std::string> vnames;
  for (int s = 0; s < c.sheets; ++s)
    for (VertexId v = 0; v < nv; ++v) vnames.push_back(base.vertex_name(v) + "." + std::to_string(s));
  std::set<SubgroupGraph::EdgeKey> h_tree;
  for (auto k : h.default_tree()) h_tree.insert(k);
  std::vector<EdgeSpec> specs;
  std::vector<std::string> tree;
  for (int s = 0; s < c.sheets; ++s)
    for (int o = 0; o < no; ++o) {
      const auto& e = base.edge(2 * o);
      const int i = base.basis_index(o);
      const int to_sheet = i < 0 ? s : h.target(s, i);
      const std::string id = e.id + "." + std::to_string(s);
      specs.push_back({id, vnames[static_cast<std::size_t>(s * nv + e.from)], vnames[static_cast<std::size_t>(to_sheet * nv + e.to)], e.length});
      if (i < 0 || h_tree.count(s * h.ambient_rank() + i)) tree.push_back(id);
    }
  c.total = MarkedGraph::build(vnames, specs, tree);
  c.vertex_projection.resize(static_cast<std::size_t>(c.total.vertex_count()));
  for (VertexId v = 0; v < c.total.vertex_count(); ++v) c.vertex_projection[static_cast<std::size_t>(v)] = v % nv;
  c.edge_projection.resize(static_cast<std::size_t>(c.total.edge_count()));
  for (EdgeId e = 0; e < c.total.edge_count(); ++e) c.edge_projection[static_cast<std::size_t>(e)] = e % (2 * no);
  c.lift_table.assign(static_cast<std::size_t>(c.total.vertex_count()), std::vector<EdgeId>(static_cast<std::size_t>(base.edge_count()), -1));
  for (EdgeId e = 0; e < c.total.edge_count(); ++e)
    c.lift_table[static_cast<std::size_t>(c.total.edge(e).from)][static_cast<std::size_t>(c.edge_projection[static_cast<std::size_t>(e)])] = e;
  return c;
}

std::optional<int> smallest_invariant_power(const Automorphism& phi, const SubgroupGraph& h, int k_max) {
  SubgroupGraph cur = h;
  for (int k = 1; k <= k_max; ++k) {
    cur = image_subgroup(phi, cur);
    if (cur == h) return k;
  }
  return std::nullopt;
}

std::optional<GraphMap> lift_with_choice(const GraphMap& fk, const CoveringMap& c, int sheet) {
  const MarkedGraph& t = c.total;
  const MarkedGraph& b = c.base;
  const VertexId start = c.vertex_over(fk.vertex_image(b.base()), sheet);
  std::vector<VertexId> vimg(static_cast<std::size_t>(t.vertex_count()), -1);
  vimg[0] = start;
  // Breadth-first over the total tree, lifting images of projected edges.
  std::vector<VertexId> queue{0};
  std::vector<EdgePath> images(static_cast<std::size_t>(t.orbit_count()));
  std::vector<bool> done(static_cast<std::size_t>(t.orbit_count()), false);
  for (std::size_t k = 0; k < queue.size(); ++k) {
    const VertexId v = queue[k];
    for (EdgeId e : t.star(v)) {
      const EdgeId pe = c.edge_projection[static_cast<std::size_t>(e)];
      const EdgePath img = c.lift_path(fk.edge_image(pe), vimg[static_cast<std::size_t>(v)]);
      const VertexId w = t.edge(e).to;
      const VertexId end = path_end(t, img);
      if (vimg[static_cast<std::size_t>(w)] < 0) {
        vimg[static_cast<std::size_t>(w)] = end;
        queue.push_back(w);
      } else if (vimg[static_cast<std::size_t>(w)] != end) {
        return std::nullopt;
      }
      const int o = t.orbit(e);
      if (!done[static_cast<std::size_t>(o)]) {
        done[static_cast<std::size_t>(o)] = true;
        images[static_cast<std::size_t>(o)] = e == t.positive_edge(o) ? img : reverse_path(t, img);
      }
    }
  }
  return GraphMap::build(t, std::move(vimg), std::move(images));
}

std::vector<LiftResult> enumerate_lifts(const GraphMap& f, const CoveringMap& c, int k) {
  const GraphMap fk = power(f, k);
  std::vector<LiftResult> out;
  for (int s = 0; s < c.sheets; ++s)
    if (auto g = lift_with_choice(fk, c, s)) out.push_back({std::move(g), s});
  return out;
}

LiftResult lift_map(const GraphMap& f, const CoveringMap& c, int k) {
  const GraphMap fk = power(f, k);
  const MarkedGraph& b = c.base;
  // Canonical choice: the lift from the base vertex of the tree path to the
  // image of the base vertex.
  const EdgePath tau = b.tree_path(b.base(), fk.vertex_image(b.base()));
  const int canonical = c.sheet_of(path_end(c.total, c.lift_path(tau, 0)));
  if (!lift_with_choice(fk, c, canonical)) return {};
  for (int s = 0; s < c.sheets; ++s)
    if (auto g = lift_with_choice(fk, c, s)) return {std::move(g), s};
  return {};
}

ExtensionResult extend_restriction(const Automorphism& restricted, const SubgroupGraph& h,
                                   const std::vector<SubgroupGraph::EdgeKey>& tree, int core_index_cap) {
  ExtensionResult out;
  if (!h.is_complete()) throw InfiniteIndex("extension needs a finite-index subgroup");
  if (restricted.rank != h.subgroup_rank() || !is_automorphism(restricted)) return out;
  const int r = h.ambient_rank();
  const std::vector<Word> hb = h.schreier_basis(tree);
  // Phi on H: x -> theta(restricted(express(x))).
  auto phi_h = [&](const Word& x) { return substitute(restricted.apply(h.express(x, tree)), hb); };
  if (h.vertex_count() == 1) {
    Automorphism f{r, {}};
    for (int i = 0; i < r; ++i) f.images.push_back(phi_h(Word::generator(i)));
    if (!is_automorphism(f)) return out;
    out.kind = ExtensionResult::Kind::UniqueExtension;
    out.extension = std::move(f);
    return out;
  }
  // Normal core N of finite index. For x in N, a x a^-1 lies in N, so
  // Phi(a) conjugates Phi(x) to Phi(a x a^-1); for rank N >= 2 this pins Phi(a).
  const SubgroupGraph n = normal_core(h);
  if (n.vertex_count() > core_index_cap) throw SolverBound("normal core exceeds the configured index cap");
  const std::vector<Word> nb = n.schreier_basis();
  std::vector<Word> ys;
  for (const auto& x : nb) ys.push_back(phi_h(x));
  Automorphism f{r, {}};
  for (int i = 0; i < r; ++i) {
    const Word a = Word::generator(i);
    std::vector<Word> zs;
    for (const auto& x : nb) zs.push_back(phi_h(conjugate_by(a, x)));
    auto g = simultaneous_conjugator(ys, zs);
    if (!g) return out;
    f.images.push_back(*g);
  }
  if (!is_automorphism(f)) return out;
  for (std::size_t j = 0; j < hb.size(); ++j)
    if (f.apply(hb[j]) != substitute(restricted.images[j], hb)) return out;
  out.kind = ExtensionResult::Kind::UniqueExtension;
  out.extension = std::move(f);
  return out;
}

}  // namespace fcomm
