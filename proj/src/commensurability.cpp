#include "fcomm/commensurability.hpp"

#include "fcomm/maps.hpp"
#include "fcomm/whitehead.hpp"

#include <boost/pending/disjoint_sets.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace fcomm {

namespace {

struct Classes {
  std::vector<int> rank, parent;
  boost::disjoint_sets<int*, int*> sets;
  explicit Classes(int n) : rank(static_cast<std::size_t>(n)), parent(static_cast<std::size_t>(n)), sets(rank.data(), parent.data()) {
    for (int i = 0; i < n; ++i) sets.make_set(i);
  }
  int find(int x) { return sets.find_set(x); }
  bool unite(int a, int b) {
    if (find(a) == find(b)) return false;
    sets.union_set(a, b);
    return true;
  }
};

std::optional<AngleLabeling> labeling_of(const GraphMap& f, std::string& note) {
  try {
    return angle_labeling(f);
  } catch (const NotRotationless&) {
  }
  auto k = rotationless_power(f, 12);
  if (!k) {
    note = "no rotationless power up to 12";
    return std::nullopt;
  }
  return angle_labeling(power(f, *k));
}

Word product_of_orbit(const Automorphism& step, const Word& w, int count) {
  // w step(w) step^2(w) ... step^(count-1)(w)
  Word out;
  Word cur = w;
  for (int j = 0; j < count; ++j) {
    out = out * cur;
    cur = step.apply(cur);
  }
  return out;
}

Automorphism signed_permutation(int r, const std::vector<int>& perm, unsigned signs) {
  Automorphism s{r, {}};
  for (int i = 0; i < r; ++i) s.images.push_back(Word{letter_of(perm[static_cast<std::size_t>(i)], (signs >> i & 1u) != 0)});
  return s;
}

Automorphism signed_permutation_inverse(int r, const std::vector<int>& perm, unsigned signs) {
  Automorphism s{r, std::vector<Word>(static_cast<std::size_t>(r))};
  for (int i = 0; i < r; ++i)
    s.images[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = Word{letter_of(i, (signs >> i & 1u) != 0)};
  return s;
}

std::size_t cyclic_length(const Word& w) { return cyclic_reduce(w).core.size(); }

// Kruskal completion of a tree preferring the given orbits.
std::vector<std::string> spanning_tree(const std::vector<std::string>& vnames, const std::vector<EdgeSpec>& specs,
                                       const std::vector<int>& preferred) {
  std::vector<int> parent(vnames.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return parent[static_cast<std::size_t>(x)] == x ? x : parent[static_cast<std::size_t>(x)] = find(parent[static_cast<std::size_t>(x)]);
  };
  auto idx = [&](const std::string& n) { return static_cast<int>(std::find(vnames.begin(), vnames.end(), n) - vnames.begin()); };
  std::vector<std::string> tree;
  auto offer = [&](int o) {
    const auto& s = specs[static_cast<std::size_t>(o)];
    const int a = find(idx(s.from));
    const int b = find(idx(s.to));
    if (a == b) return;
    parent[static_cast<std::size_t>(a)] = b;
    tree.push_back(s.id);
  };
  for (int o : preferred) offer(o);
  for (int o = 0; o < static_cast<int>(specs.size()); ++o) offer(o);
  return tree;
}

struct QuotientGraph {
  MarkedGraph graph;
  std::vector<VertexId> vertex_projection;
  std::vector<EdgeId> edge_projection;
};

// Quotient of g's graph by vertex and oriented-edge classes that are closed
// under reversal; nullopt when an edge would be glued to its reverse.
std::optional<QuotientGraph> quotient_graph(const MarkedGraph& G, Classes& vc, Classes& ec) {
  QuotientGraph q;
  std::map<int, VertexId> vclass;
  std::vector<std::string> vnames;
  q.vertex_projection.assign(static_cast<std::size_t>(G.vertex_count()), -1);
  for (VertexId v = 0; v < G.vertex_count(); ++v) {
    auto [it, fresh] = vclass.try_emplace(vc.find(v), static_cast<VertexId>(vnames.size()));
    if (fresh) vnames.push_back(G.vertex_name(v));
    q.vertex_projection[static_cast<std::size_t>(v)] = it->second;
  }
  for (EdgeId e = 0; e < G.edge_count(); ++e)
    if (ec.find(e) == ec.find(G.reverse(e))) return std::nullopt;
  std::map<int, EdgeId> eclass;
  std::vector<EdgeSpec> specs;
  std::vector<int> preferred;
  q.edge_projection.assign(static_cast<std::size_t>(G.edge_count()), -1);
  for (int o = 0; o < G.orbit_count(); ++o) {
    const EdgeId e = 2 * o;
    if (eclass.contains(ec.find(e))) continue;
    const int no = static_cast<int>(specs.size());
    eclass[ec.find(e)] = 2 * no;
    eclass[ec.find(G.reverse(e))] = 2 * no + 1;
    const auto& ed = G.edge(e);
    specs.push_back({G.edge_name(e), vnames[static_cast<std::size_t>(q.vertex_projection[static_cast<std::size_t>(ed.from)])],
                     vnames[static_cast<std::size_t>(q.vertex_projection[static_cast<std::size_t>(ed.to)])], ed.length});
  }
  for (EdgeId e = 0; e < G.edge_count(); ++e) q.edge_projection[static_cast<std::size_t>(e)] = eclass.at(ec.find(e));
  for (int o : G.tree_orbits()) {
    const int qo = q.edge_projection[static_cast<std::size_t>(2 * o)] / 2;
    if (std::find(preferred.begin(), preferred.end(), qo) == preferred.end()) preferred.push_back(qo);
  }
  q.graph = MarkedGraph::build(vnames, specs, spanning_tree(vnames, specs, preferred));
  return q;
}

EdgePath push(const QuotientGraph& q, const EdgePath& p) {
  EdgePath out{q.vertex_projection.at(static_cast<std::size_t>(p.start)), {}};
  for (EdgeId e : p.edges) out.edges.push_back(q.edge_projection.at(static_cast<std::size_t>(e)));
  return out;
}

void enumerate_words(int rank, int length, const std::function<void(const Word&)>& visit) {
  Word w;
  std::function<void()> rec = [&]() {
    if (static_cast<int>(w.size()) == length) {
      visit(w);
      return;
    }
    for (int i = 0; i < rank; ++i)
      for (bool inv : {false, true}) {
        const Letter l = letter_of(i, inv);
        if (!w.letters.empty() && w.letters.back() == -l) continue;
        w.letters.push_back(l);
        rec();
        w.letters.pop_back();
      }
  };
  rec();
}

}  // namespace

OuterAutomorphism OuterAutomorphism::from_map(const GraphMap& f) { return {induced_outer_automorphism(f), f}; }

std::optional<StretchFactor> OuterAutomorphism::stretch() const {
  if (!representative) return std::nullopt;
  const auto tt = is_train_track(*representative, 1);
  if (!tt.train_track() || !tt.expanding) return std::nullopt;
  return pf_data(transition_matrix(*representative));
}

OuterAutomorphism power(const OuterAutomorphism& phi, int n) {
  OuterAutomorphism out{power(phi.aut, n), std::nullopt};
  if (phi.representative && n >= 1) out.representative = power(*phi.representative, n);
  return out;
}

std::vector<std::string> replay(const CoveringWitness& w, const Automorphism& psi, const Automorphism& phi) {
  std::vector<std::string> out;
  if (w.k < 1) out.push_back("power must be positive");
  if (!w.subgroup.index()) out.push_back("subgroup has infinite index");
  if (static_cast<int>(w.identification.size()) != psi.rank) out.push_back("identification has the wrong number of words");
  if (!out.empty()) return out;
  const auto tf = fold_with_tracking(phi.rank, w.identification);
  if (tf.graph != w.subgroup) out.push_back("identification does not generate the subgroup");
  if (tf.relation_found || w.subgroup.subgroup_rank() != psi.rank) out.push_back("identification is not a free basis");
  const Automorphism phik = power(phi, w.k);
  if (image_subgroup(twist(phik, w.inner_conjugator), w.subgroup) != w.subgroup)
    out.push_back("conjugated power does not preserve the subgroup");
  for (int i = 0; i < psi.rank; ++i) {
    const Word lhs = conjugate_by(w.inner_conjugator, phik.apply(w.identification[static_cast<std::size_t>(i)]));
    const Word rhs = substitute(conjugate_by(w.outer_conjugator, psi.images[static_cast<std::size_t>(i)]), w.identification);
    if (lhs != rhs) out.push_back("restriction differs from psi on generator " + std::to_string(i));
  }
  return out;
}

CoveringWitness compose_witnesses(const CoveringWitness& a, const Automorphism& phi, const CoveringWitness& b,
                                  const Automorphism& chi) {
  CoveringWitness out;
  out.k = a.k * b.k;
  for (const Word& x : a.identification) out.identification.push_back(substitute(x, b.identification));
  out.subgroup = fold_subgroup_graph(chi.rank, out.identification);
  const Word c_chain = product_of_orbit(power(chi, b.k), b.inner_conjugator, a.k);
  const Word u = product_of_orbit(phi, b.outer_conjugator, a.k);
  out.inner_conjugator = substitute(a.inner_conjugator * inverse(u), b.identification) * c_chain;
  out.outer_conjugator = a.outer_conjugator;
  return out;
}

CoverSearch covers_relation(const OuterAutomorphism& psi, const OuterAutomorphism& phi, int k_max, const SearchBounds& bounds) {
  CoverSearch out;
  const int rp = psi.rank();
  const int rf = phi.rank();
  if (rf < 2 || rp < rf) {
    out.reason = "exact: rank(psi) >= rank(phi) >= 2 fails";
    return out;
  }
  if ((rp - 1) % (rf - 1) != 0) {
    out.reason = "exact: rank(psi) - 1 is not a multiple of rank(phi) - 1";
    return out;
  }
  const int m = (rp - 1) / (rf - 1);
  std::vector<int> ks;
  const auto sf = phi.stretch();
  const auto sp = psi.stretch();
  for (int k = 1; k <= k_max; ++k)
    if (!sf || !sp || powers_equal(*sf, k, *sp, 1)) ks.push_back(k);
  if (ks.empty()) {
    out.reason = "exact: lambda(psi) differs from lambda(phi)^k for every k <= " + std::to_string(k_max);
    return out;
  }
  const auto subgroups = enumerate_subgroups(rf, m);
  std::size_t tried = 0;
  std::vector<int> perm(static_cast<std::size_t>(rp));
  for (int k : ks) {
    const Automorphism phik = power(phi.aut, k);
    for (const auto& h : subgroups) {
      const SubgroupGraph hk = image_subgroup(phik, h);
      std::optional<Word> conj;
      for (const Word& r : hk.coset_representatives())
        if (conjugate_subgroup(hk, inverse(r)) == h) {
          conj = inverse(r);
          break;
        }
      if (!conj) continue;
      const Automorphism twisted = twist(phik, *conj);
      for (const auto& tree : h.spanning_trees(64)) {
        const auto basis = h.schreier_basis(tree);
        Automorphism restricted{rp, {}};
        for (const Word& b : basis) restricted.images.push_back(h.express(twisted.apply(b), tree));
        std::iota(perm.begin(), perm.end(), 0);
        do {
          for (unsigned signs = 0; signs < (1u << rp); ++signs) {
            if (++tried > bounds.identification_cap) {
              out.reason = "identification cap reached";
              return out;
            }
            const Automorphism s = signed_permutation(rp, perm, signs);
            const Automorphism a = compose(signed_permutation_inverse(rp, perm, signs), compose(restricted, s));
            bool plausible = true;
            for (int i = 0; i < rp && plausible; ++i)
              plausible = cyclic_length(a.images[static_cast<std::size_t>(i)]) == cyclic_length(psi.aut.images[static_cast<std::size_t>(i)]);
            if (!plausible) continue;
            const auto w = outer_conjugator(a, psi.aut);
            if (!w) continue;
            CoveringWitness wit;
            wit.subgroup = h;
            wit.k = k;
            wit.inner_conjugator = *conj;
            for (const Word& x : s.images) wit.identification.push_back(substitute(x, basis));
            wit.outer_conjugator = *w;
            if (!replay(wit, psi.aut, phi.aut).empty()) continue;
            out.kind = CoverSearch::Kind::Witness;
            out.witness = std::move(wit);
            return out;
          }
        } while (std::next_permutation(perm.begin(), perm.end()));
      }
    }
  }
  out.reason = "no subgroup, power and identification found within bounds";
  return out;
}

PowerCover greater_than(const OuterAutomorphism& phi1, const OuterAutomorphism& phi2, const SearchBounds& bounds) {
  PowerCover out;
  for (int p = 1; p <= bounds.p_max; ++p) {
    auto r = covers_relation(power(phi1, p), power(phi2, p), bounds.k_max, bounds);
    if (r.found()) {
      out.kind = PowerCover::Kind::Greater;
      out.p = p;
      out.witness = std::move(r.witness);
      return out;
    }
    out.reason = r.reason;
    if (r.reason.rfind("exact: rank", 0) == 0) break;
  }
  return out;
}

CommonCover commensurable(const OuterAutomorphism& phi1, const OuterAutomorphism& phi2, const SearchBounds& bounds) {
  CommonCover out;
  auto accept = [&](const OuterAutomorphism& top, PowerCover a, PowerCover b) {
    out.kind = CommonCover::Kind::Certificate;
    out.phi3 = top;
    out.over_first = std::move(a);
    out.over_second = std::move(b);
  };
  if (auto g = greater_than(phi1, phi2, bounds); g.found()) {
    auto self = greater_than(phi1, phi1, bounds);
    if (self.found()) {
      accept(phi1, std::move(self), std::move(g));
      return out;
    }
  }
  if (auto g = greater_than(phi2, phi1, bounds); g.found()) {
    auto self = greater_than(phi2, phi2, bounds);
    if (self.found()) {
      accept(phi2, std::move(g), std::move(self));
      return out;
    }
  }
  const auto s1 = phi1.stretch();
  const auto s2 = phi2.stretch();
  if (s1 && s2 && !log_ratio(*s1, *s2, 64).rational()) {
    out.reason = "stretch factors have no common power (log ratio not rational within 64)";
    return out;
  }
  // Restrictions of one side to invariant subgroups, tested against the other.
  for (int side = 0; side < 2; ++side) {
    const OuterAutomorphism& base = side == 0 ? phi2 : phi1;
    const OuterAutomorphism& other = side == 0 ? phi1 : phi2;
    for (int m = 2; m <= bounds.index_max; ++m) {
      for (const auto& h : enumerate_subgroups(base.rank(), m)) {
        const auto k = smallest_invariant_power(base.aut, h, bounds.k_max);
        if (!k) continue;
        OuterAutomorphism lifted{restrict_to(power(base.aut, *k), h), std::nullopt};
        if (base.representative) {
          auto cover = build_cover(base.representative->graph(), h);
          if (auto l = lift_map(*base.representative, cover, *k); l.exists()) lifted.representative = *l.lift;
        }
        auto g = greater_than(lifted, other, bounds);
        if (!g.found()) continue;
        PowerCover own;
        own.kind = PowerCover::Kind::Greater;
        own.p = 1;
        own.witness.subgroup = h;
        own.witness.k = *k;
        own.witness.identification = h.schreier_basis();
        if (!replay(own.witness, lifted.aut, base.aut).empty()) continue;
        if (side == 0) accept(lifted, std::move(g), std::move(own));
        else accept(lifted, std::move(own), std::move(g));
        return out;
      }
    }
  }
  out.reason = "no common cover found within bounds";
  return out;
}

Equivalence covering_equivalent(const OuterAutomorphism& phi1, const OuterAutomorphism& phi2, const SearchBounds& bounds) {
  Equivalence out;
  if (phi1.rank() != phi2.rank()) return out;
  out.forward = greater_than(phi1, phi2, bounds);
  if (!out.forward.found()) return out;
  out.backward = greater_than(phi2, phi1, bounds);
  if (!out.backward.found()) return out;
  out.kind = Equivalence::Kind::EquivalentNoConjugatorFound;
  const int r = phi1.rank();
  // Conjugators by total image length, then image lengths, then shortlex.
  for (int total = r; total <= bounds.conjugator_length; ++total) {
    std::vector<int> lengths(static_cast<std::size_t>(r), 1);
    std::function<bool(int, int)> split = [&](int i, int left) -> bool {
      if (i == r - 1) {
        lengths[static_cast<std::size_t>(i)] = left;
        Automorphism cand{r, std::vector<Word>(static_cast<std::size_t>(r))};
        std::function<bool(int)> fill = [&](int j) -> bool {
          if (j == r) {
            if (!is_automorphism(cand)) return false;
            const Automorphism conj = compose(cand, compose(phi1.aut, inverse(cand)));
            if (!outer_equal(conj, phi2.aut)) return false;
            out.kind = Equivalence::Kind::EquivalentWithConjugator;
            out.conjugator = cand;
            return true;
          }
          bool done = false;
          enumerate_words(r, lengths[static_cast<std::size_t>(j)], [&](const Word& w) {
            if (done) return;
            cand.images[static_cast<std::size_t>(j)] = w;
            done = fill(j + 1);
          });
          return done;
        };
        return fill(0);
      }
      for (int l = 1; l <= left - (r - 1 - i); ++l) {
        lengths[static_cast<std::size_t>(i)] = l;
        if (split(i + 1, left - l)) return true;
      }
      return false;
    };
    if (split(0, total)) return out;
  }
  return out;
}

Descent quotient_descent(const GraphMap& g, const GraphMap& h, const CoveringMap& p, int n, AnglePolicy policy) {
  Descent out;
  const MarkedGraph& G = g.graph();
  const MarkedGraph& base = h.graph();
  if (G.vertex_count() != p.total.vertex_count() || G.edge_count() != p.total.edge_count())
    throw std::invalid_argument("map does not live on the total graph of the cover");
  const GraphMap gn = power(g, n);
  for (VertexId v = 0; v < G.vertex_count(); ++v)
    if (p.vertex_projection[static_cast<std::size_t>(gn.vertex_image(v))] != h.vertex_image(p.vertex_projection[static_cast<std::size_t>(v)]))
      throw std::invalid_argument("g^n does not cover h at vertex " + G.vertex_name(v));
  for (EdgeId e = 0; e < G.edge_count(); ++e)
    if (tighten(base, p.project(gn.edge_image(e))) != h.edge_image(p.edge_projection[static_cast<std::size_t>(e)]))
      throw std::invalid_argument("g^n does not cover h on edge " + G.edge_name(e));

  for (const GraphMap* f : {&g, &h}) {
    std::string note;
    auto lab = labeling_of(*f, note);
    if (!lab || !lab->labeled()) {
      const std::string what = lab ? "symmetric component " + lab->offender : note;
      if (policy == AnglePolicy::Strict) {
        out.kind = Descent::Kind::SymmetricIWG;
        out.reason = what;
        return out;
      }
      out.result.angle_note += (out.result.angle_note.empty() ? "" : "; ") + std::string("angles not enforced: ") + what;
    }
  }

  // Vertices and directions: identify within the images of fibers.
  Classes vc(G.vertex_count());
  Classes ec(G.edge_count());
  std::vector<std::set<int>> vsets(static_cast<std::size_t>(base.vertex_count()));
  std::vector<std::set<int>> dsets(static_cast<std::size_t>(base.edge_count()));
  for (VertexId v = 0; v < G.vertex_count(); ++v) vsets[static_cast<std::size_t>(p.vertex_projection[static_cast<std::size_t>(v)])].insert(v);
  for (EdgeId e = 0; e < G.edge_count(); ++e) dsets[static_cast<std::size_t>(p.edge_projection[static_cast<std::size_t>(e)])].insert(e);
  const int cap = G.vertex_count() + G.edge_count();
  std::set<std::pair<std::vector<std::set<int>>, std::vector<std::set<int>>>> seen;
  int m = 0;
  while (seen.emplace(vsets, dsets).second) {
    if (++m > cap) throw StabilizationBound("vertex and direction classes did not stabilize within " + std::to_string(cap) + " steps");
    for (auto& s : vsets) {
      std::set<int> t;
      for (int v : s) t.insert(gn.vertex_image(v));
      s = std::move(t);
      for (int v : s) vc.unite(*s.begin(), v);
    }
    for (auto& s : dsets) {
      std::set<int> t;
      for (int d : s) t.insert(direction_map(gn, d));
      s = std::move(t);
      for (int d : s) ec.unite(*s.begin(), d);
    }
  }
  out.result.iterations = m;

  // Edges: closure under reversal, endpoints and g.
  for (bool changed = true; changed;) {
    changed = false;
    for (EdgeId e = 0; e < G.edge_count(); ++e) {
      const EdgeId r = ec.find(e);
      if (r == e) continue;
      changed |= ec.unite(G.reverse(e), G.reverse(r));
      changed |= vc.unite(G.edge(e).from, G.edge(r).from);
      changed |= vc.unite(G.edge(e).to, G.edge(r).to);
      const auto& ie = g.edge_image(e).edges;
      const auto& ir = g.edge_image(r).edges;
      if (ie.size() != ir.size()) {
        out.reason = "identified edges " + G.edge_name(e) + " and " + G.edge_name(r) + " have images of different lengths";
        return out;
      }
      for (std::size_t i = 0; i < ie.size(); ++i) changed |= ec.unite(ie[i], ir[i]);
    }
    for (VertexId v = 0; v < G.vertex_count(); ++v) changed |= vc.unite(g.vertex_image(v), g.vertex_image(vc.find(v)));
  }

  auto q = quotient_graph(G, vc, ec);
  if (!q) {
    out.reason = "an edge is identified with its reverse";
    return out;
  }
  QuotientResult& res = out.result;
  res.quotient = q->graph;
  res.vertex_projection = q->vertex_projection;
  res.edge_projection = q->edge_projection;

  res.factors = true;
  for (VertexId v = 0; v < G.vertex_count(); ++v)
    res.factors &= p.vertex_projection[static_cast<std::size_t>(v)] ==
                   p.vertex_projection[static_cast<std::size_t>(vc.find(v))];
  for (EdgeId e = 0; e < G.edge_count(); ++e)
    res.factors &= p.edge_projection[static_cast<std::size_t>(e)] == p.edge_projection[static_cast<std::size_t>(ec.find(e))];

  const MarkedGraph& Q = res.quotient;
  std::vector<VertexId> vimg(static_cast<std::size_t>(Q.vertex_count()), -1);
  for (VertexId v = 0; v < G.vertex_count(); ++v) {
    const VertexId qv = q->vertex_projection[static_cast<std::size_t>(v)];
    if (vimg[static_cast<std::size_t>(qv)] < 0) vimg[static_cast<std::size_t>(qv)] = q->vertex_projection[static_cast<std::size_t>(g.vertex_image(v))];
  }
  std::vector<EdgePath> images(static_cast<std::size_t>(Q.orbit_count()));
  std::vector<char> done(static_cast<std::size_t>(Q.orbit_count()), 0);
  for (EdgeId e = 0; e < G.edge_count(); ++e) {
    const EdgeId qe = q->edge_projection[static_cast<std::size_t>(e)];
    if (qe % 2 != 0 || done[static_cast<std::size_t>(qe / 2)]) continue;
    done[static_cast<std::size_t>(qe / 2)] = 1;
    images[static_cast<std::size_t>(qe / 2)] = tighten(Q, push(*q, g.edge_image(e)));
    if (images[static_cast<std::size_t>(qe / 2)].empty()) {
      out.reason = "the image of " + Q.edge_name(qe) + " collapses in the quotient";
      return out;
    }
  }
  try {
    res.induced = GraphMap::build(Q, vimg, images);
  } catch (const std::invalid_argument& ex) {
    out.reason = std::string("induced map is not a graph map: ") + ex.what();
    return out;
  }
  res.commutes = true;
  for (EdgeId e = 0; e < G.edge_count(); ++e)
    res.commutes &= tighten(Q, push(*q, g.edge_image(e))) == res.induced.edge_image(q->edge_projection[static_cast<std::size_t>(e)]);
  for (VertexId v = 0; v < G.vertex_count(); ++v)
    res.commutes &= q->vertex_projection[static_cast<std::size_t>(g.vertex_image(v))] ==
                    res.induced.vertex_image(q->vertex_projection[static_cast<std::size_t>(v)]);

  std::vector<Word> pushed;
  const VertexId qbase = q->vertex_projection[static_cast<std::size_t>(G.base())];
  for (int i = 0; i < rank(G); ++i) pushed.push_back(path_to_word(Q, tighten(Q, push(*q, G.basis_loop(i))), qbase));
  const auto tf = fold_with_tracking(rank(Q), pushed);
  res.pushed_rank = tf.graph.subgroup_rank();
  res.injective = !tf.relation_found && res.pushed_rank == rank(G);
  res.image_index = tf.graph.index();

  if (!res.commutes || !res.factors || !res.injective || !res.image_index) {
    out.reason = !res.commutes ? "pi o g differs from gbar o pi"
                 : !res.factors ? "quotient does not factor through the cover"
                 : !res.injective ? "pushed basis is not free"
                                  : "image has infinite index";
    return out;
  }
  out.kind = Descent::Kind::Quotient;
  return out;
}

GcdResult gcd_reduce(const OuterAutomorphism& phi1, const OuterAutomorphism& phi2, long long ratio_bound) {
  const auto s1 = phi1.stretch();
  const auto s2 = phi2.stretch();
  if (!s1 || !s2) throw std::invalid_argument("gcd reduction needs expanding train track representatives");
  const auto lr = log_ratio(*s1, *s2, ratio_bound);
  if (!lr.rational()) throw NotCommensurableRatio("log lambda2 / log lambda1 is not rational within the bound");
  if (phi1.rank() != phi2.rank()) throw std::invalid_argument("gcd reduction needs equal ranks");
  GcdResult out;
  out.p = lr.p;
  out.q = lr.q;
  if (lr.p % lr.q == 0 || lr.q % lr.p == 0) {
    out.kind = GcdResult::Kind::AlreadyIntegral;
    out.result = lr.p >= lr.q ? phi1 : phi2;
    return out;
  }
  // m q + n p = gcd(p, q) with m > 0 > n.
  const long long g = std::gcd(lr.p, lr.q);
  long long m = 1;
  while ((g - m * lr.q) % lr.p != 0) ++m;
  const long long n = (g - m * lr.q) / lr.p;
  out.kind = GcdResult::Kind::Reduced;
  out.m = m;
  out.n = n;
  out.result = OuterAutomorphism::from_automorphism(compose(power(phi2.aut, n), power(phi1.aut, m)));
  bool positive = true;
  for (const Word& w : out.result.aut.images)
    for (Letter l : w.letters) positive &= l > 0;
  if (!positive) {
    out.note = "result has no positive representative; lambda is the algebraic target lambda1^(g/q)";
    return out;
  }
  const Alphabet al = Alphabet::standard(phi1.rank());
  out.result.representative = GraphMap::rose_map(al.names(), out.result.aut.format(al));
  if (const auto s = out.result.stretch()) out.certified = powers_equal(*s, lr.q, *s1, g);
  out.note = out.certified ? "lambda certified on the positive rose representative" : "lambda certification failed";
  return out;
}

std::optional<CoveringMap> deck_quotient(const GraphMap& f) {
  const MarkedGraph& G = f.graph();
  const int nv = G.vertex_count();
  if (nv > 7) return std::nullopt;
  struct Sym {
    std::vector<VertexId> v;
    std::vector<EdgeId> e;
  };
  std::vector<Sym> syms;
  std::vector<VertexId> vp(static_cast<std::size_t>(nv));
  std::iota(vp.begin(), vp.end(), 0);
  do {
    Sym s{vp, std::vector<EdgeId>(static_cast<std::size_t>(G.edge_count()), -1)};
    std::vector<char> used(static_cast<std::size_t>(G.edge_count()), 0);
    std::function<void(int)> rec = [&](int o) {
      if (o == G.orbit_count()) {
        syms.push_back(s);
        return;
      }
      const auto& ed = G.edge(2 * o);
      for (EdgeId t = 0; t < G.edge_count(); ++t) {
        const auto& td = G.edge(t);
        if (used[static_cast<std::size_t>(t)] || td.from != vp[static_cast<std::size_t>(ed.from)] ||
            td.to != vp[static_cast<std::size_t>(ed.to)] || td.length != ed.length)
          continue;
        used[static_cast<std::size_t>(t)] = used[static_cast<std::size_t>(G.reverse(t))] = 1;
        s.e[static_cast<std::size_t>(2 * o)] = t;
        s.e[static_cast<std::size_t>(2 * o + 1)] = G.reverse(t);
        rec(o + 1);
        used[static_cast<std::size_t>(t)] = used[static_cast<std::size_t>(G.reverse(t))] = 0;
      }
    };
    rec(0);
    if (syms.size() > 5000) return std::nullopt;
  } while (std::next_permutation(vp.begin(), vp.end()));

  auto commutes = [&](const Sym& s) {
    for (VertexId v = 0; v < nv; ++v)
      if (s.v[static_cast<std::size_t>(f.vertex_image(v))] != f.vertex_image(s.v[static_cast<std::size_t>(v)])) return false;
    for (EdgeId e = 0; e < G.edge_count(); ++e) {
      const auto& a = f.edge_image(e).edges;
      const auto& b = f.edge_image(s.e[static_cast<std::size_t>(e)]).edges;
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (s.e[static_cast<std::size_t>(a[i])] != b[i]) return false;
    }
    return true;
  };
  auto is_identity = [&](const Sym& s) {
    for (VertexId v = 0; v < nv; ++v)
      if (s.v[static_cast<std::size_t>(v)] != v) return false;
    for (EdgeId e = 0; e < G.edge_count(); ++e)
      if (s.e[static_cast<std::size_t>(e)] != e) return false;
    return true;
  };
  auto is_free = [&](const Sym& s) {
    for (VertexId v = 0; v < nv; ++v)
      if (s.v[static_cast<std::size_t>(v)] == v) return false;
    for (EdgeId e = 0; e < G.edge_count(); ++e)
      if (s.e[static_cast<std::size_t>(e)] == G.reverse(e)) return false;
    return true;
  };
  std::vector<Sym> group;
  for (const auto& s : syms)
    if (commutes(s)) group.push_back(s);
  bool free_action = group.size() > 1;
  for (const auto& s : group)
    if (!is_identity(s) && !is_free(s)) free_action = false;
  if (!free_action) return std::nullopt;

  Classes vc(nv);
  Classes ec(G.edge_count());
  for (const auto& s : group) {
    for (VertexId v = 0; v < nv; ++v) vc.unite(v, s.v[static_cast<std::size_t>(v)]);
    for (EdgeId e = 0; e < G.edge_count(); ++e) ec.unite(e, s.e[static_cast<std::size_t>(e)]);
  }
  auto q = quotient_graph(G, vc, ec);
  if (!q) return std::nullopt;
  CoveringMap c;
  c.total = G;
  c.base = q->graph;
  c.sheets = static_cast<int>(group.size());
  c.vertex_projection = q->vertex_projection;
  c.edge_projection = q->edge_projection;
  c.lift_table.assign(static_cast<std::size_t>(nv), std::vector<EdgeId>(static_cast<std::size_t>(c.base.edge_count()), -1));
  for (EdgeId e = 0; e < G.edge_count(); ++e)
    c.lift_table[static_cast<std::size_t>(G.edge(e).from)][static_cast<std::size_t>(q->edge_projection[static_cast<std::size_t>(e)])] = e;
  std::vector<Word> pushed;
  for (int i = 0; i < rank(G); ++i)
    pushed.push_back(path_to_word(c.base, tighten(c.base, push(*q, G.basis_loop(i))), q->vertex_projection[static_cast<std::size_t>(G.base())]));
  c.subgroup = fold_subgroup_graph(rank(c.base), pushed);
  return c;
}

namespace {

// Map on the base of a deck quotient induced by f.
GraphMap descend_map(const GraphMap& f, const CoveringMap& c) {
  std::vector<VertexId> vimg(static_cast<std::size_t>(c.base.vertex_count()), -1);
  for (VertexId v = 0; v < c.total.vertex_count(); ++v) {
    auto& slot = vimg[static_cast<std::size_t>(c.vertex_projection[static_cast<std::size_t>(v)])];
    if (slot < 0) slot = c.vertex_projection[static_cast<std::size_t>(f.vertex_image(v))];
  }
  std::vector<EdgePath> images(static_cast<std::size_t>(c.base.orbit_count()));
  std::vector<char> done(images.size(), 0);
  for (EdgeId e = 0; e < c.total.edge_count(); ++e) {
    const EdgeId b = c.edge_projection[static_cast<std::size_t>(e)];
    if (b % 2 != 0 || done[static_cast<std::size_t>(b / 2)]) continue;
    done[static_cast<std::size_t>(b / 2)] = 1;
    images[static_cast<std::size_t>(b / 2)] = tighten(c.base, c.project(f.edge_image(e)));
  }
  return GraphMap::build(c.base, vimg, images);
}

bool same_class_member(const OuterAutomorphism& a, const OuterAutomorphism& b) {
  return a.rank() == b.rank() && outer_equal(a.aut, b.aut);
}

}  // namespace

MinimalReport minimal_element_search(const std::vector<OuterAutomorphism>& seeds, const MinimalBounds& bounds) {
  if (seeds.empty()) throw std::invalid_argument("no seeds");
  MinimalReport rep;
  std::vector<OuterAutomorphism> members = seeds;

  const OuterAutomorphism& first = seeds.front();
  Hypotheses& hy = rep.hypotheses;
  if (first.representative) {
    const auto tt = is_train_track(*first.representative, 1);
    hy.train_track = tt.train_track() && tt.expanding;
    if (hy.train_track) {
      if (auto k = rotationless_power(*first.representative, 12)) {
        try {
          const auto idx = geometric_index(power(*first.representative, *k));
          hy.ageometric = idx.ageometric;
          hy.notes.push_back("geometric index " + std::to_string(idx.index) + " against rank " + std::to_string(idx.rank) +
                             " (" + idx.convention + ")");
        } catch (const std::exception& ex) {
          hy.notes.push_back(std::string("index not computed: ") + ex.what());
        }
      }
      std::string note;
      auto lab = labeling_of(*first.representative, note);
      if (lab) hy.asymmetric = lab->labeled();
      if (lab && !lab->labeled()) hy.notes.push_back("symmetric Whitehead component " + lab->offender);
      if (!note.empty()) hy.notes.push_back(note);
    }
  } else {
    hy.notes.push_back("no representative attached");
  }
  const auto tor = is_atoroidal(first.aut, bounds.toroidal_power, bounds.toroidal_length);
  hy.atoroidal = !tor.toroidal();
  if (tor.toroidal())
    hy.notes.push_back("periodic conjugacy class " + Alphabet::standard(first.rank()).format(tor.witness) + " at power " +
                       std::to_string(tor.power));
  if (!hy.hold()) rep.ledger.push_back("hypotheses do not all hold; results are exploratory");

  std::set<std::pair<std::size_t, std::size_t>> gcd_tried;
  std::set<std::size_t> descent_tried;
  for (int round = 0; round < bounds.rounds; ++round) {
    bool changed = false;
    auto add = [&](OuterAutomorphism o, const std::string& how) {
      for (const auto& x : members)
        if (same_class_member(x, o)) {
          rep.ledger.push_back(how + ": already present");
          return;
        }
      rep.ledger.push_back(how + ": new member of rank " + std::to_string(o.rank()));
      members.push_back(std::move(o));
      changed = true;
    };
    const std::size_t count = members.size();
    for (std::size_t i = 0; i < count; ++i) {
      if (!members[i].representative || !descent_tried.insert(i).second) continue;
      const GraphMap g = *members[i].representative;
      auto deck = deck_quotient(g);
      if (!deck) {
        rep.ledger.push_back("member " + std::to_string(i) + ": no free commuting deck group");
        continue;
      }
      const GraphMap h = descend_map(g, *deck);
      const auto d = quotient_descent(g, h, *deck, 1, bounds.policy);
      if (!d.found()) {
        rep.ledger.push_back("member " + std::to_string(i) + ": descent refused (" + d.reason + ")");
        continue;
      }
      add(OuterAutomorphism::from_map(d.result.induced),
          "member " + std::to_string(i) + ": descent over " + std::to_string(deck->sheets) + " sheets");
    }
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = i + 1; j < count; ++j) {
        if (members[i].rank() != members[j].rank() || !gcd_tried.emplace(i, j).second) continue;
        const std::string tag = "gcd(" + std::to_string(i) + ", " + std::to_string(j) + ")";
        try {
          auto r = gcd_reduce(members[i], members[j]);
          if (r.kind == GcdResult::Kind::AlreadyIntegral) {
            rep.ledger.push_back(tag + ": ratio " + std::to_string(r.p) + "/" + std::to_string(r.q) + " already integral");
          } else if (!r.certified) {
            rep.ledger.push_back(tag + ": reduction not certified (" + r.note + ")");
          } else {
            add(std::move(r.result), tag + ": exponents " + std::to_string(r.m) + ", " + std::to_string(r.n));
          }
        } catch (const std::exception& ex) {
          rep.ledger.push_back(tag + ": " + ex.what());
        }
      }
    if (!changed) break;
  }

  std::size_t best = 0;
  std::vector<std::optional<StretchFactor>> sf;
  for (const auto& m : members) sf.push_back(m.stretch());
  for (std::size_t i = 1; i < members.size(); ++i) {
    const auto& a = members[i];
    const auto& b = members[best];
    if (a.rank() != b.rank()) {
      if (a.rank() < b.rank()) best = i;
      continue;
    }
    if (sf[i] && (!sf[best] || sf[i]->enclosure.upper < sf[best]->enclosure.lower)) best = i;
  }
  rep.candidate = members[best];
  rep.stretch = sf[best];
  rep.members = static_cast<int>(members.size());
  return rep;
}

}  // namespace fcomm
