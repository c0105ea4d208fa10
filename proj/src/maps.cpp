#include "fcomm/maps.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace fcomm {

Direction direction_map(const GraphMap& f, Direction d) {
  const EdgePath& img = f.edge_image(d);
  if (img.empty()) throw std::invalid_argument("edge with empty image has no direction image");
  return img.edges.front();
}

Turn turn_map(const GraphMap& f, const Turn& t) { return Turn::make(direction_map(f, t.first), direction_map(f, t.second)); }

std::vector<Turn> turns_of(const MarkedGraph& g, const EdgePath& p) {
  std::vector<Turn> out;
  for (std::size_t i = 0; i + 1 < p.edges.size(); ++i) out.push_back(Turn::make(g.reverse(p.edges[i]), p.edges[i + 1]));
  return out;
}

std::set<Turn> image_turns(const GraphMap& f) {
  std::set<Turn> out;
  for (EdgeId e = 0; e < f.graph().edge_count(); e += 2)
    for (const Turn& t : turns_of(f.graph(), f.edge_image(e))) out.insert(t);
  return out;
}

std::set<Turn> taken_turns(const GraphMap& f) {
  std::set<Turn> seen = image_turns(f);
  std::vector<Turn> todo(seen.begin(), seen.end());
  while (!todo.empty()) {
    Turn t = turn_map(f, todo.back());
    todo.pop_back();
    if (seen.insert(t).second) todo.push_back(t);
  }
  return seen;
}

bool is_illegal(const GraphMap& f, const Turn& t) {
  std::set<Turn> seen;
  Turn cur = t;
  while (seen.insert(cur).second) {
    if (cur.degenerate()) return true;
    cur = turn_map(f, cur);
  }
  return false;
}

std::vector<Turn> illegal_turns(const GraphMap& f) {
  const MarkedGraph& g = f.graph();
  std::vector<Turn> out;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const auto& st = g.star(v);
    for (std::size_t i = 0; i < st.size(); ++i)
      for (std::size_t j = i + 1; j < st.size(); ++j) {
        Turn t = Turn::make(st[i], st[j]);
        if (is_illegal(f, t)) out.push_back(t);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<Direction>> gates(const GraphMap& f) {
  const MarkedGraph& g = f.graph();
  std::vector<int> parent(static_cast<std::size_t>(g.edge_count()));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return parent[static_cast<std::size_t>(x)] == x ? x : parent[static_cast<std::size_t>(x)] = find(parent[static_cast<std::size_t>(x)]);
  };
  for (const Turn& t : illegal_turns(f)) {
    int a = find(t.first);
    int b = find(t.second);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
  std::map<int, std::vector<Direction>> groups;
  for (Direction d = 0; d < g.edge_count(); ++d) groups[find(d)].push_back(d);
  std::vector<std::vector<Direction>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end());
  return out;
}

bool is_irreducible(const IntMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return false;
  auto reach = [&](bool forward) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> todo{0};
    seen[0] = true;
    while (!todo.empty()) {
      std::size_t i = todo.back();
      todo.pop_back();
      for (std::size_t j = 0; j < n; ++j) {
        const long long x = forward ? m[i][j] : m[j][i];
        if (x > 0 && !seen[j]) {
          seen[j] = true;
          todo.push_back(j);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  return reach(true) && reach(false);
}

TrainTrackVerdict is_train_track(const GraphMap& f, int power_bound) {
  const MarkedGraph& g = f.graph();
  TrainTrackVerdict v;
  v.gates = gates(f);
  v.illegal = illegal_turns(f);
  v.irreducible = is_irreducible(transition_matrix(f));
  for (EdgeId e = 0; e < g.edge_count(); e += 2) v.expanding |= f.edge_image(e).size() >= 2;
  const std::set<Turn> illegal(v.illegal.begin(), v.illegal.end());
  bool clean = true;
  for (const Turn& t : taken_turns(f))
    if (illegal.count(t)) clean = false;
  if (clean) return v;
  v.kind = TrainTrackVerdict::Kind::NotTrainTrack;

  // Turns and edges met by g^n(e), advanced one power at a time.
  const int orbits = g.orbit_count();
  std::vector<std::set<Turn>> own(static_cast<std::size_t>(g.edge_count()));
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    for (const Turn& t : turns_of(g, f.edge_image(e))) own[static_cast<std::size_t>(e)].insert(t);
  std::vector<std::set<Turn>> turns(static_cast<std::size_t>(orbits));
  std::vector<std::set<EdgeId>> edges(static_cast<std::size_t>(orbits));
  for (int o = 0; o < orbits; ++o) {
    turns[static_cast<std::size_t>(o)] = own[static_cast<std::size_t>(2 * o)];
    const auto& img = f.edge_image(2 * o).edges;
    edges[static_cast<std::size_t>(o)] = std::set<EdgeId>(img.begin(), img.end());
  }
  for (int n = 2; n <= power_bound; ++n) {
    for (int o = 0; o < orbits; ++o) {
      std::set<Turn> next;
      std::set<EdgeId> next_edges;
      for (const Turn& t : turns[static_cast<std::size_t>(o)]) next.insert(turn_map(f, t));
      for (EdgeId x : edges[static_cast<std::size_t>(o)]) {
        next.insert(own[static_cast<std::size_t>(x)].begin(), own[static_cast<std::size_t>(x)].end());
        for (EdgeId y : f.edge_image(x).edges) next_edges.insert(y);
      }
      turns[static_cast<std::size_t>(o)] = std::move(next);
      edges[static_cast<std::size_t>(o)] = std::move(next_edges);
    }
    for (int o = 0; o < orbits; ++o)
      for (const Turn& t : turns[static_cast<std::size_t>(o)])
        if (t.degenerate() && v.witness_power < 0) {
          v.witness_power = n;
          v.witness_edge = 2 * o;
        }
    if (v.witness_power >= 0) break;
  }
  return v;
}

Automorphism induced_outer_automorphism(const GraphMap& f) {
  const MarkedGraph& g = f.graph();
  Automorphism phi{rank(g), {}};
  const VertexId b = f.vertex_image(g.base());
  for (int i = 0; i < phi.rank; ++i) phi.images.push_back(path_to_word(g, apply_map(f, g.basis_loop(i)), b));
  if (!is_automorphism(phi)) throw NotHomotopyEquivalence("induced basis images do not form a basis");
  return phi;
}

std::vector<GraphPoint> interior_fixed_points(const GraphMap& f) {
  const MarkedGraph& g = f.graph();
  std::set<GraphPoint> out;
  for (EdgeId e = 0; e < g.edge_count(); e += 2) {
    const EdgePath& img = f.edge_image(e);
    const Rational len = g.edge(e).length;
    const Rational total = path_length(g, img);
    Rational s = 0;
    for (EdgeId x : img.edges) {
      std::optional<Rational> t;
      if (x == e && total != len) t = s / (total - len);
      if (x == g.reverse(e)) t = (len + s) / (total + len);
      s += g.edge(x).length;
      if (!t || *t <= 0 || *t >= 1) continue;
      GraphPoint p = GraphPoint::on_edge(g, e, *t);
      if (image_point(f, p) == p) out.insert(p);
    }
  }
  return {out.begin(), out.end()};
}

namespace {

// Segment of a subdivided path, recorded by the original oriented edge and
// the point reached.
using SegmentKey = std::vector<std::pair<EdgeId, GraphPoint>>;

}  // namespace

NielsenSearch find_nielsen_paths(const GraphMap& f, int period_bound, int length_bound) {
  NielsenSearch result;
  std::set<std::pair<GraphPoint, SegmentKey>> found;
  GraphMap fp = f;
  for (int p = 1; p <= period_bound; ++p) {
    if (p > 1) fp = compose(f, fp);
    const Subdivision s = subdivide_at(fp, interior_fixed_points(fp));
    const GraphMap& h = s.map;
    const MarkedGraph& g = h.graph();
    std::vector<GraphPoint> point_of(static_cast<std::size_t>(g.vertex_count()));
    for (VertexId v = 0; v < f.graph().vertex_count(); ++v) point_of[static_cast<std::size_t>(v)] = GraphPoint::at_vertex(v);
    for (const auto& [pt, v] : s.point_vertex) point_of[static_cast<std::size_t>(v)] = pt;
    std::vector<EdgeId> original(static_cast<std::size_t>(g.edge_count()), -1);
    for (EdgeId e = 0; e < f.graph().edge_count(); ++e)
      for (EdgeId x : s.edge_path[static_cast<std::size_t>(e)].edges) original[static_cast<std::size_t>(x)] = e;

    auto fixed = [&](VertexId v) { return h.vertex_image(v) == v; };
    auto is_nielsen = [&](const EdgePath& sigma) { return apply_map(h, sigma) == sigma; };

    std::vector<NielsenPath> fresh;
    EdgePath path;
    std::function<void(VertexId)> dfs = [&](VertexId at) {
      if (!path.empty() && fixed(at) && is_nielsen(path)) {
        SegmentKey key;
        for (EdgeId x : path.edges) key.push_back({original[static_cast<std::size_t>(x)], point_of[static_cast<std::size_t>(g.edge(x).to)]});
        if (found.insert({point_of[static_cast<std::size_t>(path.start)], key}).second) {
          NielsenPath np;
          np.period = p;
          np.start = point_of[static_cast<std::size_t>(path.start)];
          np.end = point_of[static_cast<std::size_t>(at)];
          np.path = path;
          np.text = g.format_path(path);
          for (std::size_t i = 1; i < path.edges.size() && np.indivisible; ++i) {
            const VertexId mid = g.edge(path.edges[i - 1]).to;
            if (!fixed(mid)) continue;
            EdgePath head{path.start, std::vector<EdgeId>(path.edges.begin(), path.edges.begin() + static_cast<long>(i))};
            if (is_nielsen(head)) np.indivisible = false;
          }
          fresh.push_back(std::move(np));
        }
      }
      if (static_cast<int>(path.size()) == length_bound) return;
      for (EdgeId x : g.star(at)) {
        if (!path.empty() && x == g.reverse(path.edges.back())) continue;
        path.edges.push_back(x);
        dfs(g.edge(x).to);
        path.edges.pop_back();
      }
    };
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (!fixed(v)) continue;
      path = EdgePath{v, {}};
      dfs(v);
    }
    std::sort(fresh.begin(), fresh.end(), [](const NielsenPath& a, const NielsenPath& b) {
      if (a.path.size() != b.path.size()) return a.path.size() < b.path.size();
      return a.text < b.text;
    });
    for (auto& np : fresh) result.paths.push_back(std::move(np));
  }
  return result;
}

namespace {

IntMatrix abelianization(const Automorphism& phi) {
  IntMatrix m(static_cast<std::size_t>(phi.rank), std::vector<long long>(static_cast<std::size_t>(phi.rank), 0));
  for (int j = 0; j < phi.rank; ++j)
    for (Letter l : phi.images[static_cast<std::size_t>(j)].letters)
      m[static_cast<std::size_t>(generator_of(l))][static_cast<std::size_t>(j)] += l > 0 ? 1 : -1;
  return m;
}

}  // namespace

ToroidalVerdict is_atoroidal(const Automorphism& phi, int power_bound, int length_bound) {
  const int r = phi.rank;
  std::vector<Automorphism> powers{phi};
  for (int k = 2; k <= power_bound; ++k) powers.push_back(compose(phi, powers.back()));
  std::vector<IntMatrix> ab;
  for (const auto& a : powers) ab.push_back(abelianization(a));

  ToroidalVerdict best;
  std::vector<Letter> w;
  std::vector<long long> vec(static_cast<std::size_t>(r), 0);
  auto class_fixed = [&](int k) {
    const auto& m = ab[static_cast<std::size_t>(k - 1)];
    for (int i = 0; i < r; ++i) {
      long long s = 0;
      for (int j = 0; j < r; ++j) s += m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * vec[static_cast<std::size_t>(j)];
      if (s != vec[static_cast<std::size_t>(i)]) return false;
    }
    Word x(w);
    Word y = powers[static_cast<std::size_t>(k - 1)].apply(x);
    return least_rotation(cyclic_reduce(y).core) == x;
  };
  // Least rotations of cyclically reduced words start with their least letter.
  std::function<bool(int)> dfs = [&](int len) {
    if (static_cast<int>(w.size()) == len) {
      if (len > 1 && w.front() == -w.back()) return false;
      Word x(w);
      if (least_rotation(x) != x) return false;
      const int kmax = best.toroidal() ? best.power - 1 : power_bound;
      for (int k = 1; k <= kmax; ++k)
        if (class_fixed(k)) {
          best.kind = ToroidalVerdict::Kind::Toroidal;
          best.witness = x;
          best.power = k;
          return k == 1;
        }
      return false;
    }
    for (int key = 0; key < 2 * r; ++key) {
      const Letter l = letter_of(key / 2, key % 2);
      if (!w.empty() && (l == -w.back() || key < letter_key(w.front()))) continue;
      w.push_back(l);
      vec[static_cast<std::size_t>(key / 2)] += l > 0 ? 1 : -1;
      const bool stop = dfs(len);
      vec[static_cast<std::size_t>(key / 2)] -= l > 0 ? 1 : -1;
      w.pop_back();
      if (stop) return true;
    }
    return false;
  };
  for (int len = 1; len <= length_bound; ++len)
    if (dfs(len)) break;
  return best;
}

ToroidalVerdict is_atoroidal(const GraphMap& f, int power_bound, int length_bound) {
  return is_atoroidal(induced_outer_automorphism(f), power_bound, length_bound);
}

}  // namespace fcomm
