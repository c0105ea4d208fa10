#include "fcomm/whitehead.hpp"

#include "fcomm/subgroup.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace fcomm {

namespace {
std::pair<int, int> ordered(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }
}  // namespace

std::map<Direction, int> periodic_directions(const GraphMap& f) {
  const int n = f.graph().edge_count();
  std::map<Direction, int> out;
  for (Direction d = 0; d < n; ++d) {
    Direction x = d;
    for (int step = 1; step <= n; ++step) {
      x = direction_map(f, x);
      if (x == d) {
        out[d] = step;
        break;
      }
    }
  }
  return out;
}

namespace {

std::map<VertexId, std::vector<Direction>> periodic_by_vertex(const GraphMap& f, const std::map<Direction, int>& per) {
  std::map<VertexId, std::vector<Direction>> out;
  for (const auto& [d, p] : per) out[f.graph().edge(d).from].push_back(d);
  return out;
}

int vertex_period(const GraphMap& f, VertexId v) {
  VertexId x = v;
  for (int step = 1; step <= f.graph().vertex_count(); ++step) {
    x = f.vertex_image(x);
    if (x == v) return step;
  }
  return 0;
}

void require_rotationless(const GraphMap& f, const PrincipalVertices& pv, const std::map<Direction, int>& per) {
  for (VertexId v : pv.vertices) {
    if (f.vertex_image(v) != v)
      throw NotRotationless("principal vertex " + f.graph().vertex_name(v) + " is not fixed");
    for (const auto& [d, p] : per)
      if (f.graph().edge(d).from == v && p != 1)
        throw NotRotationless("periodic direction " + f.graph().edge_name(d) + " has period " + std::to_string(p));
  }
}

}  // namespace

PrincipalVertices principal_vertices(const GraphMap& f, NielsenBounds bounds) {
  PrincipalVertices out;
  std::set<VertexId> found;
  for (const auto& [v, ds] : periodic_by_vertex(f, periodic_directions(f)))
    if (ds.size() >= 3) found.insert(v);
  std::set<VertexId> extra;
  for (const auto& np : find_nielsen_paths(f, bounds.period_bound, bounds.length_bound).paths) {
    if (!np.indivisible) continue;
    for (const GraphPoint& p : {np.start, np.end})
      if (p.is_vertex() && !found.contains(p.vertex)) extra.insert(p.vertex);
  }
  found.insert(extra.begin(), extra.end());
  out.vertices.assign(found.begin(), found.end());
  out.nielsen_endpoints.assign(extra.begin(), extra.end());
  out.suspicious = out.vertices.empty();
  return out;
}

std::optional<int> rotationless_power(const GraphMap& f, int k_max, NielsenBounds bounds) {
  const auto per = periodic_directions(f);
  long long k = 1;
  for (VertexId v : principal_vertices(f, bounds).vertices) {
    const int pv = vertex_period(f, v);
    if (pv == 0) return std::nullopt;
    k = std::lcm(k, static_cast<long long>(pv));
    for (const auto& [d, p] : per)
      if (f.graph().edge(d).from == v) k = std::lcm(k, static_cast<long long>(p));
    if (k > k_max) return std::nullopt;
  }
  return static_cast<int>(k);
}

LeafSegment leaf_segment(const GraphMap& f, EdgeId e, int n) {
  return {e, n, iterate_map(f, EdgePath{f.graph().edge(e).from, {e}}, n)};
}

WhiteheadGraph WhiteheadGraph::abstract(int n, std::vector<std::pair<int, int>> edges) {
  WhiteheadGraph w;
  for (int i = 0; i < n; ++i) {
    w.names.push_back(std::to_string(i));
    w.directions.push_back(i);
  }
  for (auto& [a, b] : edges)
    if (a > b) std::swap(a, b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  w.edges = std::move(edges);
  return w;
}

bool WhiteheadGraph::adjacent(int u, int v) const {
  return std::binary_search(edges.begin(), edges.end(), ordered(u, v));
}

std::vector<int> WhiteheadGraph::degrees() const {
  std::vector<int> d(static_cast<std::size_t>(size()), 0);
  for (auto [a, b] : edges) {
    ++d[static_cast<std::size_t>(a)];
    ++d[static_cast<std::size_t>(b)];
  }
  return d;
}

std::vector<std::vector<int>> WhiteheadGraph::components() const {
  std::vector<int> comp(static_cast<std::size_t>(size()), -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < size(); ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.push_back({});
    std::vector<int> stack{s};
    comp[static_cast<std::size_t>(s)] = id;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      out.back().push_back(u);
      for (auto [a, b] : edges) {
        const int v = a == u ? b : b == u ? a : -1;
        if (v >= 0 && comp[static_cast<std::size_t>(v)] < 0) {
          comp[static_cast<std::size_t>(v)] = id;
          stack.push_back(v);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

WhiteheadGraph WhiteheadGraph::induced(const std::vector<int>& vertices) const {
  WhiteheadGraph w;
  w.principal = principal;
  w.principal_name = principal_name;
  std::vector<int> pos(static_cast<std::size_t>(size()), -1);
  for (int v : vertices) {
    pos[static_cast<std::size_t>(v)] = w.size();
    w.names.push_back(names[static_cast<std::size_t>(v)]);
    if (!directions.empty()) w.directions.push_back(directions[static_cast<std::size_t>(v)]);
    if (!labels.empty()) w.labels.push_back(labels[static_cast<std::size_t>(v)]);
  }
  for (auto [a, b] : edges) {
    const int pa = pos[static_cast<std::size_t>(a)];
    const int pb = pos[static_cast<std::size_t>(b)];
    if (pa >= 0 && pb >= 0) w.edges.push_back(ordered(pa, pb));
  }
  std::sort(w.edges.begin(), w.edges.end());
  return w;
}

std::vector<WhiteheadGraph> stable_whitehead_graphs(const GraphMap& f, int n_saturation, NielsenBounds bounds) {
  const auto per = periodic_directions(f);
  const auto pv = principal_vertices(f, bounds);
  require_rotationless(f, pv, per);

  std::set<Turn> turns;
  for (const Turn& t : image_turns(f))
    if (!t.degenerate()) turns.insert(t);
  std::vector<Turn> frontier(turns.begin(), turns.end());
  for (int round = 0; !frontier.empty(); ++round) {
    if (round >= n_saturation) throw ResourceBound("turn saturation did not stabilize");
    std::vector<Turn> next;
    for (const Turn& t : frontier) {
      const Turn u = turn_map(f, t);
      if (!u.degenerate() && turns.insert(u).second) next.push_back(u);
    }
    frontier = std::move(next);
  }

  const auto by_vertex = periodic_by_vertex(f, per);
  std::vector<WhiteheadGraph> out;
  for (VertexId v : pv.vertices) {
    WhiteheadGraph w;
    w.principal = v;
    w.principal_name = f.graph().vertex_name(v);
    if (auto it = by_vertex.find(v); it != by_vertex.end()) w.directions = it->second;
    for (Direction d : w.directions) w.names.push_back(f.graph().edge_name(d));
    for (std::size_t i = 0; i < w.directions.size(); ++i)
      for (std::size_t j = i + 1; j < w.directions.size(); ++j)
        if (turns.contains(Turn::make(w.directions[i], w.directions[j])))
          w.edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    out.push_back(std::move(w));
  }
  return out;
}

IndexReport geometric_index(const GraphMap& f, NielsenBounds bounds) {
  const auto tt = is_train_track(f, 1);
  if (!tt.train_track() || !tt.expanding) throw std::invalid_argument("geometric index needs an expanding train track map");
  const auto per = periodic_directions(f);
  const auto pv = principal_vertices(f, bounds);
  require_rotationless(f, pv, per);
  IndexReport r;
  const auto by_vertex = periodic_by_vertex(f, per);
  for (VertexId v : pv.vertices) {
    const auto it = by_vertex.find(v);
    const int count = it == by_vertex.end() ? 0 : static_cast<int>(it->second.size());
    r.classes.push_back({v, f.graph().vertex_name(v), count});
    r.fixed_directions += count;
    if (count >= 3) r.index += count - 2;
  }
  r.rank = rank(f.graph());
  r.ageometric = r.index < r.rank - 2;
  for (const auto& np : find_nielsen_paths(f, bounds.period_bound, bounds.length_bound).paths)
    if (np.indivisible) r.nielsen_free = false;
  return r;
}

namespace {

struct Searcher {
  const WhiteheadGraph& w;
  int n;
  std::vector<int> deg;
  std::vector<std::vector<char>> adj;

  explicit Searcher(const WhiteheadGraph& g) : w(g), n(g.size()), deg(g.degrees()) {
    adj.assign(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
    for (auto [a, b] : g.edges) adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = adj[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1;
  }

  bool edge(int a, int b) const { return adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 0; }

  // Completes p (entries -1 are free) to an automorphism, vertices in order.
  bool complete(VertexPermutation& p, std::vector<char>& used, int u) const {
    if (u == n) return true;
    auto consistent = [&](int img) {
      if (deg[static_cast<std::size_t>(u)] != deg[static_cast<std::size_t>(img)]) return false;
      for (int x = 0; x < u; ++x)
        if (edge(u, x) != edge(img, p[static_cast<std::size_t>(x)])) return false;
      return true;
    };
    if (p[static_cast<std::size_t>(u)] >= 0) {
      if (!consistent(p[static_cast<std::size_t>(u)])) return false;
      return complete(p, used, u + 1);
    }
    for (int img = 0; img < n; ++img) {
      if (used[static_cast<std::size_t>(img)] || !consistent(img)) continue;
      p[static_cast<std::size_t>(u)] = img;
      used[static_cast<std::size_t>(img)] = 1;
      if (complete(p, used, u + 1)) return true;
      used[static_cast<std::size_t>(img)] = 0;
      p[static_cast<std::size_t>(u)] = -1;
    }
    return false;
  }

  std::optional<VertexPermutation> find(int fixed_prefix, int i, int j) const {
    VertexPermutation p(static_cast<std::size_t>(n), -1);
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    for (int x = 0; x < fixed_prefix; ++x) {
      p[static_cast<std::size_t>(x)] = x;
      used[static_cast<std::size_t>(x)] = 1;
    }
    if (used[static_cast<std::size_t>(j)]) return std::nullopt;
    p[static_cast<std::size_t>(i)] = j;
    used[static_cast<std::size_t>(j)] = 1;
    if (complete(p, used, 0)) return p;
    return std::nullopt;
  }
};

std::vector<int> orbit_of(int i, const std::vector<VertexPermutation>& gens) {
  std::vector<int> orbit{i};
  for (std::size_t k = 0; k < orbit.size(); ++k)
    for (const auto& g : gens) {
      const int y = g[static_cast<std::size_t>(orbit[k])];
      if (std::find(orbit.begin(), orbit.end(), y) == orbit.end()) orbit.push_back(y);
    }
  return orbit;
}

// Generators per stabilizer level; product of orbit sizes is the order.
std::vector<std::vector<VertexPermutation>> stabilizer_chain(const WhiteheadGraph& w) {
  Searcher s(w);
  std::vector<std::vector<VertexPermutation>> levels(static_cast<std::size_t>(s.n));
  for (int i = 0; i < s.n; ++i) {
    auto& gens = levels[static_cast<std::size_t>(i)];
    std::vector<int> orbit{i};
    for (int j = i + 1; j < s.n; ++j) {
      if (std::find(orbit.begin(), orbit.end(), j) != orbit.end()) continue;
      if (auto p = s.find(i, i, j)) {
        gens.push_back(*p);
        orbit = orbit_of(i, gens);
      }
    }
  }
  return levels;
}

}  // namespace

std::vector<VertexPermutation> graph_automorphisms(const WhiteheadGraph& w) {
  std::vector<VertexPermutation> out;
  for (auto& level : stabilizer_chain(w))
    for (auto& g : level) out.push_back(std::move(g));
  return out;
}

long long automorphism_group_order(const WhiteheadGraph& w) {
  long long order = 1;
  const auto levels = stabilizer_chain(w);
  for (int i = 0; i < w.size(); ++i) order *= static_cast<long long>(orbit_of(i, levels[static_cast<std::size_t>(i)]).size());
  return order;
}

bool is_asymmetric(const WhiteheadGraph& w) { return graph_automorphisms(w).empty(); }

std::pair<std::string, std::vector<int>> canonical_form(const WhiteheadGraph& w) {
  const int n = w.size();
  Searcher s(w);
  // Candidate orders list vertices by decreasing degree; only orders within
  // equal-degree blocks are tried.
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return s.deg[static_cast<std::size_t>(a)] > s.deg[static_cast<std::size_t>(b)]; });
  std::vector<std::pair<int, int>> blocks;
  for (int i = 0; i < n;) {
    int j = i;
    while (j < n && s.deg[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] == s.deg[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]) ++j;
    blocks.emplace_back(i, j);
    i = j;
  }
  double combos = 1;
  for (auto [a, b] : blocks)
    for (int k = 2; k <= b - a; ++k) combos *= k;
  if (combos > 5e6) throw ResourceBound("component too large for canonical labeling");

  std::string prefix = std::to_string(n) + ":";
  for (int v : order) prefix += std::to_string(s.deg[static_cast<std::size_t>(v)]) + ",";
  auto code = [&]() {
    std::string c;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) c += s.edge(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]) ? '1' : '0';
    return c;
  };
  std::string best;
  std::vector<int> best_order;
  std::function<void(std::size_t)> rec = [&](std::size_t b) {
    if (b == blocks.size()) {
      std::string c = code();
      if (best_order.empty() || c < best) {
        best = std::move(c);
        best_order = order;
      }
      return;
    }
    auto first = order.begin() + blocks[b].first;
    auto last = order.begin() + blocks[b].second;
    std::sort(first, last);
    do rec(b + 1);
    while (std::next_permutation(first, last));
  };
  rec(0);
  std::vector<int> position(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) position[static_cast<std::size_t>(best_order[static_cast<std::size_t>(i)])] = i;
  return {prefix + best, position};
}

AngleLabeling angle_labeling(std::vector<WhiteheadGraph> graphs) {
  AngleLabeling out;
  for (auto& w : graphs) {
    w.labels.assign(static_cast<std::size_t>(w.size()), "");
    for (const auto& comp : w.components()) {
      WhiteheadGraph c = w.induced(comp);
      if (!is_asymmetric(c)) {
        out.kind = AngleLabeling::Kind::SymmetricComponent;
        std::string names;
        for (const auto& nm : c.names) names += (names.empty() ? "" : ", ") + nm;
        out.offender = w.principal_name + ": {" + names + "}";
        out.graphs = std::move(graphs);
        return out;
      }
      const auto [code, pos] = canonical_form(c);
      for (std::size_t i = 0; i < comp.size(); ++i)
        w.labels[static_cast<std::size_t>(comp[i])] = code + "#" + std::to_string(pos[i]);
    }
  }
  out.graphs = std::move(graphs);
  return out;
}

AngleLabeling angle_labeling(const GraphMap& f, NielsenBounds bounds) {
  return angle_labeling(stable_whitehead_graphs(f, 256, bounds));
}

std::string to_dot(const WhiteheadGraph& w) {
  std::ostringstream o;
  o << "graph \"W(" << w.principal_name << ")\" {\n";
  for (int i = 0; i < w.size(); ++i) {
    o << "  \"" << w.names[static_cast<std::size_t>(i)] << "\"";
    if (!w.labels.empty() && !w.labels[static_cast<std::size_t>(i)].empty())
      o << " [angle=\"" << w.labels[static_cast<std::size_t>(i)] << "\"]";
    o << ";\n";
  }
  for (auto [a, b] : w.edges)
    o << "  \"" << w.names[static_cast<std::size_t>(a)] << "\" -- \"" << w.names[static_cast<std::size_t>(b)] << "\";\n";
  o << "}\n";
  return o.str();
}

}  // namespace fcomm
