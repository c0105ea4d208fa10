#include "fcomm/graph_map.hpp"

#include <algorithm>
#include <set>

namespace fcomm {

namespace {

std::vector<EdgePath> complete_images(const MarkedGraph& g, std::vector<EdgePath> positive) {
  if (static_cast<int>(positive.size()) != g.orbit_count())
    throw std::invalid_argument("edge image count does not match the number of edges");
  std::vector<EdgePath> all(static_cast<std::size_t>(g.edge_count()));
  for (int o = 0; o < g.orbit_count(); ++o) {
    EdgePath& img = positive[static_cast<std::size_t>(o)];
    if (!is_path(g, img)) throw std::invalid_argument("image of '" + g.edge(2 * o).id + "' is not a path");
    all[static_cast<std::size_t>(2 * o + 1)] = reverse_path(g, img);
    all[static_cast<std::size_t>(2 * o)] = std::move(img);
  }
  return all;
}

}  // namespace

GraphMap GraphMap::build_unchecked(MarkedGraph g, std::vector<VertexId> vertex_image, std::vector<EdgePath> images) {
  if (static_cast<int>(vertex_image.size()) != g.vertex_count())
    throw std::invalid_argument("vertex image count does not match the number of vertices");
  GraphMap f;
  f.edge_image_ = complete_images(g, std::move(images));
  f.graph_ = std::move(g);
  f.vertex_image_ = std::move(vertex_image);
  return f;
}

GraphMap GraphMap::build(MarkedGraph g, std::vector<VertexId> vertex_image, std::vector<EdgePath> images) {
  GraphMap f = build_unchecked(std::move(g), std::move(vertex_image), std::move(images));
  auto problems = f.check();
  if (!problems.empty()) throw std::invalid_argument(problems.front());
  return f;
}

std::vector<std::string> GraphMap::check() const {
  std::vector<std::string> out;
  for (VertexId v = 0; v < graph_.vertex_count(); ++v) {
    VertexId w = vertex_image(v);
    if (w < 0 || w >= graph_.vertex_count()) out.push_back("vertex '" + graph_.vertex_name(v) + "' maps outside the graph");
  }
  if (!out.empty()) return out;
  for (EdgeId e = 0; e < graph_.edge_count(); ++e) {
    const EdgePath& img = edge_image(e);
    const auto& ed = graph_.edge(e);
    const std::string name = graph_.edge_name(e);
    if (img.empty()) out.push_back("image of '" + name + "' is empty");
    if (!is_reduced(graph_, img)) out.push_back("image of '" + name + "' is not reduced");
    if (img.start != vertex_image(ed.from) || path_end(graph_, img) != vertex_image(ed.to))
      out.push_back("image of '" + name + "' does not join the images of its endpoints");
    if (edge_image(ed.reverse) != reverse_path(graph_, img)) out.push_back("image of '" + name + "' is not reversal-equivariant");
  }
  return out;
}

GraphMap GraphMap::rose_map(const std::vector<std::string>& names, const std::vector<std::string>& images) {
  MarkedGraph g = MarkedGraph::rose(names);
  std::vector<EdgePath> imgs;
  for (const auto& s : images) imgs.push_back(g.parse_path(s, 0));
  return build(std::move(g), {0}, std::move(imgs));
}

GraphMap GraphMap::identity(const MarkedGraph& g) {
  std::vector<VertexId> v(static_cast<std::size_t>(g.vertex_count()));
  for (VertexId i = 0; i < g.vertex_count(); ++i) v[static_cast<std::size_t>(i)] = i;
  std::vector<EdgePath> imgs;
  for (int o = 0; o < g.orbit_count(); ++o) imgs.push_back(EdgePath{g.edge(2 * o).from, {2 * o}});
  return build(g, std::move(v), std::move(imgs));
}

EdgePath apply_map_untightened(const GraphMap& f, const EdgePath& p) {
  const MarkedGraph& g = f.graph();
  for (EdgeId e : p.edges)
    if (e < 0 || e >= g.edge_count()) throw UnknownEdge("edge index outside the graph");
  if (!is_path(g, p)) throw NonIncidentEdges("consecutive edges are not incident");
  EdgePath out{f.vertex_image(p.start), {}};
  for (EdgeId e : p.edges) {
    const auto& img = f.edge_image(e).edges;
    out.edges.insert(out.edges.end(), img.begin(), img.end());
  }
  return out;
}

EdgePath apply_map(const GraphMap& f, const EdgePath& p) { return tighten(f.graph(), apply_map_untightened(f, p)); }

EdgePath iterate_map(const GraphMap& f, const EdgePath& p, int n) {
  EdgePath cur = p;
  for (int i = 0; i < n; ++i) cur = apply_map(f, cur);
  return cur;
}

GraphMap compose(const GraphMap& f, const GraphMap& g) {
  const MarkedGraph& G = g.graph();
  std::vector<VertexId> v(static_cast<std::size_t>(G.vertex_count()));
  for (VertexId i = 0; i < G.vertex_count(); ++i) v[static_cast<std::size_t>(i)] = f.vertex_image(g.vertex_image(i));
  std::vector<EdgePath> imgs;
  for (int o = 0; o < G.orbit_count(); ++o) {
    EdgePath img = apply_map(f, g.edge_image(2 * o));
    if (img.empty()) throw NotHomotopyEquivalence("composite collapses edge '" + G.edge(2 * o).id + "'");
    imgs.push_back(std::move(img));
  }
  return GraphMap::build(G, std::move(v), std::move(imgs));
}

GraphMap power(const GraphMap& f, int n) {
  if (n < 0) throw std::invalid_argument("negative power of a graph map");
  GraphMap out = GraphMap::identity(f.graph());
  for (int i = 0; i < n; ++i) out = compose(f, out);
  return out;
}

IntMatrix transition_matrix(const GraphMap& f) {
  const int n = f.graph().orbit_count();
  IntMatrix m(static_cast<std::size_t>(n), std::vector<long long>(static_cast<std::size_t>(n), 0));
  for (int j = 0; j < n; ++j)
    for (EdgeId e : f.edge_image(2 * j).edges) m[static_cast<std::size_t>(e / 2)][static_cast<std::size_t>(j)] += 1;
  return m;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t n = a.size();
  IntMatrix c(n, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

IntMatrix matrix_power(const IntMatrix& m, int n) {
  IntMatrix out(m.size(), std::vector<long long>(m.size(), 0));
  for (std::size_t i = 0; i < m.size(); ++i) out[i][i] = 1;
  for (int i = 0; i < n; ++i) out = multiply(m, out);
  return out;
}

Rational path_length(const MarkedGraph& g, const EdgePath& p) {
  Rational total = 0;
  for (EdgeId e : p.edges) total += g.edge(e).length;
  return total;
}

GraphPoint GraphPoint::on_edge(const MarkedGraph& g, EdgeId e, const Rational& t) {
  if (t < 0 || t > 1) throw std::invalid_argument("edge position outside [0, 1]");
  const auto& ed = g.edge(e);
  if (t == 0) return at_vertex(ed.from);
  if (t == 1) return at_vertex(ed.to);
  if (ed.positive) return {-1, e, t};
  return {-1, ed.reverse, Rational(1) - t};
}

GraphPoint image_point(const GraphMap& f, const GraphPoint& x) {
  if (x.is_vertex()) return GraphPoint::at_vertex(f.vertex_image(x.vertex));
  const MarkedGraph& g = f.graph();
  const EdgePath& img = f.edge_image(x.edge);
  const Rational target = x.t * path_length(g, img);
  Rational pos = 0;
  for (EdgeId e : img.edges) {
    const Rational len = g.edge(e).length;
    if (target < pos + len) return GraphPoint::on_edge(g, e, (target - pos) / len);
    pos += len;
  }
  return GraphPoint::at_vertex(path_end(g, img));
}

namespace {

std::string fresh(const std::set<std::string>& used, const std::string& stem) {
  if (!used.count(stem)) return stem;
  for (int i = 1;; ++i) {
    std::string c = stem + "_" + std::to_string(i);
    if (!used.count(c)) return c;
  }
}

}  // namespace

Subdivision subdivide_at(const GraphMap& f, const std::vector<GraphPoint>& points) {
  const MarkedGraph& g = f.graph();
  std::vector<std::vector<Rational>> cuts(static_cast<std::size_t>(g.orbit_count()));
  std::set<GraphPoint> point_set;
  for (const auto& p : points) {
    if (p.is_vertex()) continue;
    if (p.edge < 0 || !g.edge(p.edge).positive || p.t <= 0 || p.t >= 1)
      throw std::invalid_argument("subdivision point must be interior to a positive edge");
    point_set.insert(p);
  }
  for (const auto& p : point_set) cuts[static_cast<std::size_t>(g.orbit(p.edge))].push_back(p.t);
  for (auto& c : cuts) std::sort(c.begin(), c.end());

  for (const auto& p : point_set) {
    GraphPoint y = image_point(f, p);
    if (!y.is_vertex() && !point_set.count(y))
      throw std::invalid_argument("subdivision point on '" + g.edge(p.edge).id + "' maps into the interior of an edge");
  }

  std::set<std::string> used_v(g.vertex_names().begin(), g.vertex_names().end());
  std::set<std::string> used_e;
  for (EdgeId e = 0; e < g.edge_count(); e += 2) used_e.insert(g.edge(e).id);

  Subdivision s;
  std::vector<std::string> vnames = g.vertex_names();
  s.vertex_map.resize(static_cast<std::size_t>(g.vertex_count()));
  for (VertexId v = 0; v < g.vertex_count(); ++v) s.vertex_map[static_cast<std::size_t>(v)] = v;
  int counter = 0;
  for (const auto& p : point_set) {
    std::string name;
    do {
      name = "s" + std::to_string(counter++);
    } while (used_v.count(name));
    used_v.insert(name);
    s.point_vertex[p] = static_cast<VertexId>(vnames.size());
    vnames.push_back(name);
  }

  std::vector<EdgeSpec> specs;
  std::vector<std::string> tree;
  // Per old orbit: indices of the new orbits of its pieces.
  std::vector<std::vector<int>> pieces(static_cast<std::size_t>(g.orbit_count()));
  for (int o = 0; o < g.orbit_count(); ++o) {
    const auto& ed = g.edge(2 * o);
    const auto& c = cuts[static_cast<std::size_t>(o)];
    std::vector<Rational> bounds{0};
    bounds.insert(bounds.end(), c.begin(), c.end());
    bounds.push_back(1);
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
      std::string from = i == 0 ? g.vertex_name(ed.from) : vnames[static_cast<std::size_t>(s.point_vertex.at({-1, 2 * o, bounds[i]}))];
      std::string to = i + 2 == bounds.size() ? g.vertex_name(ed.to)
                                              : vnames[static_cast<std::size_t>(s.point_vertex.at({-1, 2 * o, bounds[i + 1]}))];
      std::string id = c.empty() ? ed.id : fresh(used_e, ed.id + "_" + std::to_string(i + 1));
      used_e.insert(id);
      pieces[static_cast<std::size_t>(o)].push_back(static_cast<int>(specs.size()));
      specs.push_back({id, from, to, ed.length * (bounds[i + 1] - bounds[i])});
      // Keep the marking: a subdivided tree edge stays in the tree; a
      // subdivided basis edge keeps only its last piece outside the tree.
      if (g.in_tree(o) || i + 2 < bounds.size()) tree.push_back(id);
    }
  }
  MarkedGraph ng = MarkedGraph::build(vnames, specs, tree);

  s.edge_path.resize(static_cast<std::size_t>(g.edge_count()));
  for (int o = 0; o < g.orbit_count(); ++o) {
    EdgePath fwd{g.edge(2 * o).from, {}};
    for (int piece : pieces[static_cast<std::size_t>(o)]) fwd.edges.push_back(2 * piece);
    s.edge_path[static_cast<std::size_t>(2 * o + 1)] = reverse_path(ng, fwd);
    s.edge_path[static_cast<std::size_t>(2 * o)] = std::move(fwd);
  }

  auto vertex_of = [&](const GraphPoint& y) -> VertexId {
    if (y.is_vertex()) return y.vertex;
    return s.point_vertex.at(y);
  };

  std::vector<VertexId> vimg(static_cast<std::size_t>(ng.vertex_count()));
  for (VertexId v = 0; v < g.vertex_count(); ++v) vimg[static_cast<std::size_t>(v)] = f.vertex_image(v);
  for (const auto& [p, v] : s.point_vertex) vimg[static_cast<std::size_t>(v)] = vertex_of(image_point(f, p));

  std::vector<EdgePath> images(static_cast<std::size_t>(ng.orbit_count()));
  for (int o = 0; o < g.orbit_count(); ++o) {
    // Expand f(e) into new edges with cumulative positions.
    const EdgePath& old_img = f.edge_image(2 * o);
    std::vector<EdgeId> expanded;
    for (EdgeId x : old_img.edges) {
      const auto& pp = s.edge_path[static_cast<std::size_t>(x)].edges;
      expanded.insert(expanded.end(), pp.begin(), pp.end());
    }
    std::vector<Rational> cum{0};
    for (EdgeId x : expanded) cum.push_back(cum.back() + ng.edge(x).length);
    const Rational total = cum.back();
    const auto& c = cuts[static_cast<std::size_t>(o)];
    std::vector<Rational> bounds{0};
    bounds.insert(bounds.end(), c.begin(), c.end());
    bounds.push_back(1);
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
      const Rational lo = bounds[i] * total;
      const Rational hi = bounds[i + 1] * total;
      auto lo_it = std::find(cum.begin(), cum.end(), lo);
      auto hi_it = std::find(cum.begin(), cum.end(), hi);
      if (lo_it == cum.end() || hi_it == cum.end())
        throw std::logic_error("subdivision image does not end at a vertex");
      const auto a = static_cast<std::size_t>(lo_it - cum.begin());
      const auto b = static_cast<std::size_t>(hi_it - cum.begin());
      EdgePath piece_img{a < expanded.size() ? ng.edge(expanded[a]).from : path_end(ng, {ng.edge(expanded[0]).from, expanded}), {}};
      piece_img.edges.assign(expanded.begin() + static_cast<long>(a), expanded.begin() + static_cast<long>(b));
      images[static_cast<std::size_t>(pieces[static_cast<std::size_t>(o)][i])] = std::move(piece_img);
    }
  }
  s.map = GraphMap::build(std::move(ng), std::move(vimg), std::move(images));
  return s;
}

EdgePath transport(const Subdivision& s, const EdgePath& p) {
  EdgePath out{s.vertex_map.at(static_cast<std::size_t>(p.start)), {}};
  for (EdgeId e : p.edges) {
    const auto& pp = s.edge_path.at(static_cast<std::size_t>(e)).edges;
    out.edges.insert(out.edges.end(), pp.begin(), pp.end());
  }
  return out;
}

}  // namespace fcomm
