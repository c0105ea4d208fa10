#include "fcomm/folds.hpp"

#include "fcomm/maps.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace fcomm {

FoldResult stallings_fold(const GraphMap& f, EdgeId e1, EdgeId e2) {
  const MarkedGraph& g = f.graph();
  if (e1 < 0 || e2 < 0 || e1 >= g.edge_count() || e2 >= g.edge_count()) throw PreconditionFailed("unknown edge");
  if (g.orbit(e1) == g.orbit(e2)) throw PreconditionFailed("fold needs two distinct edges");
  if (g.edge(e1).from != g.edge(e2).from) throw PreconditionFailed("edges do not share their initial vertex");
  if (f.edge_image(e1) != f.edge_image(e2)) throw PreconditionFailed("edges have different images");
  if (g.edge(e1).to == g.edge(e2).to) throw PreconditionFailed("edges have the same endpoints; folding would change the fundamental group");
  if (!is_train_track(f, 1).train_track()) throw PreconditionFailed("map is not a train track map");

  FoldEvent ev;
  ev.e1 = g.edge_name(e1);
  ev.e2 = g.edge_name(e2);
  VertexId keep = g.edge(e1).to;
  VertexId drop = g.edge(e2).to;
  if (drop == g.base()) std::swap(keep, drop);
  ev.merged_vertex = g.vertex_name(drop);
  ev.into_vertex = g.vertex_name(keep);

  std::vector<std::string> vnames;
  ev.vertex_quotient.assign(static_cast<std::size_t>(g.vertex_count()), -1);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (v == drop) continue;
    ev.vertex_quotient[static_cast<std::size_t>(v)] = static_cast<VertexId>(vnames.size());
    vnames.push_back(g.vertex_name(v));
  }
  ev.vertex_quotient[static_cast<std::size_t>(drop)] = ev.vertex_quotient[static_cast<std::size_t>(keep)];

  const int gone = g.orbit(e2);
  std::vector<EdgeSpec> specs;
  ev.edge_quotient.assign(static_cast<std::size_t>(g.edge_count()), -1);
  for (int o = 0; o < g.orbit_count(); ++o) {
    if (o == gone) continue;
    const int no = static_cast<int>(specs.size());
    const auto& ed = g.edge(2 * o);
    specs.push_back({ed.id, vnames[static_cast<std::size_t>(ev.vertex_quotient[static_cast<std::size_t>(ed.from)])],
                     vnames[static_cast<std::size_t>(ev.vertex_quotient[static_cast<std::size_t>(ed.to)])], ed.length});
    ev.edge_quotient[static_cast<std::size_t>(2 * o)] = 2 * no;
    ev.edge_quotient[static_cast<std::size_t>(2 * o + 1)] = 2 * no + 1;
  }
  ev.edge_quotient[static_cast<std::size_t>(e2)] = ev.edge_quotient[static_cast<std::size_t>(e1)];
  ev.edge_quotient[static_cast<std::size_t>(g.reverse(e2))] = ev.edge_quotient[static_cast<std::size_t>(g.reverse(e1))];

  // Spanning tree: the image of the old tree first, completed greedily.
  std::vector<int> parent(vnames.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return parent[static_cast<std::size_t>(x)] == x ? x : parent[static_cast<std::size_t>(x)] = find(parent[static_cast<std::size_t>(x)]);
  };
  std::vector<std::string> tree;
  auto offer = [&](int new_orbit) {
    const auto& sp = specs[static_cast<std::size_t>(new_orbit)];
    auto idx = [&](const std::string& name) {
      return static_cast<int>(std::find(vnames.begin(), vnames.end(), name) - vnames.begin());
    };
    const int a = find(idx(sp.from));
    const int b = find(idx(sp.to));
    if (a == b) return;
    parent[static_cast<std::size_t>(a)] = b;
    tree.push_back(sp.id);
  };
  for (int o : g.tree_orbits()) offer(ev.edge_quotient[static_cast<std::size_t>(2 * o)] / 2);
  for (int o = 0; o < static_cast<int>(specs.size()); ++o) offer(o);
  MarkedGraph ng = MarkedGraph::build(vnames, specs, tree);

  std::vector<VertexId> vimg(static_cast<std::size_t>(ng.vertex_count()), -1);
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    vimg[static_cast<std::size_t>(ev.vertex_quotient[static_cast<std::size_t>(v)])] =
        ev.vertex_quotient[static_cast<std::size_t>(f.vertex_image(v))];
  std::vector<EdgePath> images(static_cast<std::size_t>(ng.orbit_count()));
  for (int o = 0; o < g.orbit_count(); ++o) {
    if (o == gone) continue;
    const EdgeId ne = ev.edge_quotient[static_cast<std::size_t>(2 * o)];
    images[static_cast<std::size_t>(ne / 2)] = push_path(ng, ev, f.edge_image(2 * o));
  }
  FoldResult r;
  r.map = GraphMap::build(std::move(ng), std::move(vimg), std::move(images));
  r.event = std::move(ev);
  r.train_track = is_train_track(r.map, 1).train_track();
  return r;
}

EdgePath push_path(const MarkedGraph& folded, const FoldEvent& ev, const EdgePath& p) {
  EdgePath out{ev.vertex_quotient.at(static_cast<std::size_t>(p.start)), {}};
  for (EdgeId e : p.edges) out.edges.push_back(ev.edge_quotient.at(static_cast<std::size_t>(e)));
  return tighten(folded, out);
}

namespace {

VertexId vertex_at(const Subdivision& s, const GraphPoint& p) {
  if (p.is_vertex()) return s.vertex_map.at(static_cast<std::size_t>(p.vertex));
  return s.point_vertex.at(p);
}

}  // namespace

IdentifyResult fold_to_identify(const GraphMap& f, const GraphPoint& x, const GraphPoint& y, int k_max, int path_bound) {
  IdentifyResult out;
  out.sequence.start = f;
  out.sequence.result = f;
  if (x == y) {
    out.kind = IdentifyResult::Kind::Identified;
    out.sequence.train_track = is_train_track(f, 1).train_track();
    out.sequence.meeting_vertex = x.is_vertex() ? f.graph().vertex_name(x.vertex) : "";
    return out;
  }
  // Forward orbits of x and y become vertices.
  std::set<GraphPoint> orbit;
  for (GraphPoint p : {x, y}) {
    while (!p.is_vertex() && orbit.insert(p).second) {
      if (orbit.size() > 512) {
        out.reason = "forward orbits of the points are too long";
        return out;
      }
      p = image_point(f, p);
    }
  }
  Subdivision s = subdivide_at(f, {orbit.begin(), orbit.end()});
  GraphMap cur = s.map;
  for (const auto& [p, v] : s.point_vertex)
    out.sequence.steps.push_back({FoldStep::Kind::Subdivide, {f.graph().edge(p.edge).id, p.t, cur.graph().vertex_name(v)}, {}, ""});
  const VertexId vx = vertex_at(s, x);
  const VertexId vy = vertex_at(s, y);

  // Least (k, length, edge sequence) with g^k_# of the path trivial.
  const MarkedGraph& g0 = cur.graph();
  std::optional<std::pair<int, EdgePath>> best;
  EdgePath path{vx, {}};
  std::function<void(VertexId)> dfs = [&](VertexId at) {
    if (at == vy && !path.empty()) {
      EdgePath img = path;
      const int kmax = best ? best->first - 1 : k_max;
      for (int k = 1; k <= kmax; ++k) {
        img = apply_map(cur, img);
        if (img.empty()) {
          if (!best || k < best->first) best = {k, path};
          break;
        }
      }
    }
    if (static_cast<int>(path.size()) == path_bound) return;
    for (EdgeId e : g0.star(at)) {
      if (!path.empty() && e == g0.reverse(path.edges.back())) continue;
      path.edges.push_back(e);
      dfs(g0.edge(e).to);
      path.edges.pop_back();
    }
  };
  for (int len = 1; len <= path_bound && !best; ++len) {
    const int saved = path_bound;
    path_bound = len;
    dfs(vx);
    path_bound = saved;
  }
  if (!best) {
    out.reason = "no connecting path of at most " + std::to_string(path_bound) + " segments becomes trivial within " +
                 std::to_string(k_max) + " iterations";
    return out;
  }
  out.sequence.power = best->first;
  out.sequence.connecting_path = g0.format_path(best->second);

  EdgePath sigma = best->second;
  for (int guard = 0; !sigma.empty(); ++guard) {
    if (guard > 256) {
      out.reason = "fold sequence did not terminate";
      return out;
    }
    const MarkedGraph& g = cur.graph();
    // First turn of sigma whose edges have images with a common prefix.
    std::size_t at = 0;
    int candidates = 0;
    for (std::size_t i = 1; i < sigma.size(); ++i) {
      const EdgeId d1 = g.reverse(sigma.edges[i - 1]);
      const EdgeId d2 = sigma.edges[i];
      if (d1 != d2 && direction_map(cur, d1) == direction_map(cur, d2)) {
        if (candidates++ == 0) at = i;
      }
    }
    if (candidates == 0) {
      out.reason = "the connecting path has no turn with a common image prefix; deeper folding is not supported";
      return out;
    }
    const EdgeId d1 = g.reverse(sigma.edges[at - 1]);
    const EdgeId d2 = sigma.edges[at];
    const auto& i1 = cur.edge_image(d1).edges;
    const auto& i2 = cur.edge_image(d2).edges;
    std::size_t common = 0;
    while (common < i1.size() && common < i2.size() && i1[common] == i2[common]) ++common;
    const EdgePath prefix{cur.edge_image(d1).start, std::vector<EdgeId>(i1.begin(), i1.begin() + static_cast<long>(common))};
    const Rational lp = path_length(g, prefix);
    std::vector<GraphPoint> cuts;
    for (EdgeId d : {d1, d2}) {
      const Rational total = path_length(g, cur.edge_image(d));
      if (lp < total) cuts.push_back(GraphPoint::on_edge(g, d, lp / total));
    }
    std::string note = candidates > 1 ? "first of " + std::to_string(candidates) + " foldable turns along the path" : "";
    EdgeId p1 = d1;
    EdgeId p2 = d2;
    if (!cuts.empty()) {
      Subdivision sd = subdivide_at(cur, cuts);
      for (const auto& [p, v] : sd.point_vertex)
        out.sequence.steps.push_back({FoldStep::Kind::Subdivide, {g.edge(p.edge).id, p.t, sd.map.graph().vertex_name(v)}, {}, ""});
      p1 = sd.edge_path[static_cast<std::size_t>(d1)].edges.front();
      p2 = sd.edge_path[static_cast<std::size_t>(d2)].edges.front();
      sigma = transport(sd, sigma);
      cur = sd.map;
    }
    FoldResult fr = stallings_fold(cur, p1, p2);
    sigma = push_path(fr.map.graph(), fr.event, sigma);
    out.sequence.steps.push_back({FoldStep::Kind::Fold, {}, fr.event, note});
    cur = fr.map;
  }
  out.kind = IdentifyResult::Kind::Identified;
  out.sequence.result = cur;
  out.sequence.train_track = is_train_track(cur, 1).train_track();
  out.sequence.meeting_vertex = cur.graph().vertex_name(sigma.start);
  return out;
}

}  // namespace fcomm
