#include "fcomm/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace fcomm {

MarkedGraph MarkedGraph::build(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges,
                               const std::vector<std::string>& tree) {
  MarkedGraph g;
  g.vertex_names_ = std::move(vertices);
  std::map<std::string, VertexId> vindex;
  for (std::size_t i = 0; i < g.vertex_names_.size(); ++i) {
    if (!vindex.emplace(g.vertex_names_[i], static_cast<VertexId>(i)).second)
      throw std::invalid_argument("duplicate vertex '" + g.vertex_names_[i] + "'");
  }
  std::set<std::string> ids;
  for (const auto& spec : edges) {
    if (spec.id.empty() || spec.id[0] == '~' || spec.id.find(' ') != std::string::npos)
      throw std::invalid_argument("invalid edge id '" + spec.id + "'");
    if (!ids.insert(spec.id).second) throw std::invalid_argument("duplicate edge '" + spec.id + "'");
    auto f = vindex.find(spec.from);
    auto t = vindex.find(spec.to);
    if (f == vindex.end() || t == vindex.end())
      throw std::invalid_argument("edge '" + spec.id + "' has an unknown endpoint");
    const EdgeId e = static_cast<EdgeId>(g.edges_.size());
    g.edges_.push_back({spec.id, f->second, t->second, e + 1, spec.length, true});
    g.edges_.push_back({spec.id, t->second, f->second, e, spec.length, false});
  }

  g.in_tree_.assign(static_cast<std::size_t>(g.orbit_count()), false);
  if (!tree.empty()) {
    for (const auto& id : tree) {
      auto e = g.find_edge(id);
      if (!e || !g.edge(*e).positive) throw std::invalid_argument("unknown tree edge '" + id + "'");
      g.in_tree_[static_cast<std::size_t>(g.orbit(*e))] = true;
    }
  } else if (!g.vertex_names_.empty()) {
    std::vector<bool> seen(g.vertex_names_.size(), false);
    std::deque<VertexId> queue{0};
    seen[0] = true;
    std::vector<std::vector<EdgeId>> stars(g.vertex_names_.size());
    for (EdgeId e = 0; e < g.edge_count(); ++e) stars[static_cast<std::size_t>(g.edge(e).from)].push_back(e);
    while (!queue.empty()) {
      VertexId v = queue.front();
      queue.pop_front();
      for (EdgeId e : stars[static_cast<std::size_t>(v)]) {
        VertexId w = g.edge(e).to;
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = true;
          g.in_tree_[static_cast<std::size_t>(g.orbit(e))] = true;
          queue.push_back(w);
        }
      }
    }
  }
  g.index();
  return g;
}

MarkedGraph MarkedGraph::rose(const std::vector<std::string>& names) {
  std::vector<EdgeSpec> edges;
  for (const auto& n : names) edges.push_back({n, "v0", "v0", 1});
  return build({"v0"}, edges, {});
}

void MarkedGraph::index() {
  const std::size_t nv = vertex_names_.size();
  stars_.assign(nv, {});
  for (EdgeId e = 0; e < edge_count(); ++e) stars_[static_cast<std::size_t>(edge(e).from)].push_back(e);

  tree_orbits_.clear();
  basis_orbits_.clear();
  basis_index_.assign(static_cast<std::size_t>(orbit_count()), -1);
  for (int o = 0; o < orbit_count(); ++o) {
    if (in_tree_[static_cast<std::size_t>(o)]) {
      tree_orbits_.push_back(o);
    } else {
      basis_index_[static_cast<std::size_t>(o)] = static_cast<int>(basis_orbits_.size());
      basis_orbits_.push_back(o);
    }
  }

  // Orient the tree from the base; any cycle or missed vertex invalidates it.
  tree_problems_.clear();
  parent_edge_.assign(nv, -1);
  depth_.assign(nv, -1);
  if (nv == 0) {
    tree_valid_ = false;
    tree_problems_.push_back("graph has no vertices");
    return;
  }
  depth_[0] = 0;
  std::deque<VertexId> queue{0};
  std::size_t reached = 1;
  bool cycle = false;
  std::vector<bool> used(static_cast<std::size_t>(orbit_count()), false);
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId e : stars_[static_cast<std::size_t>(v)]) {
      const int o = orbit(e);
      if (!in_tree_[static_cast<std::size_t>(o)] || used[static_cast<std::size_t>(o)]) continue;
      used[static_cast<std::size_t>(o)] = true;
      VertexId w = edge(e).to;
      if (depth_[static_cast<std::size_t>(w)] >= 0) {
        cycle = true;
        continue;
      }
      depth_[static_cast<std::size_t>(w)] = depth_[static_cast<std::size_t>(v)] + 1;
      parent_edge_[static_cast<std::size_t>(w)] = e;
      ++reached;
      queue.push_back(w);
    }
  }
  if (cycle) tree_problems_.push_back("spanning tree contains a cycle");
  if (reached != nv) tree_problems_.push_back("spanning tree does not reach every vertex");
  for (int o : tree_orbits_)
    if (!used[static_cast<std::size_t>(o)]) tree_problems_.push_back("tree edge '" + edge(2 * o).id + "' is not connected to the tree");
  tree_valid_ = tree_problems_.empty();
}

std::optional<VertexId> MarkedGraph::find_vertex(const std::string& name) const {
  auto it = std::find(vertex_names_.begin(), vertex_names_.end(), name);
  if (it == vertex_names_.end()) return std::nullopt;
  return static_cast<VertexId>(it - vertex_names_.begin());
}

std::optional<EdgeId> MarkedGraph::find_edge(const std::string& token) const {
  bool rev = !token.empty() && token[0] == '~';
  std::string id = rev ? token.substr(1) : token;
  for (EdgeId e = 0; e < edge_count(); e += 2) {
    if (edges_[static_cast<std::size_t>(e)].id == id) return rev ? e + 1 : e;
  }
  return std::nullopt;
}

std::string MarkedGraph::edge_name(EdgeId e) const {
  const auto& ed = edge(e);
  return ed.positive ? ed.id : "~" + ed.id;
}

Alphabet MarkedGraph::basis_alphabet() const {
  std::vector<std::string> names;
  for (int o : basis_orbits_) names.push_back(edge(2 * o).id);
  return Alphabet(std::move(names));
}

bool MarkedGraph::connected() const {
  if (vertex_names_.empty()) return false;
  std::vector<bool> seen(vertex_names_.size(), false);
  std::deque<VertexId> queue{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (EdgeId e : star(v)) {
      VertexId w = edge(e).to;
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        ++count;
        queue.push_back(w);
      }
    }
  }
  return count == vertex_names_.size();
}

EdgePath MarkedGraph::tree_path(VertexId u, VertexId v) const {
  if (!tree_valid_) throw std::logic_error("tree_path on a graph without a valid spanning tree");
  // Climb both endpoints to their common ancestor.
  std::vector<EdgeId> up;    // from u upward, as traversed
  std::vector<EdgeId> down;  // from v upward, to be reversed
  VertexId a = u;
  VertexId b = v;
  while (a != b) {
    if (depth_[static_cast<std::size_t>(a)] >= depth_[static_cast<std::size_t>(b)]) {
      EdgeId pe = parent_edge_[static_cast<std::size_t>(a)];
      up.push_back(reverse(pe));
      a = edge(pe).from;
    } else {
      EdgeId pe = parent_edge_[static_cast<std::size_t>(b)];
      down.push_back(pe);
      b = edge(pe).from;
    }
  }
  EdgePath p{u, std::move(up)};
  p.edges.insert(p.edges.end(), down.rbegin(), down.rend());
  return p;
}

EdgePath MarkedGraph::basis_loop(int i) const {
  const EdgeId e = positive_edge(basis_orbits_.at(static_cast<std::size_t>(i)));
  EdgePath p = tree_path(base(), edge(e).from);
  p.edges.push_back(e);
  EdgePath back = tree_path(edge(e).to, base());
  p.edges.insert(p.edges.end(), back.edges.begin(), back.edges.end());
  return p;
}

ValidationReport MarkedGraph::validate() const {
  ValidationReport r;
  if (vertex_names_.empty()) {
    r.violations.push_back("graph has no vertices");
    return r;
  }
  if (!connected()) r.violations.push_back("graph is disconnected");
  for (VertexId v = 0; v < vertex_count(); ++v)
    if (valence(v) < 2) r.violations.push_back("valence < 2 at vertex '" + vertex_name(v) + "'");
  for (EdgeId e = 0; e < edge_count(); e += 2) {
    const auto& ed = edge(e);
    if (ed.length <= 0) r.violations.push_back("nonpositive length on edge '" + ed.id + "'");
    const auto& rv = edge(ed.reverse);
    if (rv.reverse != e || rv.from != ed.to || rv.to != ed.from || rv.length != ed.length)
      r.violations.push_back("reversal is not an involution on edge '" + ed.id + "'");
  }
  for (const auto& p : tree_problems_) r.violations.push_back(p);
  if (tree_valid_ && static_cast<int>(tree_orbits_.size()) != vertex_count() - 1)
    r.violations.push_back("spanning tree has the wrong number of edges");
  return r;
}

std::string MarkedGraph::format_path(const EdgePath& p) const {
  std::string out;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    if (i) out += ' ';
    out += edge_name(p.edges[i]);
  }
  return out;
}

EdgePath MarkedGraph::parse_path(const std::string& text, VertexId start) const {
  EdgePath p{start, {}};
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    auto e = find_edge(tok);
    if (!e) throw UnknownEdge("unknown edge '" + tok + "'");
    p.edges.push_back(*e);
  }
  if (!p.edges.empty()) p.start = edge(p.edges.front()).from;
  return p;
}

int rank(const MarkedGraph& g) {
  if (!g.connected()) throw DisconnectedGraph("rank of a disconnected graph");
  return g.orbit_count() - g.vertex_count() + 1;
}

VertexId path_end(const MarkedGraph& g, const EdgePath& p) {
  return p.edges.empty() ? p.start : g.edge(p.edges.back()).to;
}

bool is_path(const MarkedGraph& g, const EdgePath& p) {
  VertexId at = p.start;
  for (EdgeId e : p.edges) {
    if (e < 0 || e >= g.edge_count() || g.edge(e).from != at) return false;
    at = g.edge(e).to;
  }
  return true;
}

EdgePath reverse_path(const MarkedGraph& g, const EdgePath& p) {
  EdgePath r{path_end(g, p), {}};
  for (auto it = p.edges.rbegin(); it != p.edges.rend(); ++it) r.edges.push_back(g.reverse(*it));
  return r;
}

EdgePath concat(const MarkedGraph& g, const EdgePath& a, const EdgePath& b) {
  if (path_end(g, a) != b.start) throw NonIncidentEdges("concatenating non-incident paths");
  EdgePath out = a;
  out.edges.insert(out.edges.end(), b.edges.begin(), b.edges.end());
  return out;
}

EdgePath tighten(const MarkedGraph& g, const EdgePath& p) {
  if (!is_path(g, p)) throw NonIncidentEdges("consecutive edges are not incident");
  EdgePath out{p.start, {}};
  out.edges.reserve(p.edges.size());
  for (EdgeId e : p.edges) {
    if (!out.edges.empty() && out.edges.back() == g.reverse(e)) out.edges.pop_back();
    else out.edges.push_back(e);
  }
  return out;
}

bool is_reduced(const MarkedGraph& g, const EdgePath& p) {
  for (std::size_t i = 1; i < p.edges.size(); ++i)
    if (p.edges[i] == g.reverse(p.edges[i - 1])) return false;
  return true;
}

Word path_to_word(const MarkedGraph& g, const EdgePath& loop, VertexId basepoint) {
  if (!is_path(g, loop)) throw NonIncidentEdges("consecutive edges are not incident");
  if (loop.start != basepoint || path_end(g, loop) != basepoint) throw NotALoop("path is not a loop at the basepoint");
  std::vector<Letter> letters;
  // The tree path from the base only contributes tree edges, so reading the
  // non-tree edges of the loop itself is the conjugated word.
  for (EdgeId e : loop.edges) {
    const int bi = g.basis_index(g.orbit(e));
    if (bi >= 0) letters.push_back(letter_of(bi, !g.edge(e).positive));
  }
  return free_reduce(Word(std::move(letters)));
}

Word path_to_word(const MarkedGraph& g, const EdgePath& loop) { return path_to_word(g, loop, g.base()); }

EdgePath word_to_path(const MarkedGraph& g, const Word& w, VertexId basepoint) {
  EdgePath out = g.tree_path(basepoint, g.base());
  for (Letter l : w.letters) {
    EdgePath piece = g.basis_loop(generator_of(l));
    if (l < 0) piece = reverse_path(g, piece);
    out.edges.insert(out.edges.end(), piece.edges.begin(), piece.edges.end());
  }
  EdgePath back = g.tree_path(g.base(), basepoint);
  out.edges.insert(out.edges.end(), back.edges.begin(), back.edges.end());
  return tighten(g, out);
}

EdgePath word_to_path(const MarkedGraph& g, const Word& w) { return word_to_path(g, w, g.base()); }

}  // namespace fcomm
