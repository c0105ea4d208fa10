#include "fcomm/subgroup.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace fcomm {

namespace {

// Mutable labelled graph used while folding. Edges carry a positive
// generator and a tag in the generator alphabet.
struct FoldGraph {
  struct Edge {
    int from;
    int to;
    int gen;
    Word tag;
    bool alive = true;
  };
  int rank = 0;
  std::vector<std::vector<int>> incident;  // edge ids; loops listed once
  std::vector<bool> vertex_alive;
  std::vector<Edge> edges;
  bool relation_found = false;

  int add_vertex() {
    incident.emplace_back();
    vertex_alive.push_back(true);
    return static_cast<int>(incident.size()) - 1;
  }
  void add_edge(int from, int to, int gen, Word tag) {
    const int id = static_cast<int>(edges.size());
    edges.push_back({from, to, gen, std::move(tag), true});
    incident[static_cast<std::size_t>(from)].push_back(id);
    if (to != from) incident[static_cast<std::size_t>(to)].push_back(id);
  }
  // Adds the path spelling w from the base with the first edge tagged.
  void add_petal(const Word& w, const Word& tag) {
    if (w.empty()) return;
    int at = 0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const int next = k + 1 == w.size() ? 0 : add_vertex();
      Word t = k == 0 ? tag : Word{};
      const Letter l = w[k];
      if (l > 0) add_edge(at, next, generator_of(l), t);
      else add_edge(next, at, generator_of(l), inverse(t));
      at = next;
    }
  }

  // Live incident edge ids at v without repeats.
  const std::vector<int>& live(int v) {
    auto& inc = incident[static_cast<std::size_t>(v)];
    std::vector<int> clean;
    std::set<int> dedup;
    for (int id : inc)
      if (edges[static_cast<std::size_t>(id)].alive && dedup.insert(id).second) clean.push_back(id);
    inc = std::move(clean);
    return inc;
  }

  void gauge(int y, const Word& g) {
    const Word gi = inverse(g);
    for (int id : live(y)) {
      Edge& e = edges[static_cast<std::size_t>(id)];
      if (!e.alive) continue;
      if (e.to == y && e.from == y) e.tag = gi * e.tag * g;
      else if (e.to == y) e.tag = e.tag * g;
      else e.tag = gi * e.tag;
    }
  }

  void merge_into(int y, int x) {
    for (int id : live(y)) {
      Edge& e = edges[static_cast<std::size_t>(id)];
      if (e.from == y) e.from = x;
      if (e.to == y) e.to = x;
      incident[static_cast<std::size_t>(x)].push_back(id);
    }
    incident[static_cast<std::size_t>(y)].clear();
    vertex_alive[static_cast<std::size_t>(y)] = false;
  }

  // Finds two live edges at v with the same generator and direction.
  bool find_pair(int v, int& e1, int& e2, bool& outgoing) {
    std::map<std::pair<int, int>, int> seen;
    for (int id : live(v)) {
      const Edge& e = edges[static_cast<std::size_t>(id)];
      for (int dir = 0; dir < 2; ++dir) {
        const bool out = dir == 0;
        if (out && e.from != v) continue;
        if (!out && e.to != v) continue;
        auto key = std::make_pair(e.gen, dir);
        auto it = seen.find(key);
        if (it != seen.end() && it->second != id) {
          e1 = it->second;
          e2 = id;
          outgoing = out;
          return true;
        }
        seen.emplace(key, id);
      }
    }
    return false;
  }

  void fold_all() {
    std::vector<int> stack(incident.size());
    std::iota(stack.begin(), stack.end(), 0);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      if (!vertex_alive[static_cast<std::size_t>(v)]) continue;
      int e1 = -1;
      int e2 = -1;
      bool outgoing = true;
      if (!find_pair(v, e1, e2, outgoing)) continue;
      Edge* a = &edges[static_cast<std::size_t>(e1)];
      Edge* b = &edges[static_cast<std::size_t>(e2)];
      int x = outgoing ? a->to : a->from;
      int y = outgoing ? b->to : b->from;
      if (x == y) {
        if (a->tag != b->tag) relation_found = true;
        b->alive = false;
      } else {
        if (y == 0) {
          std::swap(a, b);
          std::swap(x, y);
        }
        const Word g = outgoing ? inverse(b->tag) * a->tag : b->tag * inverse(a->tag);
        gauge(y, g);
        b->alive = false;
        merge_into(y, x);
      }
      stack.push_back(v);
      if (vertex_alive[static_cast<std::size_t>(x)]) stack.push_back(x);
    }
  }

  int degree(int v) {
    int d = 0;
    for (int id : live(v)) {
      const Edge& e = edges[static_cast<std::size_t>(id)];
      d += (e.from == v) + (e.to == v);
    }
    return d;
  }

  void prune() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int v = 1; v < static_cast<int>(incident.size()); ++v) {
        if (!vertex_alive[static_cast<std::size_t>(v)]) continue;
        if (degree(v) <= 1) {
          for (int id : live(v)) edges[static_cast<std::size_t>(id)].alive = false;
          vertex_alive[static_cast<std::size_t>(v)] = false;
          changed = true;
        }
      }
    }
  }
};

struct Canonical {
  SubgroupGraph graph;
  std::vector<Word> tags;
};

}  // namespace

// Builds the canonical graph from a folded FoldGraph.
static Canonical canonicalize(const FoldGraph& fg);

}  // namespace fcomm

namespace fcomm {

class SubgroupGraphBuilder {
 public:
  static SubgroupGraph make(int rank, std::vector<std::vector<int>> out) {
    SubgroupGraph g;
    g.rank_ = rank;
    g.in_.assign(out.size(), std::vector<int>(static_cast<std::size_t>(rank), -1));
    for (std::size_t v = 0; v < out.size(); ++v)
      for (int i = 0; i < rank; ++i)
        if (int w = out[v][static_cast<std::size_t>(i)]; w >= 0) g.in_[static_cast<std::size_t>(w)][static_cast<std::size_t>(i)] = static_cast<int>(v);
    g.out_ = std::move(out);
    return g;
  }
};

static Canonical canonicalize(const FoldGraph& fg) {
  const int rank = fg.rank;
  const int n = static_cast<int>(fg.incident.size());
  // Per live vertex: out/in edge id by generator.
  std::vector<std::vector<int>> out_e(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(rank), -1));
  std::vector<std::vector<int>> in_e(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(rank), -1));
  for (std::size_t id = 0; id < fg.edges.size(); ++id) {
    const auto& e = fg.edges[id];
    if (!e.alive) continue;
    out_e[static_cast<std::size_t>(e.from)][static_cast<std::size_t>(e.gen)] = static_cast<int>(id);
    in_e[static_cast<std::size_t>(e.to)][static_cast<std::size_t>(e.gen)] = static_cast<int>(id);
  }
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  std::vector<int> order;
  label[0] = 0;
  order.push_back(0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const int v = order[k];
    for (int i = 0; i < rank; ++i) {
      for (int dir = 0; dir < 2; ++dir) {
        const int id = dir == 0 ? out_e[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)]
                                : in_e[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)];
        if (id < 0) continue;
        const auto& e = fg.edges[static_cast<std::size_t>(id)];
        const int w = dir == 0 ? e.to : e.from;
        if (label[static_cast<std::size_t>(w)] < 0) {
          label[static_cast<std::size_t>(w)] = static_cast<int>(order.size());
          order.push_back(w);
        }
      }
    }
  }
  const std::size_t m = order.size();
  std::vector<std::vector<int>> out(m, std::vector<int>(static_cast<std::size_t>(rank), -1));
  std::vector<Word> tags(m * static_cast<std::size_t>(rank));
  for (std::size_t k = 0; k < m; ++k) {
    const int v = order[k];
    for (int i = 0; i < rank; ++i) {
      const int id = out_e[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)];
      if (id < 0) continue;
      const auto& e = fg.edges[static_cast<std::size_t>(id)];
      out[k][static_cast<std::size_t>(i)] = label[static_cast<std::size_t>(e.to)];
      tags[k * static_cast<std::size_t>(rank) + static_cast<std::size_t>(i)] = e.tag;
    }
  }
  return {SubgroupGraphBuilder::make(rank, std::move(out)), std::move(tags)};
}

int SubgroupGraph::trace(int v, const Word& w) const {
  for (Letter l : w.letters) {
    if (v < 0) return -1;
    v = step(v, l);
  }
  return v;
}

bool SubgroupGraph::is_complete() const {
  for (const auto& row : out_)
    for (int t : row)
      if (t < 0) return false;
  return true;
}

std::optional<int> SubgroupGraph::index() const {
  if (!is_complete()) return std::nullopt;
  return vertex_count();
}

int SubgroupGraph::edge_count() const {
  int c = 0;
  for (const auto& row : out_)
    for (int t : row) c += t >= 0;
  return c;
}

SubgroupGraph SubgroupGraph::whole(int rank) {
  return SubgroupGraphBuilder::make(rank, {std::vector<int>(static_cast<std::size_t>(rank), 0)});
}

SubgroupGraph SubgroupGraph::from_table(int rank, const std::vector<std::vector<int>>& out) {
  FoldGraph fg;
  fg.rank = rank;
  for (std::size_t v = 0; v < out.size(); ++v) fg.add_vertex();
  if (out.empty()) fg.add_vertex();
  for (std::size_t v = 0; v < out.size(); ++v)
    for (int i = 0; i < rank; ++i)
      if (int w = out[v][static_cast<std::size_t>(i)]; w >= 0) fg.add_edge(static_cast<int>(v), w, i, {});
  fg.fold_all();
  fg.prune();
  return canonicalize(fg).graph;
}

std::vector<SubgroupGraph::EdgeKey> SubgroupGraph::default_tree() const {
  std::vector<EdgeKey> tree;
  std::vector<bool> seen(out_.size(), false);
  seen[0] = true;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int i = 0; i < rank_; ++i) {
      const int w = target(v, i);
      if (w >= 0 && !seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        tree.push_back(v * rank_ + i);
        queue.push_back(w);
      }
      const int u = source(v, i);
      if (u >= 0 && !seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = true;
        tree.push_back(u * rank_ + i);
        queue.push_back(u);
      }
    }
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

std::vector<std::vector<SubgroupGraph::EdgeKey>> SubgroupGraph::spanning_trees(std::size_t cap) const {
  std::vector<EdgeKey> keys;
  for (int v = 0; v < vertex_count(); ++v)
    for (int i = 0; i < rank_; ++i)
      if (target(v, i) >= 0) keys.push_back(v * rank_ + i);
  const std::size_t need = static_cast<std::size_t>(vertex_count() - 1);
  std::vector<std::vector<EdgeKey>> result;
  std::vector<EdgeKey> chosen;
  // Union-find with undo by copying (graphs are tiny).
  std::function<void(std::size_t, std::vector<int>)> rec = [&](std::size_t from, std::vector<int> parent) {
    if (result.size() >= cap) return;
    if (chosen.size() == need) {
      result.push_back(chosen);
      return;
    }
    if (keys.size() - from < need - chosen.size()) return;
    for (std::size_t k = from; k < keys.size(); ++k) {
      const int v = keys[k] / rank_;
      const int w = target(v, keys[k] % rank_);
      auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
        return x;
      };
      const int rv = find(v);
      const int rw = find(w);
      if (rv == rw) continue;
      std::vector<int> next = parent;
      next[static_cast<std::size_t>(rv)] = rw;
      chosen.push_back(keys[k]);
      rec(k + 1, next);
      chosen.pop_back();
      if (result.size() >= cap) return;
    }
  };
  std::vector<int> parent(static_cast<std::size_t>(vertex_count()));
  std::iota(parent.begin(), parent.end(), 0);
  rec(0, parent);
  return result;
}

std::vector<Word> SubgroupGraph::tree_words(const std::vector<EdgeKey>& tree) const {
  std::vector<Word> words(out_.size());
  std::vector<bool> seen(out_.size(), false);
  std::vector<std::vector<std::pair<int, Letter>>> adj(out_.size());
  for (EdgeKey k : tree) {
    const int v = k / rank_;
    const int i = k % rank_;
    const int w = target(v, i);
    adj[static_cast<std::size_t>(v)].push_back({w, letter_of(i)});
    adj[static_cast<std::size_t>(w)].push_back({v, letter_of(i, true)});
  }
  seen[0] = true;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (auto [w, l] : adj[static_cast<std::size_t>(v)]) {
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = true;
      words[static_cast<std::size_t>(w)] = words[static_cast<std::size_t>(v)] * Word{l};
      queue.push_back(w);
    }
  }
  return words;
}

std::vector<Word> SubgroupGraph::schreier_basis(const std::vector<EdgeKey>& tree) const {
  const auto words = tree_words(tree);
  std::set<EdgeKey> in_tree(tree.begin(), tree.end());
  std::vector<Word> basis;
  for (int v = 0; v < vertex_count(); ++v)
    for (int i = 0; i < rank_; ++i) {
      const int w = target(v, i);
      if (w < 0 || in_tree.count(v * rank_ + i)) continue;
      basis.push_back(words[static_cast<std::size_t>(v)] * Word{letter_of(i)} * inverse(words[static_cast<std::size_t>(w)]));
    }
  return basis;
}

Word SubgroupGraph::express(const Word& h, const std::vector<EdgeKey>& tree) const {
  std::set<EdgeKey> in_tree(tree.begin(), tree.end());
  std::map<EdgeKey, int> basis_pos;
  int next = 0;
  for (int v = 0; v < vertex_count(); ++v)
    for (int i = 0; i < rank_; ++i)
      if (target(v, i) >= 0 && !in_tree.count(v * rank_ + i)) basis_pos[v * rank_ + i] = next++;
  std::vector<Letter> out;
  int v = 0;
  for (Letter l : h.letters) {
    const int i = generator_of(l);
    const int w = step(v, l);
    if (w < 0) throw std::invalid_argument("word is not in the subgroup");
    const EdgeKey key = l > 0 ? v * rank_ + i : w * rank_ + i;
    auto it = basis_pos.find(key);
    if (it != basis_pos.end()) out.push_back(letter_of(it->second, l < 0));
    v = w;
  }
  if (v != 0) throw std::invalid_argument("word is not in the subgroup");
  return free_reduce(Word(std::move(out)));
}

std::vector<Word> SubgroupGraph::coset_representatives() const { return tree_words(default_tree()); }

std::string SubgroupGraph::to_csv() const {
  std::ostringstream os;
  os << "vertex";
  const auto names = Alphabet::standard(rank_).names();
  for (int i = 0; i < rank_; ++i) os << ',' << names[static_cast<std::size_t>(i)];
  os << '\n';
  for (int v = 0; v < vertex_count(); ++v) {
    os << v;
    for (int i = 0; i < rank_; ++i) os << ',' << target(v, i);
    os << '\n';
  }
  return os.str();
}

Word TrackedFold::express_in_generators(const Word& h) const {
  const int r = graph.ambient_rank();
  Word out;
  int v = 0;
  for (Letter l : h.letters) {
    const int i = generator_of(l);
    const int w = graph.step(v, l);
    if (w < 0) throw std::invalid_argument("word is not in the subgroup");
    if (l > 0) out = out * tags[static_cast<std::size_t>(v * r + i)];
    else out = out * inverse(tags[static_cast<std::size_t>(w * r + i)]);
    v = w;
  }
  if (v != 0) throw std::invalid_argument("word is not in the subgroup");
  return out;
}

TrackedFold fold_with_tracking(int rank, std::span<const Word> generators) {
  FoldGraph fg;
  fg.rank = rank;
  fg.add_vertex();
  for (std::size_t j = 0; j < generators.size(); ++j) {
    Word w = free_reduce(generators[j]);
    for (Letter l : w.letters)
      if (generator_of(l) >= rank) throw std::invalid_argument("generator uses a letter outside the ambient rank");
    fg.add_petal(w, Word::generator(static_cast<int>(j)));
  }
  fg.fold_all();
  fg.prune();
  auto c = canonicalize(fg);
  return {std::move(c.graph), std::move(c.tags), fg.relation_found};
}

SubgroupGraph fold_subgroup_graph(int rank, std::span<const Word> generators) {
  return fold_with_tracking(rank, generators).graph;
}

long long hall_count(int rank, int index) {
  std::vector<long long> a(static_cast<std::size_t>(index + 1), 0);
  auto fact = [](int n) {
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  auto pw = [](long long b, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
  };
  for (int n = 1; n <= index; ++n) {
    long long v = n * pw(fact(n), rank - 1);
    for (int k = 1; k < n; ++k) v -= pw(fact(n - k), rank - 1) * a[static_cast<std::size_t>(k)];
    a[static_cast<std::size_t>(n)] = v;
  }
  return a[static_cast<std::size_t>(index)];
}

double enumeration_cost(int rank, int index) {
  double f = 1;
  for (int i = 2; i <= index; ++i) f *= i;
  return std::pow(f, rank);
}

std::vector<SubgroupGraph> enumerate_subgroups(int rank, int index, std::size_t tuple_cap) {
  if (rank < 1 || index < 1) throw std::invalid_argument("enumerate_subgroups needs rank >= 1 and index >= 1");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(static_cast<std::size_t>(index));
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  if (enumeration_cost(rank, index) > static_cast<double>(tuple_cap))
    throw ResourceBound("subgroup enumeration would visit too many permutation tuples");

  std::set<std::vector<std::vector<int>>> seen;
  std::vector<SubgroupGraph> result;
  std::vector<std::size_t> choice(static_cast<std::size_t>(rank), 0);
  const std::size_t n = static_cast<std::size_t>(index);
  while (true) {
    std::vector<std::vector<int>> table(n, std::vector<int>(static_cast<std::size_t>(rank)));
    for (std::size_t v = 0; v < n; ++v)
      for (int i = 0; i < rank; ++i) table[v][static_cast<std::size_t>(i)] = perms[choice[static_cast<std::size_t>(i)]][v];
    // Transitivity and canonical relabelling in one breadth-first pass.
    std::vector<int> label(n, -1);
    std::vector<int> order{0};
    label[0] = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const int v = order[k];
      for (int i = 0; i < rank; ++i) {
        const int w = table[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)];
        int u = -1;
        for (std::size_t x = 0; x < n; ++x)
          if (table[x][static_cast<std::size_t>(i)] == v) u = static_cast<int>(x);
        for (int t : {w, u}) {
          if (label[static_cast<std::size_t>(t)] < 0) {
            label[static_cast<std::size_t>(t)] = static_cast<int>(order.size());
            order.push_back(t);
          }
        }
      }
    }
    if (order.size() == n) {
      std::vector<std::vector<int>> canon(n, std::vector<int>(static_cast<std::size_t>(rank)));
      for (std::size_t v = 0; v < n; ++v)
        for (int i = 0; i < rank; ++i)
          canon[static_cast<std::size_t>(label[v])][static_cast<std::size_t>(i)] = label[static_cast<std::size_t>(table[v][static_cast<std::size_t>(i)])];
      if (seen.insert(canon).second) result.push_back(SubgroupGraphBuilder::make(rank, std::move(canon)));
    }
    std::size_t pos = 0;
    while (pos < choice.size() && ++choice[pos] == perms.size()) choice[pos++] = 0;
    if (pos == choice.size()) break;
  }
  std::sort(result.begin(), result.end());
  return result;
}

SubgroupGraph subgroup_intersection(const SubgroupGraph& a, const SubgroupGraph& b) {
  if (a.ambient_rank() != b.ambient_rank()) throw std::invalid_argument("intersection of subgroups of different free groups");
  const int r = a.ambient_rank();
  std::map<std::pair<int, int>, int> id;
  std::vector<std::pair<int, int>> nodes{{0, 0}};
  id[{0, 0}] = 0;
  std::vector<std::vector<int>> out;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    out.emplace_back(static_cast<std::size_t>(r), -1);
    for (int i = 0; i < r; ++i) {
      for (int dir = 0; dir < 2; ++dir) {
        const Letter l = letter_of(i, dir == 1);
        const int x = a.step(nodes[k].first, l);
        const int y = b.step(nodes[k].second, l);
        if (x < 0 || y < 0) continue;
        auto [it, fresh] = id.emplace(std::make_pair(x, y), static_cast<int>(nodes.size()));
        if (fresh) nodes.push_back({x, y});
        if (dir == 0) out[k][static_cast<std::size_t>(i)] = it->second;
      }
    }
  }
  // Every in-edge is some node's out-edge, so the out table is complete.
  out.resize(nodes.size(), std::vector<int>(static_cast<std::size_t>(r), -1));
  for (std::size_t k = 0; k < nodes.size(); ++k)
    for (int i = 0; i < r; ++i) {
      const int x = a.target(nodes[k].first, i);
      const int y = b.target(nodes[k].second, i);
      if (x >= 0 && y >= 0) out[k][static_cast<std::size_t>(i)] = id.at({x, y});
    }
  return SubgroupGraph::from_table(r, out);
}

SubgroupGraph normal_core(const SubgroupGraph& h) {
  if (!h.is_complete()) throw std::invalid_argument("normal core needs a finite-index subgroup");
  const int r = h.ambient_rank();
  const int n = h.vertex_count();
  std::vector<int> identity(static_cast<std::size_t>(n));
  std::iota(identity.begin(), identity.end(), 0);
  std::map<std::vector<int>, int> id{{identity, 0}};
  std::vector<std::vector<int>> elems{identity};
  std::vector<std::vector<int>> out;
  for (std::size_t k = 0; k < elems.size(); ++k) {
    out.emplace_back(static_cast<std::size_t>(r), -1);
    for (int i = 0; i < r; ++i) {
      std::vector<int> next(static_cast<std::size_t>(n));
      for (int c = 0; c < n; ++c) next[static_cast<std::size_t>(c)] = h.target(elems[k][static_cast<std::size_t>(c)], i);
      auto [it, fresh] = id.emplace(next, static_cast<int>(elems.size()));
      if (fresh) elems.push_back(next);
      out[k][static_cast<std::size_t>(i)] = it->second;
    }
  }
  return SubgroupGraph::from_table(r, out);
}

SubgroupGraph conjugate_subgroup(const SubgroupGraph& h, const Word& w) {
  std::vector<Word> gens;
  for (const Word& b : h.schreier_basis()) gens.push_back(conjugate_by(w, b));
  return fold_subgroup_graph(h.ambient_rank(), gens);
}

}  // namespace fcomm
