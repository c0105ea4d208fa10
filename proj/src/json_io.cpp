#include "fcomm/json_io.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace fcomm {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw SchemaError("expected an object with field '" + std::string(key) + "'");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError("missing field '" + std::string(key) + "'");
  return *it;
}

std::string text(const Json& j, const char* what) {
  if (!j.is_string()) throw SchemaError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw SchemaError(std::string(what) + " must be an integer");
  return j.get<int>();
}

Json big(const BigInt& c) {
  if (c >= std::numeric_limits<long long>::min() && c <= std::numeric_limits<long long>::max())
    return Json(static_cast<long long>(c));
  return Json(c.str());
}

std::string ceil_decimal(const Rational& q, int digits) {
  std::string s = to_decimal(-q, digits);
  if (s.front() == '-') return s.substr(1);
  return s.find_first_not_of("0.") == std::string::npos ? s : "-" + s;
}

Json direction_names(const MarkedGraph& g, const std::vector<Direction>& ds) {
  Json out = Json::array();
  for (Direction d : ds) out.push_back(g.edge_name(d));
  return out;
}

Json rationals(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& q : v) out.push_back(to_json(q));
  return out;
}

Json words(const std::vector<Word>& ws, const Alphabet& a) {
  Json out = Json::array();
  for (const auto& w : ws) out.push_back(a.format(w));
  return out;
}

Word word_from(const Json& j, const Alphabet& a, const char* what) {
  try {
    return a.parse(text(j, what));
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
  } catch (const std::exception& e) {
    throw SchemaError(std::string("bad rational: ") + e.what());
  }
  throw SchemaError("rational values must be strings such as \"3/2\" or integers");
}

Json to_json(const Polynomial& p) {
  Json out = Json::array();
  for (const auto& c : p.coeffs) out.push_back(big(c));
  return out;
}

Polynomial polynomial_from_json(const Json& j) {
  if (!j.is_array()) throw SchemaError("polynomial must be a coefficient array");
  std::vector<BigInt> c;
  for (const auto& x : j) {
    if (x.is_number_integer()) c.emplace_back(x.get<long long>());
    else if (x.is_string()) c.emplace_back(x.get<std::string>());
    else throw SchemaError("polynomial coefficients must be integers");
  }
  return Polynomial(std::move(c));
}

Json to_json(const RootEnclosure& e, int digits) {
  Json out;
  out["lower"] = to_json(e.lower);
  out["upper"] = to_json(e.upper);
  out["exact"] = e.exact;
  out["lower_decimal"] = to_decimal(e.lower, digits);
  out["upper_decimal"] = ceil_decimal(e.upper, digits);
  return out;
}

Json to_json(const MarkedGraph& g) {
  Json out;
  out["vertices"] = g.vertex_names();
  Json edges = Json::array();
  for (int o = 0; o < g.orbit_count(); ++o) {
    const auto& ed = g.edge(g.positive_edge(o));
    Json e;
    e["id"] = ed.id;
    e["from"] = g.vertex_name(ed.from);
    e["to"] = g.vertex_name(ed.to);
    e["length"] = to_json(ed.length);
    edges.push_back(e);
  }
  out["edges"] = edges;
  Json tree = Json::array();
  for (int o : g.tree_orbits()) tree.push_back(g.edge(g.positive_edge(o)).id);
  out["tree"] = tree;
  return out;
}

MarkedGraph graph_from_json(const Json& j) {
  const Json& vs = field(j, "vertices");
  if (!vs.is_array()) throw SchemaError("'vertices' must be an array");
  std::vector<std::string> vertices;
  for (const auto& v : vs) vertices.push_back(text(v, "vertex name"));
  const Json& es = field(j, "edges");
  if (!es.is_array()) throw SchemaError("'edges' must be an array");
  std::vector<EdgeSpec> edges;
  for (const auto& e : es) {
    EdgeSpec s{text(field(e, "id"), "edge id"), text(field(e, "from"), "edge source"), text(field(e, "to"), "edge target"), 1};
    if (e.contains("length")) s.length = rational_from_json(e["length"]);
    edges.push_back(std::move(s));
  }
  std::vector<std::string> tree;
  if (j.contains("tree")) {
    if (!j["tree"].is_array()) throw SchemaError("'tree' must be an array");
    for (const auto& t : j["tree"]) tree.push_back(text(t, "tree edge"));
  }
  try {
    return MarkedGraph::build(std::move(vertices), edges, tree);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

Json to_json(const GraphMap& f) {
  const auto& g = f.graph();
  Json out;
  out["graph"] = to_json(g);
  Json vm = Json::object();
  for (VertexId v = 0; v < g.vertex_count(); ++v) vm[g.vertex_name(v)] = g.vertex_name(f.vertex_image(v));
  out["vertex_map"] = vm;
  Json em = Json::object();
  for (int o = 0; o < g.orbit_count(); ++o) {
    const EdgeId e = g.positive_edge(o);
    em[g.edge(e).id] = g.format_path(f.edge_image(e));
  }
  out["edge_map"] = em;
  return out;
}

GraphMap map_from_json(const Json& j, bool checked) {
  MarkedGraph g = graph_from_json(field(j, "graph"));
  const Json& vm = field(j, "vertex_map");
  const Json& em = field(j, "edge_map");
  if (!vm.is_object() || !em.is_object()) throw SchemaError("'vertex_map' and 'edge_map' must be objects");
  std::vector<VertexId> vimg;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    auto it = vm.find(g.vertex_name(v));
    if (it == vm.end()) throw SchemaError("vertex_map has no entry for '" + g.vertex_name(v) + "'");
    auto w = g.find_vertex(text(*it, "vertex image"));
    if (!w) throw SchemaError("vertex '" + g.vertex_name(v) + "' maps to an unknown vertex");
    vimg.push_back(*w);
  }
  for (auto it = vm.begin(); it != vm.end(); ++it)
    if (!g.find_vertex(it.key())) throw SchemaError("vertex_map names unknown vertex '" + it.key() + "'");
  std::vector<EdgePath> images;
  for (int o = 0; o < g.orbit_count(); ++o) {
    const auto& ed = g.edge(g.positive_edge(o));
    auto it = em.find(ed.id);
    if (it == em.end()) throw SchemaError("edge_map has no entry for '" + ed.id + "'");
    try {
      images.push_back(g.parse_path(text(*it, "edge image"), vimg[static_cast<std::size_t>(ed.from)]));
    } catch (const SchemaError&) {
      throw;
    } catch (const std::exception& e) {
      throw SchemaError("image of '" + ed.id + "': " + e.what());
    }
  }
  for (auto it = em.begin(); it != em.end(); ++it) {
    auto e = g.find_edge(it.key());
    if (!e || !g.edge(*e).positive) throw SchemaError("edge_map names unknown edge '" + it.key() + "'");
  }
  try {
    if (!checked) return GraphMap::build_unchecked(std::move(g), std::move(vimg), std::move(images));
    return GraphMap::build(std::move(g), std::move(vimg), std::move(images));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

Json to_json(const Automorphism& a) {
  Json out;
  out["rank"] = a.rank;
  out["images"] = a.format(Alphabet::standard(a.rank));
  return out;
}

Automorphism automorphism_from_json(const Json& j) {
  const int r = integer(field(j, "rank"), "'rank'");
  if (r < 1) throw SchemaError("'rank' must be positive");
  const Json& im = field(j, "images");
  if (!im.is_array() || static_cast<int>(im.size()) != r) throw SchemaError("'images' must list one word per generator");
  const auto alpha = Alphabet::standard(r);
  Automorphism a = Automorphism::identity(r);
  for (int i = 0; i < r; ++i) a.images[static_cast<std::size_t>(i)] = word_from(im[static_cast<std::size_t>(i)], alpha, "image");
  if (!is_automorphism(a)) throw SchemaError("images do not form a basis");
  return a;
}

OuterAutomorphism outer_from_json(const Json& j) {
  if (j.is_object() && j.contains("graph")) {
    GraphMap f = map_from_json(j);
    try {
      return OuterAutomorphism::from_map(f);
    } catch (const NotHomotopyEquivalence& e) {
      throw SchemaError(std::string("map is not a homotopy equivalence: ") + e.what());
    }
  }
  if (j.is_object() && j.contains("images")) return OuterAutomorphism::from_automorphism(automorphism_from_json(j));
  throw SchemaError("expected a graph map or an automorphism document");
}

Json to_json(const OuterAutomorphism& o) {
  Json out = to_json(o.aut);
  if (o.representative) out["representative"] = to_json(*o.representative);
  return out;
}

Json to_json(const SubgroupGraph& h) {
  const int r = h.ambient_rank();
  const auto alpha = Alphabet::standard(r);
  auto vname = [](int v) { return std::to_string(v); };
  auto ename = [&](int v, int gen) { return alpha.name(gen) + "." + vname(v); };
  Json out;
  out["rank"] = r;
  Json vs = Json::array();
  for (int v = 0; v < h.vertex_count(); ++v) vs.push_back(vname(v));
  out["vertices"] = vs;
  Json es = Json::array();
  for (int v = 0; v < h.vertex_count(); ++v)
    for (int gen = 0; gen < r; ++gen) {
      const int t = h.target(v, gen);
      if (t < 0) continue;
      Json e;
      e["id"] = ename(v, gen);
      e["from"] = vname(v);
      e["to"] = vname(t);
      e["length"] = "1";
      e["label"] = alpha.name(gen);
      es.push_back(e);
    }
  out["edges"] = es;
  Json tree = Json::array();
  for (int key : h.default_tree()) tree.push_back(ename(key / r, key % r));
  out["tree"] = tree;
  out["basepoint"] = vname(0);
  if (auto m = h.index()) out["index"] = *m;
  else out["index"] = nullptr;
  return out;
}

SubgroupGraph subgroup_from_json(const Json& j) {
  const int r = integer(field(j, "rank"), "'rank'");
  if (r < 1) throw SchemaError("'rank' must be positive");
  const auto alpha = Alphabet::standard(r);
  const Json& vs = field(j, "vertices");
  if (!vs.is_array() || vs.empty()) throw SchemaError("'vertices' must be a nonempty array");
  std::map<std::string, int> index;
  for (const auto& v : vs)
    if (!index.emplace(text(v, "vertex name"), static_cast<int>(index.size())).second) throw SchemaError("duplicate vertex");
  const std::string base = text(field(j, "basepoint"), "'basepoint'");
  auto bit = index.find(base);
  if (bit == index.end()) throw SchemaError("unknown basepoint '" + base + "'");
  // Basepoint first.
  const int b = bit->second;
  for (auto& [name, i] : index) {
    if (i == b) i = 0;
    else if (i < b) i += 1;
  }
  std::vector<std::vector<int>> out(index.size(), std::vector<int>(static_cast<std::size_t>(r), -1));
  for (const auto& e : field(j, "edges")) {
    auto gen = alpha.index_of(text(field(e, "label"), "edge label"));
    if (!gen) throw SchemaError("edge label must be a generator name");
    auto f = index.find(text(field(e, "from"), "edge source"));
    auto t = index.find(text(field(e, "to"), "edge target"));
    if (f == index.end() || t == index.end()) throw SchemaError("edge has an unknown endpoint");
    int& slot = out[static_cast<std::size_t>(f->second)][static_cast<std::size_t>(*gen)];
    if (slot >= 0 && slot != t->second) throw SchemaError("two edges with one label leave one vertex");
    slot = t->second;
  }
  return SubgroupGraph::from_table(r, out);
}

Json to_json(const StretchFactor& s) {
  Json out;
  out["char_poly"] = to_json(s.char_poly);
  out["char_poly_text"] = s.char_poly.to_string();
  out["minimal_poly"] = to_json(s.minimal_poly);
  out["minimal_poly_text"] = s.minimal_poly.to_string();
  out["enclosure"] = to_json(s.enclosure);
  out["irreducible"] = s.irreducible;
  out["expanding"] = s.expanding;
  out["eigenvector"] = rationals(s.eigenvector);
  out["lengths"] = rationals(s.lengths);
  return out;
}

Json to_json(const TrainTrackVerdict& v, const MarkedGraph& g) {
  Json out;
  out["train_track"] = v.train_track();
  out["irreducible"] = v.irreducible;
  out["expanding"] = v.expanding;
  Json gates = Json::array();
  for (const auto& gate : v.gates) gates.push_back(direction_names(g, gate));
  out["gates"] = gates;
  Json ill = Json::array();
  for (const auto& t : v.illegal) ill.push_back(Json::array({g.edge_name(t.first), g.edge_name(t.second)}));
  out["illegal_turns"] = ill;
  if (!v.train_track()) {
    out["witness_power"] = v.witness_power;
    out["witness_edge"] = v.witness_edge >= 0 ? Json(g.edge_name(v.witness_edge)) : Json(nullptr);
  }
  return out;
}

Json to_json(const ToroidalVerdict& v, const Alphabet& alphabet) {
  Json out;
  out["toroidal"] = v.toroidal();
  if (v.toroidal()) {
    out["witness"] = alphabet.format(v.witness);
    out["power"] = v.power;
  } else {
    out["verdict"] = "no witness within bounds";
  }
  return out;
}

Json to_json(const IndexReport& r) {
  Json out;
  Json cls = Json::array();
  for (const auto& c : r.classes) cls.push_back(Json{{"vertex", c.name}, {"fixed_directions", c.fixed_directions}});
  out["classes"] = cls;
  out["fixed_directions"] = r.fixed_directions;
  out["index"] = r.index;
  out["rank"] = r.rank;
  out["ageometric"] = r.ageometric;
  out["nielsen_free"] = r.nielsen_free;
  out["convention"] = r.convention;
  return out;
}

Json to_json(const WhiteheadGraph& w) {
  Json out;
  out["vertex"] = w.principal_name;
  out["directions"] = w.names;
  Json es = Json::array();
  for (auto [u, v] : w.edges) es.push_back(Json::array({w.names[static_cast<std::size_t>(u)], w.names[static_cast<std::size_t>(v)]}));
  out["edges"] = es;
  if (std::any_of(w.labels.begin(), w.labels.end(), [](const std::string& l) { return !l.empty(); })) out["labels"] = w.labels;
  out["automorphism_group_order"] = automorphism_group_order(w);
  return out;
}

Json to_json(const AngleLabeling& a) {
  Json out;
  out["labeled"] = a.labeled();
  if (!a.labeled()) out["offender"] = a.offender;
  Json gs = Json::array();
  for (const auto& g : a.graphs) gs.push_back(to_json(g));
  out["graphs"] = gs;
  return out;
}

Json to_json(const FoldSequence& s) {
  Json out;
  out["start"] = to_json(s.start);
  out["power"] = s.power;
  out["connecting_path"] = s.connecting_path;
  Json events = Json::array();
  for (const auto& st : s.steps) {
    Json e;
    if (st.kind == FoldStep::Kind::Subdivide) {
      e["kind"] = "subdivide";
      e["edge"] = st.subdivision.edge;
      e["t"] = to_json(st.subdivision.t);
      e["vertex"] = st.subdivision.vertex;
    } else {
      e["kind"] = "fold";
      e["e1"] = st.fold.e1;
      e["e2"] = st.fold.e2;
      e["merged_vertex"] = st.fold.merged_vertex;
      e["into_vertex"] = st.fold.into_vertex;
    }
    if (!st.note.empty()) e["note"] = st.note;
    events.push_back(e);
  }
  out["events"] = events;
  out["result"] = to_json(s.result);
  out["train_track"] = s.train_track;
  out["meeting_vertex"] = s.meeting_vertex;
  return out;
}

Json to_json(const CoveringWitness& w, int psi_rank, int phi_rank) {
  const auto af = Alphabet::standard(phi_rank);
  Json out;
  out["subgroup"] = to_json(w.subgroup);
  out["index"] = w.index();
  out["k"] = w.k;
  out["inner_conjugator"] = af.format(w.inner_conjugator);
  out["identification"] = words(w.identification, af);
  out["outer_conjugator"] = Alphabet::standard(psi_rank).format(w.outer_conjugator);
  return out;
}

CoveringWitness witness_from_json(const Json& j, int psi_rank, int phi_rank) {
  const auto af = Alphabet::standard(phi_rank);
  CoveringWitness w;
  w.subgroup = subgroup_from_json(field(j, "subgroup"));
  if (w.subgroup.ambient_rank() != phi_rank) throw SchemaError("subgroup rank differs from the covered automorphism");
  if (!w.subgroup.index()) throw SchemaError("subgroup has infinite index");
  w.k = integer(field(j, "k"), "'k'");
  if (w.k < 1) throw SchemaError("'k' must be positive");
  w.inner_conjugator = word_from(field(j, "inner_conjugator"), af, "inner_conjugator");
  const Json& id = field(j, "identification");
  if (!id.is_array()) throw SchemaError("'identification' must be an array");
  for (const auto& x : id) w.identification.push_back(word_from(x, af, "identification"));
  if (static_cast<int>(w.identification.size()) != psi_rank) throw SchemaError("identification must list one word per generator");
  w.outer_conjugator = word_from(field(j, "outer_conjugator"), Alphabet::standard(psi_rank), "outer_conjugator");
  return w;
}

Json certificate_json(const CoveringWitness& w, const Automorphism& psi, const Automorphism& phi) {
  Json out;
  out["relation"] = "covers";
  out["psi"] = to_json(psi);
  out["phi"] = to_json(phi);
  out["witness"] = to_json(w, psi.rank, phi.rank);
  return out;
}

Certificate certificate_from_json(const Json& j) {
  Certificate c;
  c.psi = automorphism_from_json(field(j, "psi"));
  c.phi = automorphism_from_json(field(j, "phi"));
  c.witness = witness_from_json(field(j, "witness"), c.psi.rank, c.phi.rank);
  return c;
}

Json to_json(const MinimalReport& r) {
  Json out;
  out["candidate"] = to_json(r.candidate);
  out["stretch"] = r.stretch ? to_json(*r.stretch) : Json(nullptr);
  Json h;
  h["train_track"] = r.hypotheses.train_track;
  auto opt = [](const std::optional<bool>& b) { return b ? Json(*b) : Json("unknown"); };
  h["ageometric"] = opt(r.hypotheses.ageometric);
  h["atoroidal"] = opt(r.hypotheses.atoroidal);
  h["asymmetric"] = opt(r.hypotheses.asymmetric);
  h["hold"] = r.hypotheses.hold();
  h["notes"] = r.hypotheses.notes;
  out["hypotheses"] = h;
  out["members"] = r.members;
  out["ledger"] = r.ledger;
  return out;
}

}  // namespace fcomm
