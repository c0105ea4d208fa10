#include "fcomm/json_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace fcomm;

namespace {

enum Exit { Ok = 0, Negative = 1, InputError = 2, Bound = 3 };

struct Options {
  std::vector<std::string> inputs;
  int k_max = 0;
  int p_max = 2;
  int index_max = 0;
  int length_bound = 6;
  int period_bound = 2;
  std::string format = "json";
  std::string replay;
  std::string out;
};

struct Output {
  std::string text;
  int status = Ok;
};

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_atomically(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    if (!o) throw SchemaError("cannot write '" + tmp.string() + "'");
    o << text;
    if (!o.flush()) throw SchemaError("cannot write '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw SchemaError("cannot write '" + path + "': " + ec.message());
  }
}

Json basis_names(const MarkedGraph& g) {
  Json out = Json::array();
  for (int o : g.basis_orbits()) out.push_back(g.edge(g.positive_edge(o)).id);
  return out;
}

Json matrix_json(const IntMatrix& m) {
  Json out = Json::array();
  for (const auto& row : m) out.push_back(row);
  return out;
}

std::string quoted(const std::string& s) { return Json(s).dump(); }

// validate

Output run_validate(const Options& opt) {
  Json report;
  report["command"] = "validate";
  report["input"] = opt.inputs.at(0);
  std::vector<std::string> violations;
  std::string kind = "unknown";
  try {
    Json doc = read_json(opt.inputs[0]);
    if (doc.is_object() && doc.contains("graph")) {
      kind = "graph_map";
      MarkedGraph g = graph_from_json(doc["graph"]);
      for (const auto& v : g.validate().violations) violations.push_back(v);
      if (violations.empty()) {
        GraphMap f = map_from_json(doc, false);
        for (const auto& v : f.check()) violations.push_back(v);
        if (violations.empty()) {
          try {
            auto a = induced_outer_automorphism(f);
            report["rank"] = a.rank;
          } catch (const NotHomotopyEquivalence& e) {
            violations.push_back(std::string("not a homotopy equivalence: ") + e.what());
          }
        }
      }
    } else if (doc.is_object() && doc.contains("images")) {
      kind = "automorphism";
      report["rank"] = automorphism_from_json(doc).rank;
    } else if (doc.is_object() && doc.contains("basepoint")) {
      kind = "subgroup";
      auto h = subgroup_from_json(doc);
      report["rank"] = h.subgroup_rank();
      if (auto m = h.index()) report["index"] = *m;
    } else if (doc.is_object() && doc.contains("relation")) {
      kind = "certificate";
      certificate_from_json(doc);
    } else {
      kind = "graph";
      MarkedGraph g = graph_from_json(doc);
      for (const auto& v : g.validate().violations) violations.push_back(v);
      if (violations.empty()) report["rank"] = rank(g);
    }
  } catch (const SchemaError& e) {
    violations.push_back(e.what());
  }
  report["kind"] = kind;
  report["valid"] = violations.empty();
  report["violations"] = violations;
  return {dump(report), violations.empty() ? Ok : InputError};
}

// analyze

Output run_analyze(const Options& opt) {
  Json doc = read_json(opt.inputs.at(0));
  if (!doc.is_object() || !doc.contains("graph")) throw SchemaError("analyze expects a graph map document");
  GraphMap f = map_from_json(doc);
  const auto& g = f.graph();
  Automorphism aut;
  try {
    aut = induced_outer_automorphism(f);
  } catch (const NotHomotopyEquivalence& e) {
    throw SchemaError(std::string("map is not a homotopy equivalence: ") + e.what());
  }

  Json r;
  r["command"] = "analyze";
  r["input"] = opt.inputs[0];
  r["rank"] = aut.rank;
  r["basis"] = basis_names(g);
  r["outer_automorphism"] = to_json(aut);
  const IntMatrix m = transition_matrix(f);
  r["transition_matrix"] = matrix_json(m);
  try {
    r["stretch"] = to_json(pf_data(m));
  } catch (const ZeroMatrix&) {
    r["stretch"] = nullptr;
  }
  const auto tt = is_train_track(f, opt.k_max);
  r["train_track"] = to_json(tt, g);

  std::vector<std::string> notes;
  std::vector<WhiteheadGraph> graphs;
  const auto rp = rotationless_power(f, opt.k_max);
  r["rotationless_power"] = rp ? Json(*rp) : Json(nullptr);
  if (!rp) notes.push_back("no rotationless power up to " + std::to_string(opt.k_max));
  r["index_report"] = nullptr;
  r["whitehead"] = nullptr;
  if (rp && tt.train_track() && tt.expanding) {
    const GraphMap fr = power(f, *rp);
    try {
      r["index_report"] = to_json(geometric_index(fr));
    } catch (const std::invalid_argument& e) {
      notes.push_back(std::string("index: ") + e.what());
    } catch (const NotRotationless& e) {
      notes.push_back(std::string("index: ") + e.what());
    }
    const auto labels = angle_labeling(fr);
    r["whitehead"] = to_json(labels);
    graphs = labels.graphs;
  } else if (rp) {
    notes.push_back("index and Whitehead graphs need an expanding train track map");
  }
  r["toroidal"] = to_json(is_atoroidal(aut, opt.period_bound, opt.length_bound), Alphabet::standard(aut.rank));
  r["bounds"] = Json{{"k_max", opt.k_max}, {"period_bound", opt.period_bound}, {"length_bound", opt.length_bound}};
  r["notes"] = notes;

  if (opt.format == "dot") {
    std::string text;
    for (const auto& w : graphs) text += to_dot(w);
    return {text, Ok};
  }
  return {dump(r), Ok};
}

// cover

Output run_cover(const Options& opt) {
  Json doc = read_json(opt.inputs.at(0));
  auto phi = outer_from_json(doc);
  const MarkedGraph base = phi.representative ? phi.representative->graph() : MarkedGraph::rose(phi.rank());
  const GraphMap f = phi.representative ? *phi.representative : GraphMap::identity(base);

  struct Node {
    SubgroupGraph h;
    int index;
  };
  if (enumeration_cost(phi.rank(), opt.index_max) > static_cast<double>(default_tuple_cap))
    throw ResourceBound("index " + std::to_string(opt.index_max) + " in rank " + std::to_string(phi.rank()) +
                        " exceeds the subgroup enumeration bound");
  std::vector<Node> nodes;
  Json entries = Json::array();
  for (int idx = 1; idx <= opt.index_max; ++idx) {
    for (const auto& h : enumerate_subgroups(phi.rank(), idx)) {
      nodes.push_back({h, idx});
      Json e;
      e["index"] = idx;
      e["subgroup"] = to_json(h);
      const auto k = smallest_invariant_power(phi.aut, h, opt.k_max);
      e["invariant_power"] = k ? Json(*k) : Json(nullptr);
      const CoveringMap c = build_cover(base, h);
      e["cover"] = Json{{"rank", rank(c.total)}, {"sheets", c.sheets}, {"graph", to_json(c.total)}};
      e["restriction"] = k ? to_json(restrict_to(power(phi.aut, *k), h)) : Json(nullptr);
      e["lift"] = nullptr;
      if (k && phi.representative) {
        auto lift = lift_map(f, c, *k);
        if (lift.exists()) {
          Json l;
          l["map"] = to_json(*lift.lift);
          l["fiber_choice"] = lift.fiber_choice;
          const auto s0 = phi.stretch();
          const auto tt = is_train_track(*lift.lift, 1);
          if (s0 && tt.train_track() && tt.expanding) {
            const auto lr = log_ratio(*s0, pf_data(transition_matrix(*lift.lift)), 64);
            l["log_ratio"] = lr.rational() ? Json(std::to_string(lr.p) + "/" + std::to_string(lr.q)) : Json(nullptr);
          }
          e["lift"] = l;
        }
      }
      entries.push_back(e);
    }
  }

  if (opt.format == "dot") {
    // Inclusion poset, Hasse edges only.
    const std::size_t n = nodes.size();
    auto contains = [&](std::size_t big, std::size_t small) {
      if (big == small || nodes[small].index % nodes[big].index != 0 || nodes[small].index == nodes[big].index) return false;
      for (const auto& x : nodes[small].h.schreier_basis())
        if (!nodes[big].h.contains(x)) return false;
      return true;
    };
    std::ostringstream o;
    o << "digraph \"covers\" {\n";
    for (std::size_t i = 0; i < n; ++i) o << "  \"H" << i << "\" [label=\"H" << i << " index " << nodes[i].index << "\"];\n";
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (!contains(i, j)) continue;
        bool direct = true;
        for (std::size_t k = 0; k < n && direct; ++k)
          if (contains(i, k) && contains(k, j)) direct = false;
        if (direct) o << "  \"H" << j << "\" -> \"H" << i << "\";\n";
      }
    o << "}\n";
    return {o.str(), Ok};
  }
  Json r;
  r["command"] = "cover";
  r["input"] = opt.inputs[0];
  r["rank"] = phi.rank();
  r["bounds"] = Json{{"index_max", opt.index_max}, {"k_max", opt.k_max}};
  r["subgroups"] = entries;
  return {dump(r), Ok};
}

// compare

Json power_cover_json(const PowerCover& pc, const OuterAutomorphism& a, const OuterAutomorphism& b, Json& certs) {
  Json out;
  out["found"] = pc.found();
  if (pc.found()) {
    out["p"] = pc.p;
    out["k"] = pc.witness.k;
    out["index"] = pc.witness.index();
    out["certificate"] = certs.size();
    certs.push_back(certificate_json(pc.witness, power(a.aut, pc.p), power(b.aut, pc.p)));
  } else {
    out["reason"] = pc.reason;
  }
  return out;
}

Output replay_file(const Options& opt) {
  Json doc = read_json(opt.replay);
  std::vector<Json> certs;
  if (doc.is_object() && doc.contains("certificates")) {
    for (const auto& c : doc["certificates"]) certs.push_back(c);
  } else {
    certs.push_back(doc);
  }
  Json r;
  r["command"] = "replay";
  r["input"] = opt.replay;
  Json results = Json::array();
  bool all = !certs.empty();
  for (const auto& c : certs) {
    auto cert = certificate_from_json(c);
    auto failures = replay(cert.witness, cert.psi, cert.phi);
    all = all && failures.empty();
    results.push_back(Json{{"valid", failures.empty()}, {"k", cert.witness.k}, {"index", cert.witness.index()}, {"failures", failures}});
  }
  r["certificates"] = results;
  r["valid"] = all;
  return {dump(r), all ? Ok : Negative};
}

Output run_compare(const Options& opt) {
  if (!opt.replay.empty()) return replay_file(opt);
  if (opt.inputs.size() != 2) throw SchemaError("compare expects two inputs (or --replay)");
  const auto psi = outer_from_json(read_json(opt.inputs[0]));
  const auto phi = outer_from_json(read_json(opt.inputs[1]));
  SearchBounds bounds;
  bounds.k_max = opt.k_max;
  bounds.p_max = opt.p_max;
  bounds.index_max = opt.index_max;

  Json certs = Json::array();
  Json r;
  r["command"] = "compare";
  r["inputs"] = opt.inputs;
  r["psi"] = to_json(psi.aut);
  r["phi"] = to_json(phi.aut);
  r["bounds"] = Json{{"k_max", opt.k_max}, {"p_max", opt.p_max}, {"index_max", opt.index_max}};

  std::string verdict = "none within bounds";
  struct Arrow {
    std::string from, to;
    int k, index;
  };
  std::vector<Arrow> poset;
  const auto cr = covers_relation(psi, phi, opt.k_max, bounds);
  Json cj;
  cj["found"] = cr.found();
  if (cr.found()) {
    cj["k"] = cr.witness.k;
    cj["index"] = cr.witness.index();
    cj["certificate"] = certs.size();
    certs.push_back(certificate_json(cr.witness, psi.aut, phi.aut));
    verdict = "psi covers phi";
    poset.push_back({"psi", "phi", cr.witness.k, cr.witness.index()});
  } else {
    cj["reason"] = cr.reason;
  }
  r["covers"] = cj;
  if (!cr.found()) {
    const auto gt = greater_than(psi, phi, bounds);
    r["greater_than"] = power_cover_json(gt, psi, phi, certs);
    if (gt.found()) {
      verdict = "psi^" + std::to_string(gt.p) + " covers phi^" + std::to_string(gt.p);
      poset.push_back({"psi", "phi", gt.witness.k, gt.witness.index()});
    } else {
      const auto cc = commensurable(psi, phi, bounds);
      Json m;
      m["found"] = cc.found();
      if (cc.found()) {
        m["common_cover"] = to_json(cc.phi3.aut);
        m["over_psi"] = power_cover_json(cc.over_first, cc.phi3, psi, certs);
        m["over_phi"] = power_cover_json(cc.over_second, cc.phi3, phi, certs);
        verdict = "commensurable";
        poset.push_back({"common", "psi", cc.over_first.witness.k, cc.over_first.witness.index()});
        poset.push_back({"common", "phi", cc.over_second.witness.k, cc.over_second.witness.index()});
      } else {
        m["reason"] = cc.reason;
      }
      r["commensurable"] = m;
    }
  }
  r["verdict"] = verdict;
  r["certificates"] = certs;
  const int status = certs.empty() ? Negative : Ok;
  if (opt.format == "dot") {
    std::ostringstream o;
    o << "digraph \"compare\" {\n";
    o << "  \"psi\" [label=" << quoted(opt.inputs[0]) << "];\n";
    o << "  \"phi\" [label=" << quoted(opt.inputs[1]) << "];\n";
    if (!poset.empty() && poset.front().from == "common") o << "  \"common\" [label=\"common cover\"];\n";
    for (const auto& a : poset)
      o << "  \"" << a.from << "\" -> \"" << a.to << "\" [label=\"k=" << a.k << " index=" << a.index << "\"];\n";
    o << "}\n";
    return {o.str(), status};
  }
  return {dump(r), status};
}

// minimize

Output run_minimize(const Options& opt) {
  if (opt.format == "dot") throw SchemaError("minimize writes JSON only");
  std::vector<OuterAutomorphism> seeds;
  for (const auto& path : opt.inputs) seeds.push_back(outer_from_json(read_json(path)));
  MinimalBounds b;
  b.search.k_max = opt.k_max;
  b.search.p_max = opt.p_max;
  b.search.index_max = opt.index_max;
  b.toroidal_power = opt.period_bound;
  b.toroidal_length = opt.length_bound;
  Json r;
  r["command"] = "minimize";
  r["inputs"] = opt.inputs;
  r["report"] = to_json(minimal_element_search(seeds, b));
  return {dump(r), Ok};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fibered commensurability toolkit for free group automorphisms"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::map<std::string, Options> opts;
  auto add = [&](const std::string& name, const std::string& help, int k_default, int index_default, std::size_t min_inputs,
                 int max_inputs) {
    auto& o = opts[name];
    o.k_max = k_default;
    o.index_max = index_default;
    auto* sub = app.add_subcommand(name, help);
    auto* in = sub->add_option("inputs", o.inputs, "Input JSON documents")->check(CLI::ExistingFile);
    in->expected(static_cast<int>(min_inputs), max_inputs);
    if (min_inputs > 0) in->required();
    sub->add_option("--k-max", o.k_max, "Largest power tried")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--p-max", o.p_max, "Largest common power tried")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--index-max", o.index_max, "Largest subgroup index")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--length-bound", o.length_bound, "Word length bound for toroidality")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--period-bound", o.period_bound, "Power bound for toroidality")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--format", o.format, "Output format")->capture_default_str()->check(CLI::IsMember({"json", "dot"}));
    sub->add_option("--out", o.out, "Output file (written atomically)");
    return sub;
  };
  add("validate", "Check a graph, map, automorphism, subgroup or certificate document", 12, 2, 1, 1);
  add("analyze", "Stretch factor, train track, index, Whitehead graphs and toroidality of a map", 12, 2, 1, 1);
  add("cover", "Enumerate finite-index subgroups, covers and lifts", 6, 2, 1, 1);
  auto* cmp = add("compare", "Covering and commensurability search with certificates", 3, 3, 0, 2);
  cmp->add_option("--replay", opts["compare"].replay, "Re-verify the certificates in a file")->check(CLI::ExistingFile);
  add("minimize", "Bounded minimal-element search over the given seeds", 3, 3, 1, -1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return InputError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const Options& opt = opts[name];
  Output result;
  try {
    if (name == "validate") result = run_validate(opt);
    else if (name == "analyze") result = run_analyze(opt);
    else if (name == "cover") result = run_cover(opt);
    else if (name == "compare") result = run_compare(opt);
    else result = run_minimize(opt);
  } catch (const SchemaError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return InputError;
  } catch (const ResourceBound& e) {
    std::cerr << "resource bound: " << e.what() << "\n";
    return Bound;
  } catch (const SolverBound& e) {
    std::cerr << "resource bound: " << e.what() << "\n";
    return Bound;
  } catch (const StabilizationBound& e) {
    std::cerr << "resource bound: " << e.what() << "\n";
    return Bound;
  } catch (const InfiniteIndex& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return InputError;
  } catch (const NotCommensurableRatio& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return InputError;
  }

  try {
    if (opt.out.empty()) std::cout << result.text << std::flush;
    else write_atomically(opt.out, result.text);
  } catch (const SchemaError& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return InputError;
  }
  return result.status;
}
