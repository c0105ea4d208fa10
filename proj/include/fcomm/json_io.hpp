#pragma once

// JSON interchange for graphs, maps, subgroups, certificates and reports.
// Object keys keep insertion order so output is stable across runs. Every
// number that is not a small integer is written as an exact rational string.

#include "fcomm/commensurability.hpp"
#include "fcomm/folds.hpp"
#include "fcomm/maps.hpp"
#include "fcomm/whitehead.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace fcomm {

using Json = nlohmann::ordered_json;

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);
Json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j);
/// Exact bounds plus decimal renderings rounded outward.
Json to_json(const RootEnclosure& e, int digits = 12);

Json to_json(const MarkedGraph& g);
MarkedGraph graph_from_json(const Json& j);

Json to_json(const GraphMap& f);
/// Throws SchemaError on malformed documents. With `checked` false the images
/// are parsed but not validated (for reporting).
GraphMap map_from_json(const Json& j, bool checked = true);

/// {"rank": r, "images": [...]} over the standard alphabet.
Json to_json(const Automorphism& a);
Automorphism automorphism_from_json(const Json& j);

/// Accepts a graph map document or an automorphism document.
OuterAutomorphism outer_from_json(const Json& j);
Json to_json(const OuterAutomorphism& o);

Json to_json(const SubgroupGraph& h);
SubgroupGraph subgroup_from_json(const Json& j);

Json to_json(const StretchFactor& s);
Json to_json(const TrainTrackVerdict& v, const MarkedGraph& g);
Json to_json(const ToroidalVerdict& v, const Alphabet& alphabet);
Json to_json(const IndexReport& r);
Json to_json(const WhiteheadGraph& w);
Json to_json(const AngleLabeling& a);
Json to_json(const FoldSequence& s);
Json to_json(const CoveringWitness& w, int psi_rank, int phi_rank);
CoveringWitness witness_from_json(const Json& j, int psi_rank, int phi_rank);

/// Witness plus the automorphisms it relates, enough to replay it alone.
Json certificate_json(const CoveringWitness& w, const Automorphism& psi, const Automorphism& phi);
struct Certificate {
  CoveringWitness witness;
  Automorphism psi;
  Automorphism phi;
};
Certificate certificate_from_json(const Json& j);

Json to_json(const MinimalReport& r);

}  // namespace fcomm
