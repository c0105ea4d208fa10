#pragma once

// The covering order on outer automorphisms: certified covering witnesses,
// the power order, commensurability, covering equivalence, quotient descent,
// gcd reduction of stretch factors and a bounded minimal-element search.

#include "fcomm/automorphism.hpp"
#include "fcomm/covers.hpp"
#include "fcomm/graph_map.hpp"
#include "fcomm/spectral.hpp"
#include "fcomm/subgroup.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fcomm {

struct StabilizationBound : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotCommensurableRatio : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Automorphism standing for its outer class, with an optional topological
/// representative.
struct OuterAutomorphism {
  Automorphism aut;
  std::optional<GraphMap> representative;

  int rank() const { return aut.rank; }
  static OuterAutomorphism from_automorphism(Automorphism a) { return {std::move(a), std::nullopt}; }
  /// Uses the induced automorphism of the marking.
  static OuterAutomorphism from_map(const GraphMap& f);
  /// Stretch factor when the representative is an expanding train track map.
  std::optional<StretchFactor> stretch() const;
};

OuterAutomorphism power(const OuterAutomorphism& phi, int n);

/// Certificate that psi covers phi: with Phi' = i_c o Phi^k, Phi'(H) = H and
/// c Phi^k(theta(x)) c^-1 = theta(w Psi(x) w^-1) for every generator x of
/// F(psi), where theta is an isomorphism of F(psi) onto H.
struct CoveringWitness {
  SubgroupGraph subgroup;
  int k = 1;
  Word inner_conjugator;
  std::vector<Word> identification;
  Word outer_conjugator;

  int index() const { return *subgroup.index(); }
};

/// Empty when the witness verifies by direct word computation.
std::vector<std::string> replay(const CoveringWitness& w, const Automorphism& psi, const Automorphism& phi);

/// Witness for psi over chi from witnesses psi over phi and phi over chi.
CoveringWitness compose_witnesses(const CoveringWitness& psi_phi, const Automorphism& phi, const CoveringWitness& phi_chi,
                                  const Automorphism& chi);

struct SearchBounds {
  int k_max = 3;
  int p_max = 2;
  int index_max = 3;
  /// Total image length for the conjugator search of covering equivalence.
  int conjugator_length = 4;
  /// Identification candidates tried per (subgroup, power, conjugator).
  std::size_t identification_cap = 200000;
};

struct CoverSearch {
  enum class Kind { Witness, NoneWithinBounds };
  Kind kind = Kind::NoneWithinBounds;
  CoveringWitness witness;
  /// Why the search ended without a witness; "exact" obstructions say so.
  std::string reason;
  bool found() const { return kind == Kind::Witness; }
};

CoverSearch covers_relation(const OuterAutomorphism& psi, const OuterAutomorphism& phi, int k_max,
                            const SearchBounds& bounds = {});

struct PowerCover {
  enum class Kind { Greater, NoneWithinBounds };
  Kind kind = Kind::NoneWithinBounds;
  int p = 0;
  CoveringWitness witness;
  std::string reason;
  bool found() const { return kind == Kind::Greater; }
};

/// Least p <= p_max with phi1^p covering phi2^p.
PowerCover greater_than(const OuterAutomorphism& phi1, const OuterAutomorphism& phi2, const SearchBounds& bounds = {});

struct CommonCover {
  enum class Kind { Certificate, NoneWithinBounds };
  Kind kind = Kind::NoneWithinBounds;
  OuterAutomorphism phi3;
  PowerCover over_first;
  PowerCover over_second;
  std::string reason;
  bool found() const { return kind == Kind::Certificate; }
};

CommonCover commensurable(const OuterAutomorphism& phi1, const OuterAutomorphism& phi2, const SearchBounds& bounds = {});

struct Equivalence {
  enum class Kind { EquivalentWithConjugator, EquivalentNoConjugatorFound, NotWithinBounds };
  Kind kind = Kind::NotWithinBounds;
  Automorphism conjugator;
  PowerCover forward;
  PowerCover backward;
};

Equivalence covering_equivalent(const OuterAutomorphism& phi1, const OuterAutomorphism& phi2, const SearchBounds& bounds = {});

enum class AnglePolicy {
  /// Both maps must have asymmetric stable Whitehead graphs.
  Strict,
  /// Angles are reported but not required.
  Relaxed
};

struct QuotientResult {
  MarkedGraph quotient;
  GraphMap induced;
  std::vector<VertexId> vertex_projection;
  std::vector<EdgeId> edge_projection;
  /// pi o g = gbar o pi on every edge after tightening.
  bool commutes = false;
  /// pi factors through the covering projection.
  bool factors = false;
  /// Basis of G pushed through pi and folded: rank, relation flag, index.
  int pushed_rank = 0;
  bool injective = false;
  std::optional<int> image_index;
  int iterations = 0;
  std::string angle_note;
};

struct Descent {
  enum class Kind { Quotient, SymmetricIWG, NotDescendable };
  Kind kind = Kind::NotDescendable;
  QuotientResult result;
  std::string reason;
  bool found() const { return kind == Kind::Quotient; }
};

/// g on the total graph of p, h on its base, with p o g^n = h o p.
Descent quotient_descent(const GraphMap& g, const GraphMap& h, const CoveringMap& p, int n,
                         AnglePolicy policy = AnglePolicy::Strict);

struct GcdResult {
  enum class Kind { Reduced, AlreadyIntegral };
  Kind kind = Kind::AlreadyIntegral;
  OuterAutomorphism result;
  /// result = phi2^n o phi1^m.
  long long m = 0;
  long long n = 0;
  /// log lambda2 / log lambda1 = p / q.
  long long p = 0;
  long long q = 0;
  /// lambda(result)^q = lambda1, certified on a representative.
  bool certified = false;
  std::string note;
};

GcdResult gcd_reduce(const OuterAutomorphism& phi1, const OuterAutomorphism& phi2, long long ratio_bound = 64);

/// Graph automorphisms of f's graph commuting with f, acting freely, and the
/// covering of the quotient they define.
std::optional<CoveringMap> deck_quotient(const GraphMap& f);

struct Hypotheses {
  bool train_track = false;
  std::optional<bool> ageometric;
  std::optional<bool> atoroidal;
  std::optional<bool> asymmetric;
  std::vector<std::string> notes;
  bool hold() const { return train_track && ageometric.value_or(false) && atoroidal.value_or(false) && asymmetric.value_or(false); }
};

struct MinimalReport {
  OuterAutomorphism candidate;
  std::optional<StretchFactor> stretch;
  Hypotheses hypotheses;
  std::vector<std::string> ledger;
  int members = 0;
};

struct MinimalBounds {
  SearchBounds search;
  int rounds = 8;
  AnglePolicy policy = AnglePolicy::Relaxed;
  int toroidal_power = 2;
  int toroidal_length = 6;
};

MinimalReport minimal_element_search(const std::vector<OuterAutomorphism>& seeds, const MinimalBounds& bounds = {});

}  // namespace fcomm
