#pragma once

// Automorphisms of F_r given by the images of the basis.

#include "fcomm/subgroup.hpp"
#include "fcomm/word.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fcomm {

struct NotAnAutomorphism : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Automorphism {
  int rank = 0;
  std::vector<Word> images;

  static Automorphism identity(int rank);
  /// Images written in the alphabet, one per generator.
  static Automorphism parse(const Alphabet& alphabet, const std::vector<std::string>& images);

  Word apply(const Word& w) const { return substitute(w, images); }
  std::vector<std::string> format(const Alphabet& alphabet) const;

  bool operator==(const Automorphism&) const = default;
};

/// x -> f(g(x)).
Automorphism compose(const Automorphism& f, const Automorphism& g);
/// n-th power; negative n uses the inverse.
Automorphism power(const Automorphism& f, long long n);
/// Inner twist: x -> w f(x) w^-1.
Automorphism twist(const Automorphism& f, const Word& w);

bool is_automorphism(const Automorphism& f);
/// Throws NotAnAutomorphism when the images are not a basis.
Automorphism inverse(const Automorphism& f);

/// Some w with f(x) = w g(x) w^-1 for every generator x, i.e. f and g define
/// the same outer class.
std::optional<Word> outer_conjugator(const Automorphism& f, const Automorphism& g);
inline bool outer_equal(const Automorphism& f, const Automorphism& g) { return outer_conjugator(f, g).has_value(); }

/// Folded graph of f(H).
SubgroupGraph image_subgroup(const Automorphism& f, const SubgroupGraph& h);

/// Restriction of f to an invariant H, written in the Schreier basis of H for
/// `tree`. Throws std::invalid_argument if f(H) != H.
Automorphism restrict_to(const Automorphism& f, const SubgroupGraph& h, const std::vector<SubgroupGraph::EdgeKey>& tree);
inline Automorphism restrict_to(const Automorphism& f, const SubgroupGraph& h) { return restrict_to(f, h, h.default_tree()); }

}  // namespace fcomm
