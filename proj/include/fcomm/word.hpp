#pragma once

// Reduced words in a free group on a finite ordered basis.
//
// A letter is a nonzero int: +(i+1) is the i-th basis symbol, -(i+1) its
// inverse. The total order on letters is a < a^-1 < b < b^-1 < ..., and words
// are compared shortlex.

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fcomm {

using Letter = int;

constexpr Letter letter_of(int generator, bool inverse = false) {
  return inverse ? -(generator + 1) : generator + 1;
}
constexpr int generator_of(Letter l) { return (l > 0 ? l : -l) - 1; }
constexpr int letter_key(Letter l) { return 2 * generator_of(l) + (l < 0 ? 1 : 0); }

struct Word {
  std::vector<Letter> letters;

  Word() = default;
  Word(std::initializer_list<Letter> ls) : letters(ls) {}
  explicit Word(std::vector<Letter> ls) : letters(std::move(ls)) {}

  static Word generator(int i) { return Word{letter_of(i)}; }

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  Letter operator[](std::size_t i) const { return letters[i]; }

  bool operator==(const Word&) const = default;
};

/// Shortlex order using letter_key.
bool shortlex_less(const Word& a, const Word& b);
std::strong_ordering shortlex_compare(const Word& a, const Word& b);

Word free_reduce(Word w);
bool is_reduced(const Word& w);
Word inverse(const Word& w);
/// Reduced product.
Word operator*(const Word& a, const Word& b);
Word power(const Word& w, long long n);
Word conjugate_by(const Word& g, const Word& w);  // g w g^-1
bool commute(const Word& a, const Word& b);

struct CyclicReduction {
  Word core;        // cyclically reduced
  Word conjugator;  // w = conjugator * core * conjugator^-1
};

/// Peels cancelling first/last letter pairs. The input is used as given, so
/// `a ~a` yields (empty, a).
CyclicReduction cyclic_reduce(const Word& w);

bool is_cyclically_reduced(const Word& w);
/// Least cyclic rotation of a cyclically reduced word.
Word least_rotation(const Word& w);
/// True iff the reduced words represent conjugate elements.
bool are_conjugate(const Word& a, const Word& b);
/// Primitive root r of a nontrivial reduced word, w = r^n with n >= 1.
Word root(const Word& w);

/// Some g with g y g^-1 = z, if y and z are conjugate. All solutions are
/// g * root(y)^n.
std::optional<Word> conjugator(const Word& y, const Word& z);

/// Some g with g ys[i] g^-1 = zs[i] for every i. Exact: when two of the ys do
/// not commute the solution is unique and the search range is provably wide
/// enough.
std::optional<Word> simultaneous_conjugator(std::span<const Word> ys, std::span<const Word> zs);

/// Replaces every generator i by images[i] and reduces.
Word substitute(const Word& w, std::span<const Word> images);

/// Symbol table used for parsing and printing words and paths.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);
  static Alphabet standard(int rank);  // a, b, c, ... then x26, x27, ...

  int rank() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int i) const { return names_.at(i); }
  std::optional<int> index_of(const std::string& name) const;

  /// Space separated tokens, inverses written with a leading '~'.
  /// "1" or the empty string denote the identity.
  Word parse(const std::string& text) const;
  std::string format(const Word& w) const;

 private:
  std::vector<std::string> names_;
};

}  // namespace fcomm
