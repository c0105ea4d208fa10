#pragma once

// Exact Perron-Frobenius data of nonnegative integer matrices.

#include "fcomm/graph_map.hpp"
#include "fcomm/numeric.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fcomm {

struct ZeroMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Integer polynomial, coefficients lowest degree first, no trailing zeros.
struct Polynomial {
  std::vector<BigInt> coeffs;

  Polynomial() = default;
  explicit Polynomial(std::vector<BigInt> c);
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool zero() const { return coeffs.empty(); }
  Rational eval(const Rational& x) const;
  std::string to_string() const;
  bool operator==(const Polynomial&) const = default;
};

using BigMatrix = std::vector<std::vector<BigInt>>;

BigMatrix to_big(const IntMatrix& m);
/// det(xI - M) by Faddeev-LeVerrier.
Polynomial characteristic_polynomial(const BigMatrix& m);
inline Polynomial characteristic_polynomial(const IntMatrix& m) { return characteristic_polynomial(to_big(m)); }

Polynomial derivative(const Polynomial& p);
/// Primitive gcd with positive leading coefficient.
Polynomial gcd(const Polynomial& a, const Polynomial& b);
/// Exact quotient when b divides a over the integers.
std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b);
Polynomial square_free_part(const Polynomial& p);
/// p with every factor (x - r) removed.
Polynomial strip_root(const Polynomial& p, const Rational& r);

/// Distinct real roots of p in (lo, hi]; neither endpoint may be a root.
int count_roots(const Polynomial& p, const Rational& lo, const Rational& hi);
/// Isolating interval (lo, hi] of the largest real root, of width at most
/// `width`, or a single point when the root is rational. Empty optional when
/// p has no real root.
struct RootEnclosure {
  Rational lower;
  Rational upper;
  bool exact = false;
};
std::optional<RootEnclosure> largest_real_root(const Polynomial& p, const Rational& width);

struct StretchFactor {
  Polynomial char_poly;
  Polynomial minimal_poly;
  RootEnclosure enclosure;
  /// Strong connectivity of the digraph of the matrix.
  bool irreducible = false;
  /// PF root strictly greater than one.
  bool expanding = false;
  /// Right and left PF eigenvectors, normalized to maximum one.
  std::vector<Rational> eigenvector;
  std::vector<Rational> lengths;

  double approx() const;
};

/// Throws ZeroMatrix when the spectral radius is zero.
StretchFactor pf_data(const IntMatrix& m);

struct LogRatio {
  enum class Kind { Rational, NotRationalWithinBound };
  Kind kind = Kind::NotRationalWithinBound;
  long long p = 0;
  long long q = 0;
  bool rational() const { return kind == Kind::Rational; }
};

/// Rational(p/q) when log lambda2 / log lambda1 = p/q with p, q <= bound,
/// i.e. lambda1^p = lambda2^q, certified exactly. Both roots must exceed one.
LogRatio log_ratio(const StretchFactor& s1, const StretchFactor& s2, long long bound);

/// Exact test of lambda1^p == lambda2^q.
bool powers_equal(const StretchFactor& s1, long long p, const StretchFactor& s2, long long q);

}  // namespace fcomm
