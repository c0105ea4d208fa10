#include "fcomm/spectral.hpp"

#include "fcomm/maps.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <sstream>

namespace fcomm {

namespace {

using RPoly = std::vector<Rational>;  // lowest first

void trim(RPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

RPoly to_rational(const Polynomial& p) { return RPoly(p.coeffs.begin(), p.coeffs.end()); }

Polynomial to_primitive(RPoly p) {
  trim(p);
  if (p.empty()) return {};
  BigInt den = 1;
  for (const auto& c : p) den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(c));
  std::vector<BigInt> out;
  BigInt g = 0;
  for (const auto& c : p) {
    BigInt v = boost::multiprecision::numerator(c) * (den / boost::multiprecision::denominator(c));
    out.push_back(v);
    g = boost::multiprecision::gcd(g, v);
  }
  if (g < 0) g = -g;
  for (auto& c : out) c /= g;
  if (out.back() < 0)
    for (auto& c : out) c = -c;
  return Polynomial(std::move(out));
}

RPoly rem(RPoly a, const RPoly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    const Rational f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

Rational eval(const RPoly& p, const Rational& x) {
  Rational acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<RPoly> sturm_chain(const Polynomial& p) {
  std::vector<RPoly> chain{to_rational(p), to_rational(derivative(p))};
  trim(chain[1]);
  while (!chain.back().empty()) {
    RPoly r = rem(chain[chain.size() - 2], chain.back());
    for (auto& c : r) c = -c;
    if (r.empty()) break;
    chain.push_back(std::move(r));
  }
  if (chain.back().empty()) chain.pop_back();
  return chain;
}

int sign_changes(const std::vector<RPoly>& chain, const Rational& x) {
  int changes = 0;
  int last = 0;
  for (const auto& q : chain) {
    const Rational v = eval(q, x);
    const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

Rational cauchy_bound(const Polynomial& p) {
  Rational m = 0;
  for (int i = 0; i < p.degree(); ++i) {
    Rational r = Rational(p.coeffs[static_cast<std::size_t>(i)]) / Rational(p.coeffs.back());
    if (r < 0) r = -r;
    m = std::max(m, r);
  }
  return m + 1;
}

BigMatrix multiply(const BigMatrix& a, const BigMatrix& b) {
  const std::size_t n = a.size();
  BigMatrix c(n, std::vector<BigInt>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

BigMatrix matrix_power(BigMatrix m, long long e) {
  const std::size_t n = m.size();
  BigMatrix acc(n, std::vector<BigInt>(n, 0));
  for (std::size_t i = 0; i < n; ++i) acc[i][i] = 1;
  while (e > 0) {
    if (e & 1) acc = multiply(acc, m);
    e >>= 1;
    if (e) m = multiply(m, m);
  }
  return acc;
}

BigMatrix companion(const Polynomial& p) {
  const std::size_t n = static_cast<std::size_t>(p.degree());
  BigMatrix c(n, std::vector<BigInt>(n, 0));
  for (std::size_t i = 1; i < n; ++i) c[i][i - 1] = 1;
  for (std::size_t i = 0; i < n; ++i) c[i][n - 1] = -p.coeffs[i];
  return c;
}

using Complex = std::complex<long double>;

std::vector<Complex> numeric_roots(const Polynomial& p) {
  const int n = p.degree();
  std::vector<long double> c;
  for (const auto& x : p.coeffs) c.push_back(static_cast<long double>(x) / static_cast<long double>(p.coeffs.back()));
  std::vector<Complex> z(static_cast<std::size_t>(n));
  const Complex seed(0.4L, 0.9L);
  for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = std::pow(seed, i);
  auto f = [&](Complex x) {
    Complex acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  };
  for (int iter = 0; iter < 2000; ++iter) {
    long double change = 0;
    for (int i = 0; i < n; ++i) {
      Complex den = 1;
      for (int j = 0; j < n; ++j)
        if (j != i) den *= z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
      const Complex step = f(z[static_cast<std::size_t>(i)]) / den;
      z[static_cast<std::size_t>(i)] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-18L) break;
  }
  return z;
}

std::optional<Polynomial> integer_poly_from_roots(const std::vector<Complex>& roots) {
  std::vector<Complex> c{Complex(1)};
  for (const auto& r : roots) {
    std::vector<Complex> next(c.size() + 1, Complex(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  std::vector<BigInt> out;
  for (const auto& x : c) {
    const long double re = std::round(x.real());
    if (std::abs(x.imag()) > 1e-6L || std::abs(x.real() - re) > 1e-6L) return std::nullopt;
    out.push_back(BigInt(static_cast<long long>(re)));
  }
  return Polynomial(std::move(out));
}

Polynomial minimal_polynomial_of_largest_root(const Polynomial& p, const RootEnclosure& enc) {
  Polynomial sf = square_free_part(p);
  if (sf.degree() == 1) return sf;
  auto roots = numeric_roots(sf);
  const long double target = static_cast<long double>(enc.lower + enc.upper) / 2;
  std::size_t pf = 0;
  for (std::size_t i = 0; i < roots.size(); ++i)
    if (std::abs(roots[i] - Complex(target)) < std::abs(roots[pf] - Complex(target))) pf = i;
  std::vector<Complex> others;
  for (std::size_t i = 0; i < roots.size(); ++i)
    if (i != pf) others.push_back(roots[i]);
  const std::size_t m = others.size();
  auto contains_root = [&](const Polynomial& q) {
    if (enc.exact) return q.eval(enc.lower) == 0;
    return count_roots(q, enc.lower, enc.upper) == 1;
  };
  if (m <= 24) {
    for (std::size_t size = 0; size <= m; ++size) {
      // Subsets of the given size in lexicographic order.
      std::vector<std::size_t> idx(size);
      for (std::size_t i = 0; i < size; ++i) idx[i] = i;
      while (true) {
        std::vector<Complex> chosen{roots[pf]};
        for (std::size_t i : idx) chosen.push_back(others[i]);
        if (auto q = integer_poly_from_roots(chosen)) {
          if (divide_exact(sf, *q) && contains_root(*q)) return *q;
        }
        std::size_t k = size;
        while (k > 0 && idx[k - 1] == m - size + k - 1) --k;
        if (k == 0) break;
        ++idx[k - 1];
        for (std::size_t j = k; j < size; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
  }
  return sf;
}

std::vector<Rational> pf_vector(const IntMatrix& m, bool left) {
  const std::size_t n = m.size();
  std::vector<long double> v(n, 1.0L);
  for (int iter = 0; iter < 5000; ++iter) {
    std::vector<long double> w(n, 0.0L);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = v[i];
      for (std::size_t j = 0; j < n; ++j) w[i] += static_cast<long double>(left ? m[j][i] : m[i][j]) * v[j];
    }
    const long double mx = *std::max_element(w.begin(), w.end());
    if (mx <= 0) break;
    long double diff = 0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] /= mx;
      diff = std::max(diff, std::abs(w[i] - v[i]));
    }
    v = std::move(w);
    if (diff < 1e-16L) break;
  }
  std::vector<Rational> out;
  const long long scale = 1'000'000'000'000LL;
  for (long double x : v) out.push_back(Rational(static_cast<long long>(std::llround(x * scale)), scale));
  return out;
}

Rational abs_value(const Rational& x) { return x < 0 ? Rational(-x) : x; }

BigInt floor_of(const Rational& x) {
  BigInt n = boost::multiprecision::numerator(x);
  const BigInt d = boost::multiprecision::denominator(x);
  BigInt q = n / d;
  if (q * d > n) --q;
  return q;
}

}  // namespace

Polynomial strip_root(const Polynomial& p, const Rational& r) {
  RPoly q = to_rational(p);
  trim(q);
  while (q.size() >= 2 && eval(q, r) == 0) {
    RPoly quot(q.size() - 1, 0);
    Rational carry = 0;
    for (std::size_t i = q.size(); i-- > 1;) {
      carry = q[i] + carry * r;
      quot[i - 1] = carry;
    }
    q = std::move(quot);
  }
  return to_primitive(q);
}

Polynomial::Polynomial(std::vector<BigInt> c) : coeffs(std::move(c)) {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
}

Rational Polynomial::eval(const Rational& x) const { return fcomm::eval(to_rational(*this), x); }

std::string Polynomial::to_string() const {
  if (coeffs.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    BigInt c = coeffs[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    const bool neg = c < 0;
    if (neg) c = -c;
    if (first) os << (neg ? "-" : "");
    else os << (neg ? " - " : " + ");
    first = false;
    if (c != 1 || i == 0) os << c;
    if (i >= 1) os << 'x';
    if (i >= 2) os << '^' << i;
  }
  return os.str();
}

BigMatrix to_big(const IntMatrix& m) {
  BigMatrix out;
  for (const auto& row : m) out.emplace_back(row.begin(), row.end());
  return out;
}

Polynomial characteristic_polynomial(const BigMatrix& a) {
  const std::size_t n = a.size();
  std::vector<BigInt> c(n + 1, 0);
  c[n] = 1;
  BigMatrix mk(n, std::vector<BigInt>(n, 0));
  for (std::size_t k = 1; k <= n; ++k) {
    BigMatrix next = multiply(a, mk);
    for (std::size_t i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
    mk = std::move(next);
    BigMatrix am = multiply(a, mk);
    BigInt tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am[i][i];
    c[n - k] = -tr / static_cast<long long>(k);
  }
  return Polynomial(std::move(c));
}

Polynomial derivative(const Polynomial& p) {
  std::vector<BigInt> out;
  for (std::size_t i = 1; i < p.coeffs.size(); ++i) out.push_back(p.coeffs[i] * static_cast<long long>(i));
  return Polynomial(std::move(out));
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  RPoly x = to_rational(a);
  RPoly y = to_rational(b);
  trim(x);
  trim(y);
  while (!y.empty()) {
    RPoly r = rem(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return to_primitive(x);
}

std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b) {
  if (b.zero()) return std::nullopt;
  RPoly r = to_rational(a);
  const RPoly d = to_rational(b);
  if (r.size() < d.size()) {
    if (a.zero()) return Polynomial{};
    return std::nullopt;
  }
  RPoly q(r.size() - d.size() + 1, 0);
  while (r.size() >= d.size() && !r.empty()) {
    const Rational f = r.back() / d.back();
    const std::size_t shift = r.size() - d.size();
    q[shift] = f;
    for (std::size_t i = 0; i < d.size(); ++i) r[shift + i] -= f * d[i];
    r.pop_back();
    trim(r);
  }
  if (!r.empty()) return std::nullopt;
  std::vector<BigInt> out;
  for (const auto& c : q) {
    if (boost::multiprecision::denominator(c) != 1) return std::nullopt;
    out.push_back(boost::multiprecision::numerator(c));
  }
  return Polynomial(std::move(out));
}

Polynomial square_free_part(const Polynomial& p) {
  Polynomial g = gcd(p, derivative(p));
  RPoly num = to_rational(p);
  RPoly den = to_rational(g);
  RPoly q(num.size() - den.size() + 1, 0);
  while (num.size() >= den.size() && !num.empty()) {
    const Rational f = num.back() / den.back();
    const std::size_t shift = num.size() - den.size();
    q[shift] = f;
    for (std::size_t i = 0; i < den.size(); ++i) num[shift + i] -= f * den[i];
    num.pop_back();
    trim(num);
  }
  return to_primitive(q);
}

int count_roots(const Polynomial& p, const Rational& lo, const Rational& hi) {
  auto chain = sturm_chain(p);
  return sign_changes(chain, lo) - sign_changes(chain, hi);
}

std::optional<RootEnclosure> largest_real_root(const Polynomial& p, const Rational& width) {
  if (p.degree() < 1) return std::nullopt;
  const auto chain = sturm_chain(p);
  const RPoly rp = to_rational(p);
  Rational hi = cauchy_bound(p);
  Rational lo = -hi;
  if (sign_changes(chain, lo) - sign_changes(chain, hi) == 0) return std::nullopt;
  // Invariant: exactly the largest root lies in (lo, hi] once narrowed.
  while (true) {
    const int total = sign_changes(chain, lo) - sign_changes(chain, hi);
    if (total == 1 && hi - lo <= width) break;
    const Rational mid = (lo + hi) / 2;
    if (eval(rp, mid) == 0) {
      const Polynomial rest = strip_root(p, mid);
      if (rest.degree() >= 1 && count_roots(rest, mid, cauchy_bound(rest) + abs_value(mid) + 1) > 0)
        return largest_real_root(rest, width);
      return RootEnclosure{mid, mid, true};
    }
    if (sign_changes(chain, mid) - sign_changes(chain, hi) >= 1) lo = mid;
    else hi = mid;
  }
  // Rational roots have denominators dividing the leading coefficient.
  BigInt lead = p.coeffs.back();
  if (lead < 0) lead = -lead;
  if (lead <= 1'000'000) {
    for (BigInt q = 1; q <= lead; ++q) {
      if (lead % q != 0) continue;
      const BigInt n = floor_of(hi * Rational(q));
      const Rational r(n, q);
      if (r > lo && eval(rp, r) == 0) return RootEnclosure{r, r, true};
    }
  }
  return RootEnclosure{lo, hi, false};
}

double StretchFactor::approx() const { return static_cast<double>((enclosure.lower + enclosure.upper) / 2); }

StretchFactor pf_data(const IntMatrix& m) {
  if (m.empty()) throw ZeroMatrix("empty matrix");
  for (const auto& row : m)
    if (row.size() != m.size()) throw std::invalid_argument("matrix is not square");
  StretchFactor s;
  s.char_poly = characteristic_polynomial(m);
  bool nilpotent = true;
  for (int i = 0; i < s.char_poly.degree(); ++i) nilpotent &= s.char_poly.coeffs[static_cast<std::size_t>(i)] == 0;
  if (nilpotent) throw ZeroMatrix("spectral radius is zero");
  auto enc = largest_real_root(s.char_poly, Rational(1, 1'000'000'000'000LL));
  if (!enc) throw std::logic_error("nonnegative matrix without a real eigenvalue");
  s.enclosure = *enc;
  s.minimal_poly = minimal_polynomial_of_largest_root(s.char_poly, s.enclosure);
  s.irreducible = is_irreducible(m);
  s.expanding = s.enclosure.lower > 1;
  s.eigenvector = pf_vector(m, false);
  s.lengths = pf_vector(m, true);
  return s;
}

namespace {

// Polynomial whose roots are the p-th powers of the roots of q.
Polynomial power_polynomial(const Polynomial& q, long long p) {
  return characteristic_polynomial(matrix_power(companion(q), p));
}

}  // namespace

bool powers_equal(const StretchFactor& s1, long long p, const StretchFactor& s2, long long q) {
  if (s1.enclosure.exact && s2.enclosure.exact) {
    Rational a = 1;
    Rational b = 1;
    for (long long i = 0; i < p; ++i) a *= s1.enclosure.lower;
    for (long long i = 0; i < q; ++i) b *= s2.enclosure.lower;
    return a == b;
  }
  const Polynomial pa = power_polynomial(s1.minimal_poly, p);
  const Polynomial pb = power_polynomial(s2.minimal_poly, q);
  // lambda1^p and lambda2^q are the largest real roots of pa and pb, and they
  // agree iff the largest real root of gcd(pa, pb) is the largest of both.
  const Polynomial g = gcd(pa, pb);
  if (g.degree() < 1) return false;
  const Rational width(1, 1'000'000'000'000LL);
  auto c = largest_real_root(g, width);
  if (!c) return false;
  const Rational top = std::max(cauchy_bound(pa), cauchy_bound(pb)) + 1;
  if (c->exact) {
    const Polynomial ra = strip_root(pa, c->lower);
    const Polynomial rb = strip_root(pb, c->lower);
    return (ra.degree() < 1 || count_roots(ra, c->lower, top) == 0) && (rb.degree() < 1 || count_roots(rb, c->lower, top) == 0);
  }
  Rational lo = c->lower;
  Rational hi = c->upper;
  for (int i = 0; i < 400; ++i) {
    if (pa.eval(lo) != 0 && pb.eval(lo) != 0 && count_roots(pa, lo, top) == 1 && count_roots(pb, lo, top) == 1) return true;
    // Roots of pa or pb above the gcd root rule out equality.
    if (pa.eval(hi) != 0 && pb.eval(hi) != 0 && (count_roots(pa, hi, top) > 0 || count_roots(pb, hi, top) > 0)) return false;
    const Rational mid = (lo + hi) / 2;
    if (count_roots(g, mid, hi) == 1 && g.eval(mid) != 0) lo = mid;
    else hi = mid;
  }
  return false;
}

LogRatio log_ratio(const StretchFactor& s1, const StretchFactor& s2, long long bound) {
  if (!s1.expanding || !s2.expanding) throw std::invalid_argument("log ratio needs stretch factors greater than one");
  const long double r = std::log(static_cast<long double>(s2.approx())) / std::log(static_cast<long double>(s1.approx()));
  LogRatio out;
  for (long long q = 1; q <= bound; ++q) {
    const long double pq = r * static_cast<long double>(q);
    const long long p = std::llround(pq);
    if (p < 1 || p > bound || std::abs(pq - static_cast<long double>(p)) > 1e-6L * static_cast<long double>(q)) continue;
    if (std::gcd(p, q) != 1) continue;
    if (powers_equal(s1, p, s2, q)) {
      out.kind = LogRatio::Kind::Rational;
      out.p = p;
      out.q = q;
      return out;
    }
  }
  return out;
}

}  // namespace fcomm
