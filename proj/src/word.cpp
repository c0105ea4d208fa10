#include "fcomm/word.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fcomm {

std::strong_ordering shortlex_compare(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() <=> b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    int ka = letter_key(a[i]);
    int kb = letter_key(b[i]);
    if (ka != kb) return ka <=> kb;
  }
  return std::strong_ordering::equal;
}

bool shortlex_less(const Word& a, const Word& b) { return shortlex_compare(a, b) < 0; }

Word free_reduce(Word w) {
  std::vector<Letter> out;
  out.reserve(w.letters.size());
  for (Letter l : w.letters) {
    if (!out.empty() && out.back() == -l) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return Word(std::move(out));
}

bool is_reduced(const Word& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == -w[i - 1]) return false;
  return true;
}

Word inverse(const Word& w) {
  std::vector<Letter> out(w.letters.rbegin(), w.letters.rend());
  for (Letter& l : out) l = -l;
  return Word(std::move(out));
}

Word operator*(const Word& a, const Word& b) {
  std::size_t cancel = 0;
  while (cancel < a.size() && cancel < b.size() && a[a.size() - 1 - cancel] == -b[cancel]) ++cancel;
  std::vector<Letter> out;
  out.reserve(a.size() + b.size() - 2 * cancel);
  out.insert(out.end(), a.letters.begin(), a.letters.end() - static_cast<long>(cancel));
  out.insert(out.end(), b.letters.begin() + static_cast<long>(cancel), b.letters.end());
  return Word(std::move(out));
}

Word power(const Word& w, long long n) {
  Word base = n < 0 ? inverse(w) : w;
  Word out;
  for (long long i = 0; i < (n < 0 ? -n : n); ++i) out = out * base;
  return out;
}

Word conjugate_by(const Word& g, const Word& w) { return g * w * inverse(g); }

bool commute(const Word& a, const Word& b) { return a * b == b * a; }

CyclicReduction cyclic_reduce(const Word& w) {
  std::size_t lo = 0;
  std::size_t hi = w.size();
  while (hi - lo >= 2 && w[lo] == -w[hi - 1]) {
    ++lo;
    --hi;
  }
  CyclicReduction r;
  r.core = Word(std::vector<Letter>(w.letters.begin() + static_cast<long>(lo),
                                    w.letters.begin() + static_cast<long>(hi)));
  r.conjugator = Word(std::vector<Letter>(w.letters.begin(), w.letters.begin() + static_cast<long>(lo)));
  return r;
}

bool is_cyclically_reduced(const Word& w) {
  return is_reduced(w) && (w.size() < 2 || w[0] != -w[w.size() - 1]);
}

namespace {

Word rotate(const Word& w, std::size_t shift) {
  std::vector<Letter> out(w.letters.begin() + static_cast<long>(shift), w.letters.end());
  out.insert(out.end(), w.letters.begin(), w.letters.begin() + static_cast<long>(shift));
  return Word(std::move(out));
}

// Smallest shift s >= 1 with rotate(w, s) == w; equals |w| for primitive words.
std::size_t rotation_period(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t s = 1; s < n; ++s) {
    if (n % s != 0) continue;
    bool ok = true;
    for (std::size_t i = 0; i + s < n && ok; ++i) ok = w[i] == w[i + s];
    if (ok) return s;
  }
  return n;
}

// Shift s with rotate(a, s) == b, both cyclically reduced.
std::optional<std::size_t> rotation_to(const Word& a, const Word& b) {
  if (a.size() != b.size()) return std::nullopt;
  if (a.empty()) return 0;
  for (std::size_t s = 0; s < a.size(); ++s) {
    bool ok = true;
    for (std::size_t i = 0; i < a.size() && ok; ++i) ok = a[(i + s) % a.size()] == b[i];
    if (ok) return s;
  }
  return std::nullopt;
}

}  // namespace

Word least_rotation(const Word& w) {
  Word best = w;
  for (std::size_t s = 1; s < w.size(); ++s) {
    Word r = rotate(w, s);
    if (shortlex_less(r, best)) best = std::move(r);
  }
  return best;
}

bool are_conjugate(const Word& a, const Word& b) {
  Word ca = cyclic_reduce(free_reduce(a)).core;
  Word cb = cyclic_reduce(free_reduce(b)).core;
  return rotation_to(ca, cb).has_value();
}

Word root(const Word& w) {
  auto cr = cyclic_reduce(free_reduce(w));
  if (cr.core.empty()) return Word{};
  std::size_t period = rotation_period(cr.core);
  Word r(std::vector<Letter>(cr.core.letters.begin(), cr.core.letters.begin() + static_cast<long>(period)));
  return conjugate_by(cr.conjugator, r);
}

std::optional<Word> conjugator(const Word& y, const Word& z) {
  auto cy = cyclic_reduce(free_reduce(y));
  auto cz = cyclic_reduce(free_reduce(z));
  auto shift = rotation_to(cy.core, cz.core);
  if (!shift) return std::nullopt;
  // cz.core = u^-1 cy.core u with u the first `shift` letters of cy.core.
  Word u(std::vector<Letter>(cy.core.letters.begin(), cy.core.letters.begin() + static_cast<long>(*shift)));
  return cz.conjugator * inverse(u) * inverse(cy.conjugator);
}

std::optional<Word> simultaneous_conjugator(std::span<const Word> ys, std::span<const Word> zs) {
  if (ys.size() != zs.size()) throw std::invalid_argument("simultaneous_conjugator: size mismatch");
  std::optional<std::size_t> first;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (ys[i].empty() != zs[i].empty()) return std::nullopt;
    if (!ys[i].empty() && !first) first = i;
  }
  if (!first) return Word{};

  auto g0 = conjugator(ys[*first], zs[*first]);
  if (!g0) return std::nullopt;
  const Word rho = root(ys[*first]);

  auto satisfies = [&](const Word& g) {
    for (std::size_t i = 0; i < ys.size(); ++i)
      if (conjugate_by(g, ys[i]) != zs[i]) return false;
    return true;
  };
  if (satisfies(*g0)) return g0;

  std::optional<std::size_t> second;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (!ys[i].empty() && !commute(ys[i], ys[*first])) {
      second = i;
      break;
    }
  }
  if (!second) {
    // All constraints live in the centralizer of rho; any solution of the
    // first equation works iff g0 does.
    return std::nullopt;
  }
  // g = g0 rho^n; need rho^n Y rho^-n = Z with Y = ys[second],
  // Z = g0^-1 zs[second] g0. Writing rho = s r s^-1 with r cyclically
  // reduced, |r^n (s^-1 Y s) r^-n| grows like 2|n||r| once |n| exceeds the
  // cancellation allowed by |Y| + |s| + |r|, which bounds |n|.
  const Word& y2 = ys[*second];
  Word z2 = conjugate_by(inverse(*g0), zs[*second]);
  const long long bound = static_cast<long long>(z2.size() + 2 * y2.size() + 3 * rho.size()) + 4;
  Word forward;  // rho^n
  Word backward;  // rho^-n
  const Word rho_inv = inverse(rho);
  for (long long n = 1; n <= bound; ++n) {
    forward = forward * rho;
    backward = backward * rho_inv;
    for (const Word* step : {&forward, &backward}) {
      Word g = *g0 * *step;
      if (satisfies(g)) return g;
    }
  }
  return std::nullopt;
}

Word substitute(const Word& w, std::span<const Word> images) {
  std::vector<Letter> out;
  for (Letter l : w.letters) {
    const Word& img = images[static_cast<std::size_t>(generator_of(l))];
    if (l > 0) {
      for (Letter x : img.letters) {
        if (!out.empty() && out.back() == -x) out.pop_back();
        else out.push_back(x);
      }
    } else {
      for (auto it = img.letters.rbegin(); it != img.letters.rend(); ++it) {
        Letter x = -*it;
        if (!out.empty() && out.back() == -x) out.pop_back();
        else out.push_back(x);
      }
    }
  }
  return Word(std::move(out));
}

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  for (const auto& n : names_)
    if (n.empty() || n[0] == '~' || n.find(' ') != std::string::npos)
      throw std::invalid_argument("invalid basis symbol '" + n + "'");
}

Alphabet Alphabet::standard(int rank) {
  std::vector<std::string> names;
  for (int i = 0; i < rank; ++i)
    names.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "x" + std::to_string(i));
  return Alphabet(std::move(names));
}

std::optional<int> Alphabet::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<int>(it - names_.begin());
}

Word Alphabet::parse(const std::string& text) const {
  std::istringstream in(text);
  std::string tok;
  std::vector<Letter> out;
  while (in >> tok) {
    if (tok == "1") continue;
    bool inv = tok[0] == '~';
    std::string name = inv ? tok.substr(1) : tok;
    auto idx = index_of(name);
    if (!idx) throw std::invalid_argument("unknown symbol '" + name + "'");
    out.push_back(letter_of(*idx, inv));
  }
  return free_reduce(Word(std::move(out)));
}

std::string Alphabet::format(const Word& w) const {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    if (w[i] < 0) out += '~';
    out += names_.at(static_cast<std::size_t>(generator_of(w[i])));
  }
  return out;
}

}  // namespace fcomm
