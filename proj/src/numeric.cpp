#include "fcomm/numeric.hpp"

#include <algorithm>
#include <stdexcept>

namespace fcomm {

namespace {

// Decimal digits only; cpp_int would read a leading 0 as octal.
BigInt parse_integer(std::string s, const std::string& whole) {
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("malformed number '" + whole + "'");
  s.erase(0, std::min(s.find_first_not_of('0'), s.size() - 1));
  BigInt v(s);
  return negative ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    BigInt num = parse_integer(text.substr(0, slash), text);
    BigInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return Rational(num, den);
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string head = text.substr(0, dot);
    std::string tail = text.substr(dot + 1);
    if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("malformed number '" + text + "'");
    if (head.empty() || head == "-" || head == "+") head += "0";
    const bool negative = head[0] == '-';
    BigInt den = 1;
    for (std::size_t i = 0; i < tail.size(); ++i) den *= 10;
    BigInt ip = parse_integer(negative ? head.substr(1) : head, text);
    BigInt num = ip * den + parse_integer(tail, text);
    return Rational(negative ? BigInt(-num) : num, den);
  }
  return Rational(parse_integer(text, text));
}

std::string to_string(const Rational& q) {
  auto num = boost::multiprecision::numerator(q);
  auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string to_decimal(const Rational& q, int digits) {
  BigInt num = boost::multiprecision::numerator(q);
  BigInt den = boost::multiprecision::denominator(q);
  BigInt scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  BigInt scaled = num * scale;
  BigInt floor_val = scaled / den;
  if (scaled < 0 && floor_val * den != scaled) floor_val -= 1;
  bool negative = floor_val < 0;
  if (negative) floor_val = -floor_val;
  std::string s = floor_val.str();
  if (digits > 0) {
    if (static_cast<int>(s.size()) <= digits) s = std::string(digits + 1 - s.size(), '0') + s;
    s.insert(s.size() - digits, ".");
  }
  return negative ? "-" + s : s;
}

}  // namespace fcomm
