#include <covcert/numeric.hpp>

#include <stdexcept>

namespace covcert {

Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;  // truncates toward zero
  if (a % b != 0 && a < 0) --q;
  return q;
}

Int floor_rat(const Rat& r) {
  return floor_div(numerator(r), denominator(r));
}

Int ceil_rat(const Rat& r) { return -floor_rat(-r); }

Int pow_int(const Int& base, unsigned exp) {
  Int result(1), b = base;
  while (exp) {
    if (exp & 1u) result *= b;
    b *= b;
    exp >>= 1u;
  }
  return result;
}

Int nth_root_floor(const Int& a, unsigned j) {
  if (a < 0) throw std::invalid_argument("nth_root_floor: negative radicand");
  if (j == 0) throw std::invalid_argument("nth_root_floor: zeroth root");
  if (j == 1 || a <= 1) return a;
  unsigned top = boost::multiprecision::msb(a) / j + 1;
  Int lo = 0, hi = Int(1) << top;  // hi^j >= 2^(msb+1) > a
  while (lo < hi) {
    Int mid = (lo + hi + 1) >> 1;
    if (pow_int(mid, j) <= a) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

Int nth_root_ceil(const Int& a, unsigned j) {
  Int f = nth_root_floor(a, j);
  return pow_int(f, j) == a ? f : f + 1;
}

Rat root_upper(const Rat& a, unsigned j, unsigned bits) {
  if (a < 0) throw std::invalid_argument("root_upper: negative radicand");
  Int den = Int(1) << bits;
  Int scaled = ceil_rat(a * Rat(pow_int(Int(2), j * bits)));
  return Rat(nth_root_ceil(scaled, j), den);
}

Rat root_lower(const Rat& a, unsigned j, unsigned bits) {
  if (a < 0) throw std::invalid_argument("root_lower: negative radicand");
  Int den = Int(1) << bits;
  Int scaled = floor_rat(a * Rat(pow_int(Int(2), j * bits)));
  return Rat(nth_root_floor(scaled, j), den);
}

Rat parse_rational(const std::string& s) {
  auto bad = [&] {
    throw std::invalid_argument("malformed rational: '" + s + "'");
  };
  auto parse_int = [&](const std::string& part, bool sign_ok) {
    std::size_t i = 0;
    if (sign_ok && i < part.size() && (part[i] == '+' || part[i] == '-')) ++i;
    if (i == part.size()) bad();
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') bad();
    return Int(part);
  };
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(parse_int(s, true));
  if (s.find('/', slash + 1) != std::string::npos) bad();
  Int num = parse_int(s.substr(0, slash), true);
  Int den = parse_int(s.substr(slash + 1), false);
  if (den == 0) bad();
  return Rat(num, den);
}

std::string rat_to_string(const Rat& r) {
  Int den = denominator(r);
  std::string out = numerator(r).str();
  if (den != 1) out += "/" + den.str();
  return out;
}

}  // namespace covcert
