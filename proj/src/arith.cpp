#include <covcert/arith.hpp>

#include <boost/multiprecision/miller_rabin.hpp>

#include <algorithm>
#include <map>
#include <random>

namespace covcert::arith {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

u64 mulmod(u64 a, u64 b, u64 m) { return u64(u128(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 r = 1;
  base %= m;
  while (exp) {
    if (exp & 1u) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1u;
  }
  return r;
}

// Deterministic for all m < 2^64 with the fixed witness set.
bool is_prime_u64(u64 m) {
  if (m < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    if (m % p == 0) return m == p;
  }
  u64 d = m - 1;
  int s = 0;
  while ((d & 1u) == 0) {
    d >>= 1u;
    ++s;
  }
  for (u64 a : kWitnesses) {
    u64 x = powmod(a, d, m);
    if (x == 1 || x == m - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, m);
      if (x == m - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

bool fits_u64(const Int& m) {
  return m >= 0 && m <= Int(std::numeric_limits<u64>::max());
}

// Brent's cycle variant of Pollard rho; returns a nontrivial factor of the
// odd composite m, or 0 when the iteration budget runs dry.  `spent` is
// charged one unit per f-evaluation.
u64 rho_u64(u64 m, std::uint64_t budget, std::uint64_t& spent) {
  if (m % 2 == 0) return 2;
  std::mt19937_64 rng(0x9E3779B97F4A7C15ull ^ m);
  while (spent < budget) {
    u64 y = rng() % m, c = rng() % m;
    if (c == 0) c = 1;
    u64 g = 1, r = 1, q = 1, x = 0, ys = 0;
    while (g == 1 && spent < budget) {
      x = y;
      for (u64 i = 0; i < r && spent < budget; ++i) {
        y = (mulmod(y, y, m) + c) % m;
        ++spent;
      }
      u64 k = 0;
      while (k < r && g == 1 && spent < budget) {
        ys = y;
        u64 lim = std::min<u64>(128, r - k);
        for (u64 i = 0; i < lim; ++i) {
          y = (mulmod(y, y, m) + c) % m;
          ++spent;
          q = mulmod(q, x > y ? x - y : y - x, m);
        }
        g = std::gcd(q, m);
        k += lim;
      }
      r <<= 1u;
    }
    if (g == m) {
      g = 1;
      while (g == 1 && spent < budget) {
        ys = (mulmod(ys, ys, m) + c) % m;
        ++spent;
        g = std::gcd(x > ys ? x - ys : ys - x, m);
      }
    }
    if (g != 1 && g != m) return g;
  }
  return 0;
}

Int rho_big(const Int& m, std::uint64_t budget, std::uint64_t& spent) {
  if (m % 2 == 0) return 2;
  std::mt19937_64 rng(0xC2B2AE3D27D4EB4Full);
  while (spent < budget) {
    Int y = Int(rng()) % m, c = Int(rng()) % m, x, ys;
    if (c == 0) c = 1;
    Int g = 1, q = 1;
    std::uint64_t r = 1;
    while (g == 1 && spent < budget) {
      x = y;
      for (std::uint64_t i = 0; i < r && spent < budget; ++i) {
        y = (y * y + c) % m;
        ++spent;
      }
      std::uint64_t k = 0;
      while (k < r && g == 1 && spent < budget) {
        ys = y;
        std::uint64_t lim = std::min<std::uint64_t>(128, r - k);
        for (std::uint64_t i = 0; i < lim; ++i) {
          y = (y * y + c) % m;
          ++spent;
          q = q * abs(x - y) % m;
        }
        g = gcd(q, m);
        k += lim;
      }
      r <<= 1u;
    }
    if (g == m) {
      g = 1;
      while (g == 1 && spent < budget) {
        ys = (ys * ys + c) % m;
        ++spent;
        g = gcd(abs(x - ys), m);
      }
    }
    if (g != 1 && g != m) return g;
  }
  return 0;
}

// Extended gcd returning (g, u) with u*a == g (mod b), 0 <= u < b for b > 1.
Int inverse_mod(const Int& a, const Int& m) {
  Int old_r = a % m, r = m;
  Int old_s = 1, s = 0;
  while (r != 0) {
    Int q = old_r / r;
    Int t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  Int inv = old_s % m;
  if (inv < 0) inv += m;
  return inv;
}

}  // namespace

Primality classify(const Int& m) {
  if (m <= 1) return Primality::composite;
  if (fits_u64(m))
    return is_prime_u64(m.convert_to<u64>()) ? Primality::prime
                                             : Primality::composite;
  for (u64 p : kWitnesses)
    if (m % p == 0) return Primality::composite;
  // fixed witnesses first, then fixed-seed random rounds
  for (u64 a : kWitnesses) {
    Int x = boost::multiprecision::powm(Int(a), m - 1, m);
    if (x != 1) return Primality::composite;
  }
  std::mt19937_64 rng(0xA0761D6478BD642Full);
  if (!boost::multiprecision::miller_rabin_test(m, 40, rng))
    return Primality::composite;
  return Primality::probable_prime;
}

bool is_prime(const Int& m) { return classify(m) != Primality::composite; }

Factorization factorize(const Int& m, const FactorBudget& budget) {
  if (m < 1) throw std::invalid_argument("factorize: argument must be >= 1");
  std::map<Int, unsigned> found;
  Int rem = m;
  for (Int p = 2; p <= 1000000 && p * p <= rem; p == 2 ? p = 3 : p += 2) {
    while (rem % p == 0) {
      ++found[p];
      rem /= p;
    }
  }
  std::uint64_t spent = 0;
  std::vector<Int> stack;
  if (rem > 1) stack.push_back(rem);
  while (!stack.empty()) {
    Int cur = stack.back();
    stack.pop_back();
    if (is_prime(cur)) {
      ++found[cur];
      continue;
    }
    Int f;
    if (fits_u64(cur)) {
      u64 g = rho_u64(cur.convert_to<u64>(), budget.rho_iterations, spent);
      f = g;
    } else {
      f = rho_big(cur, budget.rho_iterations, spent);
    }
    if (f == 0) throw FactorBudgetExceeded(cur);
    stack.push_back(f);
    stack.push_back(cur / f);
  }
  Factorization out;
  out.value = m;
  for (const auto& [p, e] : found) out.factors.emplace_back(p, e);
  return out;
}

Int largest_prime_power_divisor(const Int& m, const FactorBudget& budget) {
  return largest_prime_power_divisor(factorize(m, budget));
}

Int largest_prime_power_divisor(const Factorization& f) {
  Int best = 1;
  for (const auto& [p, e] : f.factors) best = std::max(best, pow_int(p, e));
  return best;
}

std::optional<CoinRepresentation> coin_represent(const Int& g, const Int& gp,
                                                 const Int& target) {
  if (g < 1 || gp < 1) throw std::invalid_argument("coin: generators must be >= 1");
  if (gcd(g, gp) != 1)
    throw std::invalid_argument("coin: generators must be coprime");
  if (target < 0) return std::nullopt;
  Int y = g == 1 ? Int(0) : target % g * inverse_mod(gp % g, g) % g;
  Int rest = target - gp * y;
  if (rest < 0) return std::nullopt;
  return CoinRepresentation{rest / g, y};
}

Int next_prime_above(const Int& x) {
  if (x < 1) throw std::invalid_argument("next_prime_above: requires x >= 1");
  if (x == 1) return 2;
  Int c = x + 1;
  if (c % 2 == 0) {
    if (c == 2) return 2;
    ++c;
  }
  while (!is_prime(c)) c += 2;
  if (c > 2 * x)
    throw std::logic_error("next_prime_above: Bertrand bound violated");
  return c;
}

}  // namespace covcert::arith
