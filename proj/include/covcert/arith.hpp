#pragma once

#include <covcert/numeric.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace covcert::arith {

enum class Primality { composite, prime, probable_prime };

/// Deterministic below 2^64 (fixed Miller-Rabin witness set, complete for
/// that range); fixed-seed fixed-round Miller-Rabin above, reported as
/// probable_prime.  m <= 1 is composite for our purposes.
Primality classify(const Int& m);
bool is_prime(const Int& m);

struct Factorization {
  Int value;                                    // product of the factors
  std::vector<std::pair<Int, unsigned>> factors;  // (prime, exponent), primes ascending
};

struct FactorBudget {
  std::uint64_t rho_iterations = 20'000'000;
};

struct FactorBudgetExceeded : std::runtime_error {
  Int cofactor;  // the part that resisted factoring
  explicit FactorBudgetExceeded(Int c)
      : std::runtime_error("factoring budget exhausted"), cofactor(std::move(c)) {}
};

/// Trial division through 1e6, then Pollard rho (Brent) on what remains.
/// Requires m >= 1; factorize(1) has an empty factor list.
Factorization factorize(const Int& m, const FactorBudget& budget = {});

/// Largest p^e dividing m; 1 for m = 1.
Int largest_prime_power_divisor(const Int& m, const FactorBudget& budget = {});
Int largest_prime_power_divisor(const Factorization& f);

struct CoinRepresentation {
  Int x, y;  // target == g*x + gp*y, x,y >= 0
};

/// Nonnegative representation target = g*x + gp*y for coprime g, gp >= 1.
/// Deterministic tie-break: minimal y, then minimal x (for coprime g, gp the
/// minimal-y solution is unique, computed via g^-1 mod gp arithmetic).
/// Every target >= (g-1)*(gp-1) is representable.  Returns nullopt when no
/// nonnegative representation exists.
std::optional<CoinRepresentation> coin_represent(const Int& g, const Int& gp,
                                                 const Int& target);

/// Least prime strictly above x (x >= 1); the result is checked against
/// Bertrand's bound result <= 2x.
Int next_prime_above(const Int& x);

}  // namespace covcert::arith
