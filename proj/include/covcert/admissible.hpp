#pragma once

#include <covcert/arith.hpp>

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

/// Paulsen-admissible degrees (the set S_n) and the coprime degree arrays
/// built from them.  A positive integer d is admissible for dimension n >= 3
/// when gcd(d, n!) = 1 and
///
///   (C(n,2) - 1) q^n + (n! - C(n,2)) q^(n-1) + (2^n + 1) n!  <=  d
///
/// with q the largest prime power dividing d.
namespace covcert::admissible {

struct UnsupportedDimension : std::invalid_argument {
  explicit UnsupportedDimension(unsigned n)
      : std::invalid_argument("admissibility requires dimension >= 3, got " +
                              std::to_string(n)) {}
};

struct AdmissibilityReport {
  unsigned n = 0;
  Int d;
  Int q;    // largest prime power divisor of d
  Int lhs;  // the threshold polynomial evaluated at q
  bool coprime_to_n_factorial = false;
  bool admissible = false;
  arith::Primality primality = arith::Primality::composite;  // of d itself
};

AdmissibilityReport check(unsigned n, const Int& d);
AdmissibilityReport check(unsigned n, const arith::Factorization& f);
bool is_admissible(unsigned n, const Int& d);

struct Element {
  Int value;
  arith::Factorization factorization;
};

/// Smallest-run admissible element from consecutive primes just above 2^n,
/// skipping forbidden primes: d = p_1 ... p_l with l minimal such that d is
/// admissible for n and d >= floor.  Deterministic.
Element build_element(unsigned n, const Int& floor, const std::set<Int>& forbidden);

/// `count` pairwise-coprime admissible elements >= floor, produced by
/// repeated build_element with the accumulated prime supports forbidden.
std::vector<Element> coprime_sequence(unsigned n, unsigned count, const Int& floor);

struct EntryRun {
  Int value;
  Int count;  // >= 1
};

/// Certificate that degrees d_1..d_r admit an r-column array of admissible
/// entries, pairwise coprime across columns, each entry >= k, with column j
/// summing to d_j.  Columns are run-length encoded; a hand-built certificate
/// may use any runs (ragged columns), the checker does not assume the
/// two-generator shape.
struct CoprimeArrayCertificate {
  unsigned n = 0;
  Int k;                        // entry floor
  std::vector<Int> degrees;     // column targets
  std::vector<std::vector<EntryRun>> columns;
  /// One factorization per distinct entry value (ascending by value); the
  /// checker re-verifies admissibility from these without refactoring.
  std::vector<arith::Factorization> entry_factorizations;
  Int threshold;  // N = max_j (g_j - 1)(g_j' - 1) for the generator pairs
  std::vector<std::pair<Element, Element>> generators;  // r pairs, build order
};

struct DegreeTooSmall : std::runtime_error {
  std::size_t column;
  Int threshold;
  DegreeTooSmall(std::size_t col, Int thr)
      : std::runtime_error("degree in column " + std::to_string(col) +
                           " is not representable below the coin threshold"),
        column(col),
        threshold(std::move(thr)) {}
};

/// Builds the degree array via coin representations d_j = g_j x + g_j' y over
/// r pairwise-coprime generator pairs >= k.  Throws DegreeTooSmall (carrying
/// the threshold) for a column with no nonnegative representation.
CoprimeArrayCertificate build_coprime_array(unsigned n, const Int& k,
                                            const std::vector<Int>& degrees);

/// Independent re-verification of all certificate invariants from scratch:
/// column sums, entry floor, admissibility of every distinct entry (via the
/// supplied factorizations, themselves re-verified), cross-column
/// coprimality.  Returns a violation description, or nullopt if valid.
std::optional<std::string> verify_coprime_array(const CoprimeArrayCertificate& cert);

}  // namespace covcert::admissible
