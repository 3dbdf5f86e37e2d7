#include <covcert/admissible.hpp>

#include <doctest.h>

#include <cstdint>
#include <vector>

using namespace covcert;
using namespace covcert::admissible;

namespace {

// Independent oracle: the admissibility threshold polynomial, recomputed from
// scratch with plain integers (valid for the small n used here).
Int oracle_lhs(unsigned n, const Int& q) {
  Int fact = 1;
  for (unsigned i = 2; i <= n; ++i) fact *= i;
  Int choose2 = Int(n) * (n - 1) / 2;
  Int qn = 1, qn1 = 1;
  for (unsigned i = 0; i < n; ++i) qn *= q;
  for (unsigned i = 0; i + 1 < n; ++i) qn1 *= q;
  Int two_n = 1;
  for (unsigned i = 0; i < n; ++i) two_n *= 2;
  return (choose2 - 1) * qn + (fact - choose2) * qn1 + (two_n + 1) * fact;
}

// Independent oracle for the element builder: walk consecutive primes above
// 2^n with a local sieve-free primality test, skipping forbidden ones.
bool oracle_is_prime(std::uint64_t m) {
  if (m < 2) return false;
  for (std::uint64_t p = 2; p * p <= m; ++p)
    if (m % p == 0) return false;
  return true;
}

Int oracle_element(unsigned n, const Int& floor_val, std::vector<std::uint64_t> forbidden) {
  std::uint64_t start = 1;
  for (unsigned i = 0; i < n; ++i) start *= 2;
  Int prod = 1;
  Int q = 0;
  std::uint64_t p = start;
  while (true) {
    ++p;
    while (!oracle_is_prime(p) ||
           std::find(forbidden.begin(), forbidden.end(), p) != forbidden.end())
      ++p;
    prod *= p;
    q = p;
    if (prod >= floor_val && oracle_lhs(n, q) <= prod) return prod;
  }
}

}  // namespace

TEST_CASE("admissibility pins for n = 3") {
  auto rep = check(3, Int(5005));
  CHECK(rep.q == 13);
  CHECK(rep.lhs == 4955);  // 2*13^3 + 3*13^2 + 54
  CHECK(rep.coprime_to_n_factorial);
  CHECK(rep.admissible);
  CHECK(is_admissible(3, Int(5005)));

  auto r10 = check(3, Int(10));
  CHECK_FALSE(r10.coprime_to_n_factorial);  // gcd(10, 6) = 2
  CHECK_FALSE(r10.admissible);

  auto r2431 = check(3, Int(2431));  // 11*13*17
  CHECK(r2431.q == 17);
  CHECK(r2431.lhs == 10747);
  CHECK(r2431.coprime_to_n_factorial);
  CHECK_FALSE(r2431.admissible);

  auto r46189 = check(3, Int(46189));  // 11*13*17*19
  CHECK(r46189.q == 19);
  CHECK(r46189.lhs == 14855);
  CHECK(r46189.admissible);

  CHECK_THROWS_AS(check(2, Int(5005)), UnsupportedDimension);
  CHECK_THROWS_AS(check(0, Int(5005)), UnsupportedDimension);
}

TEST_CASE("lhs matches the independent oracle") {
  CHECK(check(3, Int(5005)).lhs == oracle_lhs(3, Int(13)));
  CHECK(check(3, Int(46189)).lhs == oracle_lhs(3, Int(19)));
  CHECK(check(4, Int(5005)).lhs == oracle_lhs(4, Int(13)));
  CHECK(check(5, Int(7 * 11) * Int(13)).lhs == oracle_lhs(5, Int(13)));
}

TEST_CASE("no prime below 10000 is admissible (n in 3..5)") {
  for (unsigned n : {3u, 4u, 5u}) {
    for (int p = 2; p < 10000; ++p) {
      bool prime = oracle_is_prime(static_cast<std::uint64_t>(p));
      if (!prime) continue;
      CHECK_FALSE(is_admissible(n, Int(p)));
    }
  }
}

TEST_CASE("admissibility is monotone under new primes at most q") {
  // 11*13*17*19*29 admissible with q = 29; multiplying by the unused prime
  // 23 <= q keeps lhs fixed and grows d
  Int d = Int(46189) * 29;
  auto rep = check(3, d);
  CHECK(rep.q == 29);
  CHECK(rep.admissible);
  auto rep2 = check(3, d * 23);
  CHECK(rep2.q == 29);
  CHECK(rep2.lhs == rep.lhs);
  CHECK(rep2.admissible);
}

TEST_CASE("element builder pins") {
  auto e = build_element(3, Int(1), {});
  CHECK(e.value == 46189);
  REQUIRE(e.factorization.factors.size() == 4);
  CHECK(e.factorization.factors[0].first == 11);
  CHECK(e.factorization.factors[1].first == 13);
  CHECK(e.factorization.factors[2].first == 17);
  CHECK(e.factorization.factors[3].first == 19);

  auto e2 = build_element(3, Int(1), {Int(11), Int(13), Int(17), Int(19)});
  CHECK(e2.value == 765049);  // 23*29*31*37

  auto e3 = build_element(3, Int(1), {Int(13)});
  CHECK(e3.value == 81719);  // 11*17*19*23

  auto e4 = build_element(3, Int(1000000), {});
  CHECK(e4.value == 1062347);  // 11*13*17*19*23, extended to clear the floor

  CHECK(build_element(3, Int(1), {}).value ==
        oracle_element(3, Int(1), {}));
  CHECK(build_element(4, Int(1), {}).value ==
        oracle_element(4, Int(1), {}));
}

TEST_CASE("coprime sequences") {
  CHECK(coprime_sequence(3, 0, Int(1)).empty());

  auto seq = coprime_sequence(3, 4, Int(1));
  REQUIRE(seq.size() == 4);
  CHECK(seq[0].value == 46189);
  CHECK(seq[1].value == 765049);
  // later elements cross-checked against the oracle with accumulated bans
  CHECK(seq[2].value == oracle_element(3, Int(1), {11, 13, 17, 19, 23, 29, 31, 37}));
  {
    std::vector<std::uint64_t> banned = {11, 13, 17, 19, 23, 29, 31, 37};
    for (auto& [p, expo] : seq[2].factorization.factors)
      banned.push_back(static_cast<std::uint64_t>(p));
    CHECK(seq[3].value == oracle_element(3, Int(1), banned));
  }
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(is_admissible(3, seq[i].value));
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      CHECK(gcd(seq[i].value, seq[j].value) == 1);
  }
}

TEST_CASE("coprime array build and failure") {
  // r = 1: generators (46189, 765049); 2*46189 is representable as x=2, y=0
  auto cert = build_coprime_array(3, Int(6), {Int(92378)});
  REQUIRE(cert.columns.size() == 1);
  CHECK(cert.degrees[0] == 92378);
  CHECK(cert.threshold == Int(46188) * Int(765048));
  Int sum = 0;
  for (auto& run : cert.columns[0]) sum += run.value * run.count;
  CHECK(sum == 92378);
  CHECK_FALSE(verify_coprime_array(cert).has_value());

  bool threw = false;
  try {
    build_coprime_array(3, Int(6), {Int(7)});
  } catch (const DegreeTooSmall& e) {
    threw = true;
    CHECK(e.column == 0);
    CHECK(e.threshold == Int(46188) * Int(765048));
  }
  CHECK(threw);
}

TEST_CASE("independent checker accepts ragged hand-built certificates") {
  CoprimeArrayCertificate cert;
  cert.n = 3;
  cert.k = 1;
  cert.degrees = {Int(46189) + Int(765049)};
  cert.columns = {{EntryRun{Int(46189), Int(1)}, EntryRun{Int(765049), Int(1)}}};
  cert.entry_factorizations = {
      {Int(46189), {{Int(11), 1}, {Int(13), 1}, {Int(17), 1}, {Int(19), 1}}},
      {Int(765049), {{Int(23), 1}, {Int(29), 1}, {Int(31), 1}, {Int(37), 1}}}};
  cert.threshold = 0;
  CHECK_FALSE(verify_coprime_array(cert).has_value());

  SUBCASE("bad column sum is rejected") {
    cert.columns[0][0].count = 2;
    CHECK(verify_coprime_array(cert).has_value());
  }
  SUBCASE("wrong factorization is rejected") {
    cert.entry_factorizations[0].factors[0].first = 7;
    CHECK(verify_coprime_array(cert).has_value());
  }
  SUBCASE("entry below the floor is rejected") {
    cert.k = Int(100000);
    CHECK(verify_coprime_array(cert).has_value());
  }
  SUBCASE("cross-column common factor is rejected") {
    cert.degrees.push_back(Int(46189));
    cert.columns.push_back({EntryRun{Int(46189), Int(1)}});
    CHECK(verify_coprime_array(cert).has_value());
  }
  SUBCASE("inadmissible entry is rejected") {
    cert.degrees.push_back(Int(2431));
    cert.columns.push_back({EntryRun{Int(2431), Int(1)}});
    cert.entry_factorizations.push_back(
        {Int(2431), {{Int(11), 1}, {Int(13), 1}, {Int(17), 1}}});
    CHECK(verify_coprime_array(cert).has_value());
  }
}
