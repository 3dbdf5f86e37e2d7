#include <covcert/admissible.hpp>

#include <algorithm>
#include <map>

namespace covcert::admissible {

namespace {

Int factorial(unsigned n) {
  Int f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

AdmissibilityReport check(unsigned n, const Int& d) {
  if (n < 3) throw UnsupportedDimension(n);
  return check(n, arith::factorize(d));
}

AdmissibilityReport check(unsigned n, const arith::Factorization& f) {
  if (n < 3) throw UnsupportedDimension(n);
  AdmissibilityReport rep;
  rep.n = n;
  rep.d = f.value;
  rep.q = arith::largest_prime_power_divisor(f);
  Int fact = factorial(n);
  Int choose2 = Int(n) * (n - 1) / 2;
  rep.lhs = (choose2 - 1) * pow_int(rep.q, n) +
            (fact - choose2) * pow_int(rep.q, n - 1) +
            (pow_int(Int(2), n) + 1) * fact;
  rep.coprime_to_n_factorial = gcd(rep.d, fact) == 1;
  rep.admissible = rep.coprime_to_n_factorial && rep.lhs <= rep.d;
  rep.primality = arith::classify(rep.d);
  return rep;
}

bool is_admissible(unsigned n, const Int& d) { return check(n, d).admissible; }

Element build_element(unsigned n, const Int& floor, const std::set<Int>& forbidden) {
  if (n < 3) throw UnsupportedDimension(n);
  arith::Factorization f;
  f.value = 1;
  Int p = pow_int(Int(2), n);
  while (true) {
    p = arith::next_prime_above(p);
    if (forbidden.count(p)) continue;
    f.value *= p;
    f.factors.emplace_back(p, 1);
    if (f.value >= floor && check(n, f).admissible) return Element{f.value, f};
  }
}

std::vector<Element> coprime_sequence(unsigned n, unsigned count, const Int& floor) {
  std::vector<Element> out;
  std::set<Int> forbidden;
  for (unsigned i = 0; i < count; ++i) {
    out.push_back(build_element(n, floor, forbidden));
    for (const auto& [p, e] : out.back().factorization.factors)
      forbidden.insert(p);
  }
  return out;
}

CoprimeArrayCertificate build_coprime_array(unsigned n, const Int& k,
                                            const std::vector<Int>& degrees) {
  CoprimeArrayCertificate cert;
  cert.n = n;
  cert.k = k;
  cert.degrees = degrees;
  auto seq = coprime_sequence(n, 2 * static_cast<unsigned>(degrees.size()), k);
  cert.threshold = 0;
  std::map<Int, arith::Factorization> used;
  for (std::size_t j = 0; j < degrees.size(); ++j) {
    const Element& g = seq[2 * j];
    const Element& gp = seq[2 * j + 1];
    cert.generators.emplace_back(g, gp);
    Int col_threshold = (g.value - 1) * (gp.value - 1);
    cert.threshold = std::max(cert.threshold, col_threshold);
    auto rep = arith::coin_represent(g.value, gp.value, degrees[j]);
    if (!rep) throw DegreeTooSmall(j, col_threshold);
    std::vector<EntryRun> column;
    if (rep->x > 0) {
      column.push_back(EntryRun{g.value, rep->x});
      used.emplace(g.value, g.factorization);
    }
    if (rep->y > 0) {
      column.push_back(EntryRun{gp.value, rep->y});
      used.emplace(gp.value, gp.factorization);
    }
    cert.columns.push_back(std::move(column));
  }
  for (auto& [value, f] : used) cert.entry_factorizations.push_back(f);
  return cert;
}

std::optional<std::string> verify_coprime_array(const CoprimeArrayCertificate& cert) {
  if (cert.n < 3) return "dimension below 3";
  if (cert.columns.size() != cert.degrees.size())
    return "column count does not match degree count";

  // factorization table: strictly ascending, internally re-verified
  std::map<Int, const arith::Factorization*> table;
  Int prev = 0;
  for (const auto& f : cert.entry_factorizations) {
    if (f.value <= prev) return "entry factorizations not ascending by value";
    prev = f.value;
    if (f.factors.empty()) return "empty factorization";
    Int product = 1, last_prime = 1;
    for (const auto& [p, e] : f.factors) {
      if (p <= last_prime) return "factor primes not ascending";
      last_prime = p;
      if (e == 0) return "zero exponent in factorization";
      if (!arith::is_prime(p)) return "composite listed as prime factor";
      product *= pow_int(p, e);
    }
    if (product != f.value) return "factorization product mismatch";
    table.emplace(f.value, &f);
  }

  std::vector<std::set<Int>> column_support(cert.columns.size());
  for (std::size_t j = 0; j < cert.columns.size(); ++j) {
    Int sum = 0;
    for (const auto& run : cert.columns[j]) {
      if (run.count < 1) return "run count below 1";
      if (run.value < cert.k) return "entry below the floor k";
      auto it = table.find(run.value);
      if (it == table.end()) return "entry without a factorization";
      if (!check(cert.n, *it->second).admissible) return "inadmissible entry";
      for (const auto& [p, e] : it->second->factors) column_support[j].insert(p);
      sum += run.value * run.count;
    }
    if (sum != cert.degrees[j]) return "column sum does not match its degree";
  }

  for (std::size_t a = 0; a < column_support.size(); ++a)
    for (std::size_t b = a + 1; b < column_support.size(); ++b)
      for (const Int& p : column_support[a])
        if (column_support[b].count(p))
          return "columns share the prime " + p.str();

  return std::nullopt;
}

}  // namespace covcert::admissible
