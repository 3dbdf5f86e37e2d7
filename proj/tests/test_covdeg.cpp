#include <covcert/covdeg.hpp>
#include <covcert/io.hpp>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <random>

using namespace covcert;
using namespace covcert::covdeg;

namespace {

Problem prob(unsigned n, std::vector<int> degs) {
  std::vector<Int> d(degs.begin(), degs.end());
  return Problem::make(n, d);
}

}  // namespace

TEST_CASE("problem canonicalization") {
  auto p = prob(2, {3, 7, 5});
  CHECK(p.r == 3);
  CHECK(p.degrees[0] == 7);
  CHECK(p.degrees[1] == 5);
  CHECK(p.degrees[2] == 3);
  CHECK(p.degree_product() == 105);

  CHECK_THROWS_AS(Problem::make(0, {Int(3)}), std::invalid_argument);
  CHECK_THROWS_AS(Problem::make(2, {Int(0)}), std::invalid_argument);
  CHECK_THROWS_AS(Problem::make(2, {Int(-4)}), std::invalid_argument);
}

TEST_CASE("explicit lower bound formula") {
  CHECK(explicit_lower_bound(2, {Int(4)}) == 3);
  CHECK(explicit_lower_bound(3, {Int(4), Int(5)}) == 6);
  CHECK(explicit_lower_bound(1, {Int(9), Int(9), Int(9)}) == 729);
  CHECK_THROWS_AS(explicit_lower_bound(3, {Int(2)}), std::invalid_argument);
}

TEST_CASE("engine pins from hand DP") {
  Engine eng;

  auto quartic = eng.best(prob(2, {4}));
  CHECK_FALSE(quartic.budget_exhausted);
  CHECK(quartic.cert->value == 3);
  CHECK(quartic.cert->rule == Rule::Split);
  CHECK(quartic.cert->split_a == 3);
  CHECK(quartic.cert->split_b == 1);
  CHECK(verify_certificate(*quartic.cert).ok);

  auto curve = eng.best(prob(1, {3, 4}));
  CHECK(curve.cert->value == 12);
  CHECK(curve.cert->rule == Rule::CurveExact);

  auto ambient = eng.best(prob(2, {}));
  CHECK(ambient.cert->value == 1);
  CHECK(ambient.cert->rule == Rule::AmbientSpace);

  CHECK(eng.best(prob(2, {5})).cert->value == 4);
  CHECK(eng.best(prob(2, {9})).cert->value == 8);
  CHECK(eng.best(prob(3, {4})).cert->value == 2);

  auto conic = eng.best(prob(2, {2}));
  CHECK(conic.cert->value == 1);
  CHECK(conic.cert->rule == Rule::DropDim);

  auto hyperplane = eng.best(prob(2, {1}));
  CHECK(hyperplane.cert->value == 1);
  CHECK(hyperplane.cert->rule == Rule::DropOne);
}

TEST_CASE("certificates are deterministic and warm-state independent") {
  Engine cold;
  auto a = cold.best(prob(2, {4}));
  std::string cold_bytes = io::canonical_dump(io::certificate_to_json(*a.cert));

  Engine warm;
  warm.best(prob(2, {3}));
  warm.best(prob(2, {9}));
  auto b = warm.best(prob(2, {4}));
  std::string warm_bytes = io::canonical_dump(io::certificate_to_json(*b.cert));
  CHECK(cold_bytes == warm_bytes);

  Engine again;
  auto c = again.best(prob(2, {4}));
  CHECK(io::canonical_dump(io::certificate_to_json(*c.cert)) == cold_bytes);
}

TEST_CASE("soundness cap and formula domination on random problems") {
  std::mt19937_64 rng(4242);
  Engine eng;
  for (int it = 0; it < 120; ++it) {
    unsigned n = 1 + rng() % 3;
    unsigned r = 1 + rng() % 2;
    std::vector<Int> degs;
    for (unsigned i = 0; i < r; ++i) degs.push_back(Int(1 + rng() % 8));
    auto p = Problem::make(n, degs);
    auto res = eng.best(p);
    REQUIRE_FALSE(res.budget_exhausted);
    CHECK(res.cert->value >= 1);
    CHECK(res.cert->value <= p.degree_product());
    bool all_at_least_n = true;
    for (auto& d : p.degrees)
      if (d < n) all_at_least_n = false;
    if (all_at_least_n)
      CHECK(res.cert->value >= explicit_lower_bound(n, p.degrees));
    auto v = verify_certificate(*res.cert);
    CHECK(v.ok);
  }
}

TEST_CASE("verifier rejects tampered certificates") {
  Engine eng;
  auto res = eng.best(prob(2, {4}));
  auto j = io::certificate_to_json(*res.cert);

  SUBCASE("root value bumped") {
    j["value"] = "4";
    auto cert = io::certificate_from_json(j);
    auto v = verify_certificate(*cert);
    CHECK_FALSE(v.ok);
    CHECK(v.node_path == "root");
  }
  SUBCASE("child value bumped") {
    // inflating the Z-branch child keeps the root's min-arithmetic value at 3,
    // so the verifier must descend and flag the child itself
    j["children"][2]["value"] = "7";
    auto cert = io::certificate_from_json(j);
    auto v = verify_certificate(*cert);
    CHECK_FALSE(v.ok);
    CHECK(v.node_path.find("children[2]") != std::string::npos);
  }
  SUBCASE("rule label corrupted") {
    j["rule"] = "curve-exact";
    auto cert = io::certificate_from_json(j);
    auto v = verify_certificate(*cert);
    CHECK_FALSE(v.ok);
  }
}

TEST_CASE("budget exhaustion stays sound") {
  Engine eng(Options{.budget = 3, .fano_floor = false});
  auto res = eng.best(prob(3, {9, 9}));
  CHECK(res.budget_exhausted);
  CHECK(res.cert->value >= 1);
  CHECK(res.cert->value <= 81);
  CHECK(verify_certificate(*res.cert).ok);
}

TEST_CASE("fano floor rule is flag-gated") {
  Engine plain;
  auto without = plain.best(prob(2, {3}));
  CHECK(without.cert->value == 2);
  CHECK(without.cert->rule == Rule::Split);

  Engine fano(Options{.budget = 1'000'000, .fano_floor = true});
  auto with = fano.best(prob(2, {3}));  // sum d = 3 = n + r
  CHECK(with.cert->value == 2);
  CHECK(with.cert->rule == Rule::FanoFloor);
  CHECK(verify_certificate(*with.cert).ok);

  // not Fano-type: flag must not fire
  auto quartic = fano.best(prob(2, {4}));
  CHECK(quartic.cert->rule == Rule::Split);
}

TEST_CASE("compute_k pins") {
  CHECK(compute_k(2, 1) == 6);
  CHECK(compute_k(3, 1) == 6);
  CHECK(compute_k(3, 2) == 6);
  CHECK(compute_k(4, 1) == 7);
  CHECK(compute_k(4, 2) == 10);
  CHECK(compute_k(5, 1) == 11);
  // postcondition: the ratio bound holds at k, in exact integers
  for (auto [n, r] : std::vector<std::pair<unsigned, unsigned>>{
           {2, 1}, {3, 1}, {3, 2}, {4, 1}, {4, 2}, {5, 1}, {5, 3}}) {
    unsigned k = compute_k(n, r);
    CHECK(k >= 6);
    CHECK(k >= n);
    CHECK(2 * pow_int(Int(k) - n + 2, r + 1) >= pow_int(Int(k), r + 1));
  }
}

TEST_CASE("exactness threshold and exact values") {
  auto thr = exactness_threshold(3, 1);
  CHECK(thr.k == 6);
  REQUIRE(thr.generators.size() == 1);
  CHECK(thr.generators[0].first.value == 46189);
  CHECK(thr.generators[0].second.value == 765049);
  CHECK(thr.N == Int(46188) * Int(765048));

  CHECK_THROWS_AS(exactness_threshold(2, 1), admissible::UnsupportedDimension);

  // curves are exact
  CHECK(exact_covdeg(prob(1, {7, 9})) == Int(63));
  // below threshold / wrong dimension: no exactness claim
  CHECK_FALSE(exact_covdeg(prob(2, {100})).has_value());
  CHECK_FALSE(exact_covdeg(prob(3, {46189})).has_value());

  // at the threshold the exact value is the degree product
  Problem big = Problem::make(3, {thr.N});
  auto exact = exact_covdeg(big);
  REQUIRE(exact.has_value());
  CHECK(*exact == thr.N);

  auto cert = exact_certificate(big);
  REQUIRE(cert.has_value());
  CHECK((*cert)->rule == Rule::ExactByCoprimeArray);
  CHECK((*cert)->value == thr.N);
  CHECK(verify_certificate(**cert).ok);
}
