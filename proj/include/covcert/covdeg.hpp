#pragma once

#include <covcert/admissible.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

/// Certified lower bounds for the covering degree cd_{n,r}(d_1,...,d_r) of a
/// smooth complete intersection of r hypersurfaces of the given degrees in
/// P^{n+r}.  Every bound carries a machine-checkable derivation tree over a
/// fixed rule set; verify_certificate re-evaluates a tree without trusting
/// the engine.
namespace covcert::covdeg {

/// Canonical problem: degrees sorted descending, all >= 1, n >= 1, r = #degrees.
struct Problem {
  unsigned n = 0;
  unsigned r = 0;
  std::vector<Int> degrees;

  static Problem make(unsigned n, std::vector<Int> degrees);
  Int degree_product() const;
  bool operator<(const Problem& o) const;
  bool operator==(const Problem& o) const;
};

enum class Rule {
  CurveExact,    // n = 1: value = prod d_i
  AmbientSpace,  // r = 0: value = 1
  DropOne,       // some d_j = 1: value = bound(n, r-1, rest)
  DropDim,       // some d_j = n: value = bound(n, r-1, rest)
  Split,         // d = a+b: value = min(bound(a,rest)+bound(b,rest), bound(n-1,r+1,(a,b,rest)))
  ProductFloor,  // value = 1
  FanoFloor,     // sum d_i = n+r (flag-gated): value = 2
  ExactByCoprimeArray,  // n >= 3, degrees above the exactness threshold: value = prod d_i
};

const char* rule_name(Rule r);

struct CertNode;
using CertPtr = std::shared_ptr<const CertNode>;

struct CertNode {
  Problem problem;
  Int value;
  Rule rule = Rule::ProductFloor;
  Int split_a, split_b;  // Split only; a >= b, a + b is a degree of `problem`
  std::vector<CertPtr> children;
  unsigned depth = 1;  // 1 + max child depth; leaves have depth 1
  /// ExactByCoprimeArray only: the witnessing array certificate.
  std::shared_ptr<const admissible::CoprimeArrayCertificate> array_witness;
};

struct Options {
  std::uint64_t budget = 1'000'000;  // memo entry cap
  bool fano_floor = false;           // enable the conjectural Fano rule
};

struct Result {
  CertPtr cert;
  bool budget_exhausted = false;
};

class Engine {
 public:
  explicit Engine(Options opt = {});

  /// Best certified lower bound for p.  Deterministic: identical problems
  /// yield byte-identical serialized certificates regardless of memo warm
  /// state.  On budget exhaustion the result is still sound, with the flag set.
  Result best(const Problem& p);

  std::size_t memo_size() const;
  const Options& options() const { return opts_; }

 private:
  CertPtr compute(const Problem& p);
  CertPtr leaf_only(const Problem& p);

  Options opts_;
  std::map<Problem, CertPtr> memo_;
  mutable std::mutex mu_;  // insert-if-absent safety for concurrent callers
  bool exhausted_ = false;
};

/// prod(d_i - n + 1); requires every d_i >= n.
Int explicit_lower_bound(unsigned n, const std::vector<Int>& degrees);

struct VerifyResult {
  bool ok = false;
  std::string node_path;  // first bad node, e.g. "root/children[2]"
  std::string reason;
};

/// Re-evaluates every node of the tree against the rule semantics and the
/// soundness cap value <= prod d_i, without consulting any engine state.
VerifyResult verify_certificate(const CertNode& root);

/// Least k >= max(6, n) with ((k - n + 2)/k)^(r+1) >= 1/2, checked in exact
/// integer arithmetic (2 (k-n+2)^(r+1) >= k^(r+1)); this makes the explicit
/// bound at dimension n-1 with r+1 degrees absorb the 1/2 superadditivity loss.
unsigned compute_k(unsigned n, unsigned r);

struct ExactnessThreshold {
  unsigned n = 0, r = 0;
  unsigned k = 0;
  Int N;  // max_j (g_j - 1)(g_j' - 1) over the generator pairs
  std::vector<std::pair<admissible::Element, admissible::Element>> generators;
};

/// Degree threshold above which cd is exactly prod d_i (n >= 3).
ExactnessThreshold exactness_threshold(unsigned n, unsigned r);

/// prod d_i when exactness is certified: n = 1 always; n >= 3 with all
/// degrees >= the threshold and a successful coprime array build.  nullopt
/// otherwise.
std::optional<Int> exact_covdeg(const Problem& p);

/// Exactness certificate node (rule ExactByCoprimeArray) for a problem where
/// exact_covdeg applies with n >= 3; nullopt when it does not.
std::optional<CertPtr> exact_certificate(const Problem& p);

}  // namespace covcert::covdeg
