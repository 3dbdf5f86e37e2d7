#pragma once

#include <covcert/numeric.hpp>

#include <stdexcept>
#include <vector>

/// Exact-rational Angehrn-Siu style separation schedules and the numerical
/// threshold lemma backing them.  Every irrational j-th root is replaced by
/// outward-rounded rational bounds, so every verdict labelled true or false
/// is rigorous; when the rounding interval straddles the comparison at the
/// precision cap, PrecisionExhausted is raised instead of guessing.
namespace covcert::separation {

struct RootConfig {
  unsigned start_bits = 32;
  unsigned max_bits = 4096;
};

struct PrecisionExhausted : std::runtime_error {
  PrecisionExhausted()
      : std::runtime_error("verdict not settled at the precision cap") {}
};

/// Whether  sum_{j=1..n} j * ((1-eps) d)^(1/j) + c  <  d,  decided by
/// escalating two-sided root bounds.  Requires n >= 1, 0 < eps < 1, c >= 0,
/// d >= 1.
bool lemma54_inequality_holds(unsigned n, const Rat& eps, const Rat& c,
                              const Int& d, const RootConfig& cfg = {});

struct ThresholdReport {
  unsigned n = 0;
  Rat eps, c;
  Int d0_scan;    // least start of a contiguous verified run (see below)
  Int d0_closed;  // ceil((1/eps^n) max(c, n/(1-eps))) + 1
  bool tail_verified = false;  // telescoping conditions hold at d0_closed
};

/// Scan-plus-closed-form threshold for n >= 2.  d0_closed is the closed-form
/// candidate above.  When the inequality holds at d0_closed, d0_scan is the
/// least d whose contiguous run of verified integers reaches d0_closed.  The
/// closed form is NOT always sufficient (e.g. n=2, eps=1/4, c=0 fails at
/// d0_closed=44); in that case the run is anchored instead at the least
/// integer satisfying the telescoping conditions
///   ((eps^(j-1) - eps^j) d / j)^j > (1-eps) d   (2 <= j <= n),
///   eps^n d > c,
/// which are monotone in d and certify every larger d, and d0_scan may then
/// exceed d0_closed.  tail_verified records the exact condition check at
/// d0_closed itself.
ThresholdReport lemma54_threshold(unsigned n, const Rat& eps, const Rat& c,
                                  const RootConfig& cfg = {});

/// n = 1 case: the inequality is linear; least d with (1-eps) d + c < d.
Int linear_threshold(const Rat& eps, const Rat& c);

inline Rat default_delta() { return Rat(1, 1000000); }
inline Rat default_c() { return Rat(1); }

struct Schedule {
  unsigned n = 0;  // dimension
  Rat alpha, eps, delta, c;
  Int d;
  Int m;               // floor((1-eps) alpha d)
  std::vector<Rat> a;  // a_j >= j (m/alpha)^(1/j) + delta, j = 1..n
  Rat total;           // sum a_j + c
  bool feasible = false;  // total < d (exact)
};

/// Separation schedule for m = floor((1-eps) alpha d) points; a_j are
/// outward-rounded upper bounds, so feasible = true is rigorous.
Schedule separation_count(unsigned n, const Rat& alpha, const Rat& eps,
                          const Int& d, const Rat& delta, const Rat& c,
                          const RootConfig& cfg = {});

/// m + 1 when the schedule is feasible, else 0.
Int gonality_lower_bound(const Schedule& s);
Int gonality_lower_bound(unsigned n, const Rat& alpha, const Rat& eps,
                         const Int& d, const Rat& delta, const Rat& c);

struct HypothesisViolated : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct TheoremB {
  Rat alpha;  // prod_{i>=2} (d_i - n), the ambient subvariety degree bound
  Schedule schedule;
  Int bound;  // gonality lower bound (0 when infeasible)
};

/// Covering gonality bound for a complete intersection of type (d_1,...,d_r),
/// dimension n: alpha from the ambient (n+1)-fold cut out by d_2..d_r, then
/// the separation schedule at d = d_1.  Requires d_i >= n + 1 for i >= 2.
TheoremB theorem_b_bound(unsigned n, unsigned r, const std::vector<Int>& degrees,
                         const Rat& eps);

}  // namespace covcert::separation
