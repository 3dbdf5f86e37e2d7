#include <covcert/separation.hpp>

#include <algorithm>

namespace covcert::separation {

namespace {

Rat rat_pow(const Rat& base, unsigned exp) {
  return Rat(pow_int(numerator(base), exp), pow_int(denominator(base), exp));
}

void validate_common(unsigned n, const Rat& eps, const Rat& c) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  if (eps <= 0 || eps >= 1)
    throw std::invalid_argument("eps must satisfy 0 < eps < 1");
  if (c < 0) throw std::invalid_argument("c must be >= 0");
}

/// The telescoping conditions at d: ((eps^(j-1) - eps^j) d / j)^j > (1-eps) d
/// for 2 <= j <= n, and eps^n d > c.  Monotone in d.
bool telescoping_holds(unsigned n, const Rat& eps, const Rat& c, const Int& d) {
  Rat rhs = (1 - eps) * Rat(d);
  for (unsigned j = 2; j <= n; ++j) {
    Rat base = (rat_pow(eps, j - 1) - rat_pow(eps, j)) * Rat(d) / j;
    if (rat_pow(base, j) <= rhs) return false;
  }
  return rat_pow(eps, n) * Rat(d) > c;
}

}  // namespace

bool lemma54_inequality_holds(unsigned n, const Rat& eps, const Rat& c,
                              const Int& d, const RootConfig& cfg) {
  validate_common(n, eps, c);
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  Rat a = (1 - eps) * Rat(d);
  unsigned bits = cfg.start_bits;
  while (true) {
    Rat upper = c, lower = c;
    for (unsigned j = 1; j <= n; ++j) {
      upper += j * root_upper(a, j, bits);
      lower += j * root_lower(a, j, bits);
    }
    if (upper < d) return true;
    if (lower >= d) return false;
    if (bits >= cfg.max_bits) throw PrecisionExhausted();
    bits = std::min(bits * 2, cfg.max_bits);
  }
}

ThresholdReport lemma54_threshold(unsigned n, const Rat& eps, const Rat& c,
                                  const RootConfig& cfg) {
  validate_common(n, eps, c);
  if (n < 2) throw std::invalid_argument("threshold scan needs n >= 2");
  ThresholdReport rep;
  rep.n = n;
  rep.eps = eps;
  rep.c = c;
  rep.d0_closed =
      ceil_rat(std::max(c, Rat(n) / (1 - eps)) / rat_pow(eps, n)) + 1;
  rep.tail_verified = telescoping_holds(n, eps, c, rep.d0_closed);

  auto holds = [&](const Int& d) {
    return lemma54_inequality_holds(n, eps, c, d, cfg);
  };
  Int s;
  if (holds(rep.d0_closed)) {
    s = rep.d0_closed;
  } else {
    // Closed form defective: anchor at the least d meeting the telescoping
    // conditions, which certify every larger d.
    Int hi = 1;
    while (!telescoping_holds(n, eps, c, hi)) hi <<= 1;
    Int lo = hi / 2;
    while (lo + 1 < hi) {
      Int mid = (lo + hi) / 2;
      if (telescoping_holds(n, eps, c, mid)) hi = mid;
      else lo = mid;
    }
    s = hi;
    while (!holds(s)) ++s;
  }
  while (s > 1 && holds(s - 1)) --s;
  rep.d0_scan = s;
  return rep;
}

Int linear_threshold(const Rat& eps, const Rat& c) {
  validate_common(1, eps, c);
  return floor_rat(c / eps) + 1;
}

Schedule separation_count(unsigned n, const Rat& alpha, const Rat& eps,
                          const Int& d, const Rat& delta, const Rat& c,
                          const RootConfig& cfg) {
  validate_common(n, eps, c);
  if (alpha <= 0) throw std::invalid_argument("alpha must be > 0");
  if (delta <= 0) throw std::invalid_argument("delta must be > 0");
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  Schedule s;
  s.n = n;
  s.alpha = alpha;
  s.eps = eps;
  s.delta = delta;
  s.c = c;
  s.d = d;
  s.m = floor_rat((1 - eps) * alpha * Rat(d));
  Rat ratio = Rat(s.m) / alpha;
  s.total = c;
  for (unsigned j = 1; j <= n; ++j) {
    Rat aj = j * root_upper(ratio, j, cfg.start_bits) + delta;
    s.total += aj;
    s.a.push_back(std::move(aj));
  }
  s.feasible = s.total < d;
  return s;
}

Int gonality_lower_bound(const Schedule& s) {
  return s.feasible ? s.m + 1 : Int(0);
}

Int gonality_lower_bound(unsigned n, const Rat& alpha, const Rat& eps,
                         const Int& d, const Rat& delta, const Rat& c) {
  return gonality_lower_bound(separation_count(n, alpha, eps, d, delta, c));
}

TheoremB theorem_b_bound(unsigned n, unsigned r, const std::vector<Int>& degrees,
                         const Rat& eps) {
  if (degrees.size() != r)
    throw std::invalid_argument("degree count does not match the codimension");
  if (r < 1) throw std::invalid_argument("need at least one degree");
  std::vector<Int> sorted = degrees;
  std::sort(sorted.begin(), sorted.end(), std::greater<Int>());
  for (const Int& di : sorted)
    if (di < 1) throw std::invalid_argument("degrees must be >= 1");
  TheoremB out;
  out.alpha = 1;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] < Int(n) + 1)
      throw HypothesisViolated(
          "every degree after the first must be >= n + 1");
    out.alpha *= Rat(sorted[i] - n);
  }
  out.schedule = separation_count(n, out.alpha, eps, sorted[0],
                                  default_delta(), default_c());
  out.bound = gonality_lower_bound(out.schedule);
  return out;
}

}  // namespace covcert::separation
