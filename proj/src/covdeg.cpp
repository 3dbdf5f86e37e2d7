#include <covcert/covdeg.hpp>

#include <algorithm>
#include <functional>

namespace covcert::covdeg {

namespace {

Int sum_degrees(const std::vector<Int>& degrees) {
  Int s = 0;
  for (const Int& d : degrees) s += d;
  return s;
}

/// degrees with one instance of v removed (degrees sorted descending)
std::vector<Int> minus_one(const std::vector<Int>& degrees, const Int& v) {
  std::vector<Int> rest = degrees;
  auto it = std::find(rest.begin(), rest.end(), v);
  rest.erase(it);
  return rest;
}

std::vector<Int> plus(std::vector<Int> degrees, std::initializer_list<Int> add) {
  for (const Int& v : add) degrees.push_back(v);
  return degrees;
}

CertPtr make_leaf(Problem p, Int value, Rule rule) {
  auto node = std::make_shared<CertNode>();
  node->problem = std::move(p);
  node->value = std::move(value);
  node->rule = rule;
  node->depth = 1;
  return node;
}

}  // namespace

Problem Problem::make(unsigned n, std::vector<Int> degrees) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  for (const Int& d : degrees)
    if (d < 1) throw std::invalid_argument("degrees must be >= 1");
  std::sort(degrees.begin(), degrees.end(), std::greater<Int>());
  Problem p;
  p.n = n;
  p.r = static_cast<unsigned>(degrees.size());
  p.degrees = std::move(degrees);
  return p;
}

Int Problem::degree_product() const {
  Int prod = 1;
  for (const Int& d : degrees) prod *= d;
  return prod;
}

bool Problem::operator<(const Problem& o) const {
  if (n != o.n) return n < o.n;
  if (r != o.r) return r < o.r;
  return degrees < o.degrees;
}

bool Problem::operator==(const Problem& o) const {
  return n == o.n && r == o.r && degrees == o.degrees;
}

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::CurveExact: return "curve-exact";
    case Rule::AmbientSpace: return "ambient-space";
    case Rule::DropOne: return "drop-one";
    case Rule::DropDim: return "drop-dim";
    case Rule::Split: return "split";
    case Rule::ProductFloor: return "product-floor";
    case Rule::FanoFloor: return "fano-floor";
    case Rule::ExactByCoprimeArray: return "exact-by-coprime-array";
  }
  return "unknown";
}

Int explicit_lower_bound(unsigned n, const std::vector<Int>& degrees) {
  Int prod = 1;
  for (const Int& d : degrees) {
    if (d < n)
      throw std::invalid_argument("explicit bound needs every degree >= n");
    prod *= d - n + 1;
  }
  return prod;
}

Engine::Engine(Options opt) : opts_(opt) {}

Result Engine::best(const Problem& p) {
  std::lock_guard<std::mutex> lock(mu_);
  exhausted_ = false;
  Result res;
  res.cert = compute(p);
  res.budget_exhausted = exhausted_;
  return res;
}

std::size_t Engine::memo_size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return memo_.size();
}

CertPtr Engine::leaf_only(const Problem& p) {
  if (p.r == 0) return make_leaf(p, 1, Rule::AmbientSpace);
  if (p.n == 1) return make_leaf(p, p.degree_product(), Rule::CurveExact);
  if (opts_.fano_floor && sum_degrees(p.degrees) == Int(p.n) + p.r)
    return make_leaf(p, 2, Rule::FanoFloor);
  return make_leaf(p, 1, Rule::ProductFloor);
}

CertPtr Engine::compute(const Problem& p) {
  if (auto it = memo_.find(p); it != memo_.end()) return it->second;
  if (p.r == 0 || p.n == 1) {
    CertPtr node = leaf_only(p);
    if (memo_.size() < opts_.budget) memo_.emplace(p, node);
    return node;
  }
  if (memo_.size() >= opts_.budget) {
    exhausted_ = true;
    return leaf_only(p);
  }

  // Exploration order is the tie-break: first candidate wins at equal value.
  std::vector<CertPtr> candidates;
  if (opts_.fano_floor && sum_degrees(p.degrees) == Int(p.n) + p.r)
    candidates.push_back(make_leaf(p, 2, Rule::FanoFloor));
  auto reduce = [&](Rule rule, const Int& dropped) {
    CertPtr child = compute(Problem::make(p.n, minus_one(p.degrees, dropped)));
    auto node = std::make_shared<CertNode>();
    node->problem = p;
    node->value = child->value;
    node->rule = rule;
    node->children = {child};
    node->depth = child->depth + 1;
    candidates.push_back(node);
  };
  if (p.degrees.back() == 1) reduce(Rule::DropOne, 1);
  if (std::find(p.degrees.begin(), p.degrees.end(), Int(p.n)) !=
      p.degrees.end())
    reduce(Rule::DropDim, Int(p.n));

  for (std::size_t i = 0; i < p.degrees.size(); ++i) {
    if (i > 0 && p.degrees[i] == p.degrees[i - 1]) continue;
    const Int& d = p.degrees[i];
    if (d < 2) continue;
    std::vector<Int> rest = p.degrees;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    bool stop = false;
    for (Int a = (d + 1) / 2; a <= d - 1; ++a) {
      if (memo_.size() >= opts_.budget) {
        exhausted_ = true;
        stop = true;
        break;
      }
      Int b = d - a;
      CertPtr c0 = compute(Problem::make(p.n, plus(rest, {a})));
      CertPtr c1 = compute(Problem::make(p.n, plus(rest, {b})));
      CertPtr c2 = compute(Problem::make(p.n - 1, plus(rest, {a, b})));
      auto node = std::make_shared<CertNode>();
      node->problem = p;
      node->value = std::min(Int(c0->value + c1->value), c2->value);
      node->rule = Rule::Split;
      node->split_a = a;
      node->split_b = b;
      node->children = {c0, c1, c2};
      node->depth = 1 + std::max({c0->depth, c1->depth, c2->depth});
      candidates.push_back(node);
    }
    if (stop) break;
  }
  candidates.push_back(make_leaf(p, 1, Rule::ProductFloor));

  CertPtr best = candidates.front();
  for (const CertPtr& c : candidates)
    if (c->value > best->value) best = c;

  if (memo_.size() < opts_.budget) memo_.emplace(p, best);
  else exhausted_ = true;
  return best;
}

namespace {

struct Failure {
  std::string path, reason;
};

std::optional<Failure> verify_node(const CertNode& node,
                                   const std::string& path) {
  const Problem& p = node.problem;
  auto fail = [&](std::string reason) {
    return Failure{path, std::move(reason)};
  };
  if (p.n < 1 || p.r != p.degrees.size()) return fail("malformed problem");
  for (std::size_t i = 0; i < p.degrees.size(); ++i) {
    if (p.degrees[i] < 1) return fail("degree below 1");
    if (i > 0 && p.degrees[i] > p.degrees[i - 1])
      return fail("degrees not sorted descending");
  }
  Int cap = p.degree_product();
  if (node.value < 1 || node.value > cap)
    return fail("value outside [1, degree product]");

  auto expect_children = [&](std::size_t count) -> std::optional<Failure> {
    if (node.children.size() != count)
      return fail("wrong number of children for " +
                  std::string(rule_name(node.rule)));
    return std::nullopt;
  };
  auto check_reduction = [&](const Int& dropped) -> std::optional<Failure> {
    if (auto f = expect_children(1)) return f;
    if (std::find(p.degrees.begin(), p.degrees.end(), dropped) ==
        p.degrees.end())
      return fail("rule hypothesis absent from the degree list");
    Problem expected = Problem::make(p.n, minus_one(p.degrees, dropped));
    if (!(node.children[0]->problem == expected))
      return fail("child problem mismatch");
    if (node.value != node.children[0]->value)
      return fail("value does not match the child");
    return std::nullopt;
  };

  switch (node.rule) {
    case Rule::CurveExact:
      if (auto f = expect_children(0)) return f;
      if (p.n != 1) return fail("curve-exact outside dimension 1");
      if (node.value != cap) return fail("curve-exact value not the product");
      break;
    case Rule::AmbientSpace:
      if (auto f = expect_children(0)) return f;
      if (p.r != 0) return fail("ambient-space with degrees left");
      if (node.value != 1) return fail("ambient-space value not 1");
      break;
    case Rule::ProductFloor:
      if (auto f = expect_children(0)) return f;
      if (node.value != 1) return fail("product-floor value not 1");
      break;
    case Rule::FanoFloor:
      if (auto f = expect_children(0)) return f;
      if (sum_degrees(p.degrees) != Int(p.n) + p.r)
        return fail("fano-floor needs degree sum n + r");
      if (node.value != 2) return fail("fano-floor value not 2");
      break;
    case Rule::DropOne:
      if (auto f = check_reduction(1)) return f;
      break;
    case Rule::DropDim:
      if (auto f = check_reduction(Int(p.n))) return f;
      break;
    case Rule::Split: {
      if (auto f = expect_children(3)) return f;
      if (p.n < 2) return fail("split below dimension 2");
      if (node.split_b < 1 || node.split_a < node.split_b)
        return fail("split labels not a >= b >= 1");
      Int d = node.split_a + node.split_b;
      if (std::find(p.degrees.begin(), p.degrees.end(), d) == p.degrees.end())
        return fail("split degree absent from the degree list");
      std::vector<Int> rest = minus_one(p.degrees, d);
      Problem ea = Problem::make(p.n, plus(rest, {node.split_a}));
      Problem eb = Problem::make(p.n, plus(rest, {node.split_b}));
      Problem ez =
          Problem::make(p.n - 1, plus(rest, {node.split_a, node.split_b}));
      if (!(node.children[0]->problem == ea) ||
          !(node.children[1]->problem == eb) ||
          !(node.children[2]->problem == ez))
        return fail("split child problems mismatch");
      Int expected = std::min(
          Int(node.children[0]->value + node.children[1]->value),
          node.children[2]->value);
      if (node.value != expected) return fail("split value not the min");
      break;
    }
    case Rule::ExactByCoprimeArray: {
      if (auto f = expect_children(0)) return f;
      if (p.n < 3) return fail("exactness rule below dimension 3");
      if (!node.array_witness) return fail("missing array witness");
      const auto& w = *node.array_witness;
      if (w.n != p.n || w.degrees != p.degrees)
        return fail("witness does not match the problem");
      if (w.k < compute_k(p.n, p.r))
        return fail("witness entry floor below k(n, r)");
      if (auto why = admissible::verify_coprime_array(w))
        return fail("array witness invalid: " + *why);
      if (node.value != cap) return fail("exact value not the product");
      break;
    }
  }

  for (std::size_t i = 0; i < node.children.size(); ++i) {
    if (!node.children[i]) return Failure{path, "null child"};
    if (auto f = verify_node(*node.children[i],
                             path + "/children[" + std::to_string(i) + "]"))
      return f;
  }
  return std::nullopt;
}

}  // namespace

VerifyResult verify_certificate(const CertNode& root) {
  VerifyResult out;
  try {
    if (auto f = verify_node(root, "root")) {
      out.ok = false;
      out.node_path = f->path;
      out.reason = f->reason;
    } else {
      out.ok = true;
    }
  } catch (const std::exception& ex) {
    out.ok = false;
    out.node_path = "root";
    out.reason = std::string("verification error: ") + ex.what();
  }
  return out;
}

unsigned compute_k(unsigned n, unsigned r) {
  unsigned k = std::max(6u, n);
  while (2 * pow_int(Int(k) - n + 2, r + 1) < pow_int(Int(k), r + 1)) ++k;
  return k;
}

ExactnessThreshold exactness_threshold(unsigned n, unsigned r) {
  if (n < 3) throw admissible::UnsupportedDimension(n);
  ExactnessThreshold thr;
  thr.n = n;
  thr.r = r;
  thr.k = compute_k(n, r);
  auto seq = admissible::coprime_sequence(n, 2 * r, Int(thr.k));
  thr.N = 0;
  for (unsigned j = 0; j < r; ++j) {
    const auto& g = seq[2 * j];
    const auto& gp = seq[2 * j + 1];
    thr.N = std::max(thr.N, Int((g.value - 1) * (gp.value - 1)));
    thr.generators.emplace_back(g, gp);
  }
  return thr;
}

namespace {

std::optional<admissible::CoprimeArrayCertificate> exact_witness(
    const Problem& p) {
  if (p.n < 3 || p.r == 0) return std::nullopt;
  auto thr = exactness_threshold(p.n, p.r);
  for (const Int& d : p.degrees)
    if (d < thr.N) return std::nullopt;
  try {
    return admissible::build_coprime_array(p.n, Int(thr.k), p.degrees);
  } catch (const admissible::DegreeTooSmall&) {
    return std::nullopt;
  }
}

}  // namespace

std::optional<Int> exact_covdeg(const Problem& p) {
  if (p.n == 1) return p.degree_product();
  if (p.n < 3) return std::nullopt;
  if (exact_witness(p)) return p.degree_product();
  return std::nullopt;
}

std::optional<CertPtr> exact_certificate(const Problem& p) {
  if (p.n < 3) return std::nullopt;
  auto witness = exact_witness(p);
  if (!witness) return std::nullopt;
  auto node = std::make_shared<CertNode>();
  node->problem = p;
  node->value = p.degree_product();
  node->rule = Rule::ExactByCoprimeArray;
  node->depth = 1;
  node->array_witness =
      std::make_shared<const admissible::CoprimeArrayCertificate>(
          std::move(*witness));
  return CertPtr(node);
}

}  // namespace covcert::covdeg
