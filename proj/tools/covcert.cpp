#include <covcert/io.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace covcert;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;       // malformed flags, parse or domain errors
constexpr int kExitConstraint = 2;  // violated hypothesis / infeasible / check failure
constexpr int kExitBudget = 3;      // sound partial result, budget exhausted

std::vector<Int> parse_degrees(const std::string& s) {
  std::vector<Int> out;
  std::istringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (part.empty()) throw std::invalid_argument("empty degree entry");
    for (std::size_t i = part[0] == '-' ? 1 : 0; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9')
        throw std::invalid_argument("malformed degree '" + part + "'");
    out.push_back(Int(part));
  }
  if (out.empty()) throw std::invalid_argument("no degrees given");
  return out;
}

Rat parse_rat_arg(const std::string& s) {
  return parse_rational(s);  // throws std::invalid_argument
}

std::string command_line(int argc, char** argv) {
  std::ostringstream os;
  for (int i = 1; i < argc; ++i) os << (i > 1 ? " " : "") << argv[i];
  return os.str();
}

struct Emit {
  std::string format = "text";
  bool timing = false;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  long long elapsed_ms() const {
    if (!timing) return 0;
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

json degrees_json(const std::vector<Int>& degrees) {
  json arr = json::array();
  for (const Int& d : degrees) arr.push_back(io::int_to_json(d));
  return arr;
}

// ---------------------------------------------------------------- covdeg

int run_covdeg(const std::string& cmd, const Emit& emit, unsigned dim,
               unsigned codim, const std::string& degrees_str,
               std::uint64_t budget, bool fano,
               const std::string& cache_flag) {
  auto p = covdeg::Problem::make(dim, parse_degrees(degrees_str));
  if (p.r != codim)
    throw std::invalid_argument("--codim does not match the degree count");
  covdeg::Options opts;
  opts.budget = budget;
  opts.fano_floor = fano;

  std::string cache_path = cache_flag;
  if (cache_path.empty())
    if (const char* env = std::getenv(io::kCacheEnvVar); env && *env)
      cache_path = env;
  std::optional<io::Cache> cache;
  if (!cache_path.empty()) cache.emplace(cache_path);

  const std::string key = io::Cache::problem_key(p, opts);
  json result;
  if (cache) {
    if (auto hit = cache->lookup(key)) result = std::move(*hit);
  }
  if (result.is_null()) {
    bool exact = false;
    covdeg::CertPtr cert;
    bool exhausted = false;
    if (p.n >= 3) {
      if (auto ec = covdeg::exact_certificate(p)) {
        cert = *ec;
        exact = true;
      }
    }
    if (!cert) {
      covdeg::Engine engine(opts);
      auto res = engine.best(p);
      cert = res.cert;
      exhausted = res.budget_exhausted;
      if (p.n == 1) exact = true;
    }
    result["bound"] = io::int_to_json(cert->value);
    result["budget_exhausted"] = exhausted;
    result["certificate"] = io::certificate_to_json(*cert);
    if (exact) result["exact"] = true;
    if (cache) cache->store(key, result);
  }

  json problem{{"n", p.n}, {"r", p.r}, {"degrees", degrees_json(p.degrees)}};
  json provenance{{"budget", std::to_string(opts.budget)},
                  {"fano_floor", opts.fano_floor}};
  bool exhausted = result["budget_exhausted"].get<bool>();
  if (emit.format == "json") {
    std::cout << io::canonical_dump(io::make_document(
        "covdeg", cmd, problem, result, provenance, emit.elapsed_ms()));
  } else {
    std::cout << "cd_{" << p.n << "," << p.r << "}(";
    for (std::size_t i = 0; i < p.degrees.size(); ++i)
      std::cout << (i ? ", " : "") << p.degrees[i];
    std::cout << ") >= " << result["bound"].get<std::string>() << "\n";
    if (result.contains("exact")) std::cout << "bound is exact\n";
    if (exhausted) std::cout << "warning: derivation budget exhausted\n";
  }
  return exhausted ? kExitBudget : kExitOk;
}

// -------------------------------------------------------------- gonality

int run_gonality(const std::string& cmd, const Emit& emit, unsigned dim,
                 unsigned codim, const std::string& degrees_str,
                 const std::string& eps_str, const std::string& delta_str,
                 const std::string& c_str) {
  auto degrees = parse_degrees(degrees_str);
  if (degrees.size() != codim)
    throw std::invalid_argument("--codim does not match the degree count");
  Rat eps = parse_rat_arg(eps_str);
  Rat delta =
      delta_str.empty() ? separation::default_delta() : parse_rat_arg(delta_str);
  Rat c = c_str.empty() ? separation::default_c() : parse_rat_arg(c_str);

  std::sort(degrees.begin(), degrees.end(), std::greater<Int>());
  Rat alpha = 1;
  for (std::size_t i = 1; i < degrees.size(); ++i) {
    if (degrees[i] < Int(dim) + 1)
      throw separation::HypothesisViolated(
          "every degree after the first must be >= n + 1");
    alpha *= Rat(degrees[i] - dim);
  }
  auto schedule = separation::separation_count(dim, alpha, eps, degrees[0],
                                               delta, c);
  Int bound = separation::gonality_lower_bound(schedule);

  json problem{{"n", dim},          {"r", codim},
               {"degrees", degrees_json(degrees)},
               {"eps", io::rat_to_json(eps)},
               {"delta", io::rat_to_json(delta)},
               {"c", io::rat_to_json(c)}};
  json result{{"alpha", io::rat_to_json(alpha)},
              {"bound", io::int_to_json(bound)},
              {"feasible", schedule.feasible},
              {"schedule", io::schedule_to_json(schedule)}};
  if (emit.format == "json") {
    std::cout << io::canonical_dump(io::make_document(
        "gonality", cmd, problem, result, json::object(), emit.elapsed_ms()));
  } else if (schedule.feasible) {
    std::cout << "covering gonality >= " << bound << " (m = " << schedule.m
              << ", schedule feasible)\n";
  } else {
    std::cout << "schedule infeasible at d = " << degrees[0]
              << "; no bound\n";
  }
  return schedule.feasible ? kExitOk : kExitConstraint;
}

// --------------------------------------------------------------- balance

int run_balance_check(const std::string& cmd, const Emit& emit,
                      const std::string& path) {
  auto g = io::load_graph_file(path);
  auto verdict = snc::check_labeling(g);

  json exempt = json::array();
  for (unsigned ei : verdict.loop_exempt_edges) exempt.push_back(ei);
  json violation = nullptr;
  if (verdict.first_violation) {
    violation = json{{"condition", verdict.first_violation->condition},
                     {"where", verdict.first_violation->where},
                     {"detail", verdict.first_violation->detail}};
  }
  json problem{{"graph", io::graph_to_json(g)}};
  json result{{"ok", verdict.ok},
              {"loop_exempt_edges", exempt},
              {"violation", violation}};
  if (emit.format == "json") {
    std::cout << io::canonical_dump(io::make_document(
        "balance-check", cmd, problem, result, json::object(),
        emit.elapsed_ms()));
  } else if (verdict.ok) {
    std::cout << "balanced";
    if (!verdict.loop_exempt_edges.empty())
      std::cout << " (" << verdict.loop_exempt_edges.size()
                << " loop edges exempt from (iii))";
    std::cout << "\n";
  } else {
    const auto& v = *verdict.first_violation;
    std::cout << "violates " << v.condition << " at " << v.where << ": "
              << v.detail << "\n";
  }
  return verdict.ok ? kExitOk : kExitConstraint;
}

int run_balance_enumerate(const std::string& cmd, const Emit& emit,
                          const std::string& path, const std::string& order_str,
                          const std::string& dmax_str, bool matching) {
  auto sk = io::load_graph_file(path);
  Int order = io::int_from_json(json(order_str));
  Int dmax = io::int_from_json(json(dmax_str));
  auto all = snc::enumerate_labelings(sk, order, dmax);

  json labelings = json::array();
  for (const auto& g : all) labelings.push_back(io::graph_to_json(g));
  json result{{"count", all.size()}, {"labelings", std::move(labelings)}};
  if (matching) {
    json reports = json::array();
    for (const auto& g : all) reports.push_back(io::balance_matching_json(g));
    result["matching"] = std::move(reports);
  }
  json problem{{"graph", io::graph_to_json(sk)},
               {"order", io::int_to_json(order)},
               {"delta_max", io::int_to_json(dmax)}};
  if (emit.format == "json") {
    std::cout << io::canonical_dump(io::make_document(
        "balance-enumerate", cmd, problem, result, json::object(),
        emit.elapsed_ms()));
  } else {
    std::cout << all.size() << " labelings\n";
    for (std::size_t i = 0; i < all.size(); ++i)
      std::cout << "# labeling " << i << "\n" << io::write_graph_text(all[i]);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- verify

int run_verify(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io::ParseError("cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw io::ParseError(std::string("invalid JSON: ") + ex.what());
  }
  if (auto why = io::verify_document(doc)) {
    std::cerr << "rejected: " << *why << "\n";
    return kExitConstraint;
  }
  std::cout << "ok\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified covering-degree bounds, separation schedules, and "
               "SNC balancing checks"};
  app.require_subcommand(1);

  unsigned dim = 0, codim = 0;
  std::string degrees_str, format = "text", cache_flag;
  std::uint64_t budget = covdeg::Options{}.budget;
  bool fano = false, timing = false, matching = false;
  std::string eps_str, delta_str, c_str;
  std::string file_arg, order_str, dmax_str;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_flag("--timing", timing, "record wall time in the document");
  };

  auto* cd = app.add_subcommand("covdeg", "certified covering-degree bound");
  cd->add_option("--dim", dim, "dimension n")->required();
  cd->add_option("--codim", codim, "codimension r")->required();
  cd->add_option("--degrees", degrees_str, "comma-separated degrees")
      ->required();
  cd->add_option("--budget", budget, "memo entry cap");
  cd->add_flag("--assume-fano-floor", fano, "enable the conjectural Fano rule");
  cd->add_option("--cache", cache_flag, "result cache path");
  add_common(cd);

  auto* gon = app.add_subcommand("gonality", "covering gonality bound");
  gon->add_option("--dim", dim, "dimension n")->required();
  gon->add_option("--codim", codim, "codimension r")->required();
  gon->add_option("--degrees", degrees_str, "comma-separated degrees")
      ->required();
  gon->add_option("--epsilon", eps_str, "schedule parameter, rational in (0,1)")
      ->required();
  gon->add_option("--delta", delta_str, "outward slack, rational");
  gon->add_option("--c", c_str, "additive constant, rational");
  add_common(gon);

  auto* bal = app.add_subcommand("balance", "SNC dual-graph balancing");
  bal->require_subcommand(1);
  auto* bchk = bal->add_subcommand("check", "check a labeled graph");
  bchk->add_option("file", file_arg, "graph file (text or .json)")->required();
  add_common(bchk);
  auto* benum = bal->add_subcommand("enumerate", "list labelings of a skeleton");
  benum->add_option("file", file_arg, "skeleton file")->required();
  benum->add_option("--order", order_str, "total sinking speed n")->required();
  benum->add_option("--delta-max", dmax_str, "largest edge delta")->required();
  benum->add_flag("--matching", matching, "append per-locus matching reports");
  add_common(benum);

  auto* ver = app.add_subcommand("verify", "re-verify an emitted document");
  ver->add_option("file", file_arg, "document path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string cmd = command_line(argc, argv);
  Emit emit;
  emit.format = format;
  emit.timing = timing;
  try {
    if (cd->parsed())
      return run_covdeg(cmd, emit, dim, codim, degrees_str, budget, fano,
                        cache_flag);
    if (gon->parsed())
      return run_gonality(cmd, emit, dim, codim, degrees_str, eps_str,
                          delta_str, c_str);
    if (bchk->parsed()) return run_balance_check(cmd, emit, file_arg);
    if (benum->parsed())
      return run_balance_enumerate(cmd, emit, file_arg, order_str, dmax_str,
                                   matching);
    if (ver->parsed()) return run_verify(file_arg);
  } catch (const separation::HypothesisViolated& ex) {
    std::cerr << "hypothesis violated: " << ex.what() << "\n";
    return kExitConstraint;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
