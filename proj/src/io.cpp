#include <covcert/io.hpp>

#include <nlohmann/json.hpp>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace covcert::io {

using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "1.0.0";

unsigned to_unsigned(const Int& v) {
  if (v < 0 || v > std::numeric_limits<unsigned>::max())
    throw ParseError("integer out of range for a small field");
  return v.convert_to<unsigned>();
}

Rat rat_pow(const Rat& base, unsigned exp) {
  return Rat(pow_int(numerator(base), exp), pow_int(denominator(base), exp));
}

}  // namespace

// -- numbers -----------------------------------------------------------------

json int_to_json(const Int& v) { return json(v.str()); }

Int int_from_json(const json& j) {
  if (j.is_number_integer()) return Int(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return Int(j.get<std::uint64_t>());
  if (!j.is_string()) throw ParseError("expected an integer");
  const std::string& s = j.get_ref<const std::string&>();
  std::size_t i = s.size() > 0 && (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw ParseError("malformed integer: '" + s + "'");
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9')
      throw ParseError("malformed integer: '" + s + "'");
  return Int(s);
}

json rat_to_json(const Rat& v) { return json(rat_to_string(v)); }

Rat rat_from_json(const json& j) {
  if (j.is_number_integer()) return Rat(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return Rat(j.get<std::uint64_t>());
  if (!j.is_string()) throw ParseError("expected a rational");
  try {
    return parse_rational(j.get_ref<const std::string&>());
  } catch (const std::invalid_argument& ex) {
    throw ParseError(ex.what());
  }
}

// -- graph text --------------------------------------------------------------

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  return parts;
}

Int parse_int_field(const std::string& s, int line) {
  std::size_t i = !s.empty() && s[0] == '-' ? 1 : 0;
  if (i == s.size()) throw ParseError("malformed integer '" + s + "'", line);
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9')
      throw ParseError("malformed integer '" + s + "'", line);
  return Int(s);
}

std::vector<Int> parse_int_list(const std::string& s, int line) {
  std::vector<Int> out;
  for (const auto& part : split(s, ','))
    out.push_back(parse_int_field(part, line));
  return out;
}

snc::VertexKind parse_kind(const std::string& s, int line) {
  using Tag = snc::VertexKind::Tag;
  if (s == "ghost") return {Tag::ghost, 0};
  if (s == "z") return {Tag::z, 0};
  if (s == "x1") return {Tag::x, 1};
  if (s == "x2") return {Tag::x, 2};
  throw ParseError("unknown vertex kind '" + s + "'", line);
}

std::string kind_text(const snc::VertexKind& k) {
  using Tag = snc::VertexKind::Tag;
  switch (k.tag) {
    case Tag::ghost: return "ghost";
    case Tag::z: return "z";
    case Tag::x: return "x" + std::to_string(k.component);
    case Tag::unspecified: break;
  }
  return "";
}

std::map<std::string, std::string> parse_attrs(
    const std::vector<std::string>& tokens, std::size_t from, int line) {
  std::map<std::string, std::string> attrs;
  for (std::size_t i = from; i < tokens.size(); ++i) {
    auto eq = tokens[i].find('=');
    if (eq == std::string::npos)
      throw ParseError("expected key=value, got '" + tokens[i] + "'", line);
    attrs[tokens[i].substr(0, eq)] = tokens[i].substr(eq + 1);
  }
  return attrs;
}

}  // namespace

snc::Graph parse_graph_text(std::istream& in) {
  snc::Graph g;
  bool have_components = false;
  std::map<std::string, unsigned> names;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos)
      raw.resize(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    if (tok[0] == "components") {
      if (tok.size() != 2)
        throw ParseError("components needs one count", line);
      Int k = parse_int_field(tok[1], line);
      if (k < 1) throw ParseError("components must be >= 1", line);
      g.components = to_unsigned(k);
      have_components = true;
      continue;
    }
    if (!have_components)
      throw ParseError("components must come first", line);

    if (tok[0] == "order") {
      if (tok.size() != 2) throw ParseError("order needs one value", line);
      g.order = parse_int_field(tok[1], line);
      if (g.order < 1) throw ParseError("order must be >= 1", line);
    } else if (tok[0] == "vertex") {
      if (tok.size() < 2) throw ParseError("vertex needs a name", line);
      snc::Vertex v;
      v.name = tok[1];
      if (names.count(v.name))
        throw ParseError("duplicate vertex '" + v.name + "'", line);
      auto attrs = parse_attrs(tok, 2, line);
      auto into = attrs.find("into");
      if (into == attrs.end() || into->second.empty())
        throw ParseError("vertex needs a nonempty into= list", line);
      for (const Int& i : parse_int_list(into->second, line)) {
        if (i < 1 || i > g.components)
          throw ParseError("into= component out of range", line);
        v.maps_into.push_back(to_unsigned(i));
      }
      std::sort(v.maps_into.begin(), v.maps_into.end());
      if (auto kind = attrs.find("kind"); kind != attrs.end())
        v.kind = parse_kind(kind->second, line);
      if (auto speeds = attrs.find("speeds"); speeds != attrs.end()) {
        v.speeds = parse_int_list(speeds->second, line);
        if (v.speeds.size() != g.components)
          throw ParseError("speeds= needs one entry per component", line);
      }
      names[v.name] = static_cast<unsigned>(g.vertices.size());
      g.vertices.push_back(std::move(v));
    } else if (tok[0] == "edge") {
      if (tok.size() < 3) throw ParseError("edge needs two endpoints", line);
      snc::Edge e;
      for (int side = 0; side < 2; ++side) {
        auto it = names.find(tok[1 + side]);
        if (it == names.end())
          throw ParseError("unknown vertex '" + tok[1 + side] + "'", line);
        (side == 0 ? e.v : e.w) = it->second;
      }
      auto attrs = parse_attrs(tok, 3, line);
      if (auto delta = attrs.find("delta"); delta != attrs.end()) {
        e.delta = parse_int_field(delta->second, line);
        if (e.delta < 1) throw ParseError("delta must be >= 1", line);
      }
      if (auto orders = attrs.find("orders"); orders != attrs.end()) {
        auto sides = split(orders->second, '|');
        if (sides.size() != 2)
          throw ParseError("orders= needs two |-separated flags", line);
        for (int side = 0; side < 2; ++side) {
          e.orders[side] = parse_int_list(sides[side], line);
          if (e.orders[side].size() != g.components)
            throw ParseError("orders= needs one entry per component", line);
        }
      }
      g.edges.push_back(std::move(e));
    } else {
      throw ParseError("unknown directive '" + tok[0] + "'", line);
    }
  }
  if (!have_components) throw ParseError("components must come first", 1);
  return g;
}

snc::Graph parse_graph_text(const std::string& text) {
  std::istringstream in(text);
  return parse_graph_text(in);
}

std::string write_graph_text(const snc::Graph& g) {
  std::ostringstream os;
  os << "components " << g.components << '\n';
  if (g.order != 0) os << "order " << g.order << '\n';
  auto join = [](const auto& xs) {
    std::ostringstream s;
    for (std::size_t i = 0; i < xs.size(); ++i)
      s << (i ? "," : "") << xs[i];
    return s.str();
  };
  for (const auto& v : g.vertices) {
    os << "vertex " << v.name << " into=" << join(v.maps_into);
    if (auto kind = kind_text(v.kind); !kind.empty()) os << " kind=" << kind;
    if (!v.speeds.empty()) os << " speeds=" << join(v.speeds);
    os << '\n';
  }
  for (const auto& e : g.edges) {
    os << "edge " << g.vertices.at(e.v).name << ' ' << g.vertices.at(e.w).name;
    if (e.delta != 0) os << " delta=" << e.delta;
    if (!e.orders[0].empty() || !e.orders[1].empty())
      os << " orders=" << join(e.orders[0]) << '|' << join(e.orders[1]);
    os << '\n';
  }
  return os.str();
}

// -- graph JSON --------------------------------------------------------------

json graph_to_json(const snc::Graph& g) {
  json j;
  j["components"] = g.components;
  if (g.order != 0) j["order"] = int_to_json(g.order);
  j["vertices"] = json::array();
  for (const auto& v : g.vertices) {
    json vj;
    vj["name"] = v.name;
    vj["into"] = v.maps_into;
    if (auto kind = kind_text(v.kind); !kind.empty()) vj["kind"] = kind;
    if (!v.speeds.empty()) {
      vj["speeds"] = json::array();
      for (const Int& s : v.speeds) vj["speeds"].push_back(int_to_json(s));
    }
    j["vertices"].push_back(std::move(vj));
  }
  j["edges"] = json::array();
  for (const auto& e : g.edges) {
    json ej;
    ej["v"] = e.v;
    ej["w"] = e.w;
    if (e.delta != 0) ej["delta"] = int_to_json(e.delta);
    if (!e.orders[0].empty() || !e.orders[1].empty()) {
      ej["orders"] = json::array();
      for (int side = 0; side < 2; ++side) {
        json oj = json::array();
        for (const Int& m : e.orders[side]) oj.push_back(int_to_json(m));
        ej["orders"].push_back(std::move(oj));
      }
    }
    j["edges"].push_back(std::move(ej));
  }
  return j;
}

snc::Graph graph_from_json(const json& j) {
  snc::Graph g;
  g.components = to_unsigned(int_from_json(j.at("components")));
  if (j.contains("order")) g.order = int_from_json(j["order"]);
  for (const auto& vj : j.at("vertices")) {
    snc::Vertex v;
    v.name = vj.at("name").get<std::string>();
    for (const auto& i : vj.at("into"))
      v.maps_into.push_back(to_unsigned(int_from_json(i)));
    if (vj.contains("kind"))
      v.kind = parse_kind(vj["kind"].get<std::string>(), 0);
    if (vj.contains("speeds"))
      for (const auto& s : vj["speeds"]) v.speeds.push_back(int_from_json(s));
    g.vertices.push_back(std::move(v));
  }
  if (j.contains("edges")) {
    for (const auto& ej : j["edges"]) {
      snc::Edge e;
      e.v = to_unsigned(int_from_json(ej.at("v")));
      e.w = to_unsigned(int_from_json(ej.at("w")));
      if (ej.contains("delta")) e.delta = int_from_json(ej["delta"]);
      if (ej.contains("orders")) {
        const auto& oj = ej["orders"];
        if (!oj.is_array() || oj.size() != 2)
          throw ParseError("edge orders must hold two flags");
        for (int side = 0; side < 2; ++side)
          for (const auto& m : oj[side])
            e.orders[side].push_back(int_from_json(m));
      }
      g.edges.push_back(std::move(e));
    }
  }
  return g;
}

snc::Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& ex) {
      throw ParseError(std::string("invalid JSON: ") + ex.what());
    }
    return graph_from_json(j);
  }
  return parse_graph_text(in);
}

// -- covdeg certificates -----------------------------------------------------

namespace {

json factorization_to_json(const arith::Factorization& f) {
  json j;
  j["value"] = int_to_json(f.value);
  j["factors"] = json::array();
  for (const auto& [p, e] : f.factors)
    j["factors"].push_back(json::array({int_to_json(p), e}));
  return j;
}

arith::Factorization factorization_from_json(const json& j) {
  arith::Factorization f;
  f.value = int_from_json(j.at("value"));
  for (const auto& pe : j.at("factors")) {
    if (!pe.is_array() || pe.size() != 2)
      throw ParseError("factor entries are [prime, exponent] pairs");
    f.factors.emplace_back(int_from_json(pe[0]),
                           to_unsigned(int_from_json(pe[1])));
  }
  return f;
}

json element_to_json(const admissible::Element& e) {
  json j;
  j["value"] = int_to_json(e.value);
  j["factorization"] = factorization_to_json(e.factorization);
  return j;
}

admissible::Element element_from_json(const json& j) {
  admissible::Element e;
  e.value = int_from_json(j.at("value"));
  e.factorization = factorization_from_json(j.at("factorization"));
  return e;
}

json problem_to_json(const covdeg::Problem& p) {
  json j;
  j["n"] = p.n;
  j["r"] = p.r;
  j["degrees"] = json::array();
  for (const Int& d : p.degrees) j["degrees"].push_back(int_to_json(d));
  return j;
}

covdeg::Problem problem_from_json(const json& j) {
  covdeg::Problem p;
  p.n = to_unsigned(int_from_json(j.at("n")));
  for (const auto& d : j.at("degrees")) p.degrees.push_back(int_from_json(d));
  p.r = j.contains("r") ? to_unsigned(int_from_json(j["r"]))
                        : static_cast<unsigned>(p.degrees.size());
  return p;
}

covdeg::Rule rule_from_name(const std::string& name) {
  using covdeg::Rule;
  for (Rule r : {Rule::CurveExact, Rule::AmbientSpace, Rule::DropOne,
                 Rule::DropDim, Rule::Split, Rule::ProductFloor,
                 Rule::FanoFloor, Rule::ExactByCoprimeArray})
    if (name == covdeg::rule_name(r)) return r;
  throw ParseError("unknown rule '" + name + "'");
}

}  // namespace

json certificate_to_json(const covdeg::CertNode& node) {
  json j;
  j["problem"] = problem_to_json(node.problem);
  j["value"] = int_to_json(node.value);
  j["rule"] = covdeg::rule_name(node.rule);
  if (node.rule == covdeg::Rule::Split) {
    j["split_a"] = int_to_json(node.split_a);
    j["split_b"] = int_to_json(node.split_b);
  }
  if (!node.children.empty()) {
    j["children"] = json::array();
    for (const auto& child : node.children)
      j["children"].push_back(certificate_to_json(*child));
  }
  if (node.array_witness)
    j["array_witness"] = coprime_array_to_json(*node.array_witness);
  return j;
}

covdeg::CertPtr certificate_from_json(const json& j) {
  auto node = std::make_shared<covdeg::CertNode>();
  node->problem = problem_from_json(j.at("problem"));
  node->value = int_from_json(j.at("value"));
  node->rule = rule_from_name(j.at("rule").get<std::string>());
  if (j.contains("split_a")) node->split_a = int_from_json(j["split_a"]);
  if (j.contains("split_b")) node->split_b = int_from_json(j["split_b"]);
  node->depth = 1;
  if (j.contains("children")) {
    for (const auto& cj : j["children"]) {
      auto child = certificate_from_json(cj);
      node->depth = std::max(node->depth, child->depth + 1);
      node->children.push_back(std::move(child));
    }
  }
  if (j.contains("array_witness"))
    node->array_witness =
        std::make_shared<const admissible::CoprimeArrayCertificate>(
            coprime_array_from_json(j["array_witness"]));
  return node;
}

json coprime_array_to_json(const admissible::CoprimeArrayCertificate& c) {
  json j;
  j["n"] = c.n;
  j["k"] = int_to_json(c.k);
  j["degrees"] = json::array();
  for (const Int& d : c.degrees) j["degrees"].push_back(int_to_json(d));
  j["columns"] = json::array();
  for (const auto& col : c.columns) {
    json cj = json::array();
    for (const auto& run : col)
      cj.push_back(json{{"value", int_to_json(run.value)},
                        {"count", int_to_json(run.count)}});
    j["columns"].push_back(std::move(cj));
  }
  j["entry_factorizations"] = json::array();
  for (const auto& f : c.entry_factorizations)
    j["entry_factorizations"].push_back(factorization_to_json(f));
  j["threshold"] = int_to_json(c.threshold);
  j["generators"] = json::array();
  for (const auto& [g, gp] : c.generators)
    j["generators"].push_back(
        json::array({element_to_json(g), element_to_json(gp)}));
  return j;
}

admissible::CoprimeArrayCertificate coprime_array_from_json(const json& j) {
  admissible::CoprimeArrayCertificate c;
  c.n = to_unsigned(int_from_json(j.at("n")));
  c.k = int_from_json(j.at("k"));
  for (const auto& d : j.at("degrees")) c.degrees.push_back(int_from_json(d));
  for (const auto& cj : j.at("columns")) {
    std::vector<admissible::EntryRun> col;
    for (const auto& run : cj)
      col.push_back({int_from_json(run.at("value")),
                     int_from_json(run.at("count"))});
    c.columns.push_back(std::move(col));
  }
  for (const auto& f : j.at("entry_factorizations"))
    c.entry_factorizations.push_back(factorization_from_json(f));
  c.threshold = int_from_json(j.at("threshold"));
  if (j.contains("generators")) {
    for (const auto& pair : j["generators"]) {
      if (!pair.is_array() || pair.size() != 2)
        throw ParseError("generator entries are element pairs");
      c.generators.emplace_back(element_from_json(pair[0]),
                                element_from_json(pair[1]));
    }
  }
  return c;
}

// -- schedules ---------------------------------------------------------------

json schedule_to_json(const separation::Schedule& s) {
  json j;
  j["n"] = s.n;
  j["alpha"] = rat_to_json(s.alpha);
  j["eps"] = rat_to_json(s.eps);
  j["delta"] = rat_to_json(s.delta);
  j["c"] = rat_to_json(s.c);
  j["d"] = int_to_json(s.d);
  j["m"] = int_to_json(s.m);
  j["a"] = json::array();
  for (const Rat& a : s.a) j["a"].push_back(rat_to_json(a));
  j["total"] = rat_to_json(s.total);
  j["feasible"] = s.feasible;
  return j;
}

separation::Schedule schedule_from_json(const json& j) {
  separation::Schedule s;
  s.n = to_unsigned(int_from_json(j.at("n")));
  s.alpha = rat_from_json(j.at("alpha"));
  s.eps = rat_from_json(j.at("eps"));
  s.delta = rat_from_json(j.at("delta"));
  s.c = rat_from_json(j.at("c"));
  s.d = int_from_json(j.at("d"));
  s.m = int_from_json(j.at("m"));
  for (const auto& a : j.at("a")) s.a.push_back(rat_from_json(a));
  s.total = rat_from_json(j.at("total"));
  s.feasible = j.at("feasible").get<bool>();
  return s;
}

json threshold_to_json(const separation::ThresholdReport& t) {
  json j;
  j["n"] = t.n;
  j["eps"] = rat_to_json(t.eps);
  j["c"] = rat_to_json(t.c);
  j["d0_scan"] = int_to_json(t.d0_scan);
  j["d0_closed"] = int_to_json(t.d0_closed);
  j["tail_verified"] = t.tail_verified;
  return j;
}

separation::ThresholdReport threshold_from_json(const json& j) {
  separation::ThresholdReport t;
  t.n = to_unsigned(int_from_json(j.at("n")));
  t.eps = rat_from_json(j.at("eps"));
  t.c = rat_from_json(j.at("c"));
  t.d0_scan = int_from_json(j.at("d0_scan"));
  t.d0_closed = int_from_json(j.at("d0_closed"));
  t.tail_verified = j.at("tail_verified").get<bool>();
  return t;
}

// -- documents ---------------------------------------------------------------

json make_document(const std::string& kind, const std::string& command,
                   json problem, json result, json provenance,
                   long long timing_ms) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["tool_version"] = kToolVersion;
  doc["kind"] = kind;
  doc["command"] = command;
  doc["problem"] = std::move(problem);
  doc["result"] = std::move(result);
  doc["provenance"] = std::move(provenance);
  doc["timing_ms"] = timing_ms;
  return doc;
}

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

json balance_matching_json(const snc::Graph& g) {
  json arr = json::array();
  for (const auto& f : snc::contracted_loci(g)) {
    json e;
    e["locus"]["vertices"] = f.vertices;
    e["locus"]["edge"] = f.edge ? json(*f.edge) : json(nullptr);
    auto why = snc::locus_admissible(g, f);
    e["admissible"] = !why.has_value();
    if (why) e["reason"] = *why;
    auto rep = snc::multiplicity_matching(g, f);
    e["lhs"] = int_to_json(rep.lhs);
    e["rhs"] = int_to_json(rep.rhs);
    e["equal"] = rep.equal;
    e["breaking_case"] = snc::breaking_case_name(snc::breaking_case(g, f));
    arr.push_back(std::move(e));
  }
  return arr;
}

namespace {

std::optional<std::string> verify_covdeg(const json& doc) {
  const json& pj = doc.at("problem");
  const json& rj = doc.at("result");
  covdeg::Problem prob;
  try {
    auto raw = problem_from_json(pj);
    prob = covdeg::Problem::make(raw.n, raw.degrees);
  } catch (const std::invalid_argument& ex) {
    return std::string("malformed problem: ") + ex.what();
  }
  auto cert = certificate_from_json(rj.at("certificate"));
  auto verdict = covdeg::verify_certificate(*cert);
  if (!verdict.ok)
    return "certificate invalid at " + verdict.node_path + ": " +
           verdict.reason;
  if (!(cert->problem == prob))
    return "certificate problem does not match the document problem";
  Int bound = int_from_json(rj.at("bound"));
  if (bound != cert->value)
    return "bound does not match the certificate value";
  if (rj.contains("exact") && rj["exact"].get<bool>() &&
      bound != prob.degree_product())
    return "exact flag set but the bound is below the degree product";
  return std::nullopt;
}

std::optional<std::string> verify_gonality(const json& doc) {
  const json& pj = doc.at("problem");
  const json& rj = doc.at("result");
  unsigned n = to_unsigned(int_from_json(pj.at("n")));
  Rat eps = rat_from_json(pj.at("eps"));
  Rat delta = rat_from_json(pj.at("delta"));
  Rat c = rat_from_json(pj.at("c"));
  std::vector<Int> degrees;
  for (const auto& d : pj.at("degrees")) degrees.push_back(int_from_json(d));
  if (degrees.empty()) return "gonality document without degrees";
  std::sort(degrees.begin(), degrees.end(), std::greater<Int>());
  Rat alpha = 1;
  for (std::size_t i = 1; i < degrees.size(); ++i) {
    if (degrees[i] < Int(n) + 1)
      return "hypothesis violated: a trailing degree is below n + 1";
    alpha *= Rat(degrees[i] - n);
  }
  auto s = schedule_from_json(rj.at("schedule"));
  if (s.n != n || s.eps != eps || s.delta != delta || s.c != c ||
      s.alpha != alpha || s.d != degrees[0])
    return "schedule parameters do not match the problem";
  if (s.m != floor_rat((1 - eps) * alpha * Rat(s.d)))
    return "schedule m is not floor((1 - eps) alpha d)";
  if (s.a.size() != n) return "schedule does not list n point counts";
  Rat total = c;
  for (unsigned j = 1; j <= n; ++j) {
    const Rat& aj = s.a[j - 1];
    if (aj < delta) return "a_j below delta";
    Rat need = Rat(pow_int(Int(j), j)) * Rat(s.m) / alpha;
    if (rat_pow(aj - delta, j) < need)
      return "a_j does not dominate j (m/alpha)^(1/j) + delta";
    total += aj;
  }
  if (total != s.total) return "schedule total does not add up";
  if (s.feasible != (s.total < Rat(s.d)))
    return "feasibility flag contradicts the exact comparison";
  Int bound = int_from_json(rj.at("bound"));
  if (bound != (s.feasible ? s.m + 1 : Int(0)))
    return "bound does not match the schedule";
  if (rj.contains("alpha") && rat_from_json(rj["alpha"]) != alpha)
    return "alpha does not match the degrees";
  if (rj.contains("feasible") && rj["feasible"].get<bool>() != s.feasible)
    return "feasible flag does not match the schedule";
  return std::nullopt;
}

std::optional<std::string> verify_balance_check(const json& doc) {
  auto g = graph_from_json(doc.at("problem").at("graph"));
  const json& rj = doc.at("result");
  snc::CheckVerdict verdict;
  try {
    verdict = snc::check_labeling(g);
  } catch (const snc::MalformedGraph& ex) {
    return std::string("embedded graph is malformed: ") + ex.what();
  }
  if (rj.at("ok").get<bool>() != verdict.ok)
    return "ok flag does not match the re-check";
  json exempt = json::array();
  for (unsigned ei : verdict.loop_exempt_edges) exempt.push_back(ei);
  if (rj.contains("loop_exempt_edges") && rj["loop_exempt_edges"] != exempt)
    return "loop exemption list does not match";
  const json& vj = rj.at("violation");
  if (verdict.ok) {
    if (!vj.is_null()) return "violation reported for a passing graph";
  } else {
    if (vj.is_null() ||
        vj.at("condition").get<std::string>() !=
            verdict.first_violation->condition)
      return "violation does not name the first failing condition";
  }
  return std::nullopt;
}

std::optional<std::string> verify_balance_enumerate(const json& doc) {
  const json& pj = doc.at("problem");
  const json& rj = doc.at("result");
  auto sk = graph_from_json(pj.at("graph"));
  Int n = int_from_json(pj.at("order"));
  Int dm = int_from_json(pj.at("delta_max"));
  std::vector<snc::Graph> all;
  try {
    all = snc::enumerate_labelings(sk, n, dm);
  } catch (const snc::MalformedGraph& ex) {
    return std::string("embedded skeleton is malformed: ") + ex.what();
  }
  if (rj.at("count").get<std::uint64_t>() != all.size())
    return "count does not match the re-enumeration";
  const json& lj = rj.at("labelings");
  if (lj.size() != all.size())
    return "labeling list does not match the re-enumeration";
  for (std::size_t i = 0; i < all.size(); ++i)
    if (canonical_dump(lj[i]) != canonical_dump(graph_to_json(all[i])))
      return "labeling " + std::to_string(i) +
             " differs from the canonical enumeration";
  if (rj.contains("matching")) {
    const json& mj = rj["matching"];
    if (mj.size() != all.size())
      return "matching list does not cover every labeling";
    for (std::size_t i = 0; i < all.size(); ++i)
      if (canonical_dump(mj[i]) != canonical_dump(balance_matching_json(all[i])))
        return "matching entry " + std::to_string(i) +
               " differs from the re-computation";
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> verify_document(const json& doc) {
  if (!doc.is_object()) return "document is not a JSON object";
  if (!doc.contains("schema_version") ||
      doc["schema_version"] != json(kSchemaVersion))
    return "unsupported schema version";
  std::string kind = doc.value("kind", "");
  try {
    if (kind == "covdeg") return verify_covdeg(doc);
    if (kind == "gonality") return verify_gonality(doc);
    if (kind == "balance-check") return verify_balance_check(doc);
    if (kind == "balance-enumerate") return verify_balance_enumerate(doc);
  } catch (const std::exception& ex) {
    return std::string("malformed document: ") + ex.what();
  }
  return "unsupported document kind '" + kind + "'";
}

// -- cache -------------------------------------------------------------------

namespace {

class FileLock {
 public:
  FileLock(const std::string& path, int open_flags, int lock_op)
      : fd_(::open(path.c_str(), open_flags, 0644)) {
    if (fd_ >= 0) ::flock(fd_, lock_op);
  }
  ~FileLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  int fd() const { return fd_; }

 private:
  int fd_;
};

json load_cache_file(const std::string& path) {
  json empty{{"cache_schema_version", kCacheSchemaVersion},
             {"entries", json::object()}};
  std::ifstream in(path);
  if (!in) return empty;
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error&) {
    return empty;
  }
  if (!j.is_object() || !j.contains("cache_schema_version") ||
      j["cache_schema_version"] != json(kCacheSchemaVersion) ||
      !j.contains("entries") || !j["entries"].is_object())
    return empty;
  return j;
}

}  // namespace

Cache::Cache(std::string path) : path_(std::move(path)) {}

std::optional<json> Cache::lookup(const std::string& key) const {
  FileLock lock(path_, O_RDONLY, LOCK_SH);
  if (lock.fd() < 0) return std::nullopt;
  json j = load_cache_file(path_);
  const json& entries = j["entries"];
  if (auto it = entries.find(key); it != entries.end()) return *it;
  return std::nullopt;
}

void Cache::store(const std::string& key, json value) {
  FileLock lock(path_, O_RDWR | O_CREAT, LOCK_EX);
  json j = load_cache_file(path_);
  j["entries"][key] = std::move(value);
  std::ofstream out(path_, std::ios::trunc);
  out << canonical_dump(j);
}

std::string Cache::problem_key(const covdeg::Problem& p,
                               const covdeg::Options& o) {
  std::ostringstream os;
  os << "n=" << p.n << ";r=" << p.r << ";d=";
  for (std::size_t i = 0; i < p.degrees.size(); ++i)
    os << (i ? "," : "") << p.degrees[i];
  os << ";fano=" << (o.fano_floor ? 1 : 0) << ";budget=" << o.budget;
  return os.str();
}

}  // namespace covcert::io
