#include <covcert/snc.hpp>

#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace covcert;
using namespace covcert::snc;

namespace {

using Tag = VertexKind::Tag;

Vertex vtx(std::string name, std::vector<unsigned> maps, Tag tag,
           std::vector<Int> speeds, unsigned comp = 0) {
  return Vertex{std::move(name), std::move(maps), VertexKind{tag, comp},
                std::move(speeds)};
}

Edge edg(unsigned v, unsigned w, Int delta, std::vector<Int> mv,
         std::vector<Int> mw) {
  Edge e;
  e.v = v;
  e.w = w;
  e.delta = std::move(delta);
  e.orders[0] = std::move(mv);
  e.orders[1] = std::move(mw);
  return e;
}

/// Two x-vertices joined through one ghost; every balancing condition holds
/// and the ghost satisfies the per-component zero-sum.
Graph chain_graph() {
  Graph g;
  g.components = 2;
  g.order = 2;
  g.vertices = {vtx("u", {1}, Tag::x, {2, 0}, 1),
                vtx("g", {1, 2}, Tag::ghost, {1, 1}),
                vtx("w", {2}, Tag::x, {0, 2}, 2)};
  g.edges = {edg(0, 1, 1, {-1, 1}, {1, -1}),
             edg(1, 2, 1, {-1, 1}, {1, -1})};
  return g;
}

std::string key(const Graph& g) {
  std::ostringstream os;
  for (const auto& v : g.vertices)
    for (const auto& s : v.speeds) os << s << ',';
  for (const auto& e : g.edges) {
    os << '|' << e.delta;
    for (int side = 0; side < 2; ++side)
      for (const auto& m : e.orders[side]) os << ';' << m;
  }
  return os.str();
}

void speed_vectors(const std::vector<unsigned>& maps, unsigned components,
                   const Int& n, std::vector<std::vector<Int>>& out) {
  std::vector<Int> cur(components, 0);
  std::function<void(std::size_t, Int)> rec = [&](std::size_t pos, Int left) {
    if (pos == maps.size()) {
      if (left == 0) out.push_back(cur);
      return;
    }
    // condition (i): positive exactly on maps_into
    for (Int s = 1; s <= left; ++s) {
      cur[maps[pos] - 1] = s;
      rec(pos + 1, left - s);
    }
    cur[maps[pos] - 1] = 0;
  };
  rec(0, n);
}

/// Independent enumeration: assign speeds per vertex, deltas per edge, derive
/// non-loop orders from (iii), zero loops, then filter through check_labeling.
std::vector<std::string> oracle_labelings(const Graph& skeleton, const Int& n,
                                          const Int& delta_max) {
  std::vector<std::vector<std::vector<Int>>> per_vertex(
      skeleton.vertices.size());
  for (std::size_t i = 0; i < skeleton.vertices.size(); ++i)
    speed_vectors(skeleton.vertices[i].maps_into, skeleton.components, n,
                  per_vertex[i]);

  std::vector<std::string> found;
  std::vector<std::size_t> pick(skeleton.vertices.size(), 0);
  std::function<void(std::size_t)> vrec = [&](std::size_t vi) {
    if (vi < skeleton.vertices.size()) {
      for (std::size_t c = 0; c < per_vertex[vi].size(); ++c) {
        pick[vi] = c;
        vrec(vi + 1);
      }
      return;
    }
    Graph g = skeleton;
    g.order = n;
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
      g.vertices[i].speeds = per_vertex[i][pick[i]];
    std::function<void(std::size_t)> erec = [&](std::size_t ei) {
      if (ei == g.edges.size()) {
        auto verdict = check_labeling(g);
        if (verdict.ok) found.push_back(key(g));
        return;
      }
      auto& e = g.edges[ei];
      for (Int delta = 1; delta <= delta_max; ++delta) {
        e.delta = delta;
        if (e.is_loop()) {
          e.orders[0].assign(g.components, 0);
          e.orders[1].assign(g.components, 0);
          erec(ei + 1);
          continue;
        }
        bool divisible = true;
        std::vector<Int> mv(g.components), mw(g.components);
        for (unsigned i = 0; i < g.components && divisible; ++i) {
          Int diff = g.vertices[e.w].speeds[i] - g.vertices[e.v].speeds[i];
          if (diff % delta != 0) divisible = false;
          else {
            mv[i] = diff / delta;
            mw[i] = -mv[i];
          }
        }
        if (!divisible) continue;
        e.orders[0] = mv;
        e.orders[1] = mw;
        erec(ei + 1);
      }
      e.delta = 0;
      e.orders[0].clear();
      e.orders[1].clear();
    };
    erec(0);
  };
  vrec(0);
  std::sort(found.begin(), found.end());
  return found;
}

}  // namespace

TEST_CASE("check accepts the pinned chain and rejects each mutation") {
  auto g = chain_graph();
  auto ok = check_labeling(g);
  CHECK(ok.ok);
  CHECK_FALSE(ok.first_violation.has_value());
  CHECK(ok.loop_exempt_edges.empty());

  SUBCASE("support mismatch trips (i)") {
    auto bad = g;
    bad.vertices[1].speeds = {0, 2};  // ghost maps into both components
    auto v = check_labeling(bad);
    REQUIRE_FALSE(v.ok);
    CHECK(v.first_violation->condition == "(i)");
    CHECK(v.first_violation->where == "g");
  }
  SUBCASE("wrong total speed trips (ii) before (iii)") {
    auto bad = g;
    bad.vertices[0].speeds = {1, 0};  // (i) fine, sum 1 != 2, edge also broken
    auto v = check_labeling(bad);
    REQUIRE_FALSE(v.ok);
    CHECK(v.first_violation->condition == "(ii)");
    CHECK(v.first_violation->where == "u");
  }
  SUBCASE("flag sum checked before speed matching") {
    auto bad = g;
    bad.edges[0].orders[0] = {-1, 2};
    auto v = check_labeling(bad);
    REQUIRE_FALSE(v.ok);
    CHECK(v.first_violation->condition == "flag-sum");
  }
  SUBCASE("delta mismatch trips (iii)") {
    auto bad = g;
    bad.edges[0].delta = 2;
    auto v = check_labeling(bad);
    REQUIRE_FALSE(v.ok);
    CHECK(v.first_violation->condition == "(iii)");
  }
  SUBCASE("antisymmetry is part of (iii)") {
    auto bad = g;
    bad.edges[1].orders[1] = {-1, 1};  // copies the v-side instead of negating
    auto v = check_labeling(bad);
    REQUIRE_FALSE(v.ok);
    CHECK(v.first_violation->condition == "(iii)");
  }
}

TEST_CASE("single vertex and loop handling") {
  Graph g;
  g.components = 1;
  g.order = 2;
  g.vertices = {vtx("v", {1}, Tag::z, {2})};
  CHECK(check_labeling(g).ok);

  g.edges = {edg(0, 0, 1, {0}, {0})};
  auto v = check_labeling(g);
  CHECK(v.ok);
  REQUIRE(v.loop_exempt_edges.size() == 1);
  CHECK(v.loop_exempt_edges[0] == 0);
}

TEST_CASE("malformed graphs throw instead of reporting violations") {
  auto g = chain_graph();
  SUBCASE("missing speeds") {
    g.vertices[1].speeds.clear();
    CHECK_FALSE(g.fully_labeled());
    CHECK_THROWS_AS(check_labeling(g), MalformedGraph);
  }
  SUBCASE("missing delta") {
    g.edges[0].delta = 0;
    CHECK_THROWS_AS(check_labeling(g), MalformedGraph);
  }
  SUBCASE("speeds sized wrong") {
    g.vertices[0].speeds = {2};
    CHECK_THROWS_AS(check_labeling(g), MalformedGraph);
  }
  SUBCASE("orders sized wrong") {
    g.edges[1].orders[0] = {1};
    CHECK_THROWS_AS(check_labeling(g), MalformedGraph);
  }
  SUBCASE("edge endpoint out of range") {
    g.edges[0].w = 9;
    CHECK_THROWS_AS(check_labeling(g), MalformedGraph);
  }
  SUBCASE("nonpositive delta") {
    g.edges[0].delta = -1;
    CHECK_THROWS_AS(check_labeling(g), MalformedGraph);
  }
}

TEST_CASE("enumeration pins") {
  SUBCASE("two vertices on distinct components") {
    Graph sk;
    sk.components = 2;
    sk.vertices = {vtx("a", {1}, Tag::unspecified, {}),
                   vtx("b", {2}, Tag::unspecified, {})};
    sk.edges = {edg(0, 1, 0, {}, {})};
    auto all = enumerate_labelings(sk, 2, 2);
    REQUIRE(all.size() == 2);
    // delta ascending: (delta, m_2(a,e)) = (1, 2) then (2, 1)
    CHECK(all[0].edges[0].delta == 1);
    CHECK(all[0].edges[0].orders[0] == std::vector<Int>{-2, 2});
    CHECK(all[1].edges[0].delta == 2);
    CHECK(all[1].edges[0].orders[0] == std::vector<Int>{-1, 1});
    for (const auto& g : all) {
      CHECK(g.vertices[0].speeds == std::vector<Int>{2, 0});
      CHECK(g.vertices[1].speeds == std::vector<Int>{0, 2});
      CHECK(check_labeling(g).ok);
    }
  }
  SUBCASE("single vertex") {
    Graph sk;
    sk.components = 1;
    sk.vertices = {vtx("v", {1}, Tag::unspecified, {})};
    auto all = enumerate_labelings(sk, 3, 5);
    REQUIRE(all.size() == 1);
    CHECK(all[0].vertices[0].speeds == std::vector<Int>{3});
  }
  SUBCASE("shared-support pair, canonical order") {
    Graph sk;
    sk.components = 2;
    sk.vertices = {vtx("a", {1, 2}, Tag::unspecified, {}),
                   vtx("b", {1, 2}, Tag::unspecified, {})};
    sk.edges = {edg(0, 1, 0, {}, {})};
    auto all = enumerate_labelings(sk, 3, 3);
    REQUIRE(all.size() == 8);
    // speeds lexicographic first: a=(1,2) block precedes a=(2,1) block
    CHECK(all.front().vertices[0].speeds == std::vector<Int>{1, 2});
    CHECK(all.front().vertices[1].speeds == std::vector<Int>{1, 2});
    CHECK(all.front().edges[0].delta == 1);
    CHECK(all.back().vertices[0].speeds == std::vector<Int>{2, 1});
    CHECK(all.back().vertices[1].speeds == std::vector<Int>{2, 1});
    CHECK(all.back().edges[0].delta == 3);
    bool sorted = std::is_sorted(
        all.begin(), all.end(), [](const Graph& x, const Graph& y) {
          auto tx = std::tuple(x.vertices[0].speeds, x.vertices[1].speeds,
                               x.edges[0].delta);
          auto ty = std::tuple(y.vertices[0].speeds, y.vertices[1].speeds,
                               y.edges[0].delta);
          return tx < ty;
        });
    CHECK(sorted);
  }
  SUBCASE("loop vertex") {
    Graph sk;
    sk.components = 1;
    sk.vertices = {vtx("v", {1}, Tag::unspecified, {})};
    sk.edges = {edg(0, 0, 0, {}, {})};
    auto all = enumerate_labelings(sk, 2, 2);
    REQUIRE(all.size() == 2);  // delta 1 and 2, orders pinned to zero
    for (const auto& g : all) {
      CHECK(g.edges[0].orders[0] == std::vector<Int>{0});
      CHECK(check_labeling(g).ok);
    }
  }
}

TEST_CASE("enumeration agrees with the brute-force oracle") {
  std::vector<Graph> skeletons;
  {
    Graph sk;
    sk.components = 2;
    sk.vertices = {vtx("a", {1}, Tag::unspecified, {}),
                   vtx("g", {1, 2}, Tag::unspecified, {}),
                   vtx("b", {2}, Tag::unspecified, {})};
    sk.edges = {edg(0, 1, 0, {}, {}), edg(1, 2, 0, {}, {})};
    skeletons.push_back(sk);
  }
  {
    Graph sk;
    sk.components = 2;
    sk.vertices = {vtx("a", {1, 2}, Tag::unspecified, {}),
                   vtx("b", {1, 2}, Tag::unspecified, {})};
    sk.edges = {edg(0, 1, 0, {}, {}), edg(1, 1, 0, {}, {})};
    skeletons.push_back(sk);
  }
  for (const auto& sk : skeletons) {
    for (Int n = 2; n <= 4; ++n) {
      auto got = enumerate_labelings(sk, n, 2);
      std::vector<std::string> keys;
      for (const auto& g : got) {
        CHECK(check_labeling(g).ok);
        keys.push_back(key(g));
      }
      std::set<std::string> unique(keys.begin(), keys.end());
      CHECK(unique.size() == keys.size());
      std::sort(keys.begin(), keys.end());
      CHECK(keys == oracle_labelings(sk, n, 2));
    }
  }
}

TEST_CASE("contracted loci and matching on the chain") {
  auto g = chain_graph();
  auto loci = contracted_loci(g);
  REQUIRE(loci.size() == 1);
  CHECK(loci[0].vertices == std::vector<unsigned>{1});
  CHECK_FALSE(loci[0].edge.has_value());
  CHECK(locus_admissible(g, loci[0]) == std::nullopt);

  auto rep = multiplicity_matching(g, loci[0]);
  CHECK(rep.lhs == 1);
  CHECK(rep.rhs == 1);
  CHECK(rep.equal);

  CHECK(breaking_case(g, loci[0]) == BreakingCase::B);
  CHECK(std::string(breaking_case_name(BreakingCase::B)) == "B");
}

TEST_CASE("zero-dimensional locus: direct x1-x2 node") {
  Graph g;
  g.components = 2;
  g.order = 2;
  g.vertices = {vtx("u", {1}, Tag::x, {2, 0}, 1),
                vtx("w", {2}, Tag::x, {0, 2}, 2)};
  g.edges = {edg(0, 1, 2, {-1, 1}, {1, -1})};
  REQUIRE(check_labeling(g).ok);

  auto loci = contracted_loci(g);
  REQUIRE(loci.size() == 1);
  CHECK(loci[0].vertices.empty());
  REQUIRE(loci[0].edge.has_value());
  CHECK(*loci[0].edge == 0);
  CHECK(locus_admissible(g, loci[0]) == std::nullopt);

  auto rep = multiplicity_matching(g, loci[0]);
  CHECK(rep.lhs == 1);  // n / delta on both sides
  CHECK(rep.rhs == 1);
  CHECK(rep.equal);
  CHECK(breaking_case(g, loci[0]) == BreakingCase::B);
}

TEST_CASE("ghost cluster and edge node in one graph, locus order") {
  Graph g;
  g.components = 2;
  g.order = 2;
  g.vertices = {vtx("u", {1}, Tag::x, {2, 0}, 1),
                vtx("w", {2}, Tag::x, {0, 2}, 2),
                vtx("g", {1, 2}, Tag::ghost, {1, 1})};
  g.edges = {edg(0, 1, 1, {-2, 2}, {2, -2}),
             edg(2, 0, 1, {1, -1}, {-1, 1}),
             edg(2, 1, 1, {-1, 1}, {1, -1})};
  REQUIRE(check_labeling(g).ok);

  auto loci = contracted_loci(g);
  REQUIRE(loci.size() == 2);
  CHECK(loci[0].vertices == std::vector<unsigned>{2});  // clusters first
  REQUIRE(loci[1].edge.has_value());
  CHECK(*loci[1].edge == 0);

  for (const auto& f : loci) {
    CHECK(locus_admissible(g, f) == std::nullopt);
    auto rep = multiplicity_matching(g, f);
    CHECK(rep.equal);
  }
  CHECK(multiplicity_matching(g, loci[1]).lhs == 2);
}

TEST_CASE("three-star: balancing passes but the matching hypothesis fails") {
  // Center ghost with two x1 leaves and one x2 leaf.  Every local balancing
  // condition holds, yet the per-component zero-sum at the ghost does not, so
  // the locus is inadmissible and the two sides genuinely differ.
  Graph g;
  g.components = 2;
  g.order = 2;
  g.vertices = {vtx("c", {1, 2}, Tag::ghost, {1, 1}),
                vtx("u1", {1}, Tag::x, {2, 0}, 1),
                vtx("u2", {2}, Tag::x, {0, 2}, 2),
                vtx("u3", {1}, Tag::x, {2, 0}, 1)};
  g.edges = {edg(1, 0, 1, {-1, 1}, {1, -1}),
             edg(2, 0, 1, {1, -1}, {-1, 1}),
             edg(3, 0, 1, {-1, 1}, {1, -1})};
  REQUIRE(check_labeling(g).ok);

  Locus f;
  f.vertices = {0};
  auto reason = locus_admissible(g, f);
  REQUIRE(reason.has_value());
  CHECK(reason->find("zero-sum") != std::string::npos);

  auto rep = multiplicity_matching(g, f);
  CHECK(rep.lhs == 2);
  CHECK(rep.rhs == 1);
  CHECK_FALSE(rep.equal);
}

TEST_CASE("admissible loci satisfy the matching identity by sweep") {
  // Exhaustive check over every labeling of two small skeletons: whenever a
  // locus passes locus_admissible, lhs == rhs.
  std::vector<Graph> skeletons;
  {
    Graph sk;
    sk.components = 2;
    sk.vertices = {vtx("u", {1}, Tag::x, {}, 1),
                   vtx("g", {1, 2}, Tag::ghost, {}),
                   vtx("w", {2}, Tag::x, {}, 2)};
    sk.edges = {edg(0, 1, 0, {}, {}), edg(1, 2, 0, {}, {})};
    skeletons.push_back(sk);
  }
  {
    Graph sk;
    sk.components = 2;
    sk.vertices = {vtx("u", {1}, Tag::x, {}, 1),
                   vtx("g1", {1, 2}, Tag::ghost, {}),
                   vtx("g2", {1, 2}, Tag::ghost, {}),
                   vtx("w", {2}, Tag::x, {}, 2)};
    sk.edges = {edg(0, 1, 0, {}, {}), edg(1, 2, 0, {}, {}),
                edg(2, 3, 0, {}, {})};
    skeletons.push_back(sk);
  }
  int admissible_seen = 0;
  for (const auto& sk : skeletons) {
    for (const auto& g : enumerate_labelings(sk, 3, 2)) {
      for (const auto& f : contracted_loci(g)) {
        if (locus_admissible(g, f) == std::nullopt) {
          ++admissible_seen;
          CHECK(multiplicity_matching(g, f).equal);
        }
      }
    }
  }
  CHECK(admissible_seen > 0);
}

TEST_CASE("breaking case A when a z vertex touches the locus") {
  Graph g;
  g.components = 2;
  g.order = 2;
  g.vertices = {vtx("z0", {1, 2}, Tag::z, {1, 1}),
                vtx("g", {1, 2}, Tag::ghost, {1, 1})};
  g.edges = {edg(0, 1, 1, {0, 0}, {0, 0})};
  REQUIRE(check_labeling(g).ok);

  Locus f;
  f.vertices = {1};
  CHECK(breaking_case(g, f) == BreakingCase::A);
  CHECK(std::string(breaking_case_name(BreakingCase::A)) == "A");
  // boundary reaches a z vertex, not typeX: inadmissible for matching
  CHECK(locus_admissible(g, f).has_value());
}

TEST_CASE("breaking case Neither for an isolated ghost") {
  Graph g;
  g.components = 2;
  g.order = 3;
  g.vertices = {vtx("g", {1, 2}, Tag::ghost, {2, 1})};
  auto v = check_labeling(g);
  REQUIRE(v.ok);
  Locus f;
  f.vertices = {0};
  CHECK(breaking_case(g, f) == BreakingCase::Neither);
  CHECK(std::string(breaking_case_name(BreakingCase::Neither)) == "Neither");
  auto rep = multiplicity_matching(g, f);
  CHECK(rep.lhs == 0);
  CHECK(rep.rhs == 0);
  CHECK(rep.equal);
}
