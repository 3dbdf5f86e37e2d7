#include <covcert/snc.hpp>

#include <algorithm>
#include <functional>
#include <set>

namespace covcert::snc {

bool Graph::fully_labeled() const {
  if (order < 1) return false;
  for (const Vertex& v : vertices)
    if (v.speeds.size() != components) return false;
  for (const Edge& e : edges) {
    if (e.delta == 0) return false;
    if (e.orders[0].size() != components || e.orders[1].size() != components)
      return false;
  }
  return true;
}

std::optional<unsigned> Graph::vertex_index(const std::string& name) const {
  for (unsigned i = 0; i < vertices.size(); ++i)
    if (vertices[i].name == name) return i;
  return std::nullopt;
}

namespace {

void require_well_formed(const Graph& g) {
  if (g.components < 1) throw MalformedGraph("graph has no components");
  for (const Edge& e : g.edges)
    if (e.v >= g.vertices.size() || e.w >= g.vertices.size())
      throw MalformedGraph("edge endpoint out of range");
  for (const Vertex& v : g.vertices) {
    if (v.maps_into.empty())
      throw MalformedGraph("vertex '" + v.name + "' maps into no component");
    for (unsigned i : v.maps_into)
      if (i < 1 || i > g.components)
        throw MalformedGraph("vertex '" + v.name +
                             "' maps into an unknown component");
  }
}

bool in_support(const std::vector<unsigned>& maps, unsigned comp1) {
  return std::find(maps.begin(), maps.end(), comp1) != maps.end();
}

bool is_type_x(const Vertex& v, unsigned comp1) {
  return v.kind.tag == VertexKind::Tag::x && v.kind.component == comp1;
}

}  // namespace

CheckVerdict check_labeling(const Graph& g) {
  require_well_formed(g);
  if (!g.fully_labeled())
    throw MalformedGraph("labels missing or sized wrong");
  for (const Edge& e : g.edges)
    if (e.delta < 1) throw MalformedGraph("edge delta must be >= 1");

  CheckVerdict verdict;
  for (unsigned ei = 0; ei < g.edges.size(); ++ei)
    if (g.edges[ei].is_loop()) verdict.loop_exempt_edges.push_back(ei);

  auto flag_violation = [&](std::string cond, std::string where,
                            std::string detail) {
    verdict.ok = false;
    verdict.first_violation =
        Violation{std::move(cond), std::move(where), std::move(detail)};
  };

  for (const Vertex& v : g.vertices) {
    for (unsigned i = 1; i <= g.components; ++i) {
      bool supported = in_support(v.maps_into, i);
      bool moving = v.speeds[i - 1] != 0;
      if (supported != moving) {
        flag_violation("(i)", v.name,
                       "speed support differs from maps_into at component " +
                           std::to_string(i));
        return verdict;
      }
    }
    Int total = 0;
    for (const Int& s : v.speeds) total += s;
    if (total != g.order) {
      flag_violation("(ii)", v.name, "speeds sum to " + total.str() +
                                         ", expected " + g.order.str());
      return verdict;
    }
  }

  for (unsigned ei = 0; ei < g.edges.size(); ++ei) {
    const Edge& e = g.edges[ei];
    for (int side = 0; side < 2; ++side) {
      Int total = 0;
      for (const Int& m : e.orders[side]) total += m;
      if (total != 0) {
        flag_violation("flag-sum", "edge " + std::to_string(ei),
                       "orders at the " +
                           g.vertices[side == 0 ? e.v : e.w].name +
                           "-side flag sum to " + total.str());
        return verdict;
      }
    }
  }

  for (unsigned ei = 0; ei < g.edges.size(); ++ei) {
    const Edge& e = g.edges[ei];
    if (e.is_loop()) continue;
    for (unsigned i = 0; i < g.components; ++i) {
      if (e.orders[0][i] + e.orders[1][i] != 0) {
        flag_violation("(iii)", "edge " + std::to_string(ei),
                       "orders at the two flags do not negate at component " +
                           std::to_string(i + 1));
        return verdict;
      }
      Int expected = g.vertices[e.v].speeds[i] + e.orders[0][i] * e.delta;
      if (g.vertices[e.w].speeds[i] != expected) {
        flag_violation("(iii)", "edge " + std::to_string(ei),
                       "speed at " + g.vertices[e.w].name +
                           " does not match the order jump at component " +
                           std::to_string(i + 1));
        return verdict;
      }
    }
  }

  verdict.ok = true;
  return verdict;
}

std::vector<Graph> enumerate_labelings(const Graph& skeleton, const Int& n,
                                       const Int& delta_max) {
  require_well_formed(skeleton);
  if (n < 1) throw MalformedGraph("order must be >= 1");
  if (delta_max < 1) throw MalformedGraph("delta_max must be >= 1");

  // Compositions of n supported exactly on maps_into, lexicographic.
  std::vector<std::vector<std::vector<Int>>> per_vertex(
      skeleton.vertices.size());
  for (std::size_t vi = 0; vi < skeleton.vertices.size(); ++vi) {
    const auto& maps = skeleton.vertices[vi].maps_into;
    std::vector<Int> cur(skeleton.components, 0);
    std::function<void(std::size_t, Int)> rec = [&](std::size_t pos,
                                                    Int left) {
      if (pos == maps.size()) {
        if (left == 0) per_vertex[vi].push_back(cur);
        return;
      }
      for (Int s = 1; s <= left; ++s) {
        cur[maps[pos] - 1] = s;
        rec(pos + 1, left - s);
      }
      cur[maps[pos] - 1] = 0;
    };
    rec(0, n);
  }

  std::vector<Graph> out;
  Graph work = skeleton;
  work.order = n;
  std::function<void(std::size_t)> edge_rec = [&](std::size_t ei) {
    if (ei == work.edges.size()) {
      out.push_back(work);
      return;
    }
    Edge& e = work.edges[ei];
    for (Int delta = 1; delta <= delta_max; ++delta) {
      e.delta = delta;
      if (e.is_loop()) {
        e.orders[0].assign(work.components, 0);
        e.orders[1].assign(work.components, 0);
        edge_rec(ei + 1);
        continue;
      }
      // (iii) determines the orders; delta must divide every speed jump.
      bool divisible = true;
      std::vector<Int> mv(work.components), mw(work.components);
      for (unsigned i = 0; i < work.components && divisible; ++i) {
        Int diff =
            work.vertices[e.w].speeds[i] - work.vertices[e.v].speeds[i];
        if (diff % delta != 0) divisible = false;
        else {
          mv[i] = diff / delta;
          mw[i] = -mv[i];
        }
      }
      if (divisible) {
        e.orders[0] = std::move(mv);
        e.orders[1] = std::move(mw);
        edge_rec(ei + 1);
      }
    }
    e.delta = 0;
    e.orders[0].clear();
    e.orders[1].clear();
  };
  std::function<void(std::size_t)> vertex_rec = [&](std::size_t vi) {
    if (vi == work.vertices.size()) {
      edge_rec(0);
      return;
    }
    for (const auto& speeds : per_vertex[vi]) {
      work.vertices[vi].speeds = speeds;
      vertex_rec(vi + 1);
    }
    work.vertices[vi].speeds.clear();
  };
  vertex_rec(0);
  return out;
}

std::vector<Locus> contracted_loci(const Graph& g) {
  require_well_formed(g);
  std::vector<Locus> loci;

  // Ghost clusters: connected components of the ghost-ghost subgraph.
  std::vector<bool> is_ghost(g.vertices.size());
  for (unsigned i = 0; i < g.vertices.size(); ++i)
    is_ghost[i] = g.vertices[i].kind.tag == VertexKind::Tag::ghost;
  std::vector<bool> seen(g.vertices.size(), false);
  for (unsigned start = 0; start < g.vertices.size(); ++start) {
    if (!is_ghost[start] || seen[start]) continue;
    std::vector<unsigned> cluster, stack{start};
    seen[start] = true;
    while (!stack.empty()) {
      unsigned v = stack.back();
      stack.pop_back();
      cluster.push_back(v);
      for (const Edge& e : g.edges) {
        if (!is_ghost[e.v] || !is_ghost[e.w]) continue;
        for (unsigned other : {e.v, e.w})
          if ((e.v == v || e.w == v) && !seen[other]) {
            seen[other] = true;
            stack.push_back(other);
          }
      }
    }
    std::sort(cluster.begin(), cluster.end());
    Locus f;
    f.vertices = std::move(cluster);
    loci.push_back(std::move(f));
  }
  std::sort(loci.begin(), loci.end(), [](const Locus& a, const Locus& b) {
    return a.vertices.front() < b.vertices.front();
  });

  // Edge nodes between the two X components.
  for (unsigned ei = 0; ei < g.edges.size(); ++ei) {
    const Edge& e = g.edges[ei];
    if (e.is_loop()) continue;
    const Vertex& a = g.vertices[e.v];
    const Vertex& b = g.vertices[e.w];
    if ((is_type_x(a, 1) && is_type_x(b, 2)) ||
        (is_type_x(a, 2) && is_type_x(b, 1))) {
      Locus f;
      f.edge = ei;
      loci.push_back(std::move(f));
    }
  }
  return loci;
}

namespace {

/// Boundary flags of a vertex locus: (edge, outside endpoint) with exactly
/// one endpoint inside.
std::vector<std::pair<unsigned, unsigned>> boundary_flags(
    const Graph& g, const std::vector<unsigned>& inside) {
  std::set<unsigned> in(inside.begin(), inside.end());
  std::vector<std::pair<unsigned, unsigned>> flags;
  for (unsigned ei = 0; ei < g.edges.size(); ++ei) {
    const Edge& e = g.edges[ei];
    bool vin = in.count(e.v) != 0, win = in.count(e.w) != 0;
    if (vin == win) continue;
    flags.emplace_back(ei, vin ? e.w : e.v);
  }
  return flags;
}

}  // namespace

std::optional<std::string> locus_admissible(const Graph& g, const Locus& F) {
  require_well_formed(g);
  if (g.components != 2) return "matching needs exactly two components";
  if (F.edge) {
    if (*F.edge >= g.edges.size()) return "locus edge out of range";
    const Edge& e = g.edges[*F.edge];
    const Vertex& a = g.vertices[e.v];
    const Vertex& b = g.vertices[e.w];
    if (!((is_type_x(a, 1) && is_type_x(b, 2)) ||
          (is_type_x(a, 2) && is_type_x(b, 1))))
      return "edge node endpoints are not typeX(1) and typeX(2)";
    return std::nullopt;
  }
  for (unsigned vi : F.vertices) {
    if (vi >= g.vertices.size()) return "locus vertex out of range";
    const Vertex& v = g.vertices[vi];
    if (v.kind.tag != VertexKind::Tag::ghost)
      return "locus vertex '" + v.name + "' is not a ghost";
    if (v.maps_into != std::vector<unsigned>{1, 2})
      return "locus vertex '" + v.name + "' does not map into both components";
  }
  for (auto [ei, outside] : boundary_flags(g, F.vertices)) {
    const Vertex& t = g.vertices[outside];
    if (!is_type_x(t, 1) && !is_type_x(t, 2))
      return "boundary flag of edge " + std::to_string(ei) +
             " does not reach a typeX vertex";
  }
  std::set<unsigned> in(F.vertices.begin(), F.vertices.end());
  for (unsigned vi : F.vertices) {
    for (unsigned i = 0; i < 2; ++i) {
      Int total = 0;
      for (const Edge& e : g.edges) {
        if (e.orders[0].size() != g.components ||
            e.orders[1].size() != g.components)
          return "locus check needs a fully labeled graph";
        if (e.v == vi) total += e.orders[0][i];
        if (e.w == vi) total += e.orders[1][i];
      }
      if (total != 0)
        return "contracted-vertex zero-sum fails at '" +
               g.vertices[vi].name + "', component " + std::to_string(i + 1);
    }
  }
  return std::nullopt;
}

MatchingReport multiplicity_matching(const Graph& g, const Locus& F) {
  require_well_formed(g);
  MatchingReport rep;
  rep.lhs = 0;
  rep.rhs = 0;
  auto add_flag = [&](unsigned ei, unsigned at) {
    const Edge& e = g.edges[ei];
    const Vertex& t = g.vertices[at];
    const auto& m = e.orders[at == e.v ? 0 : 1];
    if (m.size() < 2) return;
    if (is_type_x(t, 1)) rep.lhs += m[1];
    else if (is_type_x(t, 2)) rep.rhs += m[0];
  };
  if (F.edge && *F.edge < g.edges.size()) {
    add_flag(*F.edge, g.edges[*F.edge].v);
    add_flag(*F.edge, g.edges[*F.edge].w);
  } else {
    for (auto [ei, outside] : boundary_flags(g, F.vertices))
      add_flag(ei, outside);
  }
  rep.equal = rep.lhs == rep.rhs;
  return rep;
}

BreakingCase breaking_case(const Graph& g, const Locus& F) {
  require_well_formed(g);
  std::vector<unsigned> inside = F.vertices;
  std::vector<unsigned> touching;
  if (F.edge && *F.edge < g.edges.size()) {
    touching.push_back(g.edges[*F.edge].v);
    touching.push_back(g.edges[*F.edge].w);
  } else {
    for (auto [ei, outside] : boundary_flags(g, F.vertices))
      touching.push_back(outside);
  }
  auto is_z = [&](unsigned vi) {
    return g.vertices[vi].kind.tag == VertexKind::Tag::z;
  };
  for (unsigned vi : inside)
    if (is_z(vi)) return BreakingCase::A;
  for (unsigned vi : touching)
    if (is_z(vi)) return BreakingCase::A;
  bool meets1 = false, meets2 = false;
  for (unsigned vi : touching) {
    if (is_type_x(g.vertices[vi], 1)) meets1 = true;
    if (is_type_x(g.vertices[vi], 2)) meets2 = true;
  }
  if (meets1 && meets2) return BreakingCase::B;
  return BreakingCase::Neither;
}

const char* breaking_case_name(BreakingCase c) {
  switch (c) {
    case BreakingCase::A: return "A";
    case BreakingCase::B: return "B";
    case BreakingCase::Neither: return "Neither";
  }
  return "unknown";
}

}  // namespace covcert::snc
