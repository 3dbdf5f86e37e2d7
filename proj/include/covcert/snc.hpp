#pragma once

#include <covcert/numeric.hpp>

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

/// Integer shadows of degenerating stable maps into an SNC degeneration:
/// labeled dual graphs with sinking speeds and node orders, the balancing
/// conditions that admissible labelings satisfy, exhaustive labeling
/// enumeration over a skeleton, and the two-component multiplicity matching
/// statement.
namespace covcert::snc {

struct MalformedGraph : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VertexKind {
  enum class Tag { unspecified, ghost, z, x } tag = Tag::unspecified;
  unsigned component = 0;  // for Tag::x: which X_i (1-based)

  bool operator==(const VertexKind&) const = default;
};

struct Vertex {
  std::string name;
  std::vector<unsigned> maps_into;  // sorted 1-based component indices, nonempty
  VertexKind kind;                  // meaningful when |I| = 2
  std::vector<Int> speeds;          // n_i(v) per component; empty = unlabeled
};

struct Edge {
  unsigned v = 0, w = 0;  // indices into Graph::vertices; loop when v == w
  Int delta;              // delta(e) >= 1; 0 = unlabeled
  /// orders[0][i-1] = m_i at the v-side flag, orders[1][i-1] at the w-side
  /// flag (for a loop: the two half-edges).  Empty vectors = unlabeled.
  std::array<std::vector<Int>, 2> orders;

  bool is_loop() const { return v == w; }
};

struct Graph {
  unsigned components = 0;  // |I|
  Int order;                // n >= 1; 0 = unlabeled skeleton
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;

  bool fully_labeled() const;
  std::optional<unsigned> vertex_index(const std::string& name) const;
};

struct Violation {
  std::string condition;  // "(i)", "(ii)", "(iii)", "flag-sum", ...
  std::string where;
  std::string detail;
};

struct CheckVerdict {
  bool ok = false;
  std::optional<Violation> first_violation;
  std::vector<unsigned> loop_exempt_edges;  // edges skipped by (iii)
};

/// Verifies, against the graph's order n:
///   (i)   n_i(v) = 0  iff  i not in maps_into(v)
///   (ii)  sum_i n_i(v) = n for every vertex
///   (iii) n_i(w) = n_i(v) + m_i(v,e) delta(e) for every non-loop edge and
///         every i, together with antisymmetry m_i(v,e) + m_i(w,e) = 0
///   flag-sum: sum_i m_i(v,e) = 0 at every flag (loops included)
/// Loops are exempt from (iii) and flagged.  Throws MalformedGraph when
/// labels are missing or sized wrong.
CheckVerdict check_labeling(const Graph& g);

/// All full labelings of a skeleton (maps_into fixed, speeds/delta/orders
/// free) with the given order n and 1 <= delta(e) <= delta_max.  Orders on
/// non-loop edges are determined by (iii) (enumeration filters on
/// divisibility); loop orders are 0.  Canonical output order: speed vectors
/// lexicographic in vertex input order, then delta vectors lexicographic in
/// edge input order.
std::vector<Graph> enumerate_labelings(const Graph& skeleton, const Int& n,
                                       const Int& delta_max);

/// A connected component F of the preimage of Z = X_1 cap X_2, contracted to
/// a point: either a set of ghost vertices (1-dimensional locus) or a single
/// edge-node between a typeX(1) and a typeX(2) vertex (0-dimensional locus),
/// or empty.
struct Locus {
  std::vector<unsigned> vertices;
  std::optional<unsigned> edge;
};

/// Admissibility of a locus for the matching statement: requires |I| = 2;
/// every locus vertex ghost with maps_into = {1,2}; every boundary flag
/// reaching a typeX(1)/typeX(2) vertex; and the contracted-vertex zero-sum
/// sum_e m_i(v,e) = 0 per locus vertex and component (the shadow of section
/// triviality on contracted components; without it the matching identity is
/// false).  Returns a reason, or nullopt if admissible.
std::optional<std::string> locus_admissible(const Graph& g, const Locus& F);

/// All candidate contracted loci of g: connected ghost clusters and
/// typeX(1)-typeX(2) edge nodes.
std::vector<Locus> contracted_loci(const Graph& g);

struct MatchingReport {
  Int lhs, rhs;  // sums of m_2 over side-1 flags and m_1 over side-2 flags
  bool equal = false;
};

/// lhs = sum over boundary flags of F meeting a typeX(1) vertex v of
/// m_2(v,e); rhs the mirror sum over typeX(2).  Empty locus gives (0,0,true).
MatchingReport multiplicity_matching(const Graph& g, const Locus& F);

enum class BreakingCase { A, B, Neither };

/// Lemma-style classification of the kinds incident to a locus: any typeZ
/// vertex inside or adjacent -> A; otherwise boundary meeting both typeX(1)
/// and typeX(2) -> B; otherwise Neither.
BreakingCase breaking_case(const Graph& g, const Locus& F);

const char* breaking_case_name(BreakingCase c);

}  // namespace covcert::snc
