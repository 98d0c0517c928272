#pragma once

// Directed graphs and the one-sided shift on their infinite path space.
//
// A point of the path space is an infinite edge sequence e1 e2 ... with
// dst(e_i) = src(e_{i+1}); the cylinder Z(μ) is the set of points starting
// with the finite path μ. Cylinders are handled through their defining
// paths only.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cartan {

using VertexIndex = std::size_t;
using EdgeIndex = std::size_t;

struct EdgeRecord {
  std::string id;
  std::string src;
  std::string dst;
};

class GraphSpec {
 public:
  GraphSpec() = default;
  /// Vertices and edges are sorted by id. Throws cartan::Error on duplicate
  /// ids or unknown endpoints.
  GraphSpec(std::vector<std::string> vertices, std::vector<EdgeRecord> edges);

  std::size_t vertex_count() const noexcept { return vertex_ids_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::string& vertex_id(VertexIndex v) const { return vertex_ids_.at(v); }
  const std::string& edge_id(EdgeIndex e) const { return edges_.at(e).id; }
  const std::vector<std::string>& vertex_ids() const noexcept { return vertex_ids_; }
  std::optional<VertexIndex> find_vertex(std::string_view id) const;
  std::optional<EdgeIndex> find_edge(std::string_view id) const;

  VertexIndex src(EdgeIndex e) const { return src_[e]; }
  VertexIndex dst(EdgeIndex e) const { return dst_[e]; }
  const std::vector<EdgeIndex>& out_edges(VertexIndex v) const { return out_[v]; }
  const std::vector<EdgeIndex>& in_edges(VertexIndex v) const { return in_[v]; }

  /// Every vertex emits at least one edge.
  bool sink_free() const;
  /// Every vertex receives at least one edge.
  bool source_free() const;

  /// Subgraph induced on the vertices with keep[v] set.
  GraphSpec induced(const std::vector<bool>& keep) const;

  std::vector<EdgeRecord> edge_records() const { return edges_; }

 private:
  std::vector<std::string> vertex_ids_;
  std::vector<EdgeRecord> edges_;
  std::vector<VertexIndex> src_, dst_;
  std::vector<std::vector<EdgeIndex>> out_, in_;
  std::unordered_map<std::string, VertexIndex> vertex_lookup_;
  std::unordered_map<std::string, EdgeIndex> edge_lookup_;
};

/// Finite path; the empty path sits at `base`. For a non-empty path `base`
/// is the source of the first edge.
struct Path {
  VertexIndex base = 0;
  std::vector<EdgeIndex> edges;

  std::size_t length() const noexcept { return edges.size(); }

  friend bool operator==(const Path&, const Path&) = default;
  friend auto operator<=>(const Path&, const Path&) = default;
};

/// Throws cartan::Error if consecutive edges do not compose or the base does
/// not match the first edge.
Path make_path(const GraphSpec& g, VertexIndex base, std::vector<EdgeIndex> edges);
/// Path from edge ids; `base` is required only for the empty path.
Path path_from_ids(const GraphSpec& g, const std::vector<std::string>& edge_ids,
                   std::optional<std::string> base = std::nullopt);
VertexIndex path_end(const GraphSpec& g, const Path& p);
bool is_prefix(const Path& prefix, const Path& path);
Path concat(const GraphSpec& g, const Path& head, const std::vector<EdgeIndex>& tail);
std::string path_to_string(const GraphSpec& g, const Path& p);

/// The partial map Z(nu) → Z(mu), nu·w ↦ mu·w. Requires end(mu) = end(nu).
struct PrefixMap {
  Path mu;
  Path nu;

  friend bool operator==(const PrefixMap&, const PrefixMap&) = default;
  friend auto operator<=>(const PrefixMap&, const PrefixMap&) = default;
};

PrefixMap make_prefix_map(const GraphSpec& g, Path mu, Path nu);
PrefixMap inverse(const PrefixMap& p);
/// outer ∘ inner as a single prefix map, or nullopt if the composite is empty.
std::optional<PrefixMap> compose(const GraphSpec& g, const PrefixMap& outer, const PrefixMap& inner);

/// Class of the bisection {(mu·w, |mu|-|nu|, nu·w)} of the shift groupoid,
/// stored in reduced form (mu and nu do not end with a common edge).
struct DRArrowClass {
  Path mu;
  long lag = 0;  // |mu| - |nu|
  Path nu;

  friend bool operator==(const DRArrowClass&, const DRArrowClass&) = default;
};

// ---------------------------------------------------------------------------
// Graph conditions.

/// A cycle every vertex of which has out-degree one, as its edge list
/// starting from the least vertex on it.
using Cycle = std::vector<EdgeIndex>;

/// All cycles without exits, ordered by least vertex.
std::vector<Cycle> no_exit_cycles(const GraphSpec& g);

/// Every cycle has an exit.
bool condition_L(const GraphSpec& g);

/// Number of first-return paths at v (closed paths at v not passing through
/// v in between), saturated at 2.
int first_return_paths(const GraphSpec& g, VertexIndex v);

/// Every vertex on a cycle lies on at least two distinct first-return paths.
bool condition_K(const GraphSpec& g);
/// First vertex violating condition (K), if any.
std::optional<VertexIndex> condition_K_witness(const GraphSpec& g);

/// True iff the graph has no cycles.
bool has_no_loops(const GraphSpec& g);
/// Some cycle, if the graph has one.
std::optional<Cycle> find_cycle(const GraphSpec& g);

bool is_hereditary(const GraphSpec& g, const std::vector<bool>& set);
bool is_saturated(const GraphSpec& g, const std::vector<bool>& set);

/// True iff X_{m,n} = {x : T^m x = T^n x} has empty interior. Throws if
/// m == n or the graph has a sink.
///
/// X_{m,n} contains a cylinder iff some cycle without exits has length
/// dividing |m - n|: such a cycle gives an isolated periodic point, and from
/// any cylinder that reaches a branching vertex late enough the two branches
/// cannot both satisfy the periodicity T^m x = T^n x.
bool essential_freeness(const GraphSpec& g, unsigned m, unsigned n);

/// Default depth for finite cylinder searches: |V| + |E| + m.
std::size_t default_depth(const GraphSpec& g, unsigned m);

// ---------------------------------------------------------------------------
// Germs and the shift groupoid.

/// True iff p and q agree near every point of Z(at). Throws if `at` does not
/// extend both p.nu and q.nu.
bool germ_equal(const GraphSpec& g, const PrefixMap& p, const PrefixMap& q, const Path& at);

/// Reduced classes (mu, |mu|-|nu|, nu) with |mu|, |nu| <= depth, sorted by
/// (lag, mu, nu). Throws if the graph has a sink.
std::vector<DRArrowClass> dr_arrows_at_depth(const GraphSpec& g, std::size_t depth);

/// Every path of length exactly `length` starting at `from`.
std::vector<Path> paths_of_length(const GraphSpec& g, const Path& from, std::size_t length);

struct LocalMembershipOptions {
  std::size_t max_word_length = 4;
  std::size_t max_words = 20000;
};

/// Decides whether the finite union `candidate` agrees, on each cylinder of
/// its domain at `depth`, with some composition of at most
/// `max_word_length` generators and inverses. Throws if the pieces of the
/// candidate disagree on an overlap.
bool locally_belongs(const GraphSpec& g, const std::vector<PrefixMap>& candidate,
                     const std::vector<PrefixMap>& generators, std::size_t depth,
                     const LocalMembershipOptions& options = {});

}  // namespace cartan
