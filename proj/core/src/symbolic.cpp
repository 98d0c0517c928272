#include "cartan/symbolic.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cartan/error.hpp"

namespace cartan {

GraphSpec::GraphSpec(std::vector<std::string> vertices, std::vector<EdgeRecord> edges) {
  std::sort(vertices.begin(), vertices.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end()) {
    throw Error("graph: duplicate vertex id");
  }
  std::sort(edges.begin(), edges.end(),
            [](const EdgeRecord& a, const EdgeRecord& b) { return a.id < b.id; });
  vertex_ids_ = std::move(vertices);
  for (VertexIndex v = 0; v < vertex_ids_.size(); ++v) vertex_lookup_[vertex_ids_[v]] = v;
  out_.assign(vertex_ids_.size(), {});
  in_.assign(vertex_ids_.size(), {});
  for (EdgeIndex e = 0; e < edges.size(); ++e) {
    const auto& rec = edges[e];
    if (!edge_lookup_.emplace(rec.id, e).second) throw Error("graph: duplicate edge id " + rec.id);
    auto s = vertex_lookup_.find(rec.src);
    auto d = vertex_lookup_.find(rec.dst);
    if (s == vertex_lookup_.end() || d == vertex_lookup_.end()) {
      throw Error("graph: edge " + rec.id + " has an unknown endpoint");
    }
    src_.push_back(s->second);
    dst_.push_back(d->second);
    out_[s->second].push_back(e);
    in_[d->second].push_back(e);
  }
  edges_ = std::move(edges);
}

std::optional<VertexIndex> GraphSpec::find_vertex(std::string_view id) const {
  auto it = vertex_lookup_.find(std::string(id));
  if (it == vertex_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeIndex> GraphSpec::find_edge(std::string_view id) const {
  auto it = edge_lookup_.find(std::string(id));
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

bool GraphSpec::sink_free() const {
  return std::all_of(out_.begin(), out_.end(), [](const auto& o) { return !o.empty(); });
}

bool GraphSpec::source_free() const {
  return std::all_of(in_.begin(), in_.end(), [](const auto& i) { return !i.empty(); });
}

GraphSpec GraphSpec::induced(const std::vector<bool>& keep) const {
  std::vector<std::string> vs;
  for (VertexIndex v = 0; v < vertex_count(); ++v) {
    if (keep[v]) vs.push_back(vertex_ids_[v]);
  }
  std::vector<EdgeRecord> es;
  for (EdgeIndex e = 0; e < edge_count(); ++e) {
    if (keep[src_[e]] && keep[dst_[e]]) es.push_back(edges_[e]);
  }
  return GraphSpec(std::move(vs), std::move(es));
}

// ---------------------------------------------------------------------------

Path make_path(const GraphSpec& g, VertexIndex base, std::vector<EdgeIndex> edges) {
  if (base >= g.vertex_count()) throw Error("path: unknown base vertex");
  VertexIndex at = base;
  for (EdgeIndex e : edges) {
    if (e >= g.edge_count()) throw Error("path: unknown edge");
    if (g.src(e) != at) throw Error("path: edge " + g.edge_id(e) + " does not continue the path");
    at = g.dst(e);
  }
  return Path{base, std::move(edges)};
}

Path path_from_ids(const GraphSpec& g, const std::vector<std::string>& edge_ids,
                   std::optional<std::string> base) {
  std::vector<EdgeIndex> edges;
  for (const auto& id : edge_ids) {
    auto e = g.find_edge(id);
    if (!e) throw Error("path: unknown edge " + id);
    edges.push_back(*e);
  }
  VertexIndex b;
  if (base) {
    auto v = g.find_vertex(*base);
    if (!v) throw Error("path: unknown vertex " + *base);
    b = *v;
  } else if (!edges.empty()) {
    b = g.src(edges.front());
  } else {
    throw Error("path: the empty path needs a base vertex");
  }
  return make_path(g, b, std::move(edges));
}

VertexIndex path_end(const GraphSpec& g, const Path& p) {
  return p.edges.empty() ? p.base : g.dst(p.edges.back());
}

bool is_prefix(const Path& prefix, const Path& path) {
  if (prefix.base != path.base || prefix.edges.size() > path.edges.size()) return false;
  return std::equal(prefix.edges.begin(), prefix.edges.end(), path.edges.begin());
}

Path concat(const GraphSpec& g, const Path& head, const std::vector<EdgeIndex>& tail) {
  auto edges = head.edges;
  edges.insert(edges.end(), tail.begin(), tail.end());
  return make_path(g, head.base, std::move(edges));
}

std::string path_to_string(const GraphSpec& g, const Path& p) {
  if (p.edges.empty()) return "(" + g.vertex_id(p.base) + ")";
  std::string out;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    if (i) out += ".";
    out += g.edge_id(p.edges[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Cycle> no_exit_cycles(const GraphSpec& g) {
  const std::size_t n = g.vertex_count();
  // 0 = unvisited, 1 = on the current walk, 2 = finished.
  std::vector<int> state(n, 0);
  std::vector<Cycle> out;
  for (VertexIndex start = 0; start < n; ++start) {
    if (state[start] != 0) continue;
    std::vector<VertexIndex> walk;
    VertexIndex v = start;
    while (state[v] == 0 && g.out_edges(v).size() == 1) {
      state[v] = 1;
      walk.push_back(v);
      v = g.dst(g.out_edges(v).front());
    }
    if (state[v] == 1) {
      // Closed a cycle through out-degree-one vertices; rotate to its least vertex.
      auto pos = std::find(walk.begin(), walk.end(), v);
      std::vector<VertexIndex> cyc(pos, walk.end());
      auto least = std::min_element(cyc.begin(), cyc.end());
      std::rotate(cyc.begin(), least, cyc.end());
      Cycle edges;
      for (VertexIndex u : cyc) edges.push_back(g.out_edges(u).front());
      out.push_back(std::move(edges));
    }
    for (VertexIndex u : walk) state[u] = 2;
    if (state[v] == 0) state[v] = 2;
  }
  std::sort(out.begin(), out.end(), [&](const Cycle& a, const Cycle& b) {
    return g.src(a.front()) < g.src(b.front());
  });
  return out;
}

bool condition_L(const GraphSpec& g) { return no_exit_cycles(g).empty(); }

int first_return_paths(const GraphSpec& g, VertexIndex v) {
  const std::size_t n = g.vertex_count();
  // Forward reachability from v without re-entering v.
  std::vector<bool> fwd(n, false), bwd(n, false);
  std::vector<VertexIndex> stack;
  for (EdgeIndex e : g.out_edges(v)) {
    auto u = g.dst(e);
    if (u != v && !fwd[u]) {
      fwd[u] = true;
      stack.push_back(u);
    }
  }
  while (!stack.empty()) {
    auto w = stack.back();
    stack.pop_back();
    for (EdgeIndex e : g.out_edges(w)) {
      auto u = g.dst(e);
      if (u != v && !fwd[u]) {
        fwd[u] = true;
        stack.push_back(u);
      }
    }
  }
  for (EdgeIndex e : g.in_edges(v)) {
    auto u = g.src(e);
    if (u != v && !bwd[u]) {
      bwd[u] = true;
      stack.push_back(u);
    }
  }
  while (!stack.empty()) {
    auto w = stack.back();
    stack.pop_back();
    for (EdgeIndex e : g.in_edges(w)) {
      auto u = g.src(e);
      if (u != v && !bwd[u]) {
        bwd[u] = true;
        stack.push_back(u);
      }
    }
  }
  std::vector<bool> relevant(n, false);
  for (VertexIndex u = 0; u < n; ++u) relevant[u] = fwd[u] && bwd[u];

  // Saturating path count over the relevant vertices; a cycle among them
  // yields infinitely many return paths.
  std::vector<int> memo(n, -1);
  std::vector<int> colour(n, 0);
  bool cyclic = false;
  auto count = [&](auto&& self, VertexIndex w) -> int {
    if (memo[w] >= 0) return memo[w];
    colour[w] = 1;
    int total = 0;
    for (EdgeIndex e : g.out_edges(w)) {
      auto u = g.dst(e);
      if (u == v) {
        total += 1;
      } else if (relevant[u]) {
        if (colour[u] == 1) {
          cyclic = true;
          total += 2;
        } else {
          total += self(self, u);
        }
      }
      total = std::min(total, 2);
    }
    colour[w] = 2;
    memo[w] = total;
    return total;
  };
  int total = 0;
  for (EdgeIndex e : g.out_edges(v)) {
    auto u = g.dst(e);
    if (u == v) {
      total += 1;
    } else if (relevant[u]) {
      total += count(count, u);
    }
    total = std::min(total, 2);
  }
  if (cyclic && total > 0) return 2;
  return total;
}

std::optional<VertexIndex> condition_K_witness(const GraphSpec& g) {
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    if (first_return_paths(g, v) == 1) return v;
  }
  return std::nullopt;
}

bool condition_K(const GraphSpec& g) { return !condition_K_witness(g).has_value(); }

std::optional<Cycle> find_cycle(const GraphSpec& g) {
  const std::size_t n = g.vertex_count();
  std::vector<int> colour(n, 0);
  std::vector<EdgeIndex> trail;
  std::optional<Cycle> found;
  auto dfs = [&](auto&& self, VertexIndex v) -> bool {
    colour[v] = 1;
    for (EdgeIndex e : g.out_edges(v)) {
      auto u = g.dst(e);
      trail.push_back(e);
      if (colour[u] == 1) {
        auto it = std::find_if(trail.begin(), trail.end(), [&](EdgeIndex f) { return g.src(f) == u; });
        found = Cycle(it, trail.end());
        return true;
      }
      if (colour[u] == 0 && self(self, u)) return true;
      trail.pop_back();
    }
    colour[v] = 2;
    return false;
  };
  for (VertexIndex v = 0; v < n; ++v) {
    if (colour[v] == 0 && dfs(dfs, v)) return found;
  }
  return std::nullopt;
}

bool has_no_loops(const GraphSpec& g) { return !find_cycle(g).has_value(); }

bool is_hereditary(const GraphSpec& g, const std::vector<bool>& set) {
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (set[g.src(e)] && !set[g.dst(e)]) return false;
  }
  return true;
}

bool is_saturated(const GraphSpec& g, const std::vector<bool>& set) {
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    if (set[v] || g.out_edges(v).empty()) continue;
    const bool all_in = std::all_of(g.out_edges(v).begin(), g.out_edges(v).end(),
                                    [&](EdgeIndex e) { return set[g.dst(e)]; });
    if (all_in) return false;
  }
  return true;
}

std::size_t default_depth(const GraphSpec& g, unsigned m) {
  return g.vertex_count() + g.edge_count() + m;
}

bool essential_freeness(const GraphSpec& g, unsigned m, unsigned n) {
  if (m == n) throw Error("essential freeness: m and n must differ");
  if (!g.sink_free()) throw Error("essential freeness: the graph has a sink");
  const std::size_t lag = m > n ? m - n : n - m;
  for (const auto& cycle : no_exit_cycles(g)) {
    if (lag % cycle.size() == 0) return false;
  }
  return true;
}

}  // namespace cartan
