#include <algorithm>
#include <map>
#include <set>

#include "cartan/error.hpp"
#include "cartan/symbolic.hpp"

namespace cartan {
namespace {

std::vector<EdgeIndex> suffix(const Path& p, std::size_t from) {
  return {p.edges.begin() + static_cast<std::ptrdiff_t>(from), p.edges.end()};
}

// Image of the cylinder Z(at) under p, as the finite path that every image
// point starts with; the tail after it is the same as the tail after `at`.
Path image_prefix(const GraphSpec& g, const PrefixMap& p, const Path& at) {
  return concat(g, p.mu, suffix(at, p.nu.length()));
}

// Edges of the unique infinite path from v when every vertex reachable from v
// has out-degree one; nullopt otherwise.
std::optional<std::vector<EdgeIndex>> forced_continuation(const GraphSpec& g, VertexIndex v,
                                                          std::size_t length) {
  std::set<VertexIndex> seen;
  std::vector<VertexIndex> stack{v};
  while (!stack.empty()) {
    auto w = stack.back();
    stack.pop_back();
    if (!seen.insert(w).second) continue;
    if (g.out_edges(w).size() != 1) return std::nullopt;
    stack.push_back(g.dst(g.out_edges(w).front()));
  }
  std::vector<EdgeIndex> out;
  VertexIndex w = v;
  while (out.size() < length) {
    auto e = g.out_edges(w).front();
    out.push_back(e);
    w = g.dst(e);
  }
  return out;
}

}  // namespace

PrefixMap make_prefix_map(const GraphSpec& g, Path mu, Path nu) {
  make_path(g, mu.base, mu.edges);
  make_path(g, nu.base, nu.edges);
  if (path_end(g, mu) != path_end(g, nu)) throw Error("prefix map: mu and nu must end at the same vertex");
  return PrefixMap{std::move(mu), std::move(nu)};
}

PrefixMap inverse(const PrefixMap& p) { return PrefixMap{p.nu, p.mu}; }

std::optional<PrefixMap> compose(const GraphSpec& g, const PrefixMap& outer, const PrefixMap& inner) {
  // inner: nu2·w ↦ mu2·w, outer: nu1·w ↦ mu1·w.
  if (is_prefix(outer.nu, inner.mu)) {
    return PrefixMap{concat(g, outer.mu, suffix(inner.mu, outer.nu.length())), inner.nu};
  }
  if (is_prefix(inner.mu, outer.nu)) {
    return PrefixMap{outer.mu, concat(g, inner.nu, suffix(outer.nu, inner.mu.length()))};
  }
  return std::nullopt;
}

bool germ_equal(const GraphSpec& g, const PrefixMap& p, const PrefixMap& q, const Path& at) {
  if (!is_prefix(p.nu, at) || !is_prefix(q.nu, at)) {
    throw Error("germ_equal: the cylinder of 'at' is not inside both domains");
  }
  const Path a = image_prefix(g, p, at);
  const Path b = image_prefix(g, q, at);
  if (a.length() == b.length()) return a == b;
  const Path& shorter = a.length() < b.length() ? a : b;
  const Path& longer = a.length() < b.length() ? b : a;
  if (!is_prefix(shorter, longer)) return false;
  // shorter·w = shorter·c·w for every continuation w from v: only possible if
  // Z(v) is the single point c c c ...
  const auto c = suffix(longer, shorter.length());
  const auto forced = forced_continuation(g, path_end(g, at), c.size());
  return forced && *forced == c;
}

std::vector<Path> paths_of_length(const GraphSpec& g, const Path& from, std::size_t length) {
  std::vector<Path> out;
  if (from.length() >= length) {
    out.push_back(from);
    return out;
  }
  Path current = from;
  auto rec = [&](auto&& self, VertexIndex v) -> void {
    if (current.length() == length) {
      out.push_back(current);
      return;
    }
    for (EdgeIndex e : g.out_edges(v)) {
      current.edges.push_back(e);
      self(self, g.dst(e));
      current.edges.pop_back();
    }
  };
  rec(rec, path_end(g, from));
  return out;
}

std::vector<DRArrowClass> dr_arrows_at_depth(const GraphSpec& g, std::size_t depth) {
  if (!g.sink_free()) throw Error("dr_arrows_at_depth: the graph has a sink");
  // All paths of length <= depth, grouped by terminal vertex.
  std::vector<std::vector<Path>> by_end(g.vertex_count());
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    for (std::size_t len = 0; len <= depth; ++len) {
      for (auto& p : paths_of_length(g, Path{v, {}}, len)) by_end[path_end(g, p)].push_back(std::move(p));
    }
  }
  std::vector<DRArrowClass> out;
  for (const auto& group : by_end) {
    for (const auto& mu : group) {
      for (const auto& nu : group) {
        const bool reducible = !mu.edges.empty() && !nu.edges.empty() && mu.edges.back() == nu.edges.back();
        if (reducible) continue;
        out.push_back({mu, static_cast<long>(mu.length()) - static_cast<long>(nu.length()), nu});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const DRArrowClass& a, const DRArrowClass& b) {
    if (a.lag != b.lag) return a.lag < b.lag;
    if (a.mu != b.mu) return a.mu < b.mu;
    return a.nu < b.nu;
  });
  return out;
}

bool locally_belongs(const GraphSpec& g, const std::vector<PrefixMap>& candidate,
                     const std::vector<PrefixMap>& generators, std::size_t depth,
                     const LocalMembershipOptions& options) {
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    for (std::size_t j = i + 1; j < candidate.size(); ++j) {
      const auto& a = candidate[i];
      const auto& b = candidate[j];
      const Path* overlap = nullptr;
      if (is_prefix(a.nu, b.nu)) overlap = &b.nu;
      else if (is_prefix(b.nu, a.nu)) overlap = &a.nu;
      if (overlap && !germ_equal(g, a, b, *overlap)) {
        throw Error("locally_belongs: candidate pieces " + std::to_string(i) + " and " +
                    std::to_string(j) + " disagree on their overlap");
      }
    }
  }

  // Words of length <= max_word_length in the generators and their inverses,
  // each collapsed to a single prefix map.
  std::vector<PrefixMap> letters;
  for (const auto& gen : generators) {
    letters.push_back(gen);
    letters.push_back(inverse(gen));
  }
  std::set<PrefixMap> words(letters.begin(), letters.end());
  std::vector<PrefixMap> frontier(words.begin(), words.end());
  for (std::size_t len = 2; len <= options.max_word_length && !frontier.empty(); ++len) {
    std::vector<PrefixMap> next;
    for (const auto& w : frontier) {
      for (const auto& l : letters) {
        auto c = compose(g, w, l);
        if (c && words.insert(*c).second) {
          next.push_back(*c);
          if (words.size() >= options.max_words) break;
        }
      }
      if (words.size() >= options.max_words) break;
    }
    frontier = std::move(next);
  }

  for (const auto& piece : candidate) {
    for (const auto& cyl : paths_of_length(g, piece.nu, std::max(depth, piece.nu.length()))) {
      const bool covered = std::any_of(words.begin(), words.end(), [&](const PrefixMap& w) {
        return is_prefix(w.nu, cyl) && germ_equal(g, w, piece, cyl);
      });
      if (!covered) return false;
    }
  }
  return true;
}

}  // namespace cartan
