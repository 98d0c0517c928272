#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "cartan/error.hpp"
#include "cartan/groupoid.hpp"

namespace cartan {
namespace {

std::string pair_id(const std::string& range, const std::string& source) {
  return "(" + range + "," + source + ")";
}

// Principal groupoid of an equivalence relation given as classes of distinct
// points. Arrow (x,y) goes from y to x.
FiniteGroupoid from_classes(const std::vector<std::vector<std::string>>& classes) {
  GroupoidData d;
  std::set<std::string> seen;
  for (const auto& cls : classes) {
    for (const auto& x : cls) {
      if (!seen.insert(x).second) throw Error("relation: point " + x + " appears in two classes");
      d.units.push_back(x);
    }
  }
  for (const auto& cls : classes) {
    for (const auto& x : cls) {
      d.unit_arrows.emplace_back(x, pair_id(x, x));
      for (const auto& y : cls) {
        d.arrows.push_back({pair_id(x, y), y, x});
        d.inverse.emplace_back(pair_id(x, y), pair_id(y, x));
        for (const auto& z : cls) d.product.push_back({pair_id(x, y), pair_id(y, z), pair_id(x, z)});
      }
    }
  }
  return FiniteGroupoid::from_data(d);
}

void check_group(const GroupTable& group) {
  const std::size_t n = group.elements.size();
  if (n == 0) throw Error("group table: no elements");
  if (group.multiply.size() != n) throw Error("group table: wrong number of rows");
  for (const auto& row : group.multiply) {
    if (row.size() != n) throw Error("group table: wrong row length");
    for (auto v : row) {
      if (v >= n) throw Error("group table: entry out of range");
    }
  }
  std::optional<std::size_t> identity;
  for (std::size_t e = 0; e < n && !identity; ++e) {
    bool ok = true;
    for (std::size_t g = 0; g < n && ok; ++g) ok = group.multiply[e][g] == g && group.multiply[g][e] == g;
    if (ok) identity = e;
  }
  if (!identity) throw Error("group table: no identity element");
  for (std::size_t a = 0; a < n; ++a) {
    bool has_inverse = false;
    for (std::size_t b = 0; b < n; ++b) {
      if (group.multiply[a][b] == *identity && group.multiply[b][a] == *identity) has_inverse = true;
      for (std::size_t c = 0; c < n; ++c) {
        if (group.multiply[group.multiply[a][b]][c] != group.multiply[a][group.multiply[b][c]]) {
          throw Error("group table: not associative at (" + group.elements[a] + "," +
                      group.elements[b] + "," + group.elements[c] + ")");
        }
      }
    }
    if (!has_inverse) throw Error("group table: " + group.elements[a] + " has no inverse");
  }
}

}  // namespace

FiniteGroupoid pair_groupoid(const std::vector<std::string>& points) {
  return from_classes({points});
}

FiniteGroupoid relation_groupoid(const std::vector<std::vector<std::string>>& classes) {
  return from_classes(classes);
}

FiniteGroupoid relation_groupoid(const std::vector<std::string>& points,
                                 const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::map<std::string, std::size_t> index;
  for (const auto& p : points) {
    if (!index.emplace(p, index.size()).second) throw Error("relation: duplicate point " + p);
  }
  std::vector<std::size_t> parent(points.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [a, b] : pairs) {
    auto ia = index.find(a), ib = index.find(b);
    if (ia == index.end() || ib == index.end()) throw Error("relation: pair references unknown point");
    parent[find(ia->second)] = find(ib->second);
  }
  std::map<std::size_t, std::vector<std::string>> classes;
  for (const auto& p : points) classes[find(index[p])].push_back(p);
  std::vector<std::vector<std::string>> out;
  for (auto& kv : classes) out.push_back(std::move(kv.second));
  return from_classes(out);
}

FiniteGroupoid transformation_groupoid(const GroupTable& group, const GroupAction& action) {
  check_group(group);
  const std::size_t n = group.elements.size();
  const std::size_t m = action.points.size();
  if (action.act.size() != n) throw Error("action: one row per group element required");
  std::size_t identity = 0;
  for (std::size_t e = 0; e < n; ++e) {
    if (group.multiply[e][e] == e) identity = e;
  }
  for (std::size_t g = 0; g < n; ++g) {
    if (action.act[g].size() != m) throw Error("action: wrong row length");
    std::vector<bool> hit(m, false);
    for (auto y : action.act[g]) {
      if (y >= m) throw Error("action: entry out of range");
      if (hit[y]) throw Error("action: " + group.elements[g] + " does not act by a bijection");
      hit[y] = true;
    }
  }
  for (std::size_t x = 0; x < m; ++x) {
    if (action.act[identity][x] != x) throw Error("action: identity does not act trivially");
    for (std::size_t g = 0; g < n; ++g) {
      for (std::size_t h = 0; h < n; ++h) {
        if (action.act[group.multiply[g][h]][x] != action.act[g][action.act[h][x]]) {
          throw Error("action: (gh)x != g(hx) for g=" + group.elements[g] + ", h=" + group.elements[h]);
        }
      }
    }
  }

  auto id = [&](std::size_t g, std::size_t x) {
    return "(" + group.elements[g] + "," + action.points[x] + ")";
  };
  GroupoidData d;
  d.units = action.points;
  std::vector<std::size_t> inverse_of(n);
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t h = 0; h < n; ++h) {
      if (group.multiply[g][h] == identity) inverse_of[g] = h;
    }
  }
  for (std::size_t x = 0; x < m; ++x) d.unit_arrows.emplace_back(action.points[x], id(identity, x));
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t x = 0; x < m; ++x) {
      const auto gx = action.act[g][x];
      d.arrows.push_back({id(g, x), action.points[x], action.points[gx]});
      d.inverse.emplace_back(id(g, x), id(inverse_of[g], gx));
      for (std::size_t h = 0; h < n; ++h) {
        d.product.push_back({id(h, gx), id(g, x), id(group.multiply[h][g], x)});
      }
    }
  }
  return FiniteGroupoid::from_data(d);
}

FiniteGroupoid germ_groupoid_discrete(const std::vector<std::string>& points,
                                      const std::vector<PartialBijection>& generators) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& gen : generators) {
    for (const auto& [y, x] : gen.pairs()) {
      if (y >= points.size() || x >= points.size()) throw Error("germ groupoid: generator leaves the point set");
      pairs.emplace_back(points[x], points[y]);
    }
  }
  return relation_groupoid(points, pairs);
}

}  // namespace cartan
