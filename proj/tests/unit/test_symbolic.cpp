#include <gtest/gtest.h>

#include <set>

#include "cartan/error.hpp"
#include "cartan/symbolic.hpp"
#include "graphs.hpp"
#include "oracles.hpp"

namespace cartan {
namespace {

using testing::chain;
using testing::cuntz_two;
using testing::no_exit_two_cycle;
using testing::single_loop;

Path at_vertex(const GraphSpec& g, const std::string& v) { return Path{*g.find_vertex(v), {}}; }
Path ids(const GraphSpec& g, std::vector<std::string> edges) { return path_from_ids(g, edges); }

TEST(GraphSpecTest, SortsAndValidates) {
  const GraphSpec g({"b", "a"}, {{"y", "b", "a"}, {"x", "a", "b"}});
  EXPECT_EQ(g.vertex_id(0), "a");
  EXPECT_EQ(g.edge_id(0), "x");
  EXPECT_TRUE(g.sink_free());
  EXPECT_THROW(GraphSpec({"a"}, {{"x", "a", "zz"}}), Error);
  EXPECT_THROW(GraphSpec({"a", "a"}, {}), Error);
  EXPECT_FALSE(chain(2).sink_free());
}

TEST(Paths, CompositionIsChecked) {
  const auto g = no_exit_two_cycle();
  EXPECT_NO_THROW(ids(g, {"ca", "ab", "ba"}));
  EXPECT_THROW(ids(g, {"ab", "ca"}), Error);
  const auto p = ids(g, {"ab"});
  EXPECT_EQ(g.vertex_id(path_end(g, p)), "b");
  EXPECT_TRUE(is_prefix(p, ids(g, {"ab", "ba"})));
}

TEST(ConditionL, Examples) {
  EXPECT_FALSE(condition_L(single_loop()));
  EXPECT_TRUE(condition_L(cuntz_two()));
  const GraphSpec g({"a", "b"}, {{"ab", "a", "b"}, {"ba", "b", "a"}, {"aa", "a", "a"}});
  EXPECT_TRUE(condition_L(g));
  EXPECT_FALSE(condition_L(no_exit_two_cycle()));
  const auto cycles = no_exit_cycles(no_exit_two_cycle());
  ASSERT_EQ(cycles.size(), 1u);
  EXPECT_EQ(cycles.front().size(), 2u);
}

TEST(ConditionL, AgreesWithCycleEnumeration) {
  for (const auto& g : testing::graph_corpus(4, 6, 0)) {
    ASSERT_EQ(condition_L(g), testing::condition_L_by_cycles(g));
  }
}

TEST(ConditionK, Examples) {
  EXPECT_TRUE(condition_K(cuntz_two()));
  EXPECT_FALSE(condition_K(single_loop()));
  EXPECT_EQ(first_return_paths(cuntz_two(), 0), 2);
  EXPECT_EQ(first_return_paths(single_loop(), 0), 1);
  // a -> b -> a and a -> a: a has two first returns, b only one.
  const GraphSpec g({"a", "b"}, {{"ab", "a", "b"}, {"ba", "b", "a"}, {"aa", "a", "a"}});
  EXPECT_EQ(first_return_paths(g, *g.find_vertex("b")), 2);
  EXPECT_TRUE(condition_K(g));
}

TEST(ConditionK, QuotientsSatisfyL) {
  for (const auto& g : testing::graph_corpus(4, 6, 0)) {
    if (!condition_K(g)) continue;
    const std::size_t n = g.vertex_count();
    for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << n); ++mask) {
      std::vector<bool> h(n);
      for (std::size_t v = 0; v < n; ++v) h[v] = (mask >> v) & 1u;
      if (!is_hereditary(g, h) || !is_saturated(g, h)) continue;
      std::vector<bool> keep(n);
      for (std::size_t v = 0; v < n; ++v) keep[v] = !h[v];
      ASSERT_TRUE(condition_L(g.induced(keep)));
    }
  }
}

TEST(NoLoops, Examples) {
  EXPECT_TRUE(has_no_loops(chain(3)));
  EXPECT_FALSE(has_no_loops(single_loop()));
  EXPECT_FALSE(find_cycle(chain(3)).has_value());
  ASSERT_TRUE(find_cycle(no_exit_two_cycle()).has_value());
}

TEST(NoLoops, AgreesWithTopologicalSort) {
  for (const auto& g : testing::random_graphs(6, 7, 2000, 5)) {
    ASSERT_EQ(has_no_loops(g), testing::topologically_sortable(g));
    const auto c = find_cycle(g);
    ASSERT_EQ(c.has_value(), !has_no_loops(g));
    if (c) {
      for (std::size_t i = 0; i < c->size(); ++i) ASSERT_EQ(g.dst((*c)[i]), g.src((*c)[(i + 1) % c->size()]));
    }
  }
}

TEST(EssentialFreeness, Examples) {
  EXPECT_FALSE(essential_freeness(single_loop(), 1, 0));
  for (unsigned m = 1; m <= 4; ++m) {
    for (unsigned n = 0; n <= 4; ++n) {
      if (m != n) EXPECT_TRUE(essential_freeness(cuntz_two(), m, n));
    }
  }
  EXPECT_FALSE(essential_freeness(no_exit_two_cycle(), 3, 1));
  EXPECT_TRUE(essential_freeness(no_exit_two_cycle(), 2, 1));
}

TEST(EssentialFreeness, OracleConfirmsTwoCycleExample) {
  const auto g = no_exit_two_cycle();
  const auto depth = default_depth(g, 3);
  EXPECT_FALSE(testing::brute_force_essential_freeness(g, 3, 1, depth, 3));
  EXPECT_TRUE(testing::cylinder_inside_fixed_set(g, at_vertex(g, "a"), 3, 1, depth));
  EXPECT_FALSE(testing::cylinder_inside_fixed_set(g, at_vertex(g, "c"), 3, 1, depth));
}

TEST(EssentialFreeness, RejectsBadArguments) {
  EXPECT_THROW(essential_freeness(cuntz_two(), 2, 2), Error);
  EXPECT_THROW(essential_freeness(chain(2), 1, 0), Error);
}

TEST(Germs, ReflexiveAndRestriction) {
  const auto g = cuntz_two();
  const auto p = make_prefix_map(g, ids(g, {"e0"}), ids(g, {"e1"}));
  const auto q = make_prefix_map(g, ids(g, {"e0", "e1"}), ids(g, {"e1", "e1"}));
  EXPECT_TRUE(germ_equal(g, p, p, ids(g, {"e1"})));
  EXPECT_TRUE(germ_equal(g, p, q, ids(g, {"e1", "e1"})));
  const auto r = make_prefix_map(g, ids(g, {"e1"}), ids(g, {"e1"}));
  EXPECT_FALSE(germ_equal(g, p, r, ids(g, {"e1"})));
}

TEST(Germs, SingleLoopShiftCollapsesToIdentity) {
  const auto g = single_loop();
  const auto shift = make_prefix_map(g, ids(g, {"loop", "loop"}), ids(g, {"loop"}));
  const auto id = make_prefix_map(g, ids(g, {"loop"}), ids(g, {"loop"}));
  EXPECT_TRUE(germ_equal(g, shift, id, ids(g, {"loop"})));
}

TEST(Germs, OutsideDomainThrows) {
  const auto g = cuntz_two();
  const auto p = make_prefix_map(g, ids(g, {"e0"}), ids(g, {"e1"}));
  EXPECT_THROW(germ_equal(g, p, p, ids(g, {"e0"})), Error);
}

TEST(Germs, EquivalenceOnRandomMaps) {
  const auto g = cuntz_two();
  std::vector<PrefixMap> maps;
  const std::vector<std::vector<std::string>> words = {{}, {"e0"}, {"e1"}, {"e0", "e0"}, {"e1", "e0"}};
  for (const auto& mu : words) {
    for (const auto& nu : {std::vector<std::string>{}, std::vector<std::string>{"e0"}}) {
      maps.push_back(make_prefix_map(g, path_from_ids(g, mu, "v"), path_from_ids(g, nu, "v")));
    }
  }
  const auto at = ids(g, {"e0", "e1"});
  for (const auto& a : maps) {
    ASSERT_TRUE(germ_equal(g, a, a, at));
    for (const auto& b : maps) {
      ASSERT_EQ(germ_equal(g, a, b, at), germ_equal(g, b, a, at));
      for (const auto& c : maps) {
        if (germ_equal(g, a, b, at) && germ_equal(g, b, c, at)) ASSERT_TRUE(germ_equal(g, a, c, at));
      }
    }
  }
}

TEST(PrefixMaps, ComposeAndInverse) {
  const auto g = cuntz_two();
  const auto p = make_prefix_map(g, ids(g, {"e0"}), ids(g, {"e1"}));
  const auto back = compose(g, inverse(p), p);
  ASSERT_TRUE(back.has_value());
  EXPECT_TRUE(germ_equal(g, *back, make_prefix_map(g, ids(g, {"e1"}), ids(g, {"e1"})), ids(g, {"e1"})));
  EXPECT_FALSE(compose(g, p, p).has_value());
}

std::set<std::tuple<std::vector<EdgeIndex>, std::size_t, std::vector<EdgeIndex>, std::size_t>> dr_brute_force(
    const GraphSpec& g, std::size_t depth) {
  std::vector<Path> paths;
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    for (std::size_t len = 0; len <= depth; ++len) {
      for (auto& p : paths_of_length(g, Path{v, {}}, len)) paths.push_back(std::move(p));
    }
  }
  std::set<std::tuple<std::vector<EdgeIndex>, std::size_t, std::vector<EdgeIndex>, std::size_t>> out;
  for (const auto& mu : paths) {
    for (const auto& nu : paths) {
      if (path_end(g, mu) != path_end(g, nu)) continue;
      auto a = mu.edges;
      auto b = nu.edges;
      VertexIndex end = path_end(g, mu);
      while (!a.empty() && !b.empty() && a.back() == b.back()) {
        end = g.src(a.back());
        a.pop_back();
        b.pop_back();
      }
      out.insert({a, a.empty() ? end : mu.base, b, b.empty() ? end : nu.base});
    }
  }
  return out;
}

TEST(DeaconuRenault, SingleLoopDepthTwo) {
  const auto classes = dr_arrows_at_depth(single_loop(), 2);
  EXPECT_EQ(classes.size(), 5u);
  std::set<long> lags;
  for (const auto& c : classes) lags.insert(c.lag);
  EXPECT_EQ(lags, (std::set<long>{-2, -1, 0, 1, 2}));
}

TEST(DeaconuRenault, MatchesBruteForce) {
  for (const auto& g : {cuntz_two(), no_exit_two_cycle(), testing::graph_from_counts({{1, 1}, {1, 0}})}) {
    for (std::size_t depth = 1; depth <= 3; ++depth) {
      const auto classes = dr_arrows_at_depth(g, depth);
      std::set<std::tuple<std::vector<EdgeIndex>, std::size_t, std::vector<EdgeIndex>, std::size_t>> got;
      for (const auto& c : classes) {
        ASSERT_EQ(c.lag, static_cast<long>(c.mu.length()) - static_cast<long>(c.nu.length()));
        ASSERT_EQ(path_end(g, c.mu), path_end(g, c.nu));
        got.insert({c.mu.edges, c.mu.base, c.nu.edges, c.nu.base});
      }
      EXPECT_EQ(got.size(), classes.size());
      EXPECT_EQ(got, dr_brute_force(g, depth));
    }
  }
}

TEST(DeaconuRenault, CompositionAppearsAtSufficientDepth) {
  const auto g = cuntz_two();
  const auto classes = dr_arrows_at_depth(g, 2);
  const auto deeper = dr_arrows_at_depth(g, 4);
  for (const auto& a : classes) {
    for (const auto& b : classes) {
      auto pa = make_prefix_map(g, a.mu, a.nu);
      auto pb = make_prefix_map(g, b.mu, b.nu);
      auto c = compose(g, pa, pb);
      if (!c) continue;
      VertexIndex end = path_end(g, c->mu);
      while (!c->mu.edges.empty() && !c->nu.edges.empty() && c->mu.edges.back() == c->nu.edges.back()) {
        end = g.src(c->mu.edges.back());
        c->mu.edges.pop_back();
        c->nu.edges.pop_back();
      }
      if (c->mu.edges.empty()) c->mu.base = end;
      if (c->nu.edges.empty()) c->nu.base = end;
      bool found = false;
      for (const auto& d : deeper) found |= d.mu == c->mu && d.nu == c->nu;
      ASSERT_TRUE(found);
    }
  }
}

TEST(DeaconuRenault, SinkRejected) { EXPECT_THROW(dr_arrows_at_depth(chain(2), 2), Error); }

TEST(LocalMembership, GeneratorsAndCompositions) {
  const auto g = cuntz_two();
  const auto a = make_prefix_map(g, ids(g, {"e0"}), ids(g, {"e1"}));
  const auto b = make_prefix_map(g, ids(g, {"e1", "e0"}), ids(g, {"e0"}));
  EXPECT_TRUE(locally_belongs(g, {a}, {a, b}, 2));
  const auto ab = compose(g, a, b);
  ASSERT_TRUE(ab.has_value());
  EXPECT_TRUE(locally_belongs(g, {*ab}, {a, b}, 2));
}

TEST(LocalMembership, SwapNotGeneratedByPrefixing) {
  const auto g = cuntz_two();
  // x ↦ 0x generates only maps 0^a w ↦ 0^b w; the swap of the two
  // half-cylinders is not a union of their germs.
  const auto prepend = make_prefix_map(g, ids(g, {"e0"}), at_vertex(g, "v"));
  const auto swap0 = make_prefix_map(g, ids(g, {"e1"}), ids(g, {"e0"}));
  const auto swap1 = make_prefix_map(g, ids(g, {"e0"}), ids(g, {"e1"}));
  for (std::size_t bound = 1; bound <= 4; ++bound) {
    EXPECT_FALSE(locally_belongs(g, {swap0, swap1}, {prepend}, 2, {bound, 20000}));
  }
  // With the swap pieces as generators it does belong.
  EXPECT_TRUE(locally_belongs(g, {swap0, swap1}, {swap1}, 2));
}

TEST(LocalMembership, InconsistentCandidateThrows) {
  const auto g = cuntz_two();
  const auto p = make_prefix_map(g, ids(g, {"e0"}), ids(g, {"e1"}));
  const auto q = make_prefix_map(g, ids(g, {"e1"}), ids(g, {"e1"}));
  EXPECT_THROW(locally_belongs(g, {p, q}, {p}, 2), Error);
}

}  // namespace
}  // namespace cartan
