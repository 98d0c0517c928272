#include <gtest/gtest.h>

#include <random>

#include "cartan/error.hpp"
#include "cartan/groupoid.hpp"
#include "corpus.hpp"
#include "oracles.hpp"

namespace cartan {
namespace {

using testing::NamedGroupoid;

GroupTable z2() { return {{"e", "s"}, {{0, 1}, {1, 0}}}; }

std::vector<ArrowIndex> units_of(const FiniteGroupoid& g) {
  std::vector<ArrowIndex> out;
  for (UnitIndex u = 0; u < g.unit_count(); ++u) out.push_back(g.unit_arrow(u));
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Validate, PairGroupoidHasEmptyReport) {
  EXPECT_TRUE(validate_groupoid(pair_groupoid({"1", "2"}).to_data()).empty());
}

TEST(Validate, BrokenInverseIsReported) {
  GroupoidData d;
  d.units = {"*"};
  d.arrows = {{"e", "*", "*"}, {"a", "*", "*"}};
  // a·a is forced to a, inconsistent with a being its own inverse.
  d.product = {{"e", "e", "e"}, {"e", "a", "a"}, {"a", "e", "a"}, {"a", "a", "a"}};
  d.inverse = {{"e", "e"}, {"a", "a"}};
  d.unit_arrows = {{"*", "e"}};
  const auto report = validate_groupoid(d);
  ASSERT_FALSE(report.empty());
  bool names_inverse = false;
  for (const auto& v : report) names_inverse |= v.axiom == "inverse-law";
  EXPECT_TRUE(names_inverse);
}

TEST(Validate, SwapTransformationGroupoidIsValid) {
  const auto g = transformation_groupoid(z2(), {{"1", "2"}, {{0, 1}, {1, 0}}});
  EXPECT_TRUE(validate_groupoid(g.to_data()).empty());
  EXPECT_EQ(testing::groupoid_axiom_failure(g), "");
}

TEST(Validate, MissingProductIsReported) {
  auto d = pair_groupoid({"1", "2"}).to_data();
  d.product.pop_back();
  EXPECT_FALSE(validate_groupoid(d).empty());
  EXPECT_THROW(FiniteGroupoid::from_data(d), Error);
}

TEST(Isotropy, PairGroupoidOnlyUnits) {
  const auto g = pair_groupoid({"1", "2", "3"});
  EXPECT_EQ(isotropy_bundle(g), units_of(g));
}

TEST(Isotropy, GroupOverPointIsEverything) {
  const auto g = transformation_groupoid(z2(), {{"*"}, {{0}, {0}}});
  EXPECT_EQ(isotropy_bundle(g).size(), 2u);
}

TEST(Isotropy, FreeSwapOnlyUnits) {
  const auto g = transformation_groupoid(z2(), {{"1", "2"}, {{0, 1}, {1, 0}}});
  EXPECT_EQ(isotropy_bundle(g), units_of(g));
}

TEST(Principal, Examples) {
  const auto pair = pair_groupoid({"1", "2", "3", "4"});
  EXPECT_TRUE(is_principal(pair));
  EXPECT_TRUE(is_essentially_principal(pair));
  const auto group = transformation_groupoid(z2(), {{"*"}, {{0}, {0}}});
  EXPECT_FALSE(is_principal(group));
  EXPECT_FALSE(is_essentially_principal(group));
  const auto fixed = transformation_groupoid(z2(), {{"1", "2", "3"}, {{0, 1, 2}, {1, 0, 2}}});
  EXPECT_FALSE(is_principal(fixed));
  EXPECT_FALSE(is_essentially_principal(fixed));
}

TEST(Bisections, UnitBisectionIsNeutral) {
  const auto g = pair_groupoid({"1", "2", "3"});
  const auto u = Bisection::units(g);
  for (const auto& t : all_bisections(g)) {
    EXPECT_EQ(bisection_product(g, u, t), t);
    EXPECT_EQ(bisection_product(g, t, u), t);
  }
}

TEST(Bisections, SingleArrowTimesInverse) {
  const auto g = pair_groupoid({"1", "2"});
  // (2,1) goes from 1 to 2.
  const auto s = Bisection::from_arrows(g, {*g.find_arrow("(2,1)")});
  const auto ss = bisection_product(g, s, bisection_inverse(g, s));
  ASSERT_EQ(ss.size(), 1u);
  EXPECT_EQ(ss.arrows().front(), g.unit_arrow(*g.find_unit("2")));
}

TEST(Bisections, InverseSemigroupLawsOnPairFour) {
  const auto g = pair_groupoid({"1", "2", "3", "4"});
  const auto all = all_bisections(g);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  for (int k = 0; k < 3000; ++k) {
    const auto& r = all[pick(rng)];
    const auto& s = all[pick(rng)];
    const auto& t = all[pick(rng)];
    ASSERT_EQ(bisection_product(g, bisection_product(g, r, s), t), bisection_product(g, r, bisection_product(g, s, t)));
    ASSERT_EQ(bisection_inverse(g, bisection_product(g, s, t)),
              bisection_product(g, bisection_inverse(g, t), bisection_inverse(g, s)));
    ASSERT_EQ(bisection_product(g, bisection_product(g, s, bisection_inverse(g, s)), s), s);
  }
}

TEST(Bisections, NonBisectionRejected) {
  const auto g = pair_groupoid({"1", "2"});
  EXPECT_FALSE(is_bisection(g, {*g.find_arrow("(1,1)"), *g.find_arrow("(1,2)")}));
  EXPECT_THROW(Bisection::from_arrows(g, {*g.find_arrow("(1,1)"), *g.find_arrow("(1,2)")}), Error);
}

TEST(CanonicalAction, UnitsActAsIdentity) {
  const auto g = pair_groupoid({"1", "2"});
  const auto a = canonical_action(g, Bisection::units(g));
  EXPECT_TRUE(a.is_identity_on_domain());
  EXPECT_EQ(a.size(), 2u);
}

TEST(CanonicalAction, SwapBisection) {
  const auto g = pair_groupoid({"1", "2"});
  const auto s = Bisection::from_arrows(g, {*g.find_arrow("(1,2)"), *g.find_arrow("(2,1)")});
  const auto a = canonical_action(g, s);
  EXPECT_EQ(a(0), std::optional<std::size_t>(1));
  EXPECT_EQ(a(1), std::optional<std::size_t>(0));
}

TEST(CanonicalAction, IsASemigroupHomomorphism) {
  for (const auto& [name, g] : testing::exhaustive_groupoids(6)) {
    const auto all = all_bisections(*g);
    for (const auto& s : all) {
      ASSERT_EQ(canonical_action(*g, bisection_inverse(*g, s)), canonical_action(*g, s).inverse()) << name;
      for (const auto& t : all) {
        ASSERT_EQ(canonical_action(*g, bisection_product(*g, s, t)),
                  canonical_action(*g, s).compose(canonical_action(*g, t)))
            << name;
      }
    }
  }
}

TEST(Effective, AgreesWithPrincipalityOnCorpus) {
  for (const auto& [name, g] : testing::full_corpus()) {
    EXPECT_EQ(is_effective(*g), is_essentially_principal(*g)) << name;
    EXPECT_EQ(is_principal(*g), is_essentially_principal(*g)) << name;
  }
  EXPECT_FALSE(is_effective(transformation_groupoid(z2(), {{"*"}, {{0}, {0}}})));
  EXPECT_TRUE(is_effective(pair_groupoid({"1", "2"})));
}

TEST(Constructors, PairHasSquareManyArrows) { EXPECT_EQ(pair_groupoid({"1", "2"}).arrow_count(), 4u); }

TEST(Constructors, SwapActionIsomorphicToPair) {
  const auto g = transformation_groupoid(z2(), {{"1", "2"}, {{0, 1}, {1, 0}}});
  const auto h = pair_groupoid({"1", "2"});
  const auto iso = find_isomorphism(g, h);
  ASSERT_EQ(iso.status, GroupoidIsomorphism::Status::found);
  EXPECT_TRUE(verify_isomorphism(g, h, iso));
}

TEST(Constructors, NonIsomorphicDetected) {
  const auto g = transformation_groupoid(z2(), {{"1", "2"}, {{0, 1}, {0, 1}}});
  const auto h = pair_groupoid({"1", "2"});
  EXPECT_EQ(find_isomorphism(g, h).status, GroupoidIsomorphism::Status::not_isomorphic);
}

TEST(Constructors, IsomorphismSearchReportsUndecidedAboveBound) {
  std::vector<std::string> points;
  for (int i = 0; i < 11; ++i) points.push_back("p" + std::to_string(i));
  const auto g = relation_groupoid(std::vector<std::vector<std::string>>{points});
  EXPECT_EQ(find_isomorphism(g, g).status, GroupoidIsomorphism::Status::undecided);
}

TEST(Constructors, GermOfRestrictedSwap) {
  const auto swap = PartialBijection::from_pairs({{0, 1}});
  const auto g = germ_groupoid_discrete({"1", "2"}, {swap});
  EXPECT_TRUE(is_principal(g));
  EXPECT_EQ(g.arrow_count(), 4u);
  EXPECT_TRUE(g.find_arrow("(2,1)").has_value());
  EXPECT_TRUE(g.find_arrow("(1,2)").has_value());
}

TEST(Constructors, GermGroupoidMatchesOrbitClosure) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 5;
    std::vector<std::string> points;
    for (std::size_t i = 0; i < n; ++i) points.push_back("q" + std::to_string(i));
    std::vector<PartialBijection> gens;
    for (int k = 0; k < 2; ++k) {
      std::vector<std::size_t> image(n);
      std::iota(image.begin(), image.end(), 0);
      std::shuffle(image.begin(), image.end(), rng);
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t x = 0; x < n; ++x) {
        if (std::bernoulli_distribution(0.4)(rng)) pairs.emplace_back(x, image[x]);
      }
      gens.push_back(PartialBijection::from_pairs(pairs));
    }
    const auto g = germ_groupoid_discrete(points, gens);
    ASSERT_TRUE(is_principal(g));
    const auto closure = testing::orbit_closure(n, gens);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        ASSERT_EQ(g.find_arrow("(" + points[x] + "," + points[y] + ")").has_value(), closure[x][y]);
      }
    }
  }
}

TEST(Constructors, MalformedInputsRejected) {
  EXPECT_THROW(transformation_groupoid({{"e", "s"}, {{0, 1}, {0, 1}}}, {{"*"}, {{0}, {0}}}), Error);
  EXPECT_THROW(transformation_groupoid(z2(), {{"1", "2"}, {{0, 0}, {1, 0}}}), Error);
  EXPECT_THROW(PartialBijection::from_pairs({{0, 1}, {2, 1}}), Error);
}

TEST(Corpus, EveryInstanceSatisfiesTheAxioms) {
  for (const auto& [name, g] : testing::full_corpus()) {
    EXPECT_EQ(testing::groupoid_axiom_failure(*g), "") << name;
  }
}

TEST(Corpus, ExhaustiveCorpusHasNoIsomorphicDuplicatesAmongSmallOnes) {
  const auto corpus = testing::exhaustive_groupoids(4);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (std::size_t j = i + 1; j < corpus.size(); ++j) {
      EXPECT_NE(find_isomorphism(*corpus[i].groupoid, *corpus[j].groupoid).status,
                GroupoidIsomorphism::Status::found)
          << corpus[i].name << " vs " << corpus[j].name;
    }
  }
}

TEST(PartialBijectionOps, ComposeAndInverse) {
  const auto f = PartialBijection::from_pairs({{0, 1}, {1, 2}});
  const auto g = PartialBijection::from_pairs({{1, 0}, {2, 2}});
  const auto gf = g.compose(f);  // g∘f
  EXPECT_EQ(gf(0), std::optional<std::size_t>(0));
  EXPECT_EQ(gf(1), std::optional<std::size_t>(2));
  EXPECT_EQ(f.inverse()(2), std::optional<std::size_t>(1));
  EXPECT_FALSE(f(5).has_value());
  EXPECT_EQ(f.restrict_to({1}).size(), 1u);
}

}  // namespace
}  // namespace cartan
