#pragma once

// Groupoid corpora shared by the unit tests and the acceptance runner.
//
// Every finite groupoid is a disjoint union of connected ones, and a
// connected groupoid is isomorphic to (pair groupoid on n points) x H for
// its isotropy group H. Enumerating multisets of such components therefore
// lists every groupoid with a given number of arrows up to isomorphism.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cartan/groupoid.hpp"

namespace cartan::testing {

struct NamedGroupoid {
  std::string name;
  std::shared_ptr<const FiniteGroupoid> groupoid;
};

/// The 14 groups of order at most 8, named by structure.
struct NamedGroup {
  std::string name;
  GroupTable table;
};
const std::vector<NamedGroup>& small_groups();

/// pair(n) x H with arrows "<prefix>i.h.j" from unit j to unit i.
GroupoidData connected_component(std::size_t n, const GroupTable& group, const std::string& prefix);

/// Concatenation of documents with disjoint ids.
GroupoidData disjoint_union(const std::vector<GroupoidData>& parts);

/// Replaces every id by a random one so that lexicographic order is
/// unrelated to the construction.
GroupoidData relabel(const GroupoidData& d, std::uint64_t seed);

/// Every groupoid with at most `max_arrows` arrows, once per isomorphism
/// class.
std::vector<NamedGroupoid> exhaustive_groupoids(std::size_t max_arrows = 8);

/// `count` random groupoids with more than 8 arrows: disjoint unions of
/// connected components and transformation groupoids of random actions,
/// relabelled.
std::vector<NamedGroupoid> random_groupoids(std::size_t count = 50, std::uint64_t seed = 20240611);

/// Named transformation, group-bundle and pair groupoids, with and without
/// fixed points.
std::vector<NamedGroupoid> named_groupoids();

/// exhaustive + random + named.
std::vector<NamedGroupoid> full_corpus();

/// Principal groupoids with at most `max_units` units: one full relation
/// per partition of the unit set, up to isomorphism.
std::vector<NamedGroupoid> principal_groupoids(std::size_t max_units = 6);

}  // namespace cartan::testing
