#include <algorithm>

#include "doctest.h"
#include "fincov/cover.hpp"
#include "oracles.hpp"

using namespace fincov;

namespace {

Cover c3(std::vector<PointSet> e) { return Cover::of(3, std::move(e)); }

// Tries every ordering of the blocks.
bool left_open_by_permutation(const FiniteSpace& s, std::vector<PointSet> blocks) {
  std::sort(blocks.begin(), blocks.end());
  do {
    PointSet prefix;
    bool ok = true;
    for (PointSet b : blocks) {
      prefix |= b;
      ok = ok && s.is_open(prefix);
    }
    if (ok) return true;
  } while (std::next_permutation(blocks.begin(), blocks.end()));
  return false;
}

// All partitions of {0..n-1} into blocks.
std::vector<std::vector<PointSet>> partitions(int n) {
  std::vector<std::vector<PointSet>> out;
  std::vector<PointSet> cur;
  auto rec = [&](auto&& self, int x) -> void {
    if (x == n) {
      out.push_back(cur);
      return;
    }
    for (std::size_t k = 0; k < cur.size(); ++k) {
      cur[k] |= PointSet::singleton(x);
      self(self, x + 1);
      cur[k] -= PointSet::singleton(x);
    }
    cur.push_back(PointSet::singleton(x));
    self(self, x + 1);
    cur.pop_back();
  };
  rec(rec, 0);
  return out;
}

}  // namespace

TEST_CASE("refinement examples") {
  CHECK(refines(c3({{0}, {1}, {2}}), c3({{0, 1}, {2}})));
  CHECK_FALSE(refines(c3({{0, 1}, {1, 2}}), c3({{0}, {1}, {2}})));
  const Cover u = c3({{0, 1}, {1, 2}});
  CHECK(refines(u, u));
  CHECK_THROWS_AS(refines(u, Cover::of(2, {{0, 1}})), MismatchedCarrier);
  CHECK_THROWS_AS(Cover::of(3, {{0, 1}}), PreconditionFailed);
  CHECK(Cover::of(2, {PointSet{}, {0, 1}}).size() == 1);
}

TEST_CASE("meet, restriction and directed covers") {
  const Cover a = c3({{0, 1}, {1, 2}});
  CHECK(meet(a, a) == c3({{0, 1}, {1}, {1, 2}}));
  const Cover r = restrict_to(a, PointSet{1});
  CHECK(r.over() == PointSet{1});
  CHECK(r.elements() == std::vector<PointSet>{PointSet{1}});
  CHECK(directed(Cover::of(2, {{0}, {1}})).contains(PointSet{0, 1}));
  CHECK_THROWS_AS(meet(a, Cover::of(2, {{0, 1}})), MismatchedCarrier);
}

TEST_CASE("stars and star refinement") {
  const Cover a = c3({{0, 1}, {1, 2}});
  CHECK(star(PointSet{0}, a) == PointSet{0, 1});
  CHECK(star(PointSet{}, a) == PointSet{});
  CHECK(star(PointSet{1}, a) == PointSet{0, 1, 2});
  const Cover d = Cover::of(2, {{0}, {1}});
  CHECK(star_refines(d, d));
  CHECK(star_refines(a, c3({{0, 1, 2}})));
  CHECK_FALSE(star_refines(a, a));
  CHECK(double_star_refines(d, d));
  CHECK_FALSE(double_star_refines(a, a));
}

TEST_CASE("double star refinement matches search over every intermediate cover") {
  const auto covers = oracle::all_reduced_covers(3);
  for (const auto& u : covers) {
    for (const auto& v : covers) {
      bool found = false;
      for (const auto& w : covers) found = found || (star_refines(u, w) && star_refines(w, v));
      CHECK(double_star_refines(u, v) == found);
    }
  }
}

TEST_CASE("refinement is a preorder; meet is the greatest lower bound; star refinement implies refinement") {
  const auto covers = oracle::all_reduced_covers(3);
  for (const auto& u : covers) {
    CHECK(refines(u, u));
    for (const auto& v : covers) {
      const Cover m = meet(u, v);
      CHECK(refines(m, u));
      CHECK(refines(m, v));
      if (star_refines(u, v)) CHECK(refines(u, v));
      for (const auto& w : covers) {
        if (refines(u, v) && refines(v, w)) CHECK(refines(u, w));
        if (refines(w, u) && refines(w, v)) CHECK(refines(w, m));
      }
      for_each_subset(PointSet::full(3), [&](PointSet a) {
        CHECK(reduced(restrict_to(m, a)) == reduced(meet(restrict_to(u, a), restrict_to(v, a))));
      });
    }
    const Cover d = directed(u);
    CHECK(refines(u, d));
    for (PointSet a : d.elements()) {
      for (PointSet b : d.elements()) CHECK(d.contains(a | b));
    }
  }
}

TEST_CASE("normal covers") {
  const Cover singletons = Cover::of(2, {{0}, {1}});
  CHECK(is_normal_cover(discrete_space(2), singletons).normal);
  CHECK(is_normal_cover(sierpinski(), Cover::of(2, {{0, 1}})).normal);
  const auto r = is_normal_cover(sierpinski(), Cover::of(2, {{1}, {0, 1}}));
  CHECK(r.normal);
  REQUIRE_FALSE(r.chain.empty());
  CHECK(refines(r.chain.front(), Cover::of(2, {{1}, {0, 1}})));
  // Connected space: only covers containing the whole carrier are normal.
  const FiniteSpace chain3 = FiniteSpace::from_opens(3, {PointSet{}, {2}, {1, 2}, {0, 1, 2}});
  CHECK_FALSE(is_normal_cover(chain3, c3({{2}, {1, 2}, {0, 1}})).normal == true);
}

TEST_CASE("fixed-point normality agrees with the component criterion on all spaces up to 4 points") {
  for (int n = 1; n <= 4; ++n) {
    for (const auto& s : all_topologies(n)) {
      for (const auto& v : reduced_open_covers(s)) {
        const auto gfp = normal_cover_fixed_point(s, v);
        const auto comp = normal_cover_by_components(s, v);
        REQUIRE(gfp.normal == comp.normal);
        if (gfp.normal) {
          CHECK(refines(gfp.chain.front(), v));
          for (std::size_t k = 0; k + 1 < gfp.chain.size(); ++k) {
            CHECK(star_refines(gfp.chain[k + 1], gfp.chain[k]));
          }
          // The chain closes into a cycle.
          bool closes = false;
          for (const auto& w : gfp.chain) closes = closes || star_refines(w, gfp.chain.back());
          CHECK(closes);
        }
      }
    }
  }
}

TEST_CASE("exhaustive covers") {
  for (int n = 1; n <= 4; ++n) {
    for (const auto& s : all_topologies(n)) CHECK(is_exhaustive(s, minimal_neighbourhood_cover(s)));
  }
  const auto d = discrete_space(3);
  CHECK(is_exhaustive(d, Cover::of(3, {{0, 1, 2}})));
  CHECK(is_exhaustive(sierpinski(), Cover::of(2, {{0, 1}})));
  const FiniteSpace chain3 = FiniteSpace::from_opens(3, {PointSet{}, {2}, {1, 2}, {0, 1, 2}});
  CHECK(is_exhaustive(chain3, c3({{0, 1, 2}})));
  // In the indiscrete space the trace on a two-point set of a singleton is not relatively open.
  CHECK_FALSE(is_exhaustive(indiscrete_space(2), Cover::of(2, {{0}, {1}})));
}

TEST_CASE("left-open partitions") {
  const FiniteSpace s = sierpinski();
  auto order = left_open_ordering(s, Cover::of(2, {{1}, {0}}));
  REQUIRE(order);
  CHECK(*order == std::vector<PointSet>{PointSet{1}, PointSet{0}});
  CHECK(left_open_ordering(discrete_space(3), c3({{0}, {2}, {1}})));
  CHECK_FALSE(left_open_ordering(indiscrete_space(2), Cover::of(2, {{0}, {1}})));
  CHECK_THROWS_AS(left_open_ordering(s, Cover::of(2, {{0, 1}, {1}})), NotAPartition);
}

TEST_CASE("greedy left-open ordering agrees with permutation search up to 4 points") {
  for (int n = 1; n <= 4; ++n) {
    const auto parts = partitions(n);
    for (const auto& s : all_topologies(n)) {
      for (const auto& p : parts) {
        const bool greedy = left_open_ordering(s, Cover::of(n, p)).has_value();
        CHECK(greedy == left_open_by_permutation(s, p));
      }
    }
  }
}

TEST_CASE("complete sequences on finite spaces") {
  CHECK(is_complete_sequence(sierpinski(), {Cover::of(2, {{0, 1}})}));
  CHECK(is_complete_sequence(discrete_space(2), {Cover::of(2, {{0}, {1}})}));
  for (int n = 1; n <= 4; ++n) {
    for (const auto& s : all_topologies(n)) {
      const Cover m = minimal_neighbourhood_cover(s);
      CHECK(is_complete_sequence(s, {m, Cover::of(n, {PointSet::full(n)}), m}));
    }
  }
  CHECK_THROWS_AS(is_complete_sequence(sierpinski(), {}), EmptyInput);
}
