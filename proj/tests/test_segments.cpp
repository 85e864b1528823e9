#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "anonaudit/segment.hpp"
#include "fixtures.hpp"

using namespace anonaudit;
using fixtures::seg;

namespace {

Segment random_segment(const SegmentGrid& grid, std::mt19937_64& rng) {
  Segment s;
  for (const auto& h : grid.hierarchies()) {
    const int layer = 1 + int(rng() % h.height());
    const Value rank = Value(rng() % std::uint64_t(h.nodes_at(layer)));
    s.nodes.push_back(SegmentNode{layer, rank});
  }
  return s;
}

}  // namespace

TEST_CASE("grid indexing starts at the all-rank-0 corner, first axis fastest") {
  const SegmentGrid grid(fixtures::two_h8());
  REQUIRE(grid.lambda() == 16);
  CHECK(grid.basic_index({0, 0}) == 1);
  CHECK(grid.basic_index({3, 0}) == 4);
  CHECK(grid.basic_index({0, 1}) == 5);
  CHECK(grid.leaf_ranks_of(16) == std::vector<Value>{3, 3});
}

TEST_CASE("contains follows per-axis tree descent") {
  const SegmentGrid grid(fixtures::two_h8());
  const Segment outer = seg({{2, 0}, {2, 0}});  // [1,4] x [1,4]
  CHECK(contains(grid, outer, seg({{1, 0}, {1, 1}})));   // [1,2] x [3,4]
  CHECK(contains(grid, outer, outer));
  CHECK_FALSE(contains(grid, outer, seg({{1, 0}, {1, 2}})));  // [1,2] x [5,6]
  CHECK_THROWS_AS(contains(grid, outer, seg({{4, 0}, {1, 0}})), GridMismatch);
}

TEST_CASE("basic_segments_of expands a segment into leaf indices") {
  const SegmentGrid grid(fixtures::two_h8());
  CHECK(basic_segments_of(grid, seg({{2, 0}, {2, 0}})) ==
        std::vector<Value>{1, 2, 5, 6});
  CHECK(basic_segments_of(grid, seg({{2, 1}, {2, 1}})) ==
        std::vector<Value>{11, 12, 15, 16});
  CHECK(basic_segments_of(grid, seg({{1, 3}, {1, 0}})) ==
        std::vector<Value>{4});
}

TEST_CASE("the top segment covers the whole grid exactly once") {
  for (auto hs : {fixtures::two_h8(),
                  Hierarchies{build_hierarchy("a", 0, 15, 4),
                              build_hierarchy("b", 1, 6, 2),
                              build_hierarchy("c", 1, 5, 1)}}) {
    const SegmentGrid grid(hs);
    const auto leaves = basic_segments_of(grid, grid.top_segment());
    REQUIRE(Value(leaves.size()) == grid.lambda());
    for (Value i = 1; i <= grid.lambda(); ++i) {
      REQUIRE(leaves[std::size_t(i - 1)] == i);
    }
  }
}

TEST_CASE("half_segments swaps one axis node for each child") {
  const SegmentGrid grid(fixtures::two_h8());

  SECTION("both axes split at layer 2") {
    const auto halves = half_segments(grid, seg({{2, 0}, {2, 0}}));
    const std::set<Segment> got(halves.begin(), halves.end());
    const std::set<Segment> want{
        seg({{1, 0}, {2, 0}}), seg({{1, 1}, {2, 0}}),
        seg({{2, 0}, {1, 0}}), seg({{2, 0}, {1, 1}})};
    CHECK(got == want);
  }

  SECTION("a (3,2) segment yields two halves per axis") {
    const auto halves = half_segments(grid, seg({{3, 0}, {2, 0}}));
    const std::set<Segment> got(halves.begin(), halves.end());
    const std::set<Segment> want{
        seg({{2, 0}, {2, 0}}), seg({{2, 1}, {2, 0}}),
        seg({{3, 0}, {1, 0}}), seg({{3, 0}, {1, 1}})};
    CHECK(got == want);
  }

  SECTION("leaf axes contribute no halves") {
    const auto halves = half_segments(grid, seg({{2, 0}, {1, 0}}));
    REQUIRE(halves.size() == 2);
    const std::set<Segment> got(halves.begin(), halves.end());
    const std::set<Segment> want{seg({{1, 0}, {1, 0}}), seg({{1, 1}, {1, 0}})};
    CHECK(got == want);
  }

  SECTION("basic segments have none") {
    CHECK_THROWS_AS(half_segments(grid, seg({{1, 0}, {1, 0}})), NotCompound);
  }
}

TEST_CASE("enumerate_subsegments is the product of per-axis descendants") {
  const SegmentGrid grid(fixtures::two_h8());
  CHECK(enumerate_subsegments(grid, seg({{2, 0}, {2, 0}})).size() == 9);
  CHECK(enumerate_subsegments(grid, seg({{3, 0}, {1, 0}})).size() == 7);

  const auto self = enumerate_subsegments(grid, seg({{1, 0}, {1, 0}}));
  REQUIRE(self.size() == 1);
  CHECK(self.front() == seg({{1, 0}, {1, 0}}));
}

TEST_CASE("containment is a partial order on random segments") {
  const SegmentGrid grid(fixtures::two_h8());
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const Segment a = random_segment(grid, rng);
    const Segment b = random_segment(grid, rng);
    const Segment c = random_segment(grid, rng);
    CHECK(contains(grid, a, a));
    if (contains(grid, a, b) && contains(grid, b, a)) CHECK(a == b);
    if (contains(grid, a, b) && contains(grid, b, c)) {
      CHECK(contains(grid, a, c));
    }
  }
}

TEST_CASE("each half is contained and the two halves of an axis tile it") {
  const SegmentGrid grid(fixtures::two_h8());
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Segment s = random_segment(grid, rng);
    if (grid.is_basic(s)) continue;
    const auto halves = half_segments(grid, s);
    const auto all = basic_segments_of(grid, s);
    for (const auto& h : halves) CHECK(contains(grid, s, h));
    // consecutive pairs belong to one axis; their leaf sets partition s
    for (std::size_t p = 0; p + 1 < halves.size(); p += 2) {
      auto left = basic_segments_of(grid, halves[p]);
      const auto right = basic_segments_of(grid, halves[p + 1]);
      left.insert(left.end(), right.begin(), right.end());
      std::sort(left.begin(), left.end());
      CHECK(left == all);
    }
  }
}

TEST_CASE("generalize_record maps records onto containing nodes") {
  const auto hs = fixtures::two_h8();
  using IV = std::vector<IntervalI>;
  CHECK(generalize_record({3, 4}, GeneralizationState{{2, 2}}, hs) ==
        IV{{1, 4}, {1, 4}});
  CHECK(generalize_record({3, 4}, GeneralizationState{{0, 0}}, hs) ==
        IV{{3, 3}, {4, 4}});
  CHECK(generalize_record({3, 4}, GeneralizationState{{3, 3}}, hs) ==
        IV{{1, 8}, {1, 8}});
  CHECK_THROWS_AS(generalize_record({9, 1}, GeneralizationState{{1, 1}}, hs),
                  OutOfDomain);
}
