#pragma once

#include <vector>

#include "anonaudit/anonymizer.hpp"
#include "anonaudit/dataset.hpp"
#include "anonaudit/hierarchy.hpp"
#include "anonaudit/segment.hpp"

namespace fixtures {

/// Two identical height-3 hierarchies over [1,8]: leaves [1,2].. [7,8].
inline anonaudit::Hierarchies two_h8() {
  return {anonaudit::build_hierarchy("Q1", 1, 8, 3),
          anonaudit::build_hierarchy("Q2", 1, 8, 3)};
}

/// Six records that recode into exactly two classes at state (2,2) for k=3.
inline anonaudit::Dataset d6() {
  return anonaudit::Dataset::from_records(
      {"Q1", "Q2"}, {{1, 1}, {2, 2}, {3, 4}, {5, 5}, {6, 7}, {8, 8}});
}

/// d6 plus one record that no class can absorb: it becomes the lone outlier.
inline anonaudit::Dataset d7() {
  return anonaudit::Dataset::from_records(
      {"Q1", "Q2"}, {{1, 1}, {2, 2}, {3, 4}, {5, 5}, {6, 7}, {8, 8}, {4, 6}});
}

inline anonaudit::Segment seg(std::vector<anonaudit::SegmentNode> nodes) {
  return anonaudit::Segment{std::move(nodes)};
}

}  // namespace fixtures
