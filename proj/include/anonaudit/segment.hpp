#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "anonaudit/errors.hpp"
#include "anonaudit/hierarchy.hpp"
#include "anonaudit/lattice.hpp"

namespace anonaudit {

/// One hierarchy node per attribute. Layers are always >= 1 here: a segment is
/// a cell (or block of cells) of the grid, never a raw value.
struct SegmentNode {
  int layer = 1;
  Value rank = 0;

  friend bool operator==(const SegmentNode&, const SegmentNode&) = default;
  friend auto operator<=>(const SegmentNode&, const SegmentNode&) = default;
};

struct Segment {
  std::vector<SegmentNode> nodes;

  friend bool operator==(const Segment&, const Segment&) = default;
  friend auto operator<=>(const Segment&, const Segment&) = default;
};

/// The product of all leaf partitions: lambda basic cells indexed 1..lambda,
/// numbered from the all-rank-0 corner, first axis fastest.
class SegmentGrid {
 public:
  explicit SegmentGrid(Hierarchies hierarchies)
      : hierarchies_(std::move(hierarchies)) {
    strides_.reserve(hierarchies_.size());
    Value stride = 1;
    for (const auto& h : hierarchies_) {
      strides_.push_back(stride);
      stride *= h.leaf_count();
    }
    lambda_ = stride;
  }

  const Hierarchies& hierarchies() const { return hierarchies_; }
  std::size_t dims() const { return hierarchies_.size(); }
  Value lambda() const { return lambda_; }

  /// 1-based basic segment index from per-axis leaf ranks.
  Value basic_index(const std::vector<Value>& leaf_ranks) const {
    Value idx = 1;
    for (std::size_t d = 0; d < leaf_ranks.size(); ++d) {
      idx += leaf_ranks[d] * strides_[d];
    }
    return idx;
  }

  std::vector<Value> leaf_ranks_of(Value basic_idx) const {
    std::vector<Value> ranks(dims());
    Value rem = basic_idx - 1;
    for (std::size_t d = 0; d < dims(); ++d) {
      ranks[d] = rem % hierarchies_[d].leaf_count();
      rem /= hierarchies_[d].leaf_count();
    }
    return ranks;
  }

  Segment basic_segment(Value basic_idx) const {
    const auto ranks = leaf_ranks_of(basic_idx);
    Segment s;
    s.nodes.reserve(dims());
    for (Value r : ranks) s.nodes.push_back(SegmentNode{1, r});
    return s;
  }

  /// Basic index of the cell holding a raw record.
  Value leaf_index_of(const std::vector<Value>& record) const {
    std::vector<Value> ranks(dims());
    for (std::size_t d = 0; d < dims(); ++d) {
      ranks[d] = hierarchies_[d].leaf_rank_of(record[d]);
    }
    return basic_index(ranks);
  }

  void check(const Segment& s) const {
    if (s.nodes.size() != dims()) {
      throw GridMismatch("segment has " + std::to_string(s.nodes.size()) +
                         " axes, grid has " + std::to_string(dims()));
    }
    for (std::size_t d = 0; d < dims(); ++d) {
      const auto& h = hierarchies_[d];
      const auto& n = s.nodes[d];
      if (n.layer < 1 || n.layer > h.height() || n.rank < 0 ||
          n.rank >= h.nodes_at(n.layer)) {
        throw GridMismatch("node (layer " + std::to_string(n.layer) +
                           ", rank " + std::to_string(n.rank) +
                           ") is not in hierarchy '" + h.name() + "'");
      }
    }
  }

  bool is_basic(const Segment& s) const {
    check(s);
    for (const auto& n : s.nodes) {
      if (n.layer != 1) return false;
    }
    return true;
  }

  std::vector<IntervalI> intervals_of(const Segment& s) const {
    check(s);
    std::vector<IntervalI> out;
    out.reserve(dims());
    for (std::size_t d = 0; d < dims(); ++d) {
      out.push_back(hierarchies_[d].node(s.nodes[d].layer, s.nodes[d].rank));
    }
    return out;
  }

  Segment top_segment() const {
    Segment s;
    s.nodes.reserve(dims());
    for (const auto& h : hierarchies_) s.nodes.push_back(SegmentNode{h.height(), 0});
    return s;
  }

  friend bool operator==(const SegmentGrid& a, const SegmentGrid& b) {
    return a.hierarchies_ == b.hierarchies_;
  }

 private:
  Hierarchies hierarchies_;
  std::vector<Value> strides_;
  Value lambda_ = 1;
};

/// Descendant-or-equal test inside one binary tree: (la, ra) below (lb, rb)
/// iff la <= lb and ra lands in rb's subtree.
inline bool node_below(const SegmentNode& a, const SegmentNode& b) {
  return a.layer <= b.layer && (a.rank >> (b.layer - a.layer)) == b.rank;
}

/// True iff `inner` is contained in `outer`: per attribute the inner node is a
/// descendant of (or equal to) the outer node.
inline bool contains(const SegmentGrid& grid, const Segment& outer,
                     const Segment& inner) {
  grid.check(outer);
  grid.check(inner);
  for (std::size_t d = 0; d < grid.dims(); ++d) {
    if (!node_below(inner.nodes[d], outer.nodes[d])) return false;
  }
  return true;
}

/// Indices of all basic cells covered by `seg`, ascending.
inline std::vector<Value> basic_segments_of(const SegmentGrid& grid,
                                            const Segment& seg) {
  grid.check(seg);
  std::vector<Value> out;
  std::vector<Value> lo(grid.dims()), count(grid.dims());
  std::size_t total = 1;
  for (std::size_t d = 0; d < grid.dims(); ++d) {
    const auto& n = seg.nodes[d];
    count[d] = Value{1} << (n.layer - 1);
    lo[d] = n.rank * count[d];
    total *= static_cast<std::size_t>(count[d]);
  }
  out.reserve(total);
  std::vector<Value> ranks(grid.dims());
  // odometer over the covered leaf ranges, first axis fastest
  std::vector<Value> offset(grid.dims(), 0);
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t d = 0; d < grid.dims(); ++d) ranks[d] = lo[d] + offset[d];
    out.push_back(grid.basic_index(ranks));
    for (std::size_t d = 0; d < grid.dims(); ++d) {
      if (++offset[d] < count[d]) break;
      offset[d] = 0;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// The half-segments of a compound segment: per axis at layer >= 2, the two
/// segments with that node swapped for one of its children. Leaf axes have no
/// children and contribute nothing.
inline std::vector<Segment> half_segments(const SegmentGrid& grid,
                                          const Segment& seg) {
  if (grid.is_basic(seg)) {
    throw NotCompound("basic segments have no half-segments");
  }
  std::vector<Segment> halves;
  for (std::size_t d = 0; d < grid.dims(); ++d) {
    const auto& n = seg.nodes[d];
    if (n.layer < 2) continue;
    for (Value child = 0; child < 2; ++child) {
      Segment h = seg;
      h.nodes[d] = SegmentNode{n.layer - 1, 2 * n.rank + child};
      halves.push_back(std::move(h));
    }
  }
  return halves;
}

/// Every segment contained in `seg`, itself included: the cartesian product of
/// per-axis descendant-or-equal nodes.
inline std::vector<Segment> enumerate_subsegments(const SegmentGrid& grid,
                                                  const Segment& seg) {
  grid.check(seg);
  std::vector<std::vector<SegmentNode>> choices(grid.dims());
  for (std::size_t d = 0; d < grid.dims(); ++d) {
    const auto& n = seg.nodes[d];
    for (int layer = n.layer; layer >= 1; --layer) {
      const Value span = Value{1} << (n.layer - layer);
      for (Value r = n.rank * span; r < (n.rank + 1) * span; ++r) {
        choices[d].push_back(SegmentNode{layer, r});
      }
    }
  }
  std::size_t total = 1;
  for (const auto& c : choices) total *= c.size();
  std::vector<Segment> out;
  out.reserve(total);
  std::vector<std::size_t> pick(grid.dims(), 0);
  for (std::size_t i = 0; i < total; ++i) {
    Segment s;
    s.nodes.reserve(grid.dims());
    for (std::size_t d = 0; d < grid.dims(); ++d) {
      s.nodes.push_back(choices[d][pick[d]]);
    }
    out.push_back(std::move(s));
    for (std::size_t d = 0; d < grid.dims(); ++d) {
      if (++pick[d] < choices[d].size()) break;
      pick[d] = 0;
    }
  }
  return out;
}

/// Apply a state to a raw record: attribute i maps to the unique node at
/// layer state[i] containing the value (layer 0 keeps the exact value).
inline std::vector<IntervalI> generalize_record(const std::vector<Value>& record,
                                                const GeneralizationState& state,
                                                const Hierarchies& hs) {
  std::vector<IntervalI> out;
  out.reserve(hs.size());
  for (std::size_t d = 0; d < hs.size(); ++d) {
    out.push_back(hs[d].generalize(state.layers[d], record[d]));
  }
  return out;
}

/// Segment of a record under a state with all layers >= 1.
inline Segment segment_of_record(const SegmentGrid& grid,
                                 const std::vector<Value>& record,
                                 const GeneralizationState& state) {
  Segment s;
  s.nodes.reserve(grid.dims());
  for (std::size_t d = 0; d < grid.dims(); ++d) {
    const int layer = state.layers[d];
    s.nodes.push_back(
        SegmentNode{layer, grid.hierarchies()[d].rank_of(layer, record[d])});
  }
  return s;
}

}  // namespace anonaudit
