#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anonaudit/errors.hpp"
#include "anonaudit/interval.hpp"

namespace anonaudit {

/// A binary tree of nested equal-length intervals over an integer attribute
/// domain. Layer 1 holds the leaves, layer `height` the single root interval
/// covering the whole domain (note the inverted layer convention: coarser is
/// higher). Node (layer, rank) is the union of its children
/// (layer-1, 2*rank) and (layer-1, 2*rank+1).
///
/// Immutable after construction; nodes are computed from (layer, rank) rather
/// than materialized.
class GeneralizationHierarchy {
 public:
  GeneralizationHierarchy(std::string name, IntervalI domain, int height)
      : name_(std::move(name)), domain_(domain), height_(height) {
    if (height < 1) {
      throw InvalidHeight("hierarchy height must be >= 1, got " +
                          std::to_string(height));
    }
    if (domain.lo > domain.hi) {
      throw DataError("empty domain " + to_string(domain) + " for attribute '" +
                      name_ + "'");
    }
    leaf_count_ = Value{1} << (height - 1);
    const Value len = domain.length();
    if (len % leaf_count_ != 0) {
      throw NonDivisibleDomain("domain length " + std::to_string(len) +
                               " of attribute '" + name_ +
                               "' is not divisible by " +
                               std::to_string(leaf_count_) + " leaves");
    }
    leaf_width_ = len / leaf_count_;
  }

  const std::string& name() const { return name_; }
  const IntervalI& domain() const { return domain_; }
  int height() const { return height_; }
  Value leaf_count() const { return leaf_count_; }
  Value leaf_width() const { return leaf_width_; }

  /// Number of nodes at a layer in [1, height].
  Value nodes_at(int layer) const {
    check_layer(layer);
    return Value{1} << (height_ - layer);
  }

  /// Interval covered by node (layer, rank), layer in [1, height].
  IntervalI node(int layer, Value rank) const {
    check_layer(layer);
    const Value width = leaf_width_ << (layer - 1);
    if (rank < 0 || rank >= nodes_at(layer)) {
      throw GridMismatch("rank " + std::to_string(rank) +
                         " out of range at layer " + std::to_string(layer) +
                         " of '" + name_ + "'");
    }
    const Value lo = domain_.lo + rank * width;
    return IntervalI{lo, lo + width - 1};
  }

  /// All nodes of one layer, left to right.
  std::vector<IntervalI> layer_nodes(int layer) const {
    std::vector<IntervalI> out;
    const Value count = nodes_at(layer);
    out.reserve(static_cast<std::size_t>(count));
    for (Value r = 0; r < count; ++r) out.push_back(node(layer, r));
    return out;
  }

  /// Rank of the node containing `v` at `layer`.
  Value rank_of(int layer, Value v) const {
    check_layer(layer);
    if (!domain_.contains(v)) {
      throw OutOfDomain("value " + std::to_string(v) + " outside domain " +
                        to_string(domain_) + " of '" + name_ + "'");
    }
    const Value width = leaf_width_ << (layer - 1);
    return (v - domain_.lo) / width;
  }

  Value leaf_rank_of(Value v) const { return rank_of(1, v); }

  /// Interval a value generalizes to at `layer`; layer 0 is the identity.
  IntervalI generalize(int layer, Value v) const {
    if (layer == 0) {
      if (!domain_.contains(v)) {
        throw OutOfDomain("value " + std::to_string(v) + " outside domain " +
                          to_string(domain_) + " of '" + name_ + "'");
      }
      return IntervalI{v, v};
    }
    return node(layer, rank_of(layer, v));
  }

  /// Locate an interval as an exact node, or return false.
  bool find_node(const IntervalI& iv, int& layer, Value& rank) const {
    for (int l = 1; l <= height_; ++l) {
      const Value width = leaf_width_ << (l - 1);
      if (iv.length() != width) continue;
      if ((iv.lo - domain_.lo) % width != 0) return false;
      layer = l;
      rank = (iv.lo - domain_.lo) / width;
      return true;
    }
    return false;
  }

  friend bool operator==(const GeneralizationHierarchy& a,
                         const GeneralizationHierarchy& b) {
    return a.name_ == b.name_ && a.domain_ == b.domain_ &&
           a.height_ == b.height_;
  }

 private:
  void check_layer(int layer) const {
    if (layer < 1 || layer > height_) {
      throw InvalidLayer("layer " + std::to_string(layer) +
                         " outside [1," + std::to_string(height_) + "]");
    }
  }

  std::string name_;
  IntervalI domain_;
  int height_;
  Value leaf_count_ = 1;
  Value leaf_width_ = 1;
};

inline GeneralizationHierarchy build_hierarchy(std::string name, Value lo,
                                               Value hi, int height) {
  return GeneralizationHierarchy(std::move(name), IntervalI{lo, hi}, height);
}

using Hierarchies = std::vector<GeneralizationHierarchy>;

}  // namespace anonaudit
