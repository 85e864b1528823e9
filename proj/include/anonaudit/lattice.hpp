#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "anonaudit/hierarchy.hpp"

namespace anonaudit {

/// Per-attribute generalization layers. Layer 0 means "keep the raw value",
/// layer h_i the full domain.
struct GeneralizationState {
  std::vector<int> layers;

  int layer_sum() const {
    return std::accumulate(layers.begin(), layers.end(), 0);
  }

  friend bool operator==(const GeneralizationState&,
                         const GeneralizationState&) = default;
};

inline bool valid_state(const GeneralizationState& g, const Hierarchies& hs) {
  if (g.layers.size() != hs.size()) return false;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (g.layers[i] < 0 || g.layers[i] > hs[i].height()) return false;
  }
  return true;
}

inline GeneralizationState bottom_state(const Hierarchies& hs) {
  return GeneralizationState{std::vector<int>(hs.size(), 0)};
}

inline GeneralizationState top_state(const Hierarchies& hs) {
  GeneralizationState g;
  g.layers.reserve(hs.size());
  for (const auto& h : hs) g.layers.push_back(h.height());
  return g;
}

/// Every generalization state, enumerated in a fixed total order: ascending
/// total layer sum, then lexicographic on the layer vector. The search in the
/// anonymizer resolves residual ties to the first state in this order, so the
/// order is part of the observable behaviour and must stay stable.
class GeneralizationLattice {
 public:
  explicit GeneralizationLattice(Hierarchies hs) : hierarchies_(std::move(hs)) {
    std::vector<int> current(hierarchies_.size(), 0);
    emit_all(hierarchies_, 0, current);
    std::sort(states_.begin(), states_.end(),
              [](const GeneralizationState& a, const GeneralizationState& b) {
                const int sa = a.layer_sum(), sb = b.layer_sum();
                if (sa != sb) return sa < sb;
                return a.layers < b.layers;
              });
  }

  const Hierarchies& hierarchies() const { return hierarchies_; }
  const std::vector<GeneralizationState>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }

  std::size_t index_of(const GeneralizationState& g) const {
    for (std::size_t i = 0; i < states_.size(); ++i) {
      if (states_[i] == g) return i;
    }
    return states_.size();
  }

 private:
  void emit_all(const Hierarchies& hs, std::size_t attr,
                std::vector<int>& current) {
    if (attr == hs.size()) {
      states_.push_back(GeneralizationState{current});
      return;
    }
    for (int l = 0; l <= hs[attr].height(); ++l) {
      current[attr] = l;
      emit_all(hs, attr + 1, current);
    }
  }

  Hierarchies hierarchies_;
  std::vector<GeneralizationState> states_;
};

}  // namespace anonaudit
