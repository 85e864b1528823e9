#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "anonaudit/dataset.hpp"
#include "anonaudit/errors.hpp"
#include "anonaudit/loss.hpp"
#include "anonaudit/segment.hpp"

namespace anonaudit {

/// A maximal group of records that are identical after generalization.
/// `criteria` is only populated on the publishing side; reconstructing a
/// release leaves it empty (c3 is not computable from the release alone).
struct EquivalenceClass {
  Segment segment;
  GeneralizationState state;
  std::vector<std::size_t> member_ids;  // original row ids
  int formation_iteration = -1;
  LossValue loss;
  std::optional<CriteriaTuple> criteria;

  std::size_t size() const { return member_ids.size(); }
};

struct AnonymizedDataset {
  std::vector<EquivalenceClass> classes;  // in formation order when recoded here
  std::vector<std::size_t> outlier_ids;
  int k = 0;
  Hierarchies hierarchies;
};

namespace detail {

/// Group record positions by their generalized tuple under `state`.
/// The grouping key uses per-axis node ranks (or the raw value at layer 0),
/// which identifies the generalized tuple exactly.
inline std::map<std::vector<Value>, std::vector<std::size_t>> group_by_state(
    const Dataset& data, const GeneralizationState& state,
    const Hierarchies& hs) {
  std::map<std::vector<Value>, std::vector<std::size_t>> groups;
  std::vector<Value> key(hs.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t d = 0; d < hs.size(); ++d) {
      const int layer = state.layers[d];
      key[d] = layer == 0 ? data.records[i][d]
                          : hs[d].rank_of(layer, data.records[i][d]);
    }
    groups[key].push_back(i);
  }
  return groups;
}

inline bool forms_k_anonymous_class(const Dataset& data,
                                    const GeneralizationState& state,
                                    const Hierarchies& hs, int k) {
  std::map<std::vector<Value>, std::size_t> counts;
  std::vector<Value> key(hs.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t d = 0; d < hs.size(); ++d) {
      const int layer = state.layers[d];
      key[d] = layer == 0 ? data.records[i][d]
                          : hs[d].rank_of(layer, data.records[i][d]);
    }
    if (++counts[key] >= static_cast<std::size_t>(k)) return true;
  }
  return false;
}

}  // namespace detail

/// Scan the whole lattice and return the anonymous state with minimal loss,
/// ties broken by c1, then c2, then c3, then lattice order. A state is
/// anonymous when applying it to `data` yields at least one group of size
/// >= k. When no state qualifies the top state is returned, which the
/// recoding loop treats as "stop and suppress".
inline GeneralizationState find_optimal_state(
    const Dataset& data, int k, const GeneralizationLattice& lattice) {
  if (data.size() == 0) throw EmptyDataset("find_optimal_state on empty data");
  const Hierarchies& hs = lattice.hierarchies();

  std::optional<GeneralizationState> best;
  LossValue best_loss;
  std::optional<CriteriaTuple> best_criteria;

  for (const auto& g : lattice.states()) {
    if (!detail::forms_k_anonymous_class(data, g, hs, k)) continue;
    LossValue loss = state_loss(g, hs);
    if (!best) {
      best = g;
      best_loss = loss;
      best_criteria.reset();
      continue;
    }
    if (loss < best_loss) {
      best = g;
      best_loss = loss;
      best_criteria.reset();
    } else if (loss == best_loss) {
      if (!best_criteria) best_criteria = criteria(*best, data, hs);
      const CriteriaTuple cand = criteria(g, data, hs);
      const bool better =
          cand.c1 < best_criteria->c1 ||
          (cand.c1 == best_criteria->c1 &&
           (cand.c2 < best_criteria->c2 ||
            (cand.c2 == best_criteria->c2 && cand.c3 < best_criteria->c3)));
      if (better) {
        best = g;
        best_criteria = cand;
      }
      // equal on all criteria: keep the state seen first in lattice order
    }
  }
  return best ? *best : top_state(hs);
}

/// Extract every group of size >= k under `state` as an equivalence class;
/// everything else becomes the remainder. Classes are emitted in segment
/// order, with loss and criteria evaluated on the dataset as passed in.
inline std::pair<std::vector<EquivalenceClass>, Dataset> apply_state(
    const Dataset& data, const GeneralizationState& state,
    const Hierarchies& hs, int k) {
  std::vector<EquivalenceClass> classes;
  std::vector<std::size_t> remainder_positions;

  const auto groups = detail::group_by_state(data, state, hs);
  const SegmentGrid grid(hs);
  std::optional<CriteriaTuple> crit;  // shared by all classes of this pass

  for (const auto& [key, positions] : groups) {
    if (positions.size() < static_cast<std::size_t>(k)) {
      remainder_positions.insert(remainder_positions.end(), positions.begin(),
                                 positions.end());
      continue;
    }
    // With distinct attribute values and k >= 2, groups of this size can only
    // form when every axis is generalized to layer >= 1.
    if (std::any_of(state.layers.begin(), state.layers.end(),
                    [](int l) { return l == 0; })) {
      throw DataError("a group of size >= k formed on a non-generalized axis; "
                      "input values are not distinct per attribute");
    }
    EquivalenceClass eq;
    eq.state = state;
    eq.segment = segment_of_record(grid, data.records[positions.front()], state);
    eq.member_ids.reserve(positions.size());
    for (std::size_t p : positions) eq.member_ids.push_back(data.row_ids[p]);
    eq.loss = state_loss(state, hs);
    if (!crit) crit = criteria(state, data, hs);
    eq.criteria = crit;
    classes.push_back(std::move(eq));
  }
  std::sort(remainder_positions.begin(), remainder_positions.end());
  std::sort(classes.begin(), classes.end(),
            [](const EquivalenceClass& a, const EquivalenceClass& b) {
              return a.segment < b.segment;
            });
  return {std::move(classes), data.subset(remainder_positions)};
}

/// Iterative local recoding: repeatedly pick the optimal state for the
/// shrinking remainder and peel off all size->=k groups it forms, until the
/// top state comes back or fewer than k records remain. Whatever is left is
/// suppressed as outliers.
inline AnonymizedDataset local_recode(const Dataset& data, int k,
                                      const Hierarchies& hs) {
  if (k < 2) throw DataError("anonymity parameter k must be >= 2");
  check_distinct_values(data);
  check_in_domain(data, hs);

  AnonymizedDataset out;
  out.k = k;
  out.hierarchies = hs;

  const GeneralizationLattice lattice(hs);
  const GeneralizationState top = top_state(hs);
  Dataset remainder = data;

  for (int iteration = 0; remainder.size() >= static_cast<std::size_t>(k);
       ++iteration) {
    const GeneralizationState g = find_optimal_state(remainder, k, lattice);
    if (g == top) break;
    auto [classes, rest] = apply_state(remainder, g, hs, k);
    for (auto& eq : classes) {
      eq.formation_iteration = iteration;
      out.classes.push_back(std::move(eq));
    }
    remainder = std::move(rest);
  }
  out.outlier_ids = remainder.row_ids;
  return out;
}

}  // namespace anonaudit
