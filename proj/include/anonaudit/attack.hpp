#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "anonaudit/anonymizer.hpp"
#include "anonaudit/constraints.hpp"
#include "anonaudit/enumerate.hpp"
#include "anonaudit/errors.hpp"
#include "anonaudit/parallel.hpp"
#include "anonaudit/segment.hpp"

namespace anonaudit {

/// Ordering of released classes by the keys an attacker can compute from the
/// release alone: information loss, then c1, then c2. Classes that agree on
/// all three form a tie group; their relative formation order is unknowable
/// from the release, so it is recorded as a tie rather than broken.
struct ClassOrdering {
  std::vector<std::size_t> ranked;                   // class indices, best first
  std::vector<std::vector<std::size_t>> tie_groups;  // ascending rank
  std::vector<std::size_t> group_of;                 // class index -> group index
};

namespace detail {

inline std::tuple<Rational, long long, Rational> attacker_keys(
    const GeneralizationState& state, const Hierarchies& hs) {
  const LossValue loss = state_loss(state, hs);
  long long c1 = 0;
  Rational c2{0};
  for (std::size_t d = 0; d < hs.size(); ++d) {
    c1 += state.layers[d];
    c2 += Rational(state.layers[d], hs[d].height());
  }
  c2 /= hs.size();
  return {loss.product, c1, c2};
}

}  // namespace detail

inline ClassOrdering order_classes(const AnonymizedDataset& anon) {
  const std::size_t n = anon.classes.size();
  std::vector<std::tuple<Rational, long long, Rational>> keys;
  keys.reserve(n);
  for (const auto& eq : anon.classes) {
    keys.push_back(detail::attacker_keys(eq.state, anon.hierarchies));
  }

  ClassOrdering ord;
  ord.ranked.resize(n);
  for (std::size_t i = 0; i < n; ++i) ord.ranked[i] = i;
  std::stable_sort(ord.ranked.begin(), ord.ranked.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });

  ord.group_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || keys[ord.ranked[i]] != keys[ord.ranked[i - 1]]) {
      ord.tie_groups.emplace_back();
    }
    ord.tie_groups.back().push_back(ord.ranked[i]);
    ord.group_of[ord.ranked[i]] = ord.tie_groups.size() - 1;
  }
  return ord;
}

/// Build the constraint system for one released equivalence class:
///  - every counter outside the class segment is pinned to 0,
///  - each half-segment must hold at least one record,
///  - leaves shared with a provably earlier class sum to 0,
///  - every contained segment that is not itself a released class is bounded
///    by k-1,
///  - the class's own leaves sum to |EQ|.
inline ConstraintSystem build_eq_constraints(std::size_t target_index,
                                             const ClassOrdering& ordering,
                                             const AnonymizedDataset& anon,
                                             const SegmentGrid& grid, int k) {
  const EquivalenceClass& target = anon.classes[target_index];
  const std::vector<Value> target_leaves = basic_segments_of(grid, target.segment);

  ConstraintSystem cs;
  cs.num_vars = grid.lambda();

  // outside-zero pins
  {
    std::size_t next = 0;
    for (Value j = 1; j <= grid.lambda(); ++j) {
      if (next < target_leaves.size() && target_leaves[next] == j) {
        ++next;
        continue;
      }
      cs.add_eq({j}, 0);
    }
  }

  // halves
  if (!grid.is_basic(target.segment)) {
    for (const Segment& half : half_segments(grid, target.segment)) {
      cs.add_lb(basic_segments_of(grid, half), 1);
    }
  }

  // overlap with classes in strictly earlier tie groups
  for (std::size_t other = 0; other < anon.classes.size(); ++other) {
    if (ordering.group_of[other] >= ordering.group_of[target_index]) continue;
    const auto other_leaves = basic_segments_of(grid, anon.classes[other].segment);
    std::vector<Value> inter;
    std::set_intersection(target_leaves.begin(), target_leaves.end(),
                          other_leaves.begin(), other_leaves.end(),
                          std::back_inserter(inter));
    if (!inter.empty()) cs.add_eq(std::move(inter), 0);
  }

  // sparse bounds over contained segments that are not released classes
  for (const Segment& sub : enumerate_subsegments(grid, target.segment)) {
    if (sub == target.segment) continue;
    const bool is_released = std::any_of(
        anon.classes.begin(), anon.classes.end(),
        [&](const EquivalenceClass& eq) { return eq.segment == sub; });
    if (is_released) continue;
    cs.add_ub(basic_segments_of(grid, sub), k - 1);
  }

  // total sum
  cs.add_eq(target_leaves, static_cast<long long>(target.size()));

  cs.deduplicate();
  return cs;
}

/// Constraint system for the suppressed records, over the whole grid:
/// released classes are emptied, the grand total equals |O|, the grid halves
/// apply only when at least k records were suppressed, and every grid segment
/// that is neither a released class nor the grid itself is bounded by k-1.
inline ConstraintSystem build_outlier_constraints(const AnonymizedDataset& anon,
                                                  const SegmentGrid& grid,
                                                  int k) {
  if (anon.outlier_ids.empty()) {
    throw NoOutliers("no suppressed records to attack");
  }

  ConstraintSystem cs;
  cs.num_vars = grid.lambda();
  const Segment top = grid.top_segment();

  for (const auto& eq : anon.classes) {
    cs.add_eq(basic_segments_of(grid, eq.segment), 0);
  }

  std::vector<Value> all(static_cast<std::size_t>(grid.lambda()));
  for (Value j = 1; j <= grid.lambda(); ++j) all[static_cast<std::size_t>(j - 1)] = j;
  cs.add_eq(std::move(all), static_cast<long long>(anon.outlier_ids.size()));

  if (anon.outlier_ids.size() >= static_cast<std::size_t>(k) &&
      !grid.is_basic(top)) {
    for (const Segment& half : half_segments(grid, top)) {
      cs.add_lb(basic_segments_of(grid, half), 1);
    }
  }

  for (const Segment& sub : enumerate_subsegments(grid, top)) {
    if (sub == top) continue;  // the outliers' own region holds all |O|
    const bool is_released = std::any_of(
        anon.classes.begin(), anon.classes.end(),
        [&](const EquivalenceClass& eq) { return eq.segment == sub; });
    if (is_released) continue;
    cs.add_ub(basic_segments_of(grid, sub), k - 1);
  }

  cs.deduplicate();
  return cs;
}

/// A single solvable unit: one released class, or the suppressed records.
struct TargetRef {
  enum class Kind { equivalence_class, outliers };
  Kind kind = Kind::equivalence_class;
  std::size_t class_index = 0;

  bool is_outliers() const { return kind == Kind::outliers; }
};

struct AttackInstance {
  TargetRef target;
  ConstraintSystem system;
  std::size_t ordering_rank = 0;
};

struct AttackOutcome {
  AttackInstance instance;
  EnumerationResult enumeration;
  double runtime_seconds = 0;
  std::optional<std::string> error;
};

struct AttackRun {
  ClassOrdering ordering;
  std::vector<AttackOutcome> class_outcomes;     // by class index
  std::optional<AttackOutcome> outlier_outcome;  // when the release has outliers
};

/// Build one instance per class (in attacker rank order) plus one for the
/// outliers when present.
inline std::vector<AttackInstance> make_instances(const AnonymizedDataset& anon,
                                                  const SegmentGrid& grid,
                                                  int k,
                                                  const ClassOrdering& ordering) {
  std::vector<AttackInstance> out;
  out.reserve(anon.classes.size() + 1);
  for (std::size_t rank = 0; rank < ordering.ranked.size(); ++rank) {
    const std::size_t ci = ordering.ranked[rank];
    AttackInstance inst;
    inst.target = TargetRef{TargetRef::Kind::equivalence_class, ci};
    inst.system = build_eq_constraints(ci, ordering, anon, grid, k);
    inst.ordering_rank = rank;
    out.push_back(std::move(inst));
  }
  if (!anon.outlier_ids.empty()) {
    AttackInstance inst;
    inst.target = TargetRef{TargetRef::Kind::outliers, 0};
    inst.system = build_outlier_constraints(anon, grid, k);
    inst.ordering_rank = ordering.ranked.size();
    out.push_back(std::move(inst));
  }
  return out;
}

/// Solve every target independently. Instances run on a bounded worker pool;
/// a limit or failure on one target is recorded in its outcome and never
/// aborts the others.
inline AttackRun attack_all(const AnonymizedDataset& anon,
                            const SegmentGrid& grid, int k,
                            const EnumerationLimits& limits) {
  AttackRun run;
  run.ordering = order_classes(anon);
  std::vector<AttackInstance> instances =
      make_instances(anon, grid, k, run.ordering);

  std::vector<AttackOutcome> outcomes(instances.size());
  parallel_for_indexed(instances.size(), [&](std::size_t i) {
    AttackOutcome& out = outcomes[i];
    out.instance = std::move(instances[i]);
    const auto start = std::chrono::steady_clock::now();
    try {
      out.enumeration = enumerate_solutions(out.instance.system, limits);
    } catch (const Error& e) {
      out.error = e.what();
    }
    out.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
  });

  run.class_outcomes.resize(anon.classes.size());
  for (auto& out : outcomes) {
    if (out.instance.target.is_outliers()) {
      run.outlier_outcome = std::move(out);
    } else {
      run.class_outcomes[out.instance.target.class_index] = std::move(out);
    }
  }
  return run;
}

}  // namespace anonaudit
