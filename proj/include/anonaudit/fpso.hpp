#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "anonaudit/dataset.hpp"
#include "anonaudit/enumerate.hpp"
#include "anonaudit/errors.hpp"
#include "anonaudit/segment.hpp"

namespace anonaudit {

/// Conjunction of one closed interval per attribute, derived from a basic
/// segment. Evaluates directly on raw records.
struct Predicate {
  std::vector<std::string> attribute_names;
  std::vector<IntervalI> terms;

  bool matches(const Record& record) const {
    for (std::size_t d = 0; d < terms.size(); ++d) {
      if (!terms[d].contains(record[d])) return false;
    }
    return true;
  }
};

enum class FpsoCategory { failed, single_1, single_many };

inline std::string to_string(FpsoCategory c) {
  switch (c) {
    case FpsoCategory::failed: return "failed";
    case FpsoCategory::single_1: return "single_1";
    default: return "single_many";
  }
}

struct SingledOutRecord {
  Value basic_index = 0;
  Predicate predicate;
  std::size_t matched_row = 0;  // row id in the original dataset
};

struct FpsoClassResult {
  std::size_t class_index = 0;
  Assignment valid_assignment;
  std::vector<SingledOutRecord> singled_out;
  FpsoCategory category = FpsoCategory::failed;
};

/// Per-leaf counts of a set of records.
inline std::vector<long long> leaf_counts(const Dataset& original,
                                          const std::vector<std::size_t>& row_ids,
                                          const SegmentGrid& grid) {
  std::vector<long long> counts(static_cast<std::size_t>(grid.lambda()), 0);
  for (std::size_t row : row_ids) {
    const Value idx = grid.leaf_index_of(original.records[row]);
    ++counts[static_cast<std::size_t>(idx - 1)];
  }
  return counts;
}

/// An assignment is valid when its total matches the class size and, for
/// every positive counter, exactly that many of the class's own records fall
/// in the corresponding basic segment. Counting against the class members
/// (rather than the whole dataset) keeps zero counters meaningful: records
/// stolen by an earlier class may still sit inside this segment.
inline bool validate_assignment(const Assignment& a, const Dataset& original,
                                const std::vector<std::size_t>& class_members,
                                const SegmentGrid& grid) {
  long long total = 0;
  for (long long zi : a.z) total += zi;
  if (total != static_cast<long long>(class_members.size())) return false;

  const std::vector<long long> truth = leaf_counts(original, class_members, grid);
  for (std::size_t i = 0; i < a.z.size(); ++i) {
    if (a.z[i] > 0 && truth[i] != a.z[i]) return false;
  }
  return true;
}

/// Exactly one enumerated assignment can match the raw data; anything else
/// signals a broken attack and is surfaced, never resolved silently.
inline Assignment find_valid(const std::vector<Assignment>& solutions,
                             const Dataset& original,
                             const std::vector<std::size_t>& class_members,
                             const SegmentGrid& grid) {
  const Assignment* found = nullptr;
  for (const Assignment& a : solutions) {
    if (!validate_assignment(a, original, class_members, grid)) continue;
    if (found != nullptr) {
      throw MultipleValid("two distinct assignments validate against the raw "
                          "data for the same class");
    }
    found = &a;
  }
  if (found == nullptr) {
    throw NoValidAssignment("no enumerated assignment matches the raw data; "
                            "the true assignment was excluded");
  }
  return *found;
}

/// Emit one predicate per counter equal to 1: that basic segment provably
/// holds exactly one raw record, which the interval conjunction isolates.
inline FpsoClassResult single_out(const Assignment& valid,
                                  const SegmentGrid& grid,
                                  const Dataset& original,
                                  const std::vector<std::size_t>& class_members) {
  FpsoClassResult result;
  result.valid_assignment = valid;
  for (std::size_t i = 0; i < valid.z.size(); ++i) {
    if (valid.z[i] != 1) continue;
    const Value basic_idx = static_cast<Value>(i) + 1;
    SingledOutRecord rec;
    rec.basic_index = basic_idx;
    rec.predicate.attribute_names = original.attribute_names;
    rec.predicate.terms = grid.intervals_of(grid.basic_segment(basic_idx));
    bool matched = false;
    for (std::size_t row : class_members) {
      if (grid.leaf_index_of(original.records[row]) == basic_idx) {
        rec.matched_row = row;
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw SoundnessError("a unit counter has no matching member record");
    }
    result.singled_out.push_back(std::move(rec));
  }
  result.category = result.singled_out.empty() ? FpsoCategory::failed
                    : result.singled_out.size() == 1 ? FpsoCategory::single_1
                                                     : FpsoCategory::single_many;
  return result;
}

}  // namespace anonaudit
