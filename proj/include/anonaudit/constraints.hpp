#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "anonaudit/errors.hpp"
#include "anonaudit/interval.hpp"

namespace anonaudit {

/// One linear row over the counter vector z: the sum of the listed variables
/// compared against `bound`. Coefficients are implicitly 0/1, so a row is
/// just its index set. Variable indices are 1-based basic-segment indices.
struct ConstraintRow {
  std::vector<Value> vars;  // sorted, unique, 1-based
  long long bound = 0;

  friend bool operator==(const ConstraintRow&, const ConstraintRow&) = default;
  friend auto operator<=>(const ConstraintRow&, const ConstraintRow&) = default;
};

/// A system of sum constraints over lambda non-negative integer counters:
///   ub rows:  sum <= bound,   lb rows:  sum >= bound,   eq rows:  sum == bound.
struct ConstraintSystem {
  Value num_vars = 0;
  std::vector<ConstraintRow> ub_rows;
  std::vector<ConstraintRow> lb_rows;
  std::vector<ConstraintRow> eq_rows;

  void add_ub(std::vector<Value> vars, long long bound) {
    add(ub_rows, std::move(vars), bound);
  }
  void add_lb(std::vector<Value> vars, long long bound) {
    add(lb_rows, std::move(vars), bound);
  }
  void add_eq(std::vector<Value> vars, long long bound) {
    add(eq_rows, std::move(vars), bound);
  }

  /// Drop duplicate rows within each family.
  void deduplicate() {
    for (auto* rows : {&ub_rows, &lb_rows, &eq_rows}) {
      std::sort(rows->begin(), rows->end());
      rows->erase(std::unique(rows->begin(), rows->end()), rows->end());
    }
  }

  void check_well_formed() const {
    for (const auto* rows : {&ub_rows, &lb_rows, &eq_rows}) {
      for (const auto& row : *rows) {
        if (row.bound < 0) {
          throw DataError("constraint bound must be non-negative");
        }
        for (Value v : row.vars) {
          if (v < 1 || v > num_vars) {
            throw DataError("constraint variable index " + std::to_string(v) +
                            " outside [1," + std::to_string(num_vars) + "]");
          }
        }
      }
    }
  }

  bool satisfied_by(const std::vector<long long>& z) const {
    auto row_sum = [&](const ConstraintRow& row) {
      long long s = 0;
      for (Value v : row.vars) s += z[static_cast<std::size_t>(v - 1)];
      return s;
    };
    for (const auto& r : ub_rows) {
      if (row_sum(r) > r.bound) return false;
    }
    for (const auto& r : lb_rows) {
      if (row_sum(r) < r.bound) return false;
    }
    for (const auto& r : eq_rows) {
      if (row_sum(r) != r.bound) return false;
    }
    return true;
  }

 private:
  static void add(std::vector<ConstraintRow>& rows, std::vector<Value> vars,
                  long long bound) {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    rows.push_back(ConstraintRow{std::move(vars), bound});
  }
};

}  // namespace anonaudit
