#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "anonaudit/constraints.hpp"
#include "anonaudit/errors.hpp"

namespace anonaudit {

/// One feasible counter vector; z[i] is the count for basic segment i+1.
struct Assignment {
  std::vector<long long> z;

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

struct EnumerationLimits {
  std::size_t max_solutions = 10'000'000;
  std::chrono::duration<double> time_budget = std::chrono::seconds(300);
};

struct EnumerationResult {
  std::vector<Assignment> solutions;
  bool exhausted = true;  // false iff a limit cut the search short

  std::size_t count() const { return solutions.size(); }
};

namespace detail {

enum class RowKind : std::uint8_t { upper, lower, equal };

struct SearchRow {
  RowKind kind;
  std::vector<std::int32_t> vars;      // 0-based, ascending
  long long bound = 0;
  long long sum = 0;
  std::vector<long long> suffix_cap;   // capacity of member vars at pos >= p
};

inline SearchRow make_search_row(RowKind kind, const ConstraintRow& row,
                                 const std::vector<long long>& var_ub) {
  SearchRow r;
  r.kind = kind;
  r.bound = row.bound;
  r.vars.reserve(row.vars.size());
  for (Value v : row.vars) r.vars.push_back(static_cast<std::int32_t>(v - 1));
  r.suffix_cap.assign(r.vars.size() + 1, 0);
  for (std::size_t p = r.vars.size(); p-- > 0;) {
    r.suffix_cap[p] = r.suffix_cap[p + 1] + var_ub[r.vars[p]];
  }
  return r;
}

/// Capacity still available to a row once all variables < next_var are fixed.
inline long long remaining_capacity(const SearchRow& row,
                                    std::int32_t next_var) {
  const auto it = std::lower_bound(row.vars.begin(), row.vars.end(), next_var);
  return row.suffix_cap[static_cast<std::size_t>(it - row.vars.begin())];
}

}  // namespace detail

/// Depth-first enumeration of every non-negative integer solution of `cs`.
///
/// Per-variable upper bounds are derived up front as the minimum bound over
/// the ub and eq rows covering the variable; every variable must be covered
/// by at least one such row, otherwise the solution set is infinite and the
/// call fails. Variables are assigned in ascending index order with values
/// ascending, pruning on running sums: a partial sum above an eq/ub bound
/// cuts the value loop (sums only grow with the value), and an lb/eq bound
/// that the remaining capacity can no longer reach skips the branch. Output
/// is therefore lexicographically ordered and fully deterministic; when a
/// limit trips, the result is a prefix of that order with exhausted=false.
inline EnumerationResult enumerate_solutions(const ConstraintSystem& cs,
                                             const EnumerationLimits& limits) {
  cs.check_well_formed();
  const std::size_t n = static_cast<std::size_t>(cs.num_vars);

  std::vector<long long> var_ub(n, std::numeric_limits<long long>::max());
  auto tighten = [&](const std::vector<ConstraintRow>& rows) {
    for (const auto& row : rows) {
      for (Value v : row.vars) {
        auto& ub = var_ub[static_cast<std::size_t>(v - 1)];
        ub = std::min(ub, row.bound);
      }
    }
  };
  tighten(cs.ub_rows);
  tighten(cs.eq_rows);
  for (std::size_t i = 0; i < n; ++i) {
    if (var_ub[i] == std::numeric_limits<long long>::max()) {
      throw DataError("variable z" + std::to_string(i + 1) +
                      " is not covered by any ub/eq row; the solution set "
                      "is unbounded");
    }
  }

  std::vector<detail::SearchRow> rows;
  rows.reserve(cs.ub_rows.size() + cs.lb_rows.size() + cs.eq_rows.size());
  using detail::RowKind;
  for (const auto& r : cs.ub_rows) {
    rows.push_back(detail::make_search_row(RowKind::upper, r, var_ub));
  }
  for (const auto& r : cs.lb_rows) {
    rows.push_back(detail::make_search_row(RowKind::lower, r, var_ub));
  }
  for (const auto& r : cs.eq_rows) {
    rows.push_back(detail::make_search_row(RowKind::equal, r, var_ub));
  }

  EnumerationResult result;

  // rows that can never reach their lower bound make the system infeasible
  for (const auto& r : rows) {
    if (r.kind != RowKind::upper && r.suffix_cap[0] < r.bound) return result;
  }

  std::vector<std::vector<detail::SearchRow*>> rows_of_var(n);
  for (auto& r : rows) {
    for (std::int32_t v : r.vars) rows_of_var[v].push_back(&r);
  }

  const auto deadline = std::chrono::steady_clock::now() + limits.time_budget;
  std::size_t nodes_since_clock = 0;
  std::vector<long long> z(n, 0);

  // Between the levels of a row's member variables neither its sum nor its
  // remaining capacity changes, so it is enough to recheck exactly the rows
  // containing the variable just assigned.
  auto dfs = [&](auto&& self, std::size_t var) -> bool {
    if (++nodes_since_clock >= 4096) {
      nodes_since_clock = 0;
      if (std::chrono::steady_clock::now() >= deadline) {
        result.exhausted = false;
        return false;
      }
    }
    if (var == n) {
      if (result.solutions.size() >= limits.max_solutions) {
        result.exhausted = false;
        return false;
      }
      result.solutions.push_back(Assignment{z});
      return true;
    }
    const auto& affected = rows_of_var[var];
    const std::int32_t next = static_cast<std::int32_t>(var) + 1;
    long long added = 0;
    bool aborted = false;
    for (long long x = 0; x <= var_ub[var]; ++x) {
      if (x > 0) {
        for (auto* r : affected) ++r->sum;
        added = x;
      }
      bool overflow = false;    // no larger x can help
      bool infeasible = false;  // a larger x might
      for (auto* r : affected) {
        if (r->kind != RowKind::lower && r->sum > r->bound) {
          overflow = true;
          break;
        }
        if (r->kind != RowKind::upper &&
            r->sum + detail::remaining_capacity(*r, next) < r->bound) {
          infeasible = true;
        }
      }
      if (overflow) break;
      if (infeasible) continue;
      z[var] = x;
      if (!self(self, var + 1)) {
        aborted = true;
        break;
      }
    }
    for (auto* r : affected) r->sum -= added;
    z[var] = 0;
    return !aborted;
  };

  dfs(dfs, 0);
  return result;
}

/// Exhaustive scan of the box [0, box_bound]^lambda filtered through every
/// row. Kept as an independent oracle for enumerate_solutions: it shares no
/// search logic with it.
inline std::vector<Assignment> brute_force_solutions(const ConstraintSystem& cs,
                                                     long long box_bound,
                                                     double cell_cap = 1e8) {
  cs.check_well_formed();
  const std::size_t n = static_cast<std::size_t>(cs.num_vars);
  double cells = 1;
  for (std::size_t i = 0; i < n; ++i) {
    cells *= static_cast<double>(box_bound + 1);
    if (cells > cell_cap) {
      throw BoxTooLarge("brute-force box of ~" + std::to_string(cells) +
                        " cells exceeds the cap of " +
                        std::to_string(cell_cap));
    }
  }
  std::vector<Assignment> out;
  if (n == 0) return out;
  std::vector<long long> z(n, 0);
  while (true) {
    if (cs.satisfied_by(z)) out.push_back(Assignment{z});
    // odometer stepping the last index fastest keeps the output ascending
    std::size_t d = n;
    while (true) {
      if (d == 0) return out;
      --d;
      if (++z[d] <= box_bound) break;
      z[d] = 0;
    }
  }
}

}  // namespace anonaudit
