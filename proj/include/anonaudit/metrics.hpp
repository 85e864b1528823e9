#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "anonaudit/enumerate.hpp"
#include "anonaudit/errors.hpp"
#include "anonaudit/loss.hpp"
#include "anonaudit/segment.hpp"

namespace anonaudit {

/// Counts of plausible raw datasets routinely exceed 10^60, so everything in
/// this module is exact big-integer / big-rational arithmetic. Decimals are
/// derived from the exact values only at reporting time.
using BigCount = boost::multiprecision::cpp_int;

/// Exact binomial coefficient C(n, k).
inline BigCount binomial(const BigCount& n, std::uint64_t k) {
  if (n < k) return BigCount(0);
  BigCount r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - BigCount(k - i);
    r /= i;  // exact: r is a binomial prefix
  }
  return r;
}

/// Number of integer points in a segment.
inline BigCount volume(const SegmentGrid& grid, const Segment& seg) {
  BigCount v = 1;
  for (const IntervalI& iv : grid.intervals_of(seg)) v *= iv.length();
  return v;
}

inline BigCount volume(const std::vector<IntervalI>& intervals) {
  BigCount v = 1;
  for (const IntervalI& iv : intervals) v *= iv.length();
  return v;
}

/// Value assignments for a whole class under plain interval semantics:
/// choose |EQ| distinct points inside the class segment.
inline BigCount lr_solutions(const BigCount& seg_volume,
                             std::uint64_t class_size) {
  if (seg_volume < class_size) {
    throw SizeExceedsVolume("class of " + std::to_string(class_size) +
                            " records cannot fit a segment of volume " +
                            seg_volume.str());
  }
  return binomial(seg_volume, class_size);
}

/// Plausible raw datasets consistent with an exhaustively enumerated solution
/// set: sum over solutions of the product of per-leaf binomials.
inline BigCount cra_solutions(const EnumerationResult& enumeration,
                              const SegmentGrid& grid) {
  if (!enumeration.exhausted) {
    throw NotExhausted("cra_solutions needs the complete solution set");
  }
  // every basic cell has the same volume (uniform leaf widths per axis)
  BigCount leaf_vol = 1;
  for (const auto& h : grid.hierarchies()) leaf_vol *= h.leaf_width();

  std::map<long long, BigCount> choose_cache;
  BigCount total = 0;
  for (const Assignment& a : enumeration.solutions) {
    BigCount term = 1;
    for (long long zi : a.z) {
      if (zi == 0) continue;
      auto it = choose_cache.find(zi);
      if (it == choose_cache.end()) {
        it = choose_cache
                 .emplace(zi, binomial(leaf_vol, static_cast<std::uint64_t>(zi)))
                 .first;
      }
      term *= it->second;
    }
    total += term;
  }
  return total;
}

/// LR/CRA, the factor by which the attack shrank the plausible space.
/// Exact; a zero CRA count means the true dataset was excluded, which is a
/// soundness failure, never a stronger attack.
inline Rational cra_ratio(const BigCount& lr, const BigCount& cra) {
  if (cra == 0) {
    throw ZeroCra("CRA produced zero plausible assignments; the truth must "
                  "always remain feasible");
  }
  return Rational(lr, cra);
}

/// Exact rational -> decimal string with the requested significant digits.
inline std::string decimal_string(const Rational& r, std::size_t significant = 18) {
  using boost::multiprecision::cpp_int;
  if (r == 0) return "0";
  const bool neg = r < 0;
  cpp_int num = neg ? cpp_int(-numerator(r)) : cpp_int(numerator(r));
  const cpp_int den = denominator(r);

  cpp_int ipart = num / den;
  cpp_int rem = num % den;
  std::string digits = ipart.str();
  std::size_t sig = digits == "0" ? 0 : digits.size();
  std::string frac;
  int leading_zeros_done = digits != "0";
  while (rem != 0 && sig < significant) {
    rem *= 10;
    cpp_int d = rem / den;
    rem %= den;
    frac += static_cast<char>('0' + d.convert_to<int>());
    if (d != 0) leading_zeros_done = 1;
    if (leading_zeros_done) ++sig;
  }
  std::string out = (neg ? "-" : "") + digits;
  if (!frac.empty()) out += "." + frac;
  return out;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// ---------------------------------------------------------------------------
// Aggregation across experiment runs
// ---------------------------------------------------------------------------

/// Attack statistics for one target (a class, or the outlier set).
struct TargetStats {
  std::size_t class_index = 0;
  bool basic_segment = false;
  bool exhausted = false;
  std::size_t solution_count = 0;
  BigCount lr = 0;
  BigCount cra = 0;
  std::optional<Rational> ratio;  // set when exhausted and cra > 0
  double runtime_seconds = 0;
};

/// One full pipeline execution on one sampled dataset.
struct RunRecord {
  std::string dataset;
  std::size_t num_qis = 0;
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<TargetStats> classes;
  std::optional<TargetStats> outliers;
};

/// Per-(dataset, num_qis, k) aggregate: class means are computed per run
/// first, then averaged over runs. Runs without any exhausted class do not
/// contribute to the class columns.
struct AggregateCell {
  std::string dataset;
  std::size_t num_qis = 0;
  int k = 0;
  std::size_t runs = 0;
  Rational lr_solutions_mean{0};
  Rational cra_solutions_mean{0};
  Rational cra_ratio_mean{0};
  Rational solutions_mean{0};
  double runtime_mean_seconds = 0;
  std::size_t share_runs = 0;
  Rational basic_share_mean{0};  // share of classes sitting on basic segments
  std::size_t outlier_runs = 0;
  Rational outlier_lr_mean{0};
  Rational outlier_cra_mean{0};
  Rational outlier_ratio_mean{0};
};

struct RefinementReport {
  std::vector<RunRecord> runs;
  std::vector<AggregateCell> cells;
};

inline RefinementReport aggregate_report(std::vector<RunRecord> runs) {
  RefinementReport report;
  report.runs = std::move(runs);

  std::map<std::tuple<std::string, std::size_t, int>, std::vector<const RunRecord*>>
      by_cell;
  for (const RunRecord& run : report.runs) {
    by_cell[{run.dataset, run.num_qis, run.k}].push_back(&run);
  }

  for (const auto& [key, cell_runs] : by_cell) {
    AggregateCell cell;
    cell.dataset = std::get<0>(key);
    cell.num_qis = std::get<1>(key);
    cell.k = std::get<2>(key);

    Rational lr_sum{0}, cra_sum{0}, ratio_sum{0}, sol_sum{0}, share_sum{0};
    Rational out_lr{0}, out_cra{0}, out_ratio{0};
    double runtime_sum = 0;
    for (const RunRecord* run : cell_runs) {
      BigCount run_lr = 0, run_cra = 0;
      Rational run_ratio{0};
      double run_runtime = 0;
      std::size_t run_solutions = 0, usable = 0, basic = 0;
      for (const TargetStats& st : run->classes) {
        if (st.basic_segment) ++basic;
        if (!st.exhausted || !st.ratio) continue;
        ++usable;
        run_lr += st.lr;
        run_cra += st.cra;
        run_ratio += *st.ratio;
        run_solutions += st.solution_count;
        run_runtime += st.runtime_seconds;
      }
      if (usable > 0) {
        ++cell.runs;
        lr_sum += Rational(run_lr, usable);
        cra_sum += Rational(run_cra, usable);
        ratio_sum += run_ratio / usable;
        sol_sum += Rational(run_solutions, usable);
        runtime_sum += run_runtime / static_cast<double>(usable);
      }
      if (!run->classes.empty()) {
        ++cell.share_runs;
        share_sum += Rational(basic, run->classes.size());
      }
      if (run->outliers && run->outliers->exhausted && run->outliers->ratio) {
        ++cell.outlier_runs;
        out_lr += Rational(run->outliers->lr);
        out_cra += Rational(run->outliers->cra);
        out_ratio += *run->outliers->ratio;
      }
    }
    if (cell.runs > 0) {
      cell.lr_solutions_mean = lr_sum / cell.runs;
      cell.cra_solutions_mean = cra_sum / cell.runs;
      cell.cra_ratio_mean = ratio_sum / cell.runs;
      cell.solutions_mean = sol_sum / cell.runs;
      cell.runtime_mean_seconds = runtime_sum / static_cast<double>(cell.runs);
    }
    if (cell.share_runs > 0) {
      cell.basic_share_mean = share_sum / cell.share_runs;
    }
    if (cell.outlier_runs > 0) {
      cell.outlier_lr_mean = out_lr / cell.outlier_runs;
      cell.outlier_cra_mean = out_cra / cell.outlier_runs;
      cell.outlier_ratio_mean = out_ratio / cell.outlier_runs;
    }
    report.cells.push_back(std::move(cell));
  }
  return report;
}

}  // namespace anonaudit
