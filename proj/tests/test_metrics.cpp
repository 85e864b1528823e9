#include <catch2/catch_amalgamated.hpp>

#include "anonaudit/attack.hpp"
#include "anonaudit/metrics.hpp"
#include "anonaudit/report.hpp"
#include "fixtures.hpp"

using namespace anonaudit;
using fixtures::seg;

TEST_CASE("volume counts integer points") {
  const SegmentGrid grid(fixtures::two_h8());
  CHECK(volume({IntervalI{1, 25}, IntervalI{51, 100}}) == 1250);
  CHECK(volume(grid, seg({{2, 0}, {2, 0}})) == 16);
  CHECK(volume(grid, seg({{1, 2}, {1, 1}})) == 4);
}

TEST_CASE("lr_solutions is an exact binomial") {
  CHECK(lr_solutions(BigCount(1250), 3) == 324'740'000);
  CHECK(lr_solutions(BigCount(16), 3) == 560);
  CHECK(lr_solutions(BigCount(16), 0) == 1);
  CHECK_THROWS_AS(lr_solutions(BigCount(2), 3), SizeExceedsVolume);
}

TEST_CASE("cra_solutions sums per-leaf binomial products") {
  const SegmentGrid grid(fixtures::two_h8());

  SECTION("the fixture class") {
    const auto anon = local_recode(fixtures::d6(), 3, grid.hierarchies());
    const auto run = attack_all(anon, grid, 3, EnumerationLimits{});
    const BigCount cra = cra_solutions(run.class_outcomes[0].enumeration, grid);
    CHECK(cra == 352);  // 4 * C(4,2)*C(4,1) + 4 * C(4,1)^3
  }

  SECTION("one solution with all mass in a single leaf") {
    EnumerationResult r;
    r.solutions.push_back(Assignment{std::vector<long long>(16, 0)});
    r.solutions.back().z[0] = 3;
    CHECK(cra_solutions(r, grid) == 4);  // C(4,3)
  }

  SECTION("an empty exhausted set counts zero") {
    CHECK(cra_solutions(EnumerationResult{}, grid) == 0);
  }

  SECTION("partial enumerations are refused") {
    EnumerationResult r;
    r.exhausted = false;
    CHECK_THROWS_AS(cra_solutions(r, grid), NotExhausted);
  }
}

TEST_CASE("cra_ratio is exact") {
  CHECK(cra_ratio(BigCount(560), BigCount(352)) == Rational(35, 22));
  CHECK(decimal_string(cra_ratio(BigCount(560), BigCount(352)), 12) ==
        "1.59090909090");
  CHECK(cra_ratio(BigCount(99), BigCount(99)) == 1);
  CHECK_THROWS_AS(cra_ratio(BigCount(5), BigCount(0)), ZeroCra);
}

TEST_CASE("cra_ratio handles published-scale magnitudes") {
  // plain quotient of two Table-of-averages-sized inputs
  const BigCount lr = BigCount("8350000000000000");    // 8.35e15
  const BigCount cra = BigCount("830000000000000");    // 8.30e14
  const Rational ratio = cra_ratio(lr, cra);
  CHECK(ratio == Rational(835, 83));
  CHECK(to_double(ratio) == Catch::Approx(10.0602409639));
  // and far past any fixed-width integer
  BigCount huge = 1;
  for (int i = 0; i < 62; ++i) huge *= 10;
  CHECK(to_double(cra_ratio(huge, BigCount(1))) == Catch::Approx(1e62));
}

TEST_CASE("decimal_string keeps the requested significant digits") {
  CHECK(decimal_string(Rational(1, 3), 5) == "0.33333");
  CHECK(decimal_string(Rational(1, 4)) == "0.25");
  CHECK(decimal_string(Rational(0)) == "0");
  CHECK(decimal_string(Rational(-22, 7), 6) == "-3.14285");
  CHECK(decimal_string(Rational(1, 80000), 3) == "0.0000125");
}

TEST_CASE("aggregate_report averages per run, then per cell") {
  auto stats = [](BigCount lr, BigCount cra, std::size_t count) {
    TargetStats st;
    st.exhausted = true;
    st.lr = lr;
    st.cra = cra;
    st.ratio = cra_ratio(st.lr, st.cra);
    st.solution_count = count;
    return st;
  };

  SECTION("a single run aggregates to itself") {
    RunRecord run;
    run.dataset = "x";
    run.num_qis = 2;
    run.k = 3;
    run.classes = {stats(560, 352, 8)};
    const auto report = aggregate_report({run});
    REQUIRE(report.cells.size() == 1);
    CHECK(report.cells[0].cra_ratio_mean == Rational(35, 22));
    CHECK(report.cells[0].lr_solutions_mean == 560);
    CHECK(report.cells[0].solutions_mean == 8);
  }

  SECTION("ratios average arithmetically over runs") {
    RunRecord a, b;
    a.dataset = b.dataset = "x";
    a.num_qis = b.num_qis = 2;
    a.k = b.k = 3;
    a.classes = {stats(2, 1, 1)};
    b.classes = {stats(4, 1, 1)};
    const auto report = aggregate_report({a, b});
    REQUIRE(report.cells.size() == 1);
    CHECK(report.cells[0].cra_ratio_mean == 3);
    CHECK(report.cells[0].runs == 2);
  }

  SECTION("the fixture sweep reports eight solutions per class") {
    const auto hs = fixtures::two_h8();
    const SegmentGrid grid(hs);
    std::vector<RunRecord> runs;
    for (const auto& data : {fixtures::d6(), fixtures::d7()}) {
      const auto anon = local_recode(data, 3, hs);
      const auto run = attack_all(anon, grid, 3, EnumerationLimits{});
      RunRecord record;
      record.dataset = "fixture";
      record.num_qis = 2;
      record.k = 3;
      for (const auto& outcome : run.class_outcomes) {
        record.classes.push_back(make_target_stats(outcome, anon, grid));
      }
      if (run.outlier_outcome) {
        record.outliers = make_target_stats(*run.outlier_outcome, anon, grid);
      }
      runs.push_back(std::move(record));
    }
    const auto report = aggregate_report(std::move(runs));
    REQUIRE(report.cells.size() == 1);
    const auto& cell = report.cells[0];
    CHECK(cell.solutions_mean == 8);
    CHECK(cell.cra_ratio_mean == Rational(35, 22));
    CHECK(cell.outlier_runs == 1);
    CHECK(cell.outlier_ratio_mean == 2);
    CHECK(cell.outlier_lr_mean == 64);
    CHECK(cell.outlier_cra_mean == 32);
  }
}
