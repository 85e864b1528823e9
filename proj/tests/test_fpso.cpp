#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "anonaudit/attack.hpp"
#include "anonaudit/fpso.hpp"
#include "anonaudit/io.hpp"
#include "anonaudit/pipeline.hpp"
#include "fixtures.hpp"

using namespace anonaudit;

namespace {

Assignment assignment_of(std::initializer_list<std::pair<Value, long long>> entries,
                         Value lambda) {
  Assignment a;
  a.z.assign(std::size_t(lambda), 0);
  for (const auto& [idx, count] : entries) a.z[std::size_t(idx - 1)] = count;
  return a;
}

}  // namespace

TEST_CASE("validate_assignment checks positive counters against members") {
  const auto hs = fixtures::two_h8();
  const SegmentGrid grid(hs);
  const auto data = fixtures::d6();
  const std::vector<std::size_t> members{0, 1, 2};  // (1,1),(2,2),(3,4)

  CHECK(validate_assignment(assignment_of({{1, 2}, {6, 1}}, 16), data, members,
                            grid));
  CHECK_FALSE(validate_assignment(assignment_of({{1, 1}, {2, 1}, {5, 1}}, 16),
                                  data, members, grid));
  CHECK_FALSE(validate_assignment(assignment_of({}, 16), data, members, grid));
}

TEST_CASE("find_valid isolates the true assignment on the fixture") {
  const auto hs = fixtures::two_h8();
  const SegmentGrid grid(hs);
  const auto data = fixtures::d6();
  const auto anon = local_recode(data, 3, hs);
  const auto run = attack_all(anon, grid, 3, EnumerationLimits{});

  const Assignment valid0 =
      find_valid(run.class_outcomes[0].enumeration.solutions, data,
                 anon.classes[0].member_ids, grid);
  CHECK(valid0 == assignment_of({{1, 2}, {6, 1}}, 16));

  const Assignment valid1 =
      find_valid(run.class_outcomes[1].enumeration.solutions, data,
                 anon.classes[1].member_ids, grid);
  CHECK(valid1 == assignment_of({{11, 1}, {15, 1}, {16, 1}}, 16));

  CHECK_THROWS_AS(find_valid({}, data, anon.classes[0].member_ids, grid),
                  NoValidAssignment);
  CHECK_THROWS_AS(find_valid({valid0, valid0}, data,
                             anon.classes[0].member_ids, grid),
                  MultipleValid);
}

TEST_CASE("single_out emits one predicate per unit counter") {
  const auto hs = fixtures::two_h8();
  const SegmentGrid grid(hs);
  const auto data = fixtures::d6();

  SECTION("one unit counter isolates one record") {
    const auto result = single_out(assignment_of({{1, 2}, {6, 1}}, 16), grid,
                                   data, {0, 1, 2});
    CHECK(result.category == FpsoCategory::single_1);
    REQUIRE(result.singled_out.size() == 1);
    const auto& hit = result.singled_out.front();
    CHECK(hit.basic_index == 6);
    CHECK(hit.predicate.terms ==
          std::vector<IntervalI>{{3, 4}, {3, 4}});
    CHECK(hit.matched_row == 2);  // record (3,4)
    // the predicate matches exactly one record of the full raw dataset
    std::size_t matches = 0;
    for (const auto& rec : data.records) {
      if (hit.predicate.matches(rec)) ++matches;
    }
    CHECK(matches == 1);
  }

  SECTION("three unit counters single out three records") {
    const auto result = single_out(
        assignment_of({{11, 1}, {15, 1}, {16, 1}}, 16), grid, data, {3, 4, 5});
    CHECK(result.category == FpsoCategory::single_many);
    CHECK(result.singled_out.size() == 3);
  }

  SECTION("no unit counters means the attack fails") {
    const auto members = Dataset::from_records(
        {"Q1", "Q2"}, {{1, 1}, {2, 2}, {3, 3}, {4, 4}});
    const auto result = single_out(assignment_of({{1, 2}, {6, 2}}, 16), grid,
                                   members, {0, 1, 2, 3});
    CHECK(result.category == FpsoCategory::failed);
    CHECK(result.singled_out.empty());
  }
}

TEST_CASE("fpso uniqueness holds across random pipelines") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 12; ++trial) {
    DatasetConfig config;
    config.attributes = {{"a", 1, 48, 1 + int(rng() % 4)}, {"b", 1, 64, 3}};
    config.n = 12 + rng() % 36;
    const auto dist = trial % 2 == 0 ? SyntheticDistribution::uniform
                                     : SyntheticDistribution::squared;
    const Dataset data = generate_synthetic(config, rng(), dist);
    const int k = 2 + int(rng() % 4);
    const Hierarchies hs = hierarchies_from(config);
    const SegmentGrid grid(hs);
    const auto anon = local_recode(data, k, hs);
    const auto run = attack_all(anon, grid, k, EnumerationLimits{});

    for (std::size_t ci = 0; ci < anon.classes.size(); ++ci) {
      REQUIRE(run.class_outcomes[ci].enumeration.exhausted);
      // find_valid throws on zero or multiple valid assignments
      const Assignment valid =
          find_valid(run.class_outcomes[ci].enumeration.solutions, data,
                     anon.classes[ci].member_ids, grid);
      const auto result =
          single_out(valid, grid, data, anon.classes[ci].member_ids);
      for (const auto& hit : result.singled_out) {
        std::size_t matches = 0;
        for (const auto& rec : data.records) {
          if (hit.predicate.matches(rec)) ++matches;
        }
        CHECK(matches == 1);
      }
    }
  }
}

TEST_CASE("run_fpso replays the recoding and categorizes the fixture") {
  const auto hs = fixtures::two_h8();
  const SegmentGrid grid(hs);
  const auto data = fixtures::d6();
  const auto anon = local_recode(data, 3, hs);
  const auto run = attack_all(anon, grid, 3, EnumerationLimits{});

  AttackReportData report;
  report.k = 3;
  report.hierarchies = hs;
  for (std::size_t ci = 0; ci < anon.classes.size(); ++ci) {
    AttackReportData::ClassEntry entry;
    entry.segment = anon.classes[ci].segment;
    entry.size = anon.classes[ci].size();
    entry.exhausted = true;
    entry.solutions = run.class_outcomes[ci].enumeration.solutions;
    report.classes.push_back(std::move(entry));
  }

  const auto results = run_fpso(report, data);
  REQUIRE(results.size() == 2);
  REQUIRE(results[0].has_value());
  REQUIRE(results[1].has_value());
  CHECK(results[0]->category == FpsoCategory::single_1);
  CHECK(results[1]->category == FpsoCategory::single_many);

  // a raw dataset that recodes into different classes is rejected
  const auto other = Dataset::from_records(
      {"Q1", "Q2"}, {{1, 1}, {2, 2}, {3, 4}, {5, 5}, {6, 7}, {7, 3}});
  CHECK_THROWS_AS(run_fpso(report, other), DataError);
}
