#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "anonaudit/enumerate.hpp"

using namespace anonaudit;

namespace {

ConstraintSystem d6_class_system() {
  // four free counters z1,z2,z5,z6 in a 16-cell grid, everything else pinned
  ConstraintSystem cs;
  cs.num_vars = 16;
  for (Value j : {3, 4, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16}) cs.add_eq({j}, 0);
  cs.add_eq({1, 2, 5, 6}, 3);
  for (auto half : {std::vector<Value>{1, 5}, {2, 6}, {1, 2}, {5, 6}}) {
    cs.add_lb(half, 1);
    cs.add_ub(half, 2);
  }
  for (Value j : {1, 2, 5, 6}) cs.add_ub({j}, 2);
  return cs;
}

std::set<std::vector<long long>> as_set(const std::vector<Assignment>& v) {
  std::set<std::vector<long long>> s;
  for (const auto& a : v) s.insert(a.z);
  return s;
}

/// Random system where every variable is covered by at least one ub/eq row,
/// keeping the solution set finite and inside the brute-force box.
ConstraintSystem random_system(std::mt19937_64& rng, long long max_bound) {
  ConstraintSystem cs;
  cs.num_vars = 1 + Value(rng() % 6);
  const std::size_t rows = rng() % 11;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<Value> vars;
    for (Value v = 1; v <= cs.num_vars; ++v) {
      if (rng() % 2) vars.push_back(v);
    }
    if (vars.empty()) vars.push_back(1 + Value(rng() % cs.num_vars));
    const long long bound = rng() % (max_bound + 1);
    switch (rng() % 3) {
      case 0: cs.add_ub(vars, bound); break;
      case 1: cs.add_lb(vars, bound); break;
      default: cs.add_eq(vars, bound); break;
    }
  }
  std::vector<bool> covered(std::size_t(cs.num_vars), false);
  for (const auto* family : {&cs.ub_rows, &cs.eq_rows}) {
    for (const auto& row : *family) {
      for (Value v : row.vars) covered[std::size_t(v - 1)] = true;
    }
  }
  for (Value v = 1; v <= cs.num_vars; ++v) {
    if (!covered[std::size_t(v - 1)]) cs.add_ub({v}, rng() % (max_bound + 1));
  }
  return cs;
}

}  // namespace

TEST_CASE("the fixture class system has exactly eight solutions") {
  const auto cs = d6_class_system();
  const auto result = enumerate_solutions(cs, EnumerationLimits{});
  REQUIRE(result.exhausted);
  REQUIRE(result.count() == 8);

  // project to the free counters
  std::set<std::vector<long long>> projected;
  for (const auto& a : result.solutions) {
    projected.insert({a.z[0], a.z[1], a.z[4], a.z[5]});
  }
  const std::set<std::vector<long long>> expected{
      {2, 0, 0, 1}, {1, 0, 0, 2}, {0, 2, 1, 0}, {0, 1, 2, 0},
      {1, 1, 1, 0}, {1, 1, 0, 1}, {1, 0, 1, 1}, {0, 1, 1, 1}};
  CHECK(projected == expected);

  // brute-force the four free counters directly; the box over all sixteen
  // would be too large to scan
  ConstraintSystem reduced;
  reduced.num_vars = 4;
  reduced.add_eq({1, 2, 3, 4}, 3);
  for (auto half : {std::vector<Value>{1, 3}, {2, 4}, {1, 2}, {3, 4}}) {
    reduced.add_lb(half, 1);
    reduced.add_ub(half, 2);
  }
  for (Value j : {1, 2, 3, 4}) reduced.add_ub({j}, 2);
  CHECK(projected == as_set(brute_force_solutions(reduced, 3)));
}

TEST_CASE("tiny systems enumerate exactly") {
  SECTION("two exchangeable counters") {
    ConstraintSystem cs;
    cs.num_vars = 2;
    cs.add_eq({1, 2}, 3);
    cs.add_lb({1}, 1);
    cs.add_lb({2}, 1);
    cs.add_ub({1}, 2);
    cs.add_ub({2}, 2);
    const auto result = enumerate_solutions(cs, EnumerationLimits{});
    REQUIRE(result.exhausted);
    CHECK(as_set(result.solutions) ==
          std::set<std::vector<long long>>{{1, 2}, {2, 1}});
  }

  SECTION("contradictory rows yield nothing") {
    ConstraintSystem cs;
    cs.num_vars = 1;
    cs.add_eq({1}, 0);
    cs.add_lb({1}, 1);
    const auto result = enumerate_solutions(cs, EnumerationLimits{});
    CHECK(result.exhausted);
    CHECK(result.solutions.empty());
  }

  SECTION("uncovered variables are rejected") {
    ConstraintSystem cs;
    cs.num_vars = 2;
    cs.add_ub({1}, 1);
    CHECK_THROWS_AS(enumerate_solutions(cs, EnumerationLimits{}), DataError);
  }
}

TEST_CASE("brute force scans the whole box") {
  ConstraintSystem empty;
  empty.num_vars = 1;
  CHECK(brute_force_solutions(empty, 2).size() == 3);

  ConstraintSystem big;
  big.num_vars = 12;
  CHECK_THROWS_AS(brute_force_solutions(big, 9), BoxTooLarge);
}

TEST_CASE("enumerate matches brute force on random systems") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const auto cs = random_system(rng, 5);
    const auto fast = enumerate_solutions(cs, EnumerationLimits{});
    REQUIRE(fast.exhausted);
    CHECK(as_set(fast.solutions) == as_set(brute_force_solutions(cs, 5)));
  }
}

TEST_CASE("output is deterministic and lexicographically ordered") {
  const auto cs = d6_class_system();
  const auto a = enumerate_solutions(cs, EnumerationLimits{});
  const auto b = enumerate_solutions(cs, EnumerationLimits{});
  CHECK(a.solutions == b.solutions);
  CHECK(std::is_sorted(a.solutions.begin(), a.solutions.end()));
}

TEST_CASE("adding a row never adds solutions") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    const auto cs = random_system(rng, 4);
    auto larger = cs;
    std::vector<Value> vars;
    for (Value v = 1; v <= cs.num_vars; ++v) {
      if (rng() % 2) vars.push_back(v);
    }
    if (vars.empty()) vars.push_back(1);
    if (rng() % 2) {
      larger.add_ub(vars, rng() % 4);
    } else {
      larger.add_lb(vars, rng() % 4);
    }
    const auto base = as_set(enumerate_solutions(cs, EnumerationLimits{}).solutions);
    const auto cut =
        as_set(enumerate_solutions(larger, EnumerationLimits{}).solutions);
    for (const auto& z : cut) CHECK(base.count(z) == 1);
  }
}

TEST_CASE("the solution cap yields a prefix and clears the exhausted flag") {
  const auto cs = d6_class_system();
  const auto full = enumerate_solutions(cs, EnumerationLimits{});
  EnumerationLimits limits;
  limits.max_solutions = 3;
  const auto partial = enumerate_solutions(cs, limits);
  CHECK_FALSE(partial.exhausted);
  REQUIRE(partial.count() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(partial.solutions[i] == full.solutions[i]);
  }

  // a cap equal to the solution count is not a cut
  limits.max_solutions = 8;
  CHECK(enumerate_solutions(cs, limits).exhausted);
}
