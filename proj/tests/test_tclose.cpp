#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "anon/tclose.hpp"
#include "paper_tables.hpp"
#include "test_util.hpp"

#include <random>

using namespace anon;

namespace {

bool partition_is_close(const Table& table, const Partition& p,
                        const Rational& t, const SaSpace& space) {
  if (!validate_partition(table, p)) return false;
  for (const Group& g : p.groups) {
    if (!check_closeness(table, g, t, space)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("t=1 always admits the zero-cost singleton partition") {
  std::mt19937 rng(3);
  for (int it = 0; it < 10; ++it) {
    Table t = testutil::random_table(rng, 6, 3, 3, 3);
    SaSpace space = equal_distance_space(t.sa_values());
    CHECK(*brute_force_tclose(t, 1, space).cost == 0);
    CHECK(*exact_tclose(t, 1, space).cost == 0);
  }
}

TEST_CASE("worked example at t=3/10") {
  Table t = fixtures::micro_table();
  SaSpace space = equal_distance_space(t.sa_values());
  Rational thr(3, 10);
  SolveResult oracle = brute_force_tclose(t, thr, space);
  REQUIRE(oracle.feasible());
  // The published 0.3-closeness partition costs 67, an upper bound.
  CHECK(*oracle.cost <= 67);
  CHECK(partition_is_close(t, *oracle.partition, thr, space));

  SolveResult exact = exact_tclose(t, thr, space);
  CHECK(*exact.cost == *oracle.cost);
  CHECK(partition_is_close(t, *exact.partition, thr, space));
}

TEST_CASE("two equal-QI rows at t=0") {
  // Equal SAs: every grouping is 0-close and free; ties go to the first
  // partition in enumeration order, which is the single group.
  Table same(1, {{{"a"}, "s"}, {{"a"}, "s"}}, {"q"}, "sa");
  SaSpace sp1 = equal_distance_space(same.sa_values());
  CHECK(*brute_force_tclose(same, 0, sp1).cost == 0);
  CHECK(brute_force_tclose(same, 0, sp1).partition->groups.size() == 1);

  // Distinct SAs: only the whole table matches (1/2,1/2); QIs agree, cost 0.
  Table diff(1, {{{"a"}, "s"}, {{"a"}, "u"}}, {"q"}, "sa");
  SaSpace sp2 = equal_distance_space(diff.sa_values());
  SolveResult res = brute_force_tclose(diff, 0, sp2);
  CHECK(*res.cost == 0);
  CHECK(res.partition->groups.size() == 1);
}

TEST_CASE("all-distinct SAs at t=0 force a single group") {
  std::mt19937 rng(17);
  for (int it = 0; it < 20; ++it) {
    std::size_t n = 4 + rng() % 5;  // 4..8
    Table base = testutil::random_table(rng, n, 3, 3, 2);
    std::vector<Record> records = base.records();
    for (std::size_t i = 0; i < n; ++i) {
      records[i].sa = std::to_string(i + 1);
    }
    Table t(base.num_qi(), records, base.qi_names(), base.sa_name());
    SaSpace space = equal_distance_space(t.sa_values());
    SolveResult res = exact_tclose(t, 0, space);
    REQUIRE(res.partition->groups.size() == 1);
    long long nonuniform = 0;
    for (std::size_t j = 0; j < t.num_qi(); ++j) {
      for (std::size_t i = 1; i < n; ++i) {
        if (t.record(i).qi[j] != t.record(0).qi[j]) {
          ++nonuniform;
          break;
        }
      }
    }
    CHECK(*res.cost == static_cast<long long>(n) * nonuniform);
    CHECK(*res.cost == *brute_force_tclose(t, 0, space).cost);
  }
}

TEST_CASE("exact solver matches the oracle on random tables") {
  std::mt19937 rng(29);
  const Rational ts[] = {0, Rational(1, 4), Rational(1, 2), Rational(3, 4), 1};
  for (int it = 0; it < 40; ++it) {
    std::size_t n = 4 + rng() % 7;  // 4..10
    Table t = testutil::random_table(rng, n, 1 + rng() % 4, 1 + rng() % 4,
                                     1 + rng() % 4);
    SaSpace space = equal_distance_space(t.sa_values());
    for (const Rational& thr : ts) {
      SolveResult oracle = brute_force_tclose(t, thr, space);
      SolveResult exact = exact_tclose(t, thr, space);
      REQUIRE(oracle.feasible());
      REQUIRE(exact.feasible());
      CHECK(*oracle.cost == *exact.cost);
      CHECK(partition_is_close(t, *oracle.partition, thr, space));
      CHECK(partition_is_close(t, *exact.partition, thr, space));

      TcloseOptions cached;
      cached.subset_cache = true;
      CHECK(*exact_tclose(t, thr, space, cached).cost == *exact.cost);
    }
  }
}

TEST_CASE("feasible cost is monotone in t") {
  std::mt19937 rng(31);
  for (int it = 0; it < 20; ++it) {
    Table t = testutil::random_table(rng, 7, 3, 3, 3);
    SaSpace space = equal_distance_space(t.sa_values());
    long long prev = -1;
    for (const Rational& thr :
         {Rational(1), Rational(1, 2), Rational(1, 4), Rational(0)}) {
      long long cost = *exact_tclose(t, thr, space).cost;
      if (prev >= 0) CHECK(cost >= prev);
      prev = cost;
    }
  }
}

TEST_CASE("solvers are deterministic") {
  std::mt19937 rng(37);
  Table t = testutil::random_table(rng, 8, 3, 3, 3);
  SaSpace space = equal_distance_space(t.sa_values());
  Rational thr(1, 2);
  SolveResult a = exact_tclose(t, thr, space);
  SolveResult b = exact_tclose(t, thr, space);
  REQUIRE(a.partition->groups.size() == b.partition->groups.size());
  for (std::size_t i = 0; i < a.partition->groups.size(); ++i) {
    CHECK(a.partition->groups[i].rows == b.partition->groups[i].rows);
  }
  SolveResult c = brute_force_tclose(t, thr, space);
  SolveResult d = brute_force_tclose(t, thr, space);
  for (std::size_t i = 0; i < c.partition->groups.size(); ++i) {
    CHECK(c.partition->groups[i].rows == d.partition->groups[i].rows);
  }
}

TEST_CASE("size guards refuse oversized instances") {
  std::mt19937 rng(41);
  Table t = testutil::random_table(rng, 13, 2, 2, 2);
  SaSpace space = equal_distance_space(t.sa_values());
  CHECK_THROWS_AS(brute_force_tclose(t, 1, space), std::invalid_argument);
  TcloseOptions tiny;
  tiny.exact_max_n = 10;
  CHECK_THROWS_AS(exact_tclose(t, 1, space, tiny), std::invalid_argument);
}
