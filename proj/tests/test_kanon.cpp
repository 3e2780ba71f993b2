#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "anon/kanon.hpp"
#include "paper_tables.hpp"
#include "test_util.hpp"

#include <random>

using namespace anon;

namespace {

// Table whose QI-only equivalence classes have exactly the given sizes:
// two QI columns, the first distinct per class, the second constant.
Table table_with_class_sizes(const std::vector<std::size_t>& sizes) {
  std::vector<Record> records;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    for (std::size_t i = 0; i < sizes[c]; ++i) {
      records.push_back({{"c" + std::to_string(c + 1), "x"}, "s"});
    }
  }
  return Table(2, records, {"q1", "q2"}, "sa");
}

bool is_k_anonymous(const Table& table, const Partition& p, long long k) {
  if (!validate_partition(table, p)) return false;
  for (const Group& g : p.groups) {
    if (static_cast<long long>(g.rows.size()) < k) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("large classes are kept untouched") {
  Table t = table_with_class_sizes({2, 3});
  CHECK(classify_kanon_case(t, 2) == KAnonApproxCase::AllLarge);
  SolveResult res = approx_k_anonymity({t, 2});
  CHECK(*res.cost == 0);
  CHECK(res.partition->groups.size() == 2);
}

TEST_CASE("the three merge cases of the approximation") {
  struct Scenario {
    std::vector<std::size_t> sizes;
    long long k;
    KAnonApproxCase expected;
  };
  const Scenario scenarios[] = {
      // Small classes alone reach k.
      {{1, 2, 4}, 3, KAnonApproxCase::MergeSmall},
      // Small classes need rows carved out of a big one.
      {{1, 5}, 3, KAnonApproxCase::CarveOut},
      // Not even the slack suffices; merge into the next class.
      {{2, 3}, 3, KAnonApproxCase::MergeNext},
  };
  for (const Scenario& sc : scenarios) {
    Table t = table_with_class_sizes(sc.sizes);
    CAPTURE(sc.k);
    CHECK(classify_kanon_case(t, sc.k) == sc.expected);
    KAnonInstance inst{t, sc.k};
    SolveResult approx = approx_k_anonymity(inst);
    REQUIRE(approx.feasible());
    CHECK(is_k_anonymous(t, *approx.partition, sc.k));
    CHECK(partition_cost(t, *approx.partition) == *approx.cost);
    SolveResult oracle = brute_force_k_anonymity(inst);
    // m-approximation guarantee with m = 2 QI columns.
    CHECK(*approx.cost <= 2 * *oracle.cost);
    CHECK(*oracle.cost <= *approx.cost);
  }
}

TEST_CASE("approximation is feasible and within m*OPT on random tables") {
  std::mt19937 rng(43);
  for (int it = 0; it < 40; ++it) {
    std::size_t n = 4 + rng() % 7;  // 4..10
    std::size_t m = 1 + rng() % 3;
    Table t = testutil::random_table(rng, n, m, 2, 2);
    for (long long k : {2LL, 3LL, static_cast<long long>((n + 1) / 2)}) {
      KAnonInstance inst{t, k};
      SolveResult approx = approx_k_anonymity(inst);
      REQUIRE(approx.feasible());
      CHECK(is_k_anonymous(t, *approx.partition, k));
      SolveResult oracle = brute_force_k_anonymity(inst);
      CHECK(*approx.cost <= static_cast<long long>(m) * *oracle.cost);
    }
  }
}

TEST_CASE("exact solver matches the oracle") {
  std::mt19937 rng(47);
  for (int it = 0; it < 30; ++it) {
    std::size_t n = 4 + rng() % 7;
    Table t = testutil::random_table(rng, n, 1 + rng() % 3, 1 + rng() % 3, 2);
    for (long long k : {2LL, 3LL, static_cast<long long>((n + 1) / 2)}) {
      KAnonInstance inst{t, k};
      SolveResult exact = exact_k_anonymity(inst);
      SolveResult oracle = brute_force_k_anonymity(inst);
      REQUIRE(exact.feasible());
      CHECK(*exact.cost == *oracle.cost);
      CHECK(is_k_anonymous(t, *exact.partition, k));
      CHECK(partition_cost(t, *exact.partition) == *exact.cost);
    }
  }
}

TEST_CASE("trivial and infeasible thresholds") {
  Table t = fixtures::micro_table();
  // k = 1: singletons, zero cost.
  CHECK(*exact_k_anonymity({t, 1}, TcloseOptions{}).cost == 0);
  // k = n: the whole table is the only option.
  SolveResult whole = exact_k_anonymity({t, 10});
  CHECK(whole.partition->groups.size() == 1);
  CHECK(*whole.cost == 70);
  // k > n: infeasible on both paths.
  CHECK_FALSE(approx_k_anonymity({t, 11}).feasible());
  CHECK_FALSE(brute_force_k_anonymity({t, 11}).feasible());
  CHECK_FALSE(exact_k_anonymity({t, 11}).feasible());
  CHECK_THROWS_AS(exact_k_anonymity({t, 0}), std::invalid_argument);
}

TEST_CASE("the published 3-anonymity optimum is 54") {
  Table t = fixtures::micro_table();
  SolveResult exact = exact_k_anonymity({t, 3});
  CHECK(*exact.cost == 54);
}

TEST_CASE("reduction emits the claimed instance") {
  std::mt19937 rng(53);
  Table t = testutil::random_table(rng, 4, 2, 2, 2);
  TcloseInstance red = reduce_kanon_to_tclose({t, 2});
  CHECK(red.t == Rational(1, 2));
  CHECK(red.space.size() == 4);
  CHECK(red.table.record(0).sa == "1");
  CHECK(red.table.record(3).sa == "4");
  CHECK(red.table.record(2).qi == t.record(2).qi);
  // Singleton: EMD = 1 - 1/4 = 3/4 > t; any pair: 1 - 2/4 = 1/2 <= t.
  CHECK_FALSE(check_closeness(red.table, {{0}}, red.t, red.space));
  CHECK(check_closeness(red.table, {{0, 3}}, red.t, red.space));
}

TEST_CASE("reduced groups are t-close exactly when they have k rows") {
  std::mt19937 rng(59);
  for (int it = 0; it < 10; ++it) {
    std::size_t n = 4 + rng() % 3;  // 4..6
    Table t = testutil::random_table(rng, n, 2, 2, 3);
    long long k = 2 + static_cast<long long>(rng() % (n - 1));
    TcloseInstance red = reduce_kanon_to_tclose({t, k});
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      Group g;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) g.rows.push_back(i);
      }
      CHECK(check_closeness(red.table, g, red.t, red.space) ==
            (static_cast<long long>(g.rows.size()) >= k));
    }
  }
}

TEST_CASE("single QI column: the approximation is optimal") {
  std::mt19937 rng(61);
  for (int it = 0; it < 20; ++it) {
    Table t = testutil::random_table(rng, 4 + rng() % 6, 1, 3, 2);
    for (long long k : {2LL, 3LL}) {
      SolveResult approx = approx_k_anonymity({t, k});
      SolveResult exact = exact_k_anonymity({t, k});
      CHECK(*approx.cost == *exact.cost);
    }
  }
}
