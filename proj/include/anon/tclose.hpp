#pragma once

#include "anon/emd.hpp"
#include "anon/rational.hpp"
#include "anon/table.hpp"

#include <cstdint>
#include <optional>

namespace anon {

struct SolveStats {
  unsigned long long nodes = 0;    // search-tree nodes / solver states
  unsigned long long subsets = 0;  // candidate subsets enumerated
};

// Result of any partition solver. cost is present iff a feasible partition
// was found; the partition then passes validate_partition and every group
// satisfies the solved principle.
struct SolveResult {
  std::optional<Partition> partition;
  std::optional<long long> cost;
  SolveStats stats;

  bool feasible() const { return cost.has_value(); }
};

struct TcloseOptions {
  std::size_t oracle_max_n = 12;  // Bell(12) ~ 4.2M set partitions
  std::size_t exact_max_n = 20;
  // Sub-tables smaller than this are solved by direct enumeration.
  std::size_t base_case_threshold = 10;
  // Cache OPT per row subset. Results are identical; the recursion just
  // stops re-solving subsets it has already seen.
  bool subset_cache = false;
};

// Independent oracle: enumerates every set partition of the row indices in
// canonical restricted-growth-string order and returns the cheapest one whose
// groups are all t-close to the whole table. Ties go to the partition seen
// first in enumeration order.
SolveResult brute_force_tclose(const Table& table, const Rational& t,
                               const SaSpace& space,
                               const TcloseOptions& opts = {});

// Exact recursive solver: OPT(M) over (a) all subsets T1 of M with
// |M|/4 <= |T1| <= 3|M|/4 and (b) all subsets with |T1| > |M|/2, plus the
// single-group candidate; sub-tables below the base-case threshold are
// solved by enumeration. Closeness is always measured against the original
// full table's distribution.
SolveResult exact_tclose(const Table& table, const Rational& t,
                         const SaSpace& space, const TcloseOptions& opts = {});

namespace detail {

// Per-subset generalization costs for all 2^n row subsets.
// cost[mask] = |mask| * (number of QI columns not uniform over mask).
struct SubsetCostTable {
  std::size_t n = 0;
  std::vector<long long> cost;
};
SubsetCostTable compute_subset_costs(const Table& table);

// Per-subset t-closeness against the whole table.
std::vector<bool> compute_subset_closeness(const Table& table,
                                           const Rational& t,
                                           const SaSpace& space);

// Restricted-growth-string search over partitions of `rows` with a per-group
// feasibility predicate applied at the leaves and cost-based pruning.
// min_group_size filters k-anonymity-style constraints cheaply.
struct RgsSearchResult {
  std::optional<Partition> partition;
  long long cost = 0;
  SolveStats stats;
};
RgsSearchResult rgs_min_cost_partition(
    const std::vector<std::size_t>& rows, const SubsetCostTable& costs,
    const std::vector<bool>* group_ok, std::size_t min_group_size);

}  // namespace detail

}  // namespace anon
