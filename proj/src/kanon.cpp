#include "anon/kanon.hpp"

#include <algorithm>
#include <stdexcept>

namespace anon {

namespace {

void check_k(const KAnonInstance& inst) {
  if (inst.k < 1) throw std::invalid_argument("k must be at least 1");
}

Partition finish(std::vector<Group> groups) {
  for (Group& g : groups) std::sort(g.rows.begin(), g.rows.end());
  std::sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) {
    return a.rows.front() < b.rows.front();
  });
  Partition p;
  p.groups = std::move(groups);
  return p;
}

}  // namespace

KAnonApproxCase classify_kanon_case(const Table& table, long long k) {
  std::vector<Group> classes = equivalence_classes(table, /*qi_only=*/true);
  long long small_total = 0;
  long long slack = 0;  // sum over large classes of (size - k)
  bool any_small = false;
  for (const Group& c : classes) {
    long long sz = static_cast<long long>(c.rows.size());
    if (sz < k) {
      any_small = true;
      small_total += sz;
    } else {
      slack += sz - k;
    }
  }
  if (!any_small) return KAnonApproxCase::AllLarge;
  if (small_total >= k) return KAnonApproxCase::MergeSmall;
  if (small_total + slack >= k) return KAnonApproxCase::CarveOut;
  return KAnonApproxCase::MergeNext;
}

SolveResult approx_k_anonymity(const KAnonInstance& inst) {
  check_k(inst);
  const long long n = static_cast<long long>(inst.table.num_rows());
  SolveResult res;
  if (inst.k > n) return res;  // infeasible

  // Classes come back sorted ascending by (size, smallest row index), the
  // order C_1..C_R of the three cases.
  std::vector<Group> classes =
      equivalence_classes(inst.table, /*qi_only=*/true);
  std::size_t L = 0;  // number of classes smaller than k
  long long small_total = 0;
  while (L < classes.size() &&
         static_cast<long long>(classes[L].rows.size()) < inst.k) {
    small_total += static_cast<long long>(classes[L].rows.size());
    ++L;
  }

  std::vector<Group> groups;
  if (L == 0) {
    groups = classes;
  } else if (small_total >= inst.k) {
    // Case 1: the small classes together already reach size k.
    Group merged;
    for (std::size_t i = 0; i < L; ++i) {
      merged.rows.insert(merged.rows.end(), classes[i].rows.begin(),
                         classes[i].rows.end());
    }
    groups.push_back(std::move(merged));
    for (std::size_t i = L; i < classes.size(); ++i) {
      groups.push_back(classes[i]);
    }
  } else {
    long long slack = 0;
    for (std::size_t i = L; i < classes.size(); ++i) {
      slack += static_cast<long long>(classes[i].rows.size()) - inst.k;
    }
    if (small_total + slack >= inst.k) {
      // Case 2: carve C'_i out of the large classes, largest first, keeping
      // each remnant at size >= k, until the merged group reaches exactly k.
      Group merged;
      for (std::size_t i = 0; i < L; ++i) {
        merged.rows.insert(merged.rows.end(), classes[i].rows.begin(),
                           classes[i].rows.end());
      }
      long long need = inst.k - small_total;
      for (std::size_t i = classes.size(); need > 0 && i-- > L;) {
        long long take = std::min(
            need, static_cast<long long>(classes[i].rows.size()) - inst.k);
        if (take <= 0) continue;
        merged.rows.insert(merged.rows.end(), classes[i].rows.begin(),
                           classes[i].rows.begin() + take);
        classes[i].rows.erase(classes[i].rows.begin(),
                              classes[i].rows.begin() + take);
        need -= take;
      }
      groups.push_back(std::move(merged));
      for (std::size_t i = L; i < classes.size(); ++i) {
        groups.push_back(classes[i]);
      }
    } else {
      // Case 3: not enough slack; absorb C_{L+1} into the small classes.
      Group merged;
      for (std::size_t i = 0; i <= L; ++i) {
        merged.rows.insert(merged.rows.end(), classes[i].rows.begin(),
                           classes[i].rows.end());
      }
      groups.push_back(std::move(merged));
      for (std::size_t i = L + 1; i < classes.size(); ++i) {
        groups.push_back(classes[i]);
      }
    }
  }

  res.partition = finish(std::move(groups));
  res.cost = partition_cost(inst.table, *res.partition);
  return res;
}

SolveResult brute_force_k_anonymity(const KAnonInstance& inst,
                                    const TcloseOptions& opts) {
  check_k(inst);
  const std::size_t n = inst.table.num_rows();
  if (n > opts.oracle_max_n) {
    throw std::invalid_argument("table too large for the brute-force oracle");
  }
  SolveResult res;
  if (inst.k > static_cast<long long>(n)) return res;
  detail::SubsetCostTable costs = detail::compute_subset_costs(inst.table);
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  detail::RgsSearchResult r = detail::rgs_min_cost_partition(
      rows, costs, nullptr, static_cast<std::size_t>(inst.k));
  res.stats = r.stats;
  if (r.partition) {
    res.partition = std::move(r.partition);
    res.cost = r.cost;
  }
  return res;
}

TcloseInstance reduce_kanon_to_tclose(const KAnonInstance& inst) {
  check_k(inst);
  const std::size_t n = inst.table.num_rows();
  std::vector<Record> records = inst.table.records();
  for (std::size_t i = 0; i < n; ++i) {
    records[i].sa = std::to_string(i + 1);
  }
  TcloseInstance out{
      Table(inst.table.num_qi(), std::move(records), inst.table.qi_names(),
            inst.table.sa_name()),
      Rational(static_cast<long long>(n) - inst.k,
               static_cast<long long>(n)),
      equal_distance_space(n)};
  return out;
}

SolveResult exact_k_anonymity(const KAnonInstance& inst,
                              const TcloseOptions& opts) {
  check_k(inst);
  SolveResult res;
  if (inst.k > static_cast<long long>(inst.table.num_rows())) return res;
  TcloseInstance red = reduce_kanon_to_tclose(inst);
  return exact_tclose(red.table, red.t, red.space, opts);
}

}  // namespace anon
