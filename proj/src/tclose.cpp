#include "anon/tclose.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>

namespace anon {

namespace detail {

namespace {

constexpr long long kInf = (1LL << 62);
constexpr std::size_t kMaxSubsetBits = 22;

std::vector<std::size_t> mask_rows(std::uint32_t mask) {
  std::vector<std::size_t> rows;
  for (std::uint32_t m = mask; m; m &= m - 1) {
    rows.push_back(static_cast<std::size_t>(std::countr_zero(m)));
  }
  return rows;
}

Group mask_group(std::uint32_t mask) { return Group{mask_rows(mask)}; }

bool is_equal_distance(const SaSpace& space) {
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t j = 0; j < space.size(); ++j) {
      if (i != j && space.dist[i][j] != 1) return false;
    }
  }
  return space.size() >= 2;
}

}  // namespace

SubsetCostTable compute_subset_costs(const Table& table) {
  const std::size_t n = table.num_rows();
  const std::size_t m = table.num_qi();
  if (n > kMaxSubsetBits) {
    throw std::invalid_argument("table too large for subset enumeration");
  }
  const std::size_t words = (m + 63) / 64;
  // Bit i of diff[a][b] set iff rows a and b differ in QI column i.
  std::vector<std::vector<std::uint64_t>> diff(
      n * n, std::vector<std::uint64_t>(words, 0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      auto& d = diff[a * n + b];
      for (std::size_t i = 0; i < m; ++i) {
        if (table.record(a).qi[i] != table.record(b).qi[i]) {
          d[i / 64] |= 1ULL << (i % 64);
        }
      }
      diff[b * n + a] = d;
    }
  }

  const std::size_t total = std::size_t(1) << n;
  std::vector<std::uint64_t> supp(total * words, 0);
  SubsetCostTable out;
  out.n = n;
  out.cost.assign(total, 0);
  // Suppressed columns of S = suppressed columns of S minus its lowest row,
  // plus the columns where that row disagrees with the remainder.
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    if ((mask & (mask - 1)) == 0) continue;  // singleton, nothing suppressed
    const std::uint32_t low = mask & -mask;
    const std::uint32_t rest = mask ^ low;
    const std::size_t a = static_cast<std::size_t>(std::countr_zero(low));
    const std::size_t b = static_cast<std::size_t>(std::countr_zero(rest));
    const auto& d = diff[a * n + b];
    long long suppressed = 0;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t bits = supp[std::size_t(rest) * words + w] | d[w];
      supp[std::size_t(mask) * words + w] = bits;
      suppressed += std::popcount(bits);
    }
    out.cost[mask] = static_cast<long long>(std::popcount(mask)) * suppressed;
  }
  return out;
}

std::vector<bool> compute_subset_closeness(const Table& table,
                                           const Rational& t,
                                           const SaSpace& space) {
  const std::size_t n = table.num_rows();
  if (n > kMaxSubsetBits) {
    throw std::invalid_argument("table too large for subset enumeration");
  }
  const std::size_t s = space.size();
  std::vector<std::size_t> sa_index(n);
  for (std::size_t r = 0; r < n; ++r) {
    sa_index[r] = space.index_of(table.record(r).sa);
  }
  std::vector<long long> total_counts(s, 0);
  for (std::size_t r = 0; r < n; ++r) ++total_counts[sa_index[r]];

  const bool equal_space = is_equal_distance(space);
  const BigInt t_num = numerator(t);
  const BigInt t_den = denominator(t);

  DistributionVector table_dist;
  table_dist.mass.resize(s);
  for (std::size_t i = 0; i < s; ++i) {
    table_dist.mass[i] = Rational(total_counts[i], static_cast<long long>(n));
  }

  std::map<std::vector<long long>, bool> memo;
  const std::size_t total = std::size_t(1) << n;
  std::vector<bool> close(total, false);
  std::vector<long long> counts(s);
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    std::fill(counts.begin(), counts.end(), 0);
    long long size = 0;
    for (std::uint32_t m = mask; m; m &= m - 1) {
      ++counts[sa_index[std::countr_zero(m)]];
      ++size;
    }
    if (equal_space) {
      // Total variation: sum of positive parts of counts/size - total/n,
      // scaled to integers: sum(max(0, c_i*n - C_i*size)) <= t * n * size.
      long long excess = 0;
      for (std::size_t i = 0; i < s; ++i) {
        long long d = counts[i] * static_cast<long long>(n) -
                      total_counts[i] * size;
        if (d > 0) excess += d;
      }
      close[mask] =
          BigInt(excess) * t_den <= t_num * static_cast<long long>(n) * size;
    } else {
      auto it = memo.find(counts);
      if (it == memo.end()) {
        DistributionVector gd;
        gd.mass.resize(s);
        for (std::size_t i = 0; i < s; ++i) {
          gd.mass[i] = Rational(counts[i], size);
        }
        bool ok = emd_general(gd, table_dist, space) <= t;
        it = memo.emplace(counts, ok).first;
      }
      close[mask] = it->second;
    }
  }
  return close;
}

RgsSearchResult rgs_min_cost_partition(
    const std::vector<std::size_t>& rows, const SubsetCostTable& costs,
    const std::vector<bool>* group_ok, std::size_t min_group_size) {
  RgsSearchResult res;
  const std::size_t k = rows.size();
  std::vector<std::uint32_t> blocks;
  std::vector<std::size_t> block_sizes;
  long long partial = 0;
  long long deficit = 0;  // total rows still needed to reach min_group_size
  bool have_best = false;
  long long best_cost = 0;
  std::vector<std::uint32_t> best_blocks;

  auto dfs = [&](auto&& self, std::size_t i) -> void {
    ++res.stats.nodes;
    if (have_best && partial >= best_cost) return;
    const long long remaining = static_cast<long long>(k - i);
    if (deficit > remaining) return;  // some group can never reach min size
    if (i == k) {
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (block_sizes[b] < min_group_size) return;
        if (group_ok && !(*group_ok)[blocks[b]]) return;
      }
      have_best = true;
      best_cost = partial;
      best_blocks = blocks;
      return;
    }
    const std::uint32_t bit = std::uint32_t(1) << rows[i];
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      ++res.stats.subsets;
      const std::uint32_t old_mask = blocks[b];
      const long long delta = costs.cost[old_mask | bit] - costs.cost[old_mask];
      blocks[b] |= bit;
      ++block_sizes[b];
      partial += delta;
      if (block_sizes[b] <= min_group_size) {
        deficit -= 1;  // this row reduced the block's shortfall
      }
      self(self, i + 1);
      if (block_sizes[b] <= min_group_size) deficit += 1;
      partial -= delta;
      --block_sizes[b];
      blocks[b] = old_mask;
    }
    ++res.stats.subsets;
    blocks.push_back(bit);
    block_sizes.push_back(1);
    deficit += static_cast<long long>(min_group_size) - 1;
    self(self, i + 1);
    deficit -= static_cast<long long>(min_group_size) - 1;
    blocks.pop_back();
    block_sizes.pop_back();
  };
  dfs(dfs, 0);

  if (have_best) {
    Partition p;
    for (std::uint32_t mask : best_blocks) p.groups.push_back(mask_group(mask));
    res.partition = std::move(p);
    res.cost = best_cost;
  }
  return res;
}

namespace {

// Lexicographic order on partitions with groups sorted by smallest row.
bool partition_less(const Partition& a, const Partition& b) {
  for (std::size_t i = 0; i < std::min(a.groups.size(), b.groups.size());
       ++i) {
    if (a.groups[i].rows != b.groups[i].rows) {
      return a.groups[i].rows < b.groups[i].rows;
    }
  }
  return a.groups.size() < b.groups.size();
}

void sort_groups(Partition& p) {
  std::sort(p.groups.begin(), p.groups.end(),
            [](const Group& x, const Group& y) {
              return x.rows.front() < y.rows.front();
            });
}

struct OptResult {
  long long cost = kInf;
  Partition partition;
};

class ExactSolver {
 public:
  ExactSolver(const SubsetCostTable& costs, const std::vector<bool>& close,
              const TcloseOptions& opts, SolveStats& stats)
      : costs_(costs), close_(close), opts_(opts), stats_(stats) {}

  OptResult solve(std::uint32_t mask) { return opt(mask); }

 private:
  OptResult opt(std::uint32_t mask) {
    ++stats_.nodes;
    const std::size_t sz = static_cast<std::size_t>(std::popcount(mask));
    if (sz < opts_.base_case_threshold) {
      auto base = rgs_min_cost_partition(mask_rows(mask), costs_, &close_, 1);
      stats_.nodes += base.stats.nodes;
      OptResult res;
      if (base.partition) {
        res.cost = base.cost;
        res.partition = std::move(*base.partition);
        sort_groups(res.partition);
      }
      return res;
    }
    OptResult best;
    if (close_[mask]) {
      best.cost = costs_.cost[mask];
      best.partition.groups.push_back(mask_group(mask));
    }
    const std::uint32_t low = mask & -mask;
    for (std::uint32_t sub = (mask - 1) & mask; sub; sub = (sub - 1) & mask) {
      const std::size_t k = static_cast<std::size_t>(std::popcount(sub));
      const bool balanced =
          4 * k >= sz && 4 * k <= 3 * sz && (sub & low) != 0;
      const bool majority = 2 * k > sz;
      if (!balanced && !majority) continue;
      ++stats_.subsets;
      OptResult left = opt(sub);
      if (left.cost >= kInf) continue;
      OptResult right = opt(mask ^ sub);
      if (right.cost >= kInf) continue;
      long long combined = left.cost + right.cost;
      if (combined > best.cost) continue;
      Partition merged = std::move(left.partition);
      for (Group& g : right.partition.groups) {
        merged.groups.push_back(std::move(g));
      }
      sort_groups(merged);
      if (combined < best.cost ||
          (combined == best.cost && partition_less(merged, best.partition))) {
        best.cost = combined;
        best.partition = std::move(merged);
      }
    }
    return best;
  }

  const SubsetCostTable& costs_;
  const std::vector<bool>& close_;
  const TcloseOptions& opts_;
  SolveStats& stats_;
};

OptResult solve_with_cache(const SubsetCostTable& costs,
                           const std::vector<bool>& close,
                           SolveStats& stats) {
  const std::size_t total = std::size_t(1) << costs.n;
  std::vector<long long> opt(total, kInf);
  std::vector<std::uint32_t> split(total, 0);  // 0 = single group
  opt[0] = 0;
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    ++stats.nodes;
    long long best = close[mask] ? costs.cost[mask] : kInf;
    std::uint32_t best_split = 0;
    const std::uint32_t low = mask & -mask;
    for (std::uint32_t sub = (mask - 1) & mask; sub; sub = (sub - 1) & mask) {
      if (!(sub & low)) continue;
      ++stats.subsets;
      const long long a = opt[sub];
      if (a >= kInf) continue;
      const long long b = opt[mask ^ sub];
      if (b >= kInf) continue;
      if (a + b < best) {
        best = a + b;
        best_split = sub;
      }
    }
    opt[mask] = best;
    split[mask] = best_split;
  }

  OptResult res;
  const std::uint32_t full = static_cast<std::uint32_t>(total - 1);
  res.cost = opt[full];
  if (res.cost >= kInf) return res;
  auto expand = [&](auto&& self, std::uint32_t mask) -> void {
    if (split[mask] == 0) {
      res.partition.groups.push_back(mask_group(mask));
      return;
    }
    self(self, split[mask]);
    self(self, mask ^ split[mask]);
  };
  expand(expand, full);
  sort_groups(res.partition);
  return res;
}

}  // namespace

}  // namespace detail

SolveResult brute_force_tclose(const Table& table, const Rational& t,
                               const SaSpace& space,
                               const TcloseOptions& opts) {
  if (table.num_rows() > opts.oracle_max_n) {
    throw std::invalid_argument(
        "table exceeds the brute-force oracle size limit");
  }
  auto costs = detail::compute_subset_costs(table);
  auto close = detail::compute_subset_closeness(table, t, space);
  std::vector<std::size_t> rows(table.num_rows());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  auto rgs = detail::rgs_min_cost_partition(rows, costs, &close, 1);
  if (!rgs.partition) {
    // The whole table is 0-close to itself, so this cannot happen.
    throw std::logic_error("t-closeness instance reported infeasible");
  }
  SolveResult res;
  res.partition = std::move(rgs.partition);
  res.cost = rgs.cost;
  res.stats = rgs.stats;
  return res;
}

SolveResult exact_tclose(const Table& table, const Rational& t,
                         const SaSpace& space, const TcloseOptions& opts) {
  if (table.num_rows() > opts.exact_max_n) {
    throw std::invalid_argument("table exceeds the exact solver size limit");
  }
  auto costs = detail::compute_subset_costs(table);
  auto close = detail::compute_subset_closeness(table, t, space);
  SolveResult res;
  detail::OptResult opt;
  if (opts.subset_cache) {
    opt = detail::solve_with_cache(costs, close, res.stats);
  } else {
    detail::ExactSolver solver(costs, close, opts, res.stats);
    opt = solver.solve(
        static_cast<std::uint32_t>((std::size_t(1) << table.num_rows()) - 1));
  }
  if (opt.cost >= (1LL << 62)) {
    throw std::logic_error("t-closeness instance reported infeasible");
  }
  res.partition = std::move(opt.partition);
  res.cost = opt.cost;
  return res;
}

}  // namespace anon
