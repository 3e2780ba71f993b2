#include "anon/ldiv.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace anon {

bool is_l_diverse(const Table& table, const Group& group, long long l) {
  if (l < 1) throw std::invalid_argument("l must be at least 1");
  if (group.rows.empty()) throw std::invalid_argument("empty group");
  std::map<std::string, long long> counts;
  for (std::size_t r : group.rows) ++counts[table.record(r).sa];
  long long max_count = 0;
  for (const auto& [sa, c] : counts) max_count = std::max(max_count, c);
  // max_count <= |group| / l, exactly.
  return max_count * l <= static_cast<long long>(group.rows.size());
}

Partition decompose_2diverse_group(const Table& table, const Group& group) {
  if (!is_l_diverse(table, group, 2)) {
    throw std::invalid_argument("group is not 2-diverse");
  }
  // remaining[sa] = rows with that SA, ascending.
  std::map<std::string, std::vector<std::size_t>> remaining;
  std::size_t left = group.rows.size();
  for (std::size_t r : group.rows) remaining[table.record(r).sa].push_back(r);

  // Picks the SA with the highest multiplicity, breaking ties by the lowest
  // remaining row index; `skip` excludes the first pick when choosing the
  // second.
  auto pick = [&](const std::string* skip) {
    const std::string* best = nullptr;
    for (const auto& [sa, rows] : remaining) {
      if (rows.empty() || (skip && sa == *skip)) continue;
      if (!best || rows.size() > remaining.at(*best).size() ||
          (rows.size() == remaining.at(*best).size() &&
           rows.front() < remaining.at(*best).front())) {
        best = &sa;
      }
    }
    return best;
  };

  Partition out;
  while (left > 3) {
    const std::string* first = pick(nullptr);
    const std::string* second = pick(first);
    if (!second) throw std::logic_error("2-diverse group with one SA value");
    Group pair;
    pair.rows = {remaining.at(*first).front(), remaining.at(*second).front()};
    remaining.at(*first).erase(remaining.at(*first).begin());
    remaining.at(*second).erase(remaining.at(*second).begin());
    std::sort(pair.rows.begin(), pair.rows.end());
    out.groups.push_back(std::move(pair));
    left -= 2;
  }
  Group rest;
  for (const auto& [sa, rows] : remaining) {
    if (rows.size() > 1) {
      // A leftover of size <= 3 with a repeated SA would contradict
      // 2-diversity of the peeled prefix plus remainder.
      throw std::logic_error("peeling left a repeated SA value");
    }
    rest.rows.insert(rest.rows.end(), rows.begin(), rows.end());
  }
  std::sort(rest.rows.begin(), rest.rows.end());
  out.groups.push_back(std::move(rest));
  std::sort(out.groups.begin(), out.groups.end(),
            [](const Group& a, const Group& b) {
              return a.rows.front() < b.rows.front();
            });
  return out;
}

SimplexHypergraph build_simplex_hypergraph(const Table& table) {
  const std::size_t n = table.num_rows();
  if (n < 2) throw std::invalid_argument("need at least 2 rows");
  SimplexHypergraph h;
  h.n = n;
  auto cost_of = [&](std::vector<std::size_t> rows) {
    Group g;
    g.rows = std::move(rows);
    return suppress_group(table, g).cost;
  };
  auto distinct = [&](std::size_t a, std::size_t b) {
    return table.record(a).sa != table.record(b).sa;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (distinct(i, j)) h.edges.push_back({{i, j}, cost_of({i, j})});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!distinct(i, j)) continue;
      for (std::size_t k = j + 1; k < n; ++k) {
        if (distinct(i, k) && distinct(j, k)) {
          h.edges.push_back({{i, j, k}, cost_of({i, j, k})});
        }
      }
    }
  }
  if (!verify_simplex_condition(h)) {
    throw std::logic_error("constructed hypergraph violates the simplex "
                           "condition");
  }
  return h;
}

bool verify_simplex_condition(const SimplexHypergraph& h) {
  std::map<std::pair<std::size_t, std::size_t>, long long> pair_cost;
  for (const SimplexEdge& e : h.edges) {
    if (e.vertices.size() == 2) {
      pair_cost[{e.vertices[0], e.vertices[1]}] = e.cost;
    }
  }
  for (const SimplexEdge& e : h.edges) {
    if (e.vertices.size() != 3) continue;
    long long sum = 0;
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = a + 1; b < 3; ++b) {
        auto it = pair_cost.find({e.vertices[a], e.vertices[b]});
        if (it == pair_cost.end()) return false;
        sum += it->second;
      }
    }
    if (sum > 2 * e.cost) return false;
  }
  return true;
}

SolveResult solve_2diversity(const Table& table, const TcloseOptions& opts) {
  const std::size_t n = table.num_rows();
  if (n > opts.exact_max_n) {
    throw std::invalid_argument("table too large for the 2-diversity solver");
  }
  SolveResult res;
  Group all;
  for (std::size_t i = 0; i < n; ++i) all.rows.push_back(i);
  if (!is_l_diverse(table, all, 2)) return res;  // infeasible

  detail::SubsetCostTable costs = detail::compute_subset_costs(table);
  std::vector<std::size_t> sa_idx(n);
  {
    std::vector<std::string> values = table.sa_values();
    for (std::size_t i = 0; i < n; ++i) {
      sa_idx[i] = static_cast<std::size_t>(
          std::find(values.begin(), values.end(), table.record(i).sa) -
          values.begin());
    }
  }

  const long long kInf = 1LL << 62;
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  std::vector<long long> dp(full + 1, kInf);
  std::vector<std::uint32_t> choice(full + 1, 0);
  dp[0] = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    ++res.stats.nodes;
    const std::uint32_t low = mask & (~mask + 1u);  // lowest set bit
    const std::size_t i = static_cast<std::size_t>(__builtin_ctz(mask));
    // Pairs first, then triples, each in ascending order: the first edge
    // achieving the minimum wins, giving the lexicographic tie-break.
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::uint32_t e = low | (1u << j);
      if ((mask & e) != e || sa_idx[i] == sa_idx[j]) continue;
      ++res.stats.subsets;
      if (dp[mask ^ e] == kInf) continue;
      long long cand = dp[mask ^ e] + costs.cost[e];
      if (cand < dp[mask]) {
        dp[mask] = cand;
        choice[mask] = e;
      }
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!(mask & (1u << j)) || sa_idx[i] == sa_idx[j]) continue;
      for (std::size_t k = j + 1; k < n; ++k) {
        if (!(mask & (1u << k)) || sa_idx[i] == sa_idx[k] ||
            sa_idx[j] == sa_idx[k]) {
          continue;
        }
        const std::uint32_t e = low | (1u << j) | (1u << k);
        ++res.stats.subsets;
        if (dp[mask ^ e] == kInf) continue;
        long long cand = dp[mask ^ e] + costs.cost[e];
        if (cand < dp[mask]) {
          dp[mask] = cand;
          choice[mask] = e;
        }
      }
    }
  }
  if (dp[full] == kInf) {
    // A 2-diverse table always decomposes into distinct-SA pairs/triples.
    throw std::logic_error("no perfect matching in a 2-diverse table");
  }

  Partition partition;
  for (std::uint32_t mask = full; mask;) {
    Group g;
    for (std::size_t i = 0; i < n; ++i) {
      if (choice[mask] & (1u << i)) g.rows.push_back(i);
    }
    mask ^= choice[mask];
    partition.groups.push_back(std::move(g));
  }
  std::sort(partition.groups.begin(), partition.groups.end(),
            [](const Group& a, const Group& b) {
              return a.rows.front() < b.rows.front();
            });
  res.partition = std::move(partition);
  res.cost = dp[full];
  return res;
}

std::string hypergraph_to_text(const SimplexHypergraph& h) {
  std::ostringstream out;
  for (const SimplexEdge& e : h.edges) {
    out << "e ";
    for (std::size_t i = 0; i < e.vertices.size(); ++i) {
      if (i) out << ",";
      out << e.vertices[i];
    }
    out << " " << e.cost << "\n";
  }
  return out.str();
}

}  // namespace anon
