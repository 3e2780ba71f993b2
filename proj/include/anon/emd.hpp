#pragma once

#include "anon/rational.hpp"
#include "anon/table.hpp"

#include <string>
#include <vector>

namespace anon {

// A normalized metric over SA values: d(i,i)=0, symmetric, triangle
// inequality, maximum pairwise distance exactly 1.
struct SaSpace {
  std::vector<std::string> sa_values;       // labels, indices 0..s-1
  std::vector<std::vector<Rational>> dist;  // s x s

  std::size_t size() const { return sa_values.size(); }
  std::size_t index_of(const std::string& value) const;  // throws if unknown
};

// Exact-rational probability vector over a space's SA values.
struct DistributionVector {
  std::vector<Rational> mass;  // nonnegative, sums to 1

  std::size_t size() const { return mass.size(); }
};

// All distinct values at distance 1; labels default to "1".."s".
SaSpace equal_distance_space(std::size_t s);
SaSpace equal_distance_space(std::vector<std::string> labels);

// The four-point metric with d(i,j)=1 on {1,2,3} and d(4,.)=1/2.
SaSpace four_point_space();

bool validate_space(const SaSpace& space);

DistributionVector distribution(const Table& table, const Group& group,
                                const SaSpace& space);

// Total variation: (1/2) sum |x_i - y_i|. EMD in the equal-distance space.
Rational emd_equal_distance(const DistributionVector& x,
                            const DistributionVector& y);

// Exact optimum of the transportation LP over the given ground metric,
// solved by successive shortest augmenting paths in rational arithmetic.
Rational emd_general(const DistributionVector& x, const DistributionVector& y,
                     const SaSpace& space);

// Closed form for the four-point metric: with a4 >= b4 (swap otherwise),
// (1/2)(a4 - b4) + sum_{i in {1,2,3}: a_i >= b_i} (a_i - b_i).
Rational emd_four_point(const DistributionVector& a,
                        const DistributionVector& b);

// EMD(P(group), P(table)) <= t, compared exactly.
bool check_closeness(const Table& table, const Group& group, const Rational& t,
                     const SaSpace& space);

// Metric-space spec file: line 1 `equal <s>` or an integer s; matrix form
// then has a label line and s rows of s rationals.
SaSpace parse_space(const std::string& text);
SaSpace load_space(const std::string& path);
std::string space_to_text(const SaSpace& space);

// Comma-separated rationals, e.g. "1/2,1/2,0".
DistributionVector parse_distribution(const std::string& text);

}  // namespace anon
