#pragma once

#include "anon/table.hpp"
#include "anon/tclose.hpp"

#include <string>
#include <vector>

namespace anon {

// Max SA multiplicity in the group is at most |group| / l, compared exactly.
bool is_l_diverse(const Table& table, const Group& group, long long l);

// Splits a 2-diverse group into sub-groups of size 2 or 3 with pairwise
// distinct SA values by repeatedly peeling one row of the most frequent SA
// and one of the second most frequent (lowest row index on ties).
Partition decompose_2diverse_group(const Table& table, const Group& group);

struct SimplexEdge {
  std::vector<std::size_t> vertices;  // 2 or 3 row indices, sorted
  long long cost = 0;
};

// Edges of sizes 2 and 3 between rows with pairwise distinct SA values,
// costed by suppress_group. Satisfies the simplex condition: each 3-edge's
// three sub-pairs exist and their cost sum is <= twice the triple's cost.
struct SimplexHypergraph {
  std::size_t n = 0;
  std::vector<SimplexEdge> edges;  // all 2-edges first, lexicographic order
};

SimplexHypergraph build_simplex_hypergraph(const Table& table);
bool verify_simplex_condition(const SimplexHypergraph& h);

// Exact optimal 2-diverse partition via minimum-cost perfect matching of the
// simplex hypergraph, solved by dynamic programming over row subsets.
// Infeasible iff the whole table is not itself 2-diverse.
SolveResult solve_2diversity(const Table& table,
                             const TcloseOptions& opts = {});

// Debug dump: lines `e v1,v2[,v3] cost`.
std::string hypergraph_to_text(const SimplexHypergraph& h);

}  // namespace anon
