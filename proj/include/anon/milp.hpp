#pragma once

#include "anon/emd.hpp"
#include "anon/rational.hpp"
#include "anon/table.hpp"
#include "anon/tclose.hpp"

#include <map>
#include <string>
#include <vector>

namespace anon {

enum class Relation { Eq, Le, Ge };

struct MilpVariable {
  std::string name;
  bool integral = false;
  // Lower bound 0 for every variable; no upper bounds.
  bool operator==(const MilpVariable&) const = default;
};

struct MilpConstraint {
  std::vector<std::pair<std::size_t, BigInt>> terms;  // (variable, coefficient)
  Relation rel = Relation::Eq;
  BigInt rhs = 0;
  bool operator==(const MilpConstraint&) const = default;
};

// Mixed ILP with integer assignment variables x(v*,v,s) and continuous
// scaled-transportation variables g(v*,i,j). Constraints are normalized to
// integer coefficients at build time (each row scaled by the LCM of its
// coefficient denominators), so the model serializes exactly.
struct MilpModel {
  std::vector<MilpVariable> variables;
  std::vector<MilpConstraint> constraints;
  std::vector<std::pair<std::size_t, BigInt>> objective;  // minimize

  std::size_t variable_index(const std::string& name) const;
  bool operator==(const MilpModel&) const = default;
};

MilpModel build_milp(const Table& table, const Rational& t,
                     const SaSpace& space);

struct MilpSolveOptions {
  // Refuse when the number of integer assignments satisfying the row-count
  // constraints exceeds this.
  unsigned long long max_assignments = 10'000'000;
};

// Enumerates the integer assignments feasible for the row-count constraints;
// the continuous block for a group is feasible iff the group's SA
// distribution is within EMD t of the whole table's, which is decided
// exactly via the transportation solver.
SolveResult solve_milp_small(const MilpModel& model, const Table& table,
                             const Rational& t, const SaSpace& space,
                             const MilpSolveOptions& opts = {});

// LP text format (objective / subject-to / bounds / generals). Variable
// names are x_<v*>_<v>_<s> and g_<v*>_<i>_<j> with `*` encoded as `S`.
std::string export_milp(const MilpModel& model);
MilpModel parse_milp(const std::string& text);

}  // namespace anon
