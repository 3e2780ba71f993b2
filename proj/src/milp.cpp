#include "anon/milp.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

namespace anon {

namespace {

std::string sanitize(const std::string& value) {
  std::string out;
  for (char c : value) {
    if (c == '*') {
      out.push_back('S');
    } else if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(c);
    } else {
      out.push_back('_');
    }
  }
  return out;
}

std::string join_vector(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back('.');
    out += sanitize(parts[i]);
  }
  return out;
}

// Enumeration of the FPT model's combinatorial structure: distinct occupied
// (QI-vector, SA) pairs, their 2^m generalizing patterns, and all patterns
// that generalize at least one occupied row.
struct MilpStructure {
  struct Occupied {
    std::vector<std::string> v;
    std::string s;
    std::size_t sa_idx = 0;
    std::vector<std::size_t> rows;
  };
  std::vector<Occupied> occupied;
  std::vector<std::vector<std::string>> vstars;        // sorted patterns
  std::vector<long long> vstar_cost;                   // number of stars
  std::vector<std::vector<std::size_t>> generalizers;  // per occupied pair
  std::vector<long long> sa_totals;                    // whole-table SA counts
};

MilpStructure compute_structure(const Table& table, const SaSpace& space) {
  const std::size_t m = table.num_qi();
  if (m > 16) {
    throw std::invalid_argument("too many QI columns for the FPT model");
  }
  MilpStructure st;
  std::map<std::pair<std::vector<std::string>, std::string>,
           std::vector<std::size_t>>
      occ;
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    occ[{table.record(r).qi, table.record(r).sa}].push_back(r);
  }
  std::set<std::vector<std::string>> patterns;
  for (const auto& [key, rows] : occ) {
    for (std::uint32_t bits = 0; bits < (std::uint32_t(1) << m); ++bits) {
      std::vector<std::string> vstar = key.first;
      for (std::size_t i = 0; i < m; ++i) {
        if (bits & (std::uint32_t(1) << i)) vstar[i] = kSuppressed;
      }
      patterns.insert(std::move(vstar));
    }
  }
  std::map<std::vector<std::string>, std::size_t> pattern_index;
  for (const auto& p : patterns) {
    pattern_index.emplace(p, st.vstars.size());
    long long stars = static_cast<long long>(
        std::count(p.begin(), p.end(), std::string(kSuppressed)));
    st.vstars.push_back(p);
    st.vstar_cost.push_back(stars);
  }
  for (const auto& [key, rows] : occ) {
    MilpStructure::Occupied o;
    o.v = key.first;
    o.s = key.second;
    o.sa_idx = space.index_of(o.s);
    o.rows = rows;
    std::vector<std::size_t> gens;
    for (std::uint32_t bits = 0; bits < (std::uint32_t(1) << m); ++bits) {
      std::vector<std::string> vstar = o.v;
      for (std::size_t i = 0; i < m; ++i) {
        if (bits & (std::uint32_t(1) << i)) vstar[i] = kSuppressed;
      }
      gens.push_back(pattern_index.at(vstar));
    }
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    st.generalizers.push_back(std::move(gens));
    st.occupied.push_back(std::move(o));
  }
  st.sa_totals.assign(space.size(), 0);
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    ++st.sa_totals[space.index_of(table.record(r).sa)];
  }
  return st;
}

// Multiplies a rational-coefficient row through by the LCM of the
// denominators, producing integer coefficients.
MilpConstraint normalize_row(
    const std::vector<std::pair<std::size_t, Rational>>& terms, Relation rel,
    const Rational& rhs) {
  BigInt scale = denominator(rhs);
  for (const auto& [idx, coef] : terms) {
    BigInt d = denominator(coef);
    scale = scale / gcd(scale, d) * d;
  }
  MilpConstraint out;
  out.rel = rel;
  out.rhs = numerator(rhs) * (scale / denominator(rhs));
  for (const auto& [idx, coef] : terms) {
    if (coef == 0) continue;
    out.terms.emplace_back(idx,
                           numerator(coef) * (scale / denominator(coef)));
  }
  return out;
}

unsigned long long compositions_count(unsigned long long r,
                                      unsigned long long k,
                                      unsigned long long cap) {
  // C(r + k - 1, k - 1), saturating at cap.
  unsigned long long result = 1;
  for (unsigned long long i = 1; i < k; ++i) {
    result = result * (r + i) / i;
    if (result > cap) return cap + 1;
  }
  return result;
}

}  // namespace

std::size_t MilpModel::variable_index(const std::string& name) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].name == name) return i;
  }
  throw std::invalid_argument("unknown variable: " + name);
}

MilpModel build_milp(const Table& table, const Rational& t,
                     const SaSpace& space) {
  MilpStructure st = compute_structure(table, space);
  const std::size_t s = space.size();
  MilpModel model;
  std::map<std::string, std::size_t> index;
  auto add_var = [&](std::string name, bool integral) {
    if (!index.emplace(name, model.variables.size()).second) {
      throw std::invalid_argument("variable name collision: " + name);
    }
    model.variables.push_back({std::move(name), integral});
    return model.variables.size() - 1;
  };

  // x(v*, v, s) integer variables and the Eq-(row-count) constraints.
  std::vector<std::vector<std::size_t>> x_vars(st.occupied.size());
  for (std::size_t o = 0; o < st.occupied.size(); ++o) {
    const auto& occ = st.occupied[o];
    for (std::size_t w : st.generalizers[o]) {
      std::string name = "x_" + join_vector(st.vstars[w]) + "_" +
                         join_vector(occ.v) + "_" + sanitize(occ.s);
      x_vars[o].push_back(add_var(std::move(name), true));
    }
  }
  // g(v*, i, j) continuous variables.
  std::vector<std::vector<std::size_t>> g_vars(st.vstars.size());
  for (std::size_t w = 0; w < st.vstars.size(); ++w) {
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = 0; j < s; ++j) {
        std::string name = "g_" + join_vector(st.vstars[w]) + "_" +
                           sanitize(space.sa_values[i]) + "_" +
                           sanitize(space.sa_values[j]);
        g_vars[w].push_back(add_var(std::move(name), false));
      }
    }
  }

  for (std::size_t o = 0; o < st.occupied.size(); ++o) {
    std::vector<std::pair<std::size_t, Rational>> terms;
    for (std::size_t xi : x_vars[o]) terms.emplace_back(xi, 1);
    model.constraints.push_back(normalize_row(
        terms, Relation::Eq,
        Rational(static_cast<long long>(st.occupied[o].rows.size()))));
  }

  const long long n = static_cast<long long>(table.num_rows());
  for (std::size_t w = 0; w < st.vstars.size(); ++w) {
    // x terms contributing to group G_{v*}, split by SA value.
    std::vector<std::vector<std::size_t>> x_by_sa(s);
    std::vector<std::size_t> x_all;
    for (std::size_t o = 0; o < st.occupied.size(); ++o) {
      for (std::size_t g = 0; g < st.generalizers[o].size(); ++g) {
        if (st.generalizers[o][g] == w) {
          x_by_sa[st.occupied[o].sa_idx].push_back(x_vars[o][g]);
          x_all.push_back(x_vars[o][g]);
        }
      }
    }
    // Row sums: sum_j g(v*,i,j) = sum_v x(v*,v,i).
    for (std::size_t i = 0; i < s; ++i) {
      std::vector<std::pair<std::size_t, Rational>> terms;
      for (std::size_t j = 0; j < s; ++j) {
        terms.emplace_back(g_vars[w][i * s + j], 1);
      }
      for (std::size_t xi : x_by_sa[i]) terms.emplace_back(xi, -1);
      model.constraints.push_back(normalize_row(terms, Relation::Eq, 0));
    }
    // Column sums scaled by n: n sum_i g(v*,i,j) = r_j sum x(v*,.,.).
    for (std::size_t j = 0; j < s; ++j) {
      std::vector<std::pair<std::size_t, Rational>> terms;
      for (std::size_t i = 0; i < s; ++i) {
        terms.emplace_back(g_vars[w][i * s + j], n);
      }
      for (std::size_t xi : x_all) {
        terms.emplace_back(xi, Rational(-st.sa_totals[j]));
      }
      model.constraints.push_back(normalize_row(terms, Relation::Eq, 0));
    }
    // Transport cost: sum d_ij g(v*,i,j) <= t sum x(v*,.,.).
    std::vector<std::pair<std::size_t, Rational>> terms;
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = 0; j < s; ++j) {
        terms.emplace_back(g_vars[w][i * s + j], space.dist[i][j]);
      }
    }
    for (std::size_t xi : x_all) terms.emplace_back(xi, -t);
    model.constraints.push_back(normalize_row(terms, Relation::Le, 0));
  }

  for (std::size_t o = 0; o < st.occupied.size(); ++o) {
    for (std::size_t g = 0; g < st.generalizers[o].size(); ++g) {
      model.objective.emplace_back(
          x_vars[o][g], BigInt(st.vstar_cost[st.generalizers[o][g]]));
    }
  }
  for (std::size_t w = 0; w < st.vstars.size(); ++w) {
    for (std::size_t gi : g_vars[w]) model.objective.emplace_back(gi, 0);
  }
  std::sort(model.objective.begin(), model.objective.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (model.constraints.empty()) {
    throw std::logic_error("built model has no constraints");
  }
  return model;
}

SolveResult solve_milp_small(const MilpModel& model, const Table& table,
                             const Rational& t, const SaSpace& space,
                             const MilpSolveOptions& opts) {
  MilpStructure st = compute_structure(table, space);
  // Guard: product over occupied pairs of C(r + K - 1, K - 1).
  unsigned long long assignments = 1;
  for (std::size_t o = 0; o < st.occupied.size(); ++o) {
    unsigned long long c = compositions_count(
        st.occupied[o].rows.size(), st.generalizers[o].size(),
        opts.max_assignments);
    if (assignments > opts.max_assignments / c) {
      throw std::invalid_argument(
          "too many integer assignments to enumerate; export the model as an "
          "LP file instead");
    }
    assignments *= c;
  }
  (void)model.variables.size();

  const std::size_t s = space.size();
  const std::size_t num_vstars = st.vstars.size();
  Group all_rows;
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    all_rows.rows.push_back(r);
  }
  DistributionVector table_dist = distribution(table, all_rows, space);

  std::map<std::vector<long long>, bool> close_memo;
  auto group_close = [&](const std::vector<long long>& counts,
                         long long total) {
    auto it = close_memo.find(counts);
    if (it == close_memo.end()) {
      DistributionVector gd;
      gd.mass.resize(s);
      for (std::size_t i = 0; i < s; ++i) {
        gd.mass[i] = Rational(counts[i], total);
      }
      it = close_memo.emplace(counts, emd_general(gd, table_dist, space) <= t)
               .first;
    }
    return it->second;
  };

  // DFS over compositions: for each occupied pair, distribute its rows
  // among its generalizing patterns.
  std::vector<std::vector<long long>> x(st.occupied.size());
  for (std::size_t o = 0; o < st.occupied.size(); ++o) {
    x[o].assign(st.generalizers[o].size(), 0);
  }
  std::vector<long long> vstar_total(num_vstars, 0);
  std::vector<std::vector<long long>> vstar_counts(
      num_vstars, std::vector<long long>(s, 0));
  long long partial = 0;
  bool have_best = false;
  long long best_cost = 0;
  std::vector<std::vector<long long>> best_x;
  SolveStats stats;

  auto leaf = [&]() {
    ++stats.nodes;
    for (std::size_t w = 0; w < num_vstars; ++w) {
      if (vstar_total[w] > 0 &&
          !group_close(vstar_counts[w], vstar_total[w])) {
        return;
      }
    }
    if (!have_best || partial < best_cost) {
      have_best = true;
      best_cost = partial;
      best_x = x;
    }
  };

  auto assign = [&](auto&& self, std::size_t o, std::size_t g,
                    long long remaining) -> void {
    if (have_best && partial >= best_cost) return;
    if (o == st.occupied.size()) {
      leaf();
      return;
    }
    const auto& gens = st.generalizers[o];
    if (g + 1 == gens.size()) {
      const std::size_t w = gens[g];
      x[o][g] = remaining;
      vstar_total[w] += remaining;
      vstar_counts[w][st.occupied[o].sa_idx] += remaining;
      partial += remaining * st.vstar_cost[w];
      self(self, o + 1, 0,
           o + 1 < st.occupied.size()
               ? static_cast<long long>(st.occupied[o + 1].rows.size())
               : 0);
      partial -= remaining * st.vstar_cost[w];
      vstar_counts[w][st.occupied[o].sa_idx] -= remaining;
      vstar_total[w] -= remaining;
      x[o][g] = 0;
      return;
    }
    const std::size_t w = gens[g];
    for (long long c = 0; c <= remaining; ++c) {
      ++stats.subsets;
      x[o][g] = c;
      vstar_total[w] += c;
      vstar_counts[w][st.occupied[o].sa_idx] += c;
      partial += c * st.vstar_cost[w];
      self(self, o, g + 1, remaining - c);
      partial -= c * st.vstar_cost[w];
      vstar_counts[w][st.occupied[o].sa_idx] -= c;
      vstar_total[w] -= c;
      x[o][g] = 0;
    }
  };
  if (!st.occupied.empty()) {
    assign(assign, 0, 0,
           static_cast<long long>(st.occupied[0].rows.size()));
  }
  if (!have_best) {
    // Routing every row to the all-star pattern is always feasible.
    throw std::logic_error("MILP enumeration found no feasible assignment");
  }

  // Reconstruct the partition: rows of each occupied pair are handed to its
  // patterns in pattern order, lowest row indices first.
  std::vector<std::vector<std::size_t>> group_rows(num_vstars);
  for (std::size_t o = 0; o < st.occupied.size(); ++o) {
    std::size_t next = 0;
    for (std::size_t g = 0; g < st.generalizers[o].size(); ++g) {
      for (long long c = 0; c < best_x[o][g]; ++c) {
        group_rows[st.generalizers[o][g]].push_back(
            st.occupied[o].rows[next++]);
      }
    }
  }
  Partition partition;
  for (std::size_t w = 0; w < num_vstars; ++w) {
    if (group_rows[w].empty()) continue;
    Group g;
    g.rows = group_rows[w];
    std::sort(g.rows.begin(), g.rows.end());
    partition.groups.push_back(std::move(g));
  }
  std::sort(partition.groups.begin(), partition.groups.end(),
            [](const Group& a, const Group& b) {
              return a.rows.front() < b.rows.front();
            });

  SolveResult res;
  res.partition = std::move(partition);
  res.cost = best_cost;
  res.stats = stats;
  return res;
}

std::string export_milp(const MilpModel& model) {
  if (model.constraints.empty()) {
    throw std::invalid_argument("refusing to export a model with no "
                                "constraints");
  }
  std::ostringstream out;
  out << "Minimize\n obj:";
  bool first = true;
  for (const auto& [idx, coef] : model.objective) {
    if (first) {
      out << " " << coef.str() << " " << model.variables[idx].name;
      first = false;
    } else if (coef < 0) {
      out << " - " << BigInt(-coef).str() << " " << model.variables[idx].name;
    } else {
      out << " + " << coef.str() << " " << model.variables[idx].name;
    }
  }
  out << "\nSubject To\n";
  for (std::size_t c = 0; c < model.constraints.size(); ++c) {
    const MilpConstraint& row = model.constraints[c];
    out << " c" << (c + 1) << ":";
    first = true;
    for (const auto& [idx, coef] : row.terms) {
      if (first) {
        out << " " << coef.str() << " " << model.variables[idx].name;
        first = false;
      } else if (coef < 0) {
        out << " - " << BigInt(-coef).str() << " "
            << model.variables[idx].name;
      } else {
        out << " + " << coef.str() << " " << model.variables[idx].name;
      }
    }
    switch (row.rel) {
      case Relation::Eq: out << " = "; break;
      case Relation::Le: out << " <= "; break;
      case Relation::Ge: out << " >= "; break;
    }
    out << row.rhs.str() << "\n";
  }
  out << "Bounds\n";  // all variables default to [0, +inf)
  out << "Generals\n";
  for (const MilpVariable& v : model.variables) {
    if (v.integral) out << " " << v.name << "\n";
  }
  out << "End\n";
  return out.str();
}

MilpModel parse_milp(const std::string& text) {
  std::vector<std::string> tokens;
  {
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
  }
  std::size_t pos = 0;
  auto expect = [&](const std::string& word) {
    if (pos >= tokens.size() || tokens[pos] != word) {
      throw std::invalid_argument("LP parse error: expected " + word);
    }
    ++pos;
  };
  auto is_relation = [](const std::string& tok) {
    return tok == "=" || tok == "<=" || tok == ">=";
  };

  MilpModel model;
  std::map<std::string, std::size_t> index;
  auto var_of = [&](const std::string& name, bool create) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    if (!create) throw std::invalid_argument("LP parse: unknown " + name);
    index.emplace(name, model.variables.size());
    model.variables.push_back({name, false});
    return model.variables.size() - 1;
  };
  // Reads "coef name [+|- coef name]..." and stops at a relation or section.
  auto parse_terms = [&](bool create_vars) {
    std::vector<std::pair<std::size_t, BigInt>> terms;
    bool negative = false;
    while (pos < tokens.size()) {
      const std::string& tok = tokens[pos];
      if (is_relation(tok) || tok == "Subject" || tok == "Bounds" ||
          tok == "Generals" || tok == "End") {
        break;
      }
      if (tok == "+") {
        negative = false;
        ++pos;
        continue;
      }
      if (tok == "-") {
        negative = true;
        ++pos;
        continue;
      }
      if (pos + 1 >= tokens.size()) {
        throw std::invalid_argument("LP parse: dangling term");
      }
      BigInt coef(tok);
      if (negative) coef = -coef;
      negative = false;
      terms.emplace_back(var_of(tokens[pos + 1], create_vars), coef);
      pos += 2;
    }
    return terms;
  };

  expect("Minimize");
  expect("obj:");
  model.objective = parse_terms(true);
  expect("Subject");
  expect("To");
  while (pos < tokens.size() && tokens[pos] != "Bounds" &&
         tokens[pos] != "Generals" && tokens[pos] != "End") {
    if (tokens[pos].back() == ':') ++pos;  // constraint label
    MilpConstraint row;
    row.terms = parse_terms(false);
    if (pos >= tokens.size() || !is_relation(tokens[pos])) {
      throw std::invalid_argument("LP parse: missing relation");
    }
    row.rel = tokens[pos] == "=" ? Relation::Eq
              : tokens[pos] == "<=" ? Relation::Le
                                    : Relation::Ge;
    ++pos;
    if (pos >= tokens.size()) {
      throw std::invalid_argument("LP parse: missing rhs");
    }
    row.rhs = BigInt(tokens[pos]);
    ++pos;
    model.constraints.push_back(std::move(row));
  }
  if (pos < tokens.size() && tokens[pos] == "Bounds") ++pos;
  if (pos < tokens.size() && tokens[pos] == "Generals") {
    ++pos;
    while (pos < tokens.size() && tokens[pos] != "End") {
      model.variables[var_of(tokens[pos], false)].integral = true;
      ++pos;
    }
  }
  expect("End");
  return model;
}

}  // namespace anon
