#include "anon/reductions.hpp"

#include "anon/kanon.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace anon {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

long long floor_div(const BigInt& a, const BigInt& b) {
  // a, b > 0 here.
  return static_cast<long long>(a / b);
}

long long ceil_div(const BigInt& a, const BigInt& b) {
  return static_cast<long long>((a + b - 1) / b);
}

std::vector<std::string> edge_names(std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t j = 1; j <= m; ++j) names.push_back("e" + std::to_string(j));
  return names;
}

long long choose2(long long x) { return x * (x - 1) / 2; }

}  // namespace

Graph parse_graph(const std::string& text) {
  std::istringstream in(text);
  Graph g;
  std::size_t m = 0;
  if (!(in >> g.n >> m)) throw std::invalid_argument("bad graph header");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t u = 0, v = 0;
    if (!(in >> u >> v)) throw std::invalid_argument("missing graph edge");
    if (u < 1 || v < 1 || u > g.n || v > g.n) {
      throw std::invalid_argument("graph edge endpoint out of range");
    }
    if (u == v) throw std::invalid_argument("self-loop in graph");
    const std::pair<std::size_t, std::size_t> e{std::min(u, v) - 1,
                                                std::max(u, v) - 1};
    if (!seen.insert(e).second) {
      throw std::invalid_argument("duplicate graph edge");
    }
    g.edges.push_back(e);
  }
  return g;
}

Graph load_graph(const std::string& path) { return parse_graph(read_file(path)); }

std::string graph_to_text(const Graph& g) {
  std::ostringstream out;
  out << g.n << " " << g.edges.size() << "\n";
  for (const auto& [u, v] : g.edges) out << u + 1 << " " << v + 1 << "\n";
  return out.str();
}

ThreeDimSystem parse_3dm(const std::string& text) {
  std::istringstream in(text);
  ThreeDimSystem sys;
  std::size_t m = 0;
  if (!(in >> sys.n >> m)) throw std::invalid_argument("bad 3dm header");
  std::set<std::array<std::size_t, 3>> seen;
  for (std::size_t i = 0; i < m; ++i) {
    std::array<std::size_t, 3> e{};
    if (!(in >> e[0] >> e[1] >> e[2])) {
      throw std::invalid_argument("missing 3dm tuple");
    }
    for (std::size_t x : e) {
      if (x < 1 || x > sys.n) {
        throw std::invalid_argument("3dm tuple element out of range");
      }
    }
    if (!seen.insert(e).second) {
      throw std::invalid_argument("duplicate 3dm tuple");
    }
    sys.tuples.push_back(e);
  }
  return sys;
}

ThreeDimSystem load_3dm(const std::string& path) {
  return parse_3dm(read_file(path));
}

std::string threedim_to_text(const ThreeDimSystem& sys) {
  std::ostringstream out;
  out << sys.n << " " << sys.tuples.size() << "\n";
  for (const auto& e : sys.tuples) {
    out << e[0] << " " << e[1] << " " << e[2] << "\n";
  }
  return out.str();
}

std::string metadata_to_text(const std::map<std::string, std::string>& meta) {
  std::ostringstream out;
  for (const auto& [k, v] : meta) out << k << "=" << v << "\n";
  return out.str();
}

std::map<std::string, std::string> parse_metadata(const std::string& text) {
  std::map<std::string, std::string> meta;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("bad metadata line: " + line);
    }
    meta[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return meta;
}

GeneratedInstance gen_bisection_table(const Graph& g) {
  if (g.n < 4 || g.n % 2 != 0) {
    throw std::invalid_argument("bisection table needs even n >= 4");
  }
  std::vector<Record> records;
  for (std::size_t i = 0; i < g.n; ++i) {
    Record r;
    for (const auto& [u, v] : g.edges) {
      r.qi.push_back(u == i || v == i ? std::to_string(i + 1) : "0");
    }
    r.sa = "d";  // k-anonymity ignores the SA; keep the table type uniform
    records.push_back(std::move(r));
  }
  GeneratedInstance out{Table(g.edges.size(), std::move(records),
                              edge_names(g.edges.size()), "sa"),
                        std::nullopt,
                        {{"k", std::to_string(g.n / 2)}}};
  return out;
}

GeneratedInstance gen_scaled_anonymity_table(const Table& t0,
                                             const Rational& c) {
  if (c <= 0 || c > Rational(1, 3)) {
    throw std::invalid_argument("scaled-anonymity needs 0 < c <= 1/3");
  }
  const std::size_t n = t0.num_rows();
  const std::size_t m = t0.num_qi();
  // n' = floor(n / 2c)
  const long long np =
      floor_div(BigInt(n) * denominator(c), 2 * numerator(c));
  const std::size_t pad_cols = n * m;

  std::vector<std::string> names = t0.qi_names();
  for (std::size_t j = 1; j <= pad_cols; ++j) {
    names.push_back("p" + std::to_string(j));
  }
  std::vector<Record> records;
  for (const Record& r0 : t0.records()) {
    Record r = r0;
    r.qi.insert(r.qi.end(), pad_cols, kPad1);
    records.push_back(std::move(r));
  }
  for (long long i = n; i < np; ++i) {
    Record r;
    r.qi.assign(m + pad_cols, kPad2);
    r.sa = kPad2;
    records.push_back(std::move(r));
  }
  const long long k = ceil_div(numerator(c) * np, denominator(c));
  GeneratedInstance out{Table(m + pad_cols, std::move(records),
                              std::move(names), t0.sa_name()),
                        std::nullopt,
                        {{"k", std::to_string(k)}}};
  return out;
}

GeneratedInstance gen_halfclique_table(const Graph& g, const Rational& c) {
  if (c <= Rational(1, 3) || c >= Rational(1, 2)) {
    throw std::invalid_argument("halfclique needs 1/3 < c < 1/2");
  }
  if (g.n < 4 || g.n % 2 != 0) {
    throw std::invalid_argument("halfclique table needs even n >= 4");
  }
  const long long np =
      floor_div(BigInt(g.n) * denominator(c), 2 * numerator(c));
  if (np - static_cast<long long>(g.n) < 1) {
    throw std::invalid_argument("c leaves no new rows (floor(n/2c) <= n)");
  }
  const std::size_t m = g.edges.size();
  std::vector<Record> records;
  for (std::size_t i = 0; i < g.n; ++i) {
    Record r;
    for (const auto& [u, v] : g.edges) {
      r.qi.push_back(u == i || v == i ? std::to_string(i + 1) : "0");
    }
    r.sa = "d";
    records.push_back(std::move(r));
  }
  for (long long i = g.n; i < np; ++i) {
    Record r;
    r.qi.assign(m, std::to_string(i + 1));
    r.sa = "d";
    records.push_back(std::move(r));
  }
  const long long k = ceil_div(numerator(c) * np, denominator(c));
  const long long half = static_cast<long long>(g.n) / 2;
  const long long threshold =
      np * static_cast<long long>(m) - half * choose2(half);
  GeneratedInstance out{
      Table(m, std::move(records), edge_names(m), "sa"),
      std::nullopt,
      {{"k", std::to_string(k)}, {"threshold", std::to_string(threshold)}}};
  return out;
}

Graph clique_to_halfclique(const Graph& g, std::size_t k) {
  if (k > g.n) throw std::invalid_argument("k exceeds vertex count");
  Graph out = g;
  if (2 * k >= g.n) {
    out.n = 2 * k;  // add 2k - n isolated vertices
  } else {
    // Add n - 2k vertices connected to each other and to all originals.
    out.n = 2 * (g.n - k);
    for (std::size_t u = g.n; u < out.n; ++u) {
      for (std::size_t v = 0; v < u; ++v) out.edges.emplace_back(v, u);
    }
  }
  return out;
}

namespace {

// Shared row block of the two 3DM reductions: 3n old rows over m columns,
// cell (i,j) = "i" unless element v_i occurs in tuple e_j.
std::vector<Record> threedim_old_rows(const ThreeDimSystem& sys) {
  const std::size_t n = sys.n;
  std::vector<Record> records;
  for (std::size_t i = 0; i < 3 * n; ++i) {
    Record r;
    for (const auto& e : sys.tuples) {
      bool member = (i < n && e[0] == i + 1) ||
                    (i >= n && i < 2 * n && e[1] == i - n + 1) ||
                    (i >= 2 * n && e[2] == i - 2 * n + 1);
      r.qi.push_back(member ? "0" : std::to_string(i + 1));
    }
    r.sa = std::to_string(i / n + 1);  // 1, 2, 3 for X, Y, Z
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace

GeneratedInstance gen_3dm_tclose3(const ThreeDimSystem& sys) {
  const std::size_t m = sys.tuples.size();
  const long long threshold =
      3 * static_cast<long long>(sys.n) * (static_cast<long long>(m) - 1);
  GeneratedInstance out{
      Table(m, threedim_old_rows(sys), edge_names(m), "sa"),
      equal_distance_space({"1", "2", "3"}),
      {{"threshold", std::to_string(threshold)}, {"t", "1/4"}}};
  return out;
}

GeneratedInstance gen_3dm_tclose4(const ThreeDimSystem& sys,
                                  const Rational& t) {
  if (t < Rational(1, 3) || t >= Rational(1, 2)) {
    throw std::invalid_argument("gen_3dm_tclose4 needs 1/3 <= t < 1/2");
  }
  const std::size_t m = sys.tuples.size();
  const Rational np_exact = Rational(3 * static_cast<long long>(sys.n)) /
                            (Rational(1) - 2 * t);
  if (denominator(np_exact) != 1) {
    // Suggest the nearest larger integral row count's threshold.
    const long long np =
        ceil_div(numerator(np_exact), denominator(np_exact));
    const Rational suggestion(np - 3 * static_cast<long long>(sys.n),
                              2 * np);
    throw std::invalid_argument(
        "3n/(1-2t) is not an integer; try t=" + format_rational(suggestion));
  }
  const long long np = static_cast<long long>(numerator(np_exact));
  std::vector<Record> records = threedim_old_rows(sys);
  for (long long i = 3 * static_cast<long long>(sys.n); i < np; ++i) {
    Record r;
    r.qi.assign(m, std::to_string(i + 1));
    r.sa = "4";
    records.push_back(std::move(r));
  }
  const long long threshold =
      3 * static_cast<long long>(sys.n) * (static_cast<long long>(m) - 1);
  GeneratedInstance out{
      Table(m, std::move(records), edge_names(m), "sa"),
      four_point_space(),
      {{"threshold", std::to_string(threshold)}, {"t", format_rational(t)}}};
  return out;
}

long long min_bisection_cut(const Graph& g) {
  if (g.n < 2 || g.n % 2 != 0) {
    throw std::invalid_argument("bisection needs even n >= 2");
  }
  if (g.n > 30) throw std::invalid_argument("graph too large");
  long long best = -1;
  const std::uint32_t full = (1u << g.n) - 1;
  for (std::uint32_t mask = 1; mask <= full; mask += 2) {  // vertex 0 in V1
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != g.n / 2) {
      continue;
    }
    long long cut = 0;
    for (const auto& [u, v] : g.edges) {
      if (((mask >> u) & 1) != ((mask >> v) & 1)) ++cut;
    }
    if (best < 0 || cut < best) best = cut;
  }
  return best;
}

bool has_clique_of_size(const Graph& g, std::size_t k) {
  if (k == 0) return true;
  if (k > g.n) return false;
  if (g.n > 30) throw std::invalid_argument("graph too large");
  std::vector<std::uint32_t> adj(g.n, 0);
  for (const auto& [u, v] : g.edges) {
    adj[u] |= 1u << v;
    adj[v] |= 1u << u;
  }
  const std::uint32_t full = (1u << g.n) - 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    bool ok = true;
    for (std::size_t u = 0; ok && u < g.n; ++u) {
      if ((mask >> u) & 1) ok = (adj[u] & mask) == (mask & ~(1u << u));
    }
    if (ok) return true;
  }
  return false;
}

bool has_perfect_matching(const ThreeDimSystem& sys) {
  const std::size_t n = sys.n;
  std::vector<bool> used_y(n + 1, false), used_z(n + 1, false);
  // Group tuples by X element; every X element must be covered exactly once.
  std::vector<std::vector<const std::array<std::size_t, 3>*>> by_x(n + 1);
  for (const auto& e : sys.tuples) by_x[e[0]].push_back(&e);
  auto dfs = [&](auto&& self, std::size_t x) -> bool {
    if (x > n) return true;
    for (const auto* e : by_x[x]) {
      if (used_y[(*e)[1]] || used_z[(*e)[2]]) continue;
      used_y[(*e)[1]] = used_z[(*e)[2]] = true;
      if (self(self, x + 1)) return true;
      used_y[(*e)[1]] = used_z[(*e)[2]] = false;
    }
    return false;
  };
  return dfs(dfs, 1);
}

bool verify_bisection_identity(const Graph& g, const TcloseOptions& opts) {
  GeneratedInstance inst = gen_bisection_table(g);
  const long long opt_cut = min_bisection_cut(g);
  SolveResult res = brute_force_k_anonymity(
      {inst.table, static_cast<long long>(g.n) / 2}, opts);
  if (!res.feasible()) return false;
  return *res.cost == static_cast<long long>(g.n) *
                          (static_cast<long long>(g.edges.size()) + opt_cut) /
                          2;
}

bool verify_scaled_identity(const Table& t0, const Rational& c,
                            const TcloseOptions& opts) {
  GeneratedInstance inst = gen_scaled_anonymity_table(t0, c);
  SolveResult lhs = brute_force_k_anonymity(
      {t0, static_cast<long long>(t0.num_rows()) / 2}, opts);
  SolveResult rhs = brute_force_k_anonymity(
      {inst.table, std::stoll(inst.metadata.at("k"))}, opts);
  return lhs.feasible() && rhs.feasible() && *lhs.cost == *rhs.cost;
}

bool verify_halfclique(const Graph& g, const Rational& c,
                       const TcloseOptions& opts) {
  GeneratedInstance inst = gen_halfclique_table(g, c);
  SolveResult res = brute_force_k_anonymity(
      {inst.table, std::stoll(inst.metadata.at("k"))}, opts);
  if (!res.feasible()) return false;
  const bool clique = has_clique_of_size(g, g.n / 2);
  return clique == (*res.cost <= std::stoll(inst.metadata.at("threshold")));
}

bool verify_3dm_tclose3(const ThreeDimSystem& sys, const TcloseOptions& opts) {
  GeneratedInstance inst = gen_3dm_tclose3(sys);
  SolveResult res =
      brute_force_tclose(inst.table, parse_rational(inst.metadata.at("t")),
                         *inst.space, opts);
  if (!res.feasible()) return false;
  const bool yes = has_perfect_matching(sys);
  return yes == (*res.cost <= std::stoll(inst.metadata.at("threshold")));
}

bool verify_3dm_tclose4(const ThreeDimSystem& sys, const Rational& t,
                        const TcloseOptions& opts) {
  GeneratedInstance inst = gen_3dm_tclose4(sys, t);
  TcloseOptions cached = opts;
  cached.subset_cache = true;  // n' rows need the full subset DP
  SolveResult res = exact_tclose(inst.table, t, *inst.space, cached);
  if (!res.feasible()) return false;
  const bool yes = has_perfect_matching(sys);
  return yes == (*res.cost <= std::stoll(inst.metadata.at("threshold")));
}

bool verify_lemma1(std::size_t n, long long k) {
  if (n < 1 || n > 14) throw std::invalid_argument("n out of range");
  if (k < 1 || k > static_cast<long long>(n)) {
    throw std::invalid_argument("k out of range");
  }
  std::vector<Record> records(n, Record{{"x"}, "0"});
  Table base(1, std::move(records), {"q"}, "sa");
  TcloseInstance red =
      reduce_kanon_to_tclose({base, k});
  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    Group g;
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1) g.rows.push_back(i);
    }
    const bool close = check_closeness(red.table, g, red.t, red.space);
    if (close != (g.rows.size() >= static_cast<std::size_t>(k))) return false;
  }
  return true;
}

}  // namespace anon
