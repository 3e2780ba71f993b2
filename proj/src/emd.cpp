#include "anon/emd.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace anon {

namespace {

void check_distribution(const DistributionVector& x) {
  Rational total = 0;
  for (const Rational& v : x.mass) {
    if (v < 0) throw std::invalid_argument("negative distribution mass");
    total += v;
  }
  if (total != 1) throw std::invalid_argument("distribution does not sum to 1");
}

}  // namespace

std::size_t SaSpace::index_of(const std::string& value) const {
  for (std::size_t i = 0; i < sa_values.size(); ++i) {
    if (sa_values[i] == value) return i;
  }
  throw std::invalid_argument("unknown SA value: " + value);
}

SaSpace equal_distance_space(std::size_t s) {
  std::vector<std::string> labels;
  labels.reserve(s);
  for (std::size_t i = 1; i <= s; ++i) labels.push_back(std::to_string(i));
  return equal_distance_space(std::move(labels));
}

SaSpace equal_distance_space(std::vector<std::string> labels) {
  SaSpace space;
  const std::size_t s = labels.size();
  space.sa_values = std::move(labels);
  space.dist.assign(s, std::vector<Rational>(s, 1));
  for (std::size_t i = 0; i < s; ++i) space.dist[i][i] = 0;
  return space;
}

SaSpace four_point_space() {
  SaSpace space = equal_distance_space(4);
  for (std::size_t i = 0; i < 3; ++i) {
    space.dist[3][i] = Rational(1, 2);
    space.dist[i][3] = Rational(1, 2);
  }
  return space;
}

bool validate_space(const SaSpace& space) {
  const std::size_t s = space.size();
  if (space.dist.size() != s) return false;
  for (const auto& row : space.dist) {
    if (row.size() != s) return false;
  }
  Rational max_dist = 0;
  for (std::size_t i = 0; i < s; ++i) {
    if (space.dist[i][i] != 0) return false;
    for (std::size_t j = 0; j < s; ++j) {
      if (space.dist[i][j] < 0 || space.dist[i][j] > 1) return false;
      if (space.dist[i][j] != space.dist[j][i]) return false;
      max_dist = std::max(max_dist, space.dist[i][j]);
      for (std::size_t k = 0; k < s; ++k) {
        if (space.dist[i][j] + space.dist[j][k] < space.dist[i][k]) {
          return false;
        }
      }
    }
  }
  return max_dist == 1;
}

DistributionVector distribution(const Table& table, const Group& group,
                                const SaSpace& space) {
  if (group.rows.empty()) throw std::invalid_argument("empty group");
  DistributionVector out;
  out.mass.assign(space.size(), 0);
  const Rational unit(1, static_cast<long long>(group.rows.size()));
  for (std::size_t r : group.rows) {
    out.mass[space.index_of(table.record(r).sa)] += unit;
  }
  return out;
}

Rational emd_equal_distance(const DistributionVector& x,
                            const DistributionVector& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("distribution dimension mismatch");
  }
  check_distribution(x);
  check_distribution(y);
  Rational sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Rational diff = x.mass[i] - y.mass[i];
    if (diff > 0) sum += diff;
  }
  return sum;
}

Rational emd_general(const DistributionVector& x, const DistributionVector& y,
                     const SaSpace& space) {
  const std::size_t s = space.size();
  if (x.size() != s || y.size() != s) {
    throw std::invalid_argument("distribution dimension mismatch");
  }
  check_distribution(x);
  check_distribution(y);

  // Successive shortest augmenting paths on the residual network of the
  // transportation problem. Nodes: super-source, s sources, s sinks,
  // super-sink. All arithmetic exact.
  struct Arc {
    std::size_t to;
    std::size_t rev;
    Rational cap;
    Rational cost;
  };
  const std::size_t source = 2 * s;
  const std::size_t sink = 2 * s + 1;
  const std::size_t num_nodes = 2 * s + 2;
  std::vector<std::vector<Arc>> adj(num_nodes);
  auto add_arc = [&](std::size_t u, std::size_t v, const Rational& cap,
                     const Rational& cost) {
    adj[u].push_back({v, adj[v].size(), cap, cost});
    adj[v].push_back({u, adj[u].size() - 1, 0, -cost});
  };
  Rational remaining = 0;
  for (std::size_t i = 0; i < s; ++i) {
    add_arc(source, i, x.mass[i], 0);
    add_arc(s + i, sink, y.mass[i], 0);
    remaining += x.mass[i];
    for (std::size_t j = 0; j < s; ++j) {
      add_arc(i, s + j, 1, space.dist[i][j]);
    }
  }

  Rational total_cost = 0;
  while (remaining > 0) {
    // Bellman-Ford shortest path in the residual network.
    const Rational inf(2 * static_cast<long long>(s) + 4);
    std::vector<Rational> dist(num_nodes, inf);
    std::vector<std::pair<std::size_t, std::size_t>> prev(
        num_nodes, {num_nodes, 0});  // (node, arc index)
    dist[source] = 0;
    for (std::size_t round = 0; round + 1 < num_nodes; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u < num_nodes; ++u) {
        if (dist[u] == inf) continue;
        for (std::size_t a = 0; a < adj[u].size(); ++a) {
          const Arc& arc = adj[u][a];
          if (arc.cap == 0) continue;
          if (dist[u] + arc.cost < dist[arc.to]) {
            dist[arc.to] = dist[u] + arc.cost;
            prev[arc.to] = {u, a};
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (dist[sink] == inf) {
      throw std::logic_error("transportation network disconnected");
    }
    Rational push = remaining;
    for (std::size_t v = sink; v != source;) {
      auto [u, a] = prev[v];
      push = std::min(push, adj[u][a].cap);
      v = u;
    }
    for (std::size_t v = sink; v != source;) {
      auto [u, a] = prev[v];
      adj[u][a].cap -= push;
      adj[adj[u][a].to][adj[u][a].rev].cap += push;
      v = u;
    }
    total_cost += push * dist[sink];
    remaining -= push;
  }
  return total_cost;
}

Rational emd_four_point(const DistributionVector& a,
                        const DistributionVector& b) {
  if (a.size() != 4 || b.size() != 4) {
    throw std::invalid_argument("emd_four_point requires dimension 4");
  }
  check_distribution(a);
  check_distribution(b);
  const DistributionVector& hi = (a.mass[3] >= b.mass[3]) ? a : b;
  const DistributionVector& lo = (a.mass[3] >= b.mass[3]) ? b : a;
  Rational result = (hi.mass[3] - lo.mass[3]) / 2;
  for (std::size_t i = 0; i < 3; ++i) {
    if (hi.mass[i] >= lo.mass[i]) result += hi.mass[i] - lo.mass[i];
  }
  return result;
}

bool check_closeness(const Table& table, const Group& group, const Rational& t,
                     const SaSpace& space) {
  if (t < 0 || t > 1) throw std::invalid_argument("t must be in [0,1]");
  Group all;
  all.rows.resize(table.num_rows());
  for (std::size_t i = 0; i < table.num_rows(); ++i) all.rows[i] = i;
  DistributionVector gd = distribution(table, group, space);
  DistributionVector td = distribution(table, all, space);
  return emd_general(gd, td, space) <= t;
}

SaSpace parse_space(const std::string& text) {
  std::istringstream in(text);
  std::string first;
  if (!(in >> first)) throw std::invalid_argument("empty space file");
  if (first == "equal") {
    std::size_t s = 0;
    if (!(in >> s) || s == 0) {
      throw std::invalid_argument("bad equal-space size");
    }
    return equal_distance_space(s);
  }
  std::size_t s = std::stoul(first);
  SaSpace space;
  space.sa_values.resize(s);
  for (std::size_t i = 0; i < s; ++i) {
    if (!(in >> space.sa_values[i])) {
      throw std::invalid_argument("missing SA labels");
    }
  }
  space.dist.assign(s, std::vector<Rational>(s));
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      std::string tok;
      if (!(in >> tok)) throw std::invalid_argument("missing matrix entry");
      space.dist[i][j] = parse_rational(tok);
    }
  }
  if (!validate_space(space)) {
    throw std::invalid_argument("space violates metric axioms");
  }
  return space;
}

SaSpace load_space(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open space file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_space(buf.str());
}

std::string space_to_text(const SaSpace& space) {
  std::ostringstream out;
  out << space.size() << "\n";
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (i) out << " ";
    out << space.sa_values[i];
  }
  out << "\n";
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t j = 0; j < space.size(); ++j) {
      if (j) out << " ";
      out << format_rational(space.dist[i][j]);
    }
    out << "\n";
  }
  return out.str();
}

DistributionVector parse_distribution(const std::string& text) {
  DistributionVector out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ',')) {
    out.mass.push_back(parse_rational(cur));
  }
  check_distribution(out);
  return out;
}

}  // namespace anon
