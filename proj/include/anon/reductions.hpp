#pragma once

#include "anon/emd.hpp"
#include "anon/rational.hpp"
#include "anon/table.hpp"
#include "anon/tclose.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace anon {

// Simple undirected graph; vertices 0..n-1, edges stored with u < v,
// no self-loops or duplicates.
struct Graph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

// Text format: line 1 `n m`, then m lines `u v` (1-based).
Graph parse_graph(const std::string& text);
Graph load_graph(const std::string& path);
std::string graph_to_text(const Graph& g);

// 3-dimensional matching system: parts X, Y, Z of size n each, tuples
// (x, y, z) with 1-based part-local indices.
struct ThreeDimSystem {
  std::size_t n = 0;
  std::vector<std::array<std::size_t, 3>> tuples;
};

// Text format: line 1 `n m`, then m lines `x y z` (1-based).
ThreeDimSystem parse_3dm(const std::string& text);
ThreeDimSystem load_3dm(const std::string& path);
std::string threedim_to_text(const ThreeDimSystem& sys);

// A generated hardness instance: the table, the SA space when the target
// problem is t-closeness, and `key=value` metadata (threshold, k, t).
struct GeneratedInstance {
  Table table;
  std::optional<SaSpace> space;
  std::map<std::string, std::string> metadata;
};

std::string metadata_to_text(const std::map<std::string, std::string>& meta);
std::map<std::string, std::string> parse_metadata(const std::string& text);

// Vertex-row / edge-column table: cell (i,j) = "i" if v_i is an endpoint of
// e_j, else "0"; constant dummy SA. Target: (n/2)-anonymity.
GeneratedInstance gen_bisection_table(const Graph& g);

// Scales an (n/2)-anonymity instance to (c n')-anonymity by appending n*m
// pad columns and all-pad rows; n' = floor(n / 2c), 0 < c <= 1/3.
GeneratedInstance gen_scaled_anonymity_table(const Table& t0,
                                             const Rational& c);

// HalfClique instance: old rows as in the bisection table, new rows with
// all cells "i". Metadata carries the threshold n'm - (n/2) C(n/2, 2).
GeneratedInstance gen_halfclique_table(const Graph& g, const Rational& c);

// G' has a clique of size |V'|/2 iff g has a clique of size k.
Graph clique_to_halfclique(const Graph& g, std::size_t k);

// 3D-Matching to t-closeness, |Sigma_s| = 3, equal-distance space. Note the
// inverted cells: (i,j) = "i" if v_i is NOT in e_j. Threshold 3n(m-1).
GeneratedInstance gen_3dm_tclose3(const ThreeDimSystem& sys);

// 3D-Matching to t-closeness with the four-point space, 1/3 <= t < 1/2.
// Requires 3n/(1-2t) integral; rejects otherwise suggesting a nearby t.
GeneratedInstance gen_3dm_tclose4(const ThreeDimSystem& sys,
                                  const Rational& t);

// Brute-force helpers for the verifiers.
long long min_bisection_cut(const Graph& g);
bool has_clique_of_size(const Graph& g, std::size_t k);
bool has_perfect_matching(const ThreeDimSystem& sys);

// Identity verifiers: each brute-forces both sides of the corresponding
// cost identity / decision equivalence and reports whether it holds.
bool verify_bisection_identity(const Graph& g, const TcloseOptions& opts = {});
bool verify_scaled_identity(const Table& t0, const Rational& c,
                            const TcloseOptions& opts = {});
bool verify_halfclique(const Graph& g, const Rational& c,
                       const TcloseOptions& opts = {});
bool verify_3dm_tclose3(const ThreeDimSystem& sys,
                        const TcloseOptions& opts = {});
bool verify_3dm_tclose4(const ThreeDimSystem& sys, const Rational& t,
                        const TcloseOptions& opts = {});
// Group-level reduction property on an n-row instance: a group is
// (1 - k/n)-close iff its size is at least k, over all 2^n - 1 groups.
bool verify_lemma1(std::size_t n, long long k);

}  // namespace anon
