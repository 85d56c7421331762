#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "synchrony/errors.hpp"

namespace synchrony {

enum class GraphKind { RegularRing, SmallWorld, Custom };

// Simple undirected graph: no self-loops, no duplicate edges, symmetric
// adjacency, neighbor lists kept sorted. Immutable once built; safe to share
// across threads.
struct Graph {
  int n = 0;
  std::vector<std::vector<int>> adj;
  GraphKind kind = GraphKind::Custom;
  bool connected = false;

  int degree(int v) const { return static_cast<int>(adj[v].size()); }
  std::size_t edge_count() const;
  double mean_degree() const;
  bool has_edge(int u, int v) const;

  // Recomputes connectivity by BFS; construction caches the result in
  // `connected` but audits can call this directly.
  bool check_connected() const;
};

struct NetworkSpec {
  int n = 0;
  int d = 0;            // mean degree target
  double p_rewire = 0;  // rewiring probability
  std::uint64_t seed = 0;

  // n >= 3, 2 <= d < n, n*d even (handshake), 0 <= p_rewire <= 1.
  // Odd d is realizable only for even n (antipodal chords complete the
  // half-offset ring).
  void validate() const;
};

// Circulant ring lattice: node i adjacent to i±1..i±k/2 (mod n).
// Requires k even and k < n.
Graph make_regular_ring(int n, int k);

// Watts-Strogatz style construction: ring lattice of degree spec.d, then
// every lattice edge is rewired with probability spec.p_rewire (far endpoint
// replaced by a uniform random node, avoiding self-loops, duplicates and
// stranded vertices). Regenerated until connected, at most 100 attempts.
// Deterministic for a fixed seed. Edge count n*d/2 is preserved exactly.
Graph make_small_world(const NetworkSpec& spec);

// Edge-list text format: one "u v" pair per line, 0-based, '#' comments
// allowed. Disconnected graphs load fine (flagged, not fatal); self-loops
// and duplicate edges are errors.
Graph load_edge_list(const std::string& path);
Graph parse_edge_list(const std::string& text, const std::string& origin = "<string>");
std::string to_edge_list(const Graph& g);
void save_edge_list(const Graph& g, const std::string& path);

}  // namespace synchrony
