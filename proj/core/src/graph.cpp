#include "synchrony/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "synchrony/rng.hpp"

namespace synchrony {

std::size_t Graph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nb : adj) twice += nb.size();
  return twice / 2;
}

double Graph::mean_degree() const {
  if (n == 0) return 0.0;
  return 2.0 * static_cast<double>(edge_count()) / static_cast<double>(n);
}

bool Graph::has_edge(int u, int v) const {
  const auto& nb = adj[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

bool Graph::check_connected() const {
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  int reached = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        queue.push_back(v);
      }
    }
  }
  return reached == n;
}

void NetworkSpec::validate() const {
  if (n < 3) throw ValidationError("network: n must be >= 3");
  if (d < 2 || d >= n) throw InvalidDegree("network: d must satisfy 2 <= d < n");
  if ((static_cast<long long>(n) * d) % 2 != 0)
    throw InvalidDegree("network: n*d must be even (odd d needs even n)");
  if (p_rewire < 0.0 || p_rewire > 1.0)
    throw ValidationError("network: p_rewire must lie in [0, 1]");
}

namespace {

Graph from_adj_sets(int n, const std::vector<std::set<int>>& sets, GraphKind kind) {
  Graph g;
  g.n = n;
  g.kind = kind;
  g.adj.resize(n);
  for (int i = 0; i < n; ++i) g.adj[i].assign(sets[i].begin(), sets[i].end());
  g.connected = g.check_connected();
  return g;
}

// Base lattice edges as (i, far) pairs in a fixed iteration order. For odd
// degree the half-offset pass adds the antipodal chord once per pair.
std::vector<std::pair<int, int>> lattice_edges(int n, int d) {
  std::vector<std::pair<int, int>> edges;
  for (int off = 1; off <= d / 2; ++off)
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + off) % n);
  if (d % 2 == 1)
    for (int i = 0; i < n / 2; ++i) edges.emplace_back(i, i + n / 2);
  return edges;
}

}  // namespace

Graph make_regular_ring(int n, int k) {
  if (k % 2 != 0 || k >= n || k < 2)
    throw InvalidDegree("regular ring: k must be even and 2 <= k < n");
  std::vector<std::set<int>> sets(n);
  for (const auto& [u, v] : lattice_edges(n, k)) {
    sets[u].insert(v);
    sets[v].insert(u);
  }
  return from_adj_sets(n, sets, GraphKind::RegularRing);
}

Graph make_small_world(const NetworkSpec& spec) {
  spec.validate();
  const int n = spec.n;
  constexpr int kMaxAttempts = 100;

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(derive_seed(spec.seed, 0x5757u, static_cast<std::uint64_t>(attempt)));
    std::vector<std::set<int>> sets(n);
    for (const auto& [u, v] : lattice_edges(n, spec.d)) {
      sets[u].insert(v);
      sets[v].insert(u);
    }
    // Rewire the far endpoint of each lattice edge with probability p.
    for (const auto& [u, v] : lattice_edges(n, spec.d)) {
      if (!rng.bernoulli(spec.p_rewire)) continue;
      if (!sets[u].count(v)) continue;          // already moved by an earlier pass
      if (sets[v].size() <= 1) continue;        // never strand a vertex
      int w = -1;
      for (int tries = 0; tries < 64; ++tries) {
        const int cand = rng.below(n);
        if (cand == u || sets[u].count(cand)) continue;
        w = cand;
        break;
      }
      if (w < 0) continue;  // dense neighborhood, keep the lattice edge
      sets[u].erase(v);
      sets[v].erase(u);
      sets[u].insert(w);
      sets[w].insert(u);
    }
    Graph g = from_adj_sets(n, sets, GraphKind::SmallWorld);
    if (g.connected) return g;
  }
  throw ConstructionFailed("small world: no connected graph after 100 attempts");
}

Graph parse_edge_list(const std::string& text, const std::string& origin) {
  std::vector<std::pair<int, int>> edges;
  int max_node = -1;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool saw_any = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    long long u, v;
    if (!(ls >> u)) continue;  // blank line
    if (!(ls >> v))
      throw ParseError(origin + ":" + std::to_string(line_no) + ": expected 'u v' pair");
    std::string extra;
    if (ls >> extra)
      throw ParseError(origin + ":" + std::to_string(line_no) + ": trailing tokens");
    if (u < 0 || v < 0)
      throw ParseError(origin + ":" + std::to_string(line_no) + ": negative node id");
    if (u == v)
      throw SelfLoopError(origin + ":" + std::to_string(line_no) + ": self-loop at node " +
                          std::to_string(u));
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    max_node = std::max({max_node, static_cast<int>(u), static_cast<int>(v)});
    saw_any = true;
  }
  if (!saw_any) throw ParseError(origin + ": no edges found");

  const int n = max_node + 1;
  std::vector<std::set<int>> sets(n);
  for (const auto& [u, v] : edges) {
    if (sets[u].count(v))
      throw DuplicateEdgeError(origin + ": duplicate edge " + std::to_string(u) + " " +
                               std::to_string(v));
    sets[u].insert(v);
    sets[v].insert(u);
  }
  return from_adj_sets(n, sets, GraphKind::Custom);
}

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_edge_list(buf.str(), path);
}

std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  for (int u = 0; u < g.n; ++u)
    for (int v : g.adj[u])
      if (u < v) out << u << " " << v << "\n";
  return out.str();
}

void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << to_edge_list(g);
}

}  // namespace synchrony
