#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "chromacomm/errors.hpp"
#include "chromacomm/party.hpp"
#include "chromacomm/prng.hpp"

namespace chromacomm {

// Undirected edge with 1-based endpoints, stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(int a, int b) {
  check_config(a != b, "make_edge: self loop");
  return a < b ? Edge{a, b} : Edge{b, a};
}

// Simple undirected graph on vertices 1..n.  Edges are deduplicated, sorted
// lexicographically, and mirrored into per-vertex adjacency lists.
class Graph {
 public:
  explicit Graph(int n, std::vector<Edge> edges = {}) : n_(n), edges_(std::move(edges)) {
    check_config(n_ >= 0, "Graph: negative vertex count");
    for (auto& e : edges_) {
      check_config(e.u != e.v, "Graph: self loop");
      if (e.u > e.v) std::swap(e.u, e.v);
      check_config(1 <= e.u && e.v <= n_, "Graph: endpoint out of range");
    }
    std::sort(edges_.begin(), edges_.end());
    check_config(std::adjacent_find(edges_.begin(), edges_.end()) == edges_.end(),
                 "Graph: duplicate edge");
    adj_.assign(static_cast<std::size_t>(n_) + 1, {});
    for (const auto& e : edges_) {
      adj_[static_cast<std::size_t>(e.u)].push_back(e.v);
      adj_[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
  }

  int vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  const std::vector<int>& neighbors(int v) const {
    check_config(1 <= v && v <= n_, "Graph: vertex out of range");
    return adj_[static_cast<std::size_t>(v)];
  }

  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

  int max_degree() const {
    int d = 0;
    for (int v = 1; v <= n_; ++v) d = std::max(d, degree(v));
    return d;
  }

  bool has_edge(int a, int b) const {
    const Edge e = make_edge(a, b);
    return std::binary_search(edges_.begin(), edges_.end(), e);
  }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

// Per-vertex colors in 1..q; 0 marks "not yet colored" and is only ever seen
// while a protocol is still running.
class Coloring {
 public:
  Coloring() = default;
  explicit Coloring(int n) : colors_(static_cast<std::size_t>(n) + 1, 0) {}

  static Coloring from_values(const std::vector<int>& values) {
    Coloring c(static_cast<int>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) c.colors_[i + 1] = values[i];
    return c;
  }

  int size() const { return static_cast<int>(colors_.empty() ? 0 : colors_.size() - 1); }

  int operator[](int v) const {
    check_config(1 <= v && v <= size(), "Coloring: vertex out of range");
    return colors_[static_cast<std::size_t>(v)];
  }

  void set(int v, int c) {
    check_config(1 <= v && v <= size(), "Coloring: vertex out of range");
    colors_[static_cast<std::size_t>(v)] = c;
  }

  bool fully_assigned() const {
    for (int v = 1; v <= size(); ++v)
      if (colors_[static_cast<std::size_t>(v)] == 0) return false;
    return true;
  }

  friend bool operator==(const Coloring&, const Coloring&) = default;

 private:
  std::vector<int> colors_;
};

// True iff every vertex has a color in 1..q and no edge is monochromatic.
inline bool verify_coloring(const Graph& g, const Coloring& c, int q) {
  if (c.size() != g.vertex_count()) return false;
  for (int v = 1; v <= g.vertex_count(); ++v)
    if (c[v] < 1 || c[v] > q) return false;
  for (const auto& e : g.edges())
    if (c[e.u] == c[e.v]) return false;
  return true;
}

// Positions of each vertex in a visiting order: pos[order[i]] == i.
inline std::vector<int> order_positions(const Graph& g, const std::vector<int>& order) {
  check_config(static_cast<int>(order.size()) == g.vertex_count(),
               "order_positions: order length != vertex count");
  std::vector<int> pos(static_cast<std::size_t>(g.vertex_count()) + 1, -1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const int v = order[i];
    check_config(1 <= v && v <= g.vertex_count() && pos[static_cast<std::size_t>(v)] == -1,
                 "order_positions: not a permutation");
    pos[static_cast<std::size_t>(v)] = static_cast<int>(i);
  }
  return pos;
}

// Number of neighbors of v that appear before v in the visiting order.
inline int left_degree(const Graph& g, const std::vector<int>& order, int v) {
  const auto pos = order_positions(g, order);
  int d = 0;
  for (int u : g.neighbors(v))
    if (pos[static_cast<std::size_t>(u)] < pos[static_cast<std::size_t>(v)]) ++d;
  return d;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

// Disjoint union of num_cliques copies of K_{delta+1}; clique j occupies
// vertices (j-1)*(delta+1)+1 .. j*(delta+1).  Max degree is exactly delta.
inline Graph gen_clique_union(int num_cliques, int delta) {
  check_config(num_cliques >= 1 && delta >= 0, "gen_clique_union: bad parameters");
  const int size = delta + 1;
  std::vector<Edge> edges;
  for (int j = 0; j < num_cliques; ++j) {
    const int base = j * size;
    for (int a = 1; a <= size; ++a)
      for (int b = a + 1; b <= size; ++b) edges.push_back(Edge{base + a, base + b});
  }
  return Graph(num_cliques * size, std::move(edges));
}

// G(n, edge_prob) conditioned on max degree <= delta: sample every pair
// independently, then repeatedly delete an edge chosen uniformly among those
// touching an over-degree vertex.  Deterministic for a fixed seed.
inline Graph gen_random_bounded(int n, int delta, double edge_prob, std::uint64_t seed) {
  check_config(n >= 1 && delta >= 0, "gen_random_bounded: bad parameters");
  check_config(edge_prob >= 0.0 && edge_prob <= 1.0, "gen_random_bounded: edge_prob outside [0,1]");
  SharedRandomStream rng(seed);
  std::vector<Edge> edges;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) {
      const double x = static_cast<double>(rng.next_u64() >> 11) * 0x1.0p-53;
      if (x < edge_prob) edges.push_back(Edge{u, v});
    }

  std::vector<int> deg(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& e : edges) {
    ++deg[static_cast<std::size_t>(e.u)];
    ++deg[static_cast<std::size_t>(e.v)];
  }
  // Degrees only drop during repair, so an edge that stops being a candidate
  // can never become one again; stale list entries are discarded on touch and
  // each pick is uniform over the edges still incident to an over-degree
  // vertex.
  auto over = [&](const Edge& e) {
    return deg[static_cast<std::size_t>(e.u)] > delta || deg[static_cast<std::size_t>(e.v)] > delta;
  };
  std::vector<std::size_t> candidates;
  std::vector<char> alive(edges.size(), 1);
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (over(edges[i])) candidates.push_back(i);
  while (!candidates.empty()) {
    const std::size_t slot =
        static_cast<std::size_t>(rng.uniform(static_cast<std::uint64_t>(candidates.size())));
    const std::size_t idx = candidates[slot];
    if (!alive[idx] || !over(edges[idx])) {
      candidates[slot] = candidates.back();
      candidates.pop_back();
      continue;
    }
    alive[idx] = 0;
    --deg[static_cast<std::size_t>(edges[idx].u)];
    --deg[static_cast<std::size_t>(edges[idx].v)];
  }
  std::vector<Edge> kept;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (alive[i]) kept.push_back(edges[i]);
  return Graph(n, std::move(kept));
}

enum class Family { path, cycle, star, complete_bipartite };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::path: return "path";
    case Family::cycle: return "cycle";
    case Family::star: return "star";
    case Family::complete_bipartite: return "complete-bipartite";
  }
  return "?";
}

// Fixed families on vertices 1..n: path 1-2-...-n, cycle closes the path,
// star centers on vertex 1, complete bipartite splits floor/ceil halves.
inline Graph gen_structured(Family family, int n) {
  check_config(n >= 2, "gen_structured: need n >= 2");
  std::vector<Edge> edges;
  switch (family) {
    case Family::path:
      for (int v = 1; v < n; ++v) edges.push_back(Edge{v, v + 1});
      break;
    case Family::cycle:
      check_config(n >= 3, "gen_structured: cycle needs n >= 3");
      for (int v = 1; v < n; ++v) edges.push_back(Edge{v, v + 1});
      edges.push_back(Edge{1, n});
      break;
    case Family::star:
      for (int v = 2; v <= n; ++v) edges.push_back(Edge{1, v});
      break;
    case Family::complete_bipartite: {
      const int left = n / 2;
      for (int u = 1; u <= left; ++u)
        for (int v = left + 1; v <= n; ++v) edges.push_back(Edge{u, v});
      break;
    }
  }
  return Graph(n, std::move(edges));
}

// ---------------------------------------------------------------------------
// Edge partitions
// ---------------------------------------------------------------------------

enum class PartitionMode { uniform, all_alice, all_bob, interleave };

inline const char* partition_mode_name(PartitionMode m) {
  switch (m) {
    case PartitionMode::uniform: return "uniform";
    case PartitionMode::all_alice: return "all-alice";
    case PartitionMode::all_bob: return "all-bob";
    case PartitionMode::interleave: return "interleave";
  }
  return "?";
}

// A graph whose edge set is split between Alice and Bob.  delta is the max
// degree of the *whole* graph; both parties know it, along with n.
class PartitionedGraph {
 public:
  PartitionedGraph(Graph base, std::vector<Edge> alice_edges, std::vector<Edge> bob_edges)
      : base_(std::move(base)),
        edges_a_(std::move(alice_edges)),
        edges_b_(std::move(bob_edges)),
        delta_(base_.max_degree()) {
    std::sort(edges_a_.begin(), edges_a_.end());
    std::sort(edges_b_.begin(), edges_b_.end());
    std::vector<Edge> merged;
    merged.reserve(edges_a_.size() + edges_b_.size());
    std::merge(edges_a_.begin(), edges_a_.end(), edges_b_.begin(), edges_b_.end(),
               std::back_inserter(merged));
    check_config(merged == base_.edges(),
                 "PartitionedGraph: halves must be disjoint and cover the edge set");
    const auto n = static_cast<std::size_t>(base_.vertex_count());
    adj_[0].assign(n + 1, {});
    adj_[1].assign(n + 1, {});
    for (int side = 0; side < 2; ++side)
      for (const auto& e : (side == 0 ? edges_a_ : edges_b_)) {
        adj_[side][static_cast<std::size_t>(e.u)].push_back(e.v);
        adj_[side][static_cast<std::size_t>(e.v)].push_back(e.u);
      }
  }

  const Graph& base() const { return base_; }
  int delta() const { return delta_; }

  const std::vector<Edge>& edges(Party p) const {
    return p == Party::alice ? edges_a_ : edges_b_;
  }

  const std::vector<int>& neighbors(Party p, int v) const {
    check_config(1 <= v && v <= base_.vertex_count(), "PartitionedGraph: vertex out of range");
    return adj_[static_cast<std::size_t>(p)][static_cast<std::size_t>(v)];
  }

 private:
  Graph base_;
  std::vector<Edge> edges_a_, edges_b_;
  std::vector<std::vector<int>> adj_[2];
  int delta_;
};

// Splits the edges of g between the parties.  uniform flips a fair seeded
// coin per edge; interleave alternates over the sorted edge list starting
// with Alice; the seed only matters for uniform.
inline PartitionedGraph partition_edges(const Graph& g, PartitionMode mode, std::uint64_t seed) {
  std::vector<Edge> ea, eb;
  SharedRandomStream rng(seed);
  std::size_t i = 0;
  for (const auto& e : g.edges()) {
    bool to_alice = false;
    switch (mode) {
      case PartitionMode::uniform: to_alice = (rng.next_u64() & 1ULL) == 0; break;
      case PartitionMode::all_alice: to_alice = true; break;
      case PartitionMode::all_bob: to_alice = false; break;
      case PartitionMode::interleave: to_alice = (i % 2 == 0); break;
    }
    (to_alice ? ea : eb).push_back(e);
    ++i;
  }
  return PartitionedGraph(g, std::move(ea), std::move(eb));
}

// ---------------------------------------------------------------------------
// Text formats
// ---------------------------------------------------------------------------
// Graph file:      "n m delta" then m lines "u v" with u < v, 1-based.
// Partition file:  same, with a trailing "A" or "B" owner tag per edge line.

inline void write_graph(std::ostream& out, const Graph& g) {
  out << g.vertex_count() << ' ' << g.edge_count() << ' ' << g.max_degree() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

inline Graph read_graph(std::istream& in) {
  int n = 0, delta = 0;
  std::size_t m = 0;
  check_io(static_cast<bool>(in >> n >> m >> delta), "read_graph: bad header");
  std::vector<Edge> edges(m);
  for (auto& e : edges) {
    check_io(static_cast<bool>(in >> e.u >> e.v), "read_graph: truncated edge list");
    check_io(e.u < e.v, "read_graph: edges must satisfy u < v");
  }
  Graph g(n, std::move(edges));
  check_io(g.max_degree() == delta, "read_graph: header delta does not match edges");
  return g;
}

inline void write_partition(std::ostream& out, const PartitionedGraph& pg) {
  const Graph& g = pg.base();
  out << g.vertex_count() << ' ' << g.edge_count() << ' ' << pg.delta() << '\n';
  const auto& ea = pg.edges(Party::alice);
  for (const auto& e : g.edges()) {
    const bool a = std::binary_search(ea.begin(), ea.end(), e);
    out << e.u << ' ' << e.v << ' ' << (a ? 'A' : 'B') << '\n';
  }
}

inline PartitionedGraph read_partition(std::istream& in) {
  int n = 0, delta = 0;
  std::size_t m = 0;
  check_io(static_cast<bool>(in >> n >> m >> delta), "read_partition: bad header");
  std::vector<Edge> edges, ea, eb;
  for (std::size_t i = 0; i < m; ++i) {
    Edge e;
    std::string owner;
    check_io(static_cast<bool>(in >> e.u >> e.v >> owner), "read_partition: truncated edge list");
    check_io(e.u < e.v, "read_partition: edges must satisfy u < v");
    check_io(owner == "A" || owner == "B", "read_partition: owner must be A or B");
    edges.push_back(e);
    (owner == "A" ? ea : eb).push_back(e);
  }
  Graph g(n, std::move(edges));
  check_io(g.max_degree() == delta, "read_partition: header delta does not match edges");
  return PartitionedGraph(std::move(g), std::move(ea), std::move(eb));
}

}  // namespace chromacomm
