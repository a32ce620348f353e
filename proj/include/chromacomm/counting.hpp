#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "chromacomm/errors.hpp"
#include "chromacomm/graph.hpp"
#include "chromacomm/prng.hpp"

namespace chromacomm::counting {

// Counts fit in 128 bits for every accepted (n, q); decimal printing for the
// CLI's JSON output.
using count_t = unsigned __int128;

inline std::string count_to_string(count_t value) {
  if (value == 0) return "0";
  std::string digits;
  while (value > 0) {
    digits += static_cast<char>('0' + static_cast<int>(value % 10));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

namespace detail {

inline std::vector<std::vector<int>> connected_components(const Graph& g) {
  const int n = g.vertex_count();
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::vector<int>> components;
  for (int start = 1; start <= n; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    // BFS order: every later vertex has a colored neighbor during the
    // backtracking sweep, which keeps pruning effective.
    std::vector<int> comp = {start};
    seen[static_cast<std::size_t>(start)] = 1;
    for (std::size_t head = 0; head < comp.size(); ++head)
      for (int u : g.neighbors(comp[head]))
        if (!seen[static_cast<std::size_t>(u)]) {
          seen[static_cast<std::size_t>(u)] = 1;
          comp.push_back(u);
        }
    components.push_back(std::move(comp));
  }
  return components;
}

inline count_t count_component(const Graph& g, const std::vector<int>& comp, int q) {
  // Backtracking sweep in BFS order.  Color permutations act transitively on
  // the root's color over proper colorings, so the root is pinned to color 1
  // and the result multiplied by q.
  const std::size_t size = comp.size();
  std::vector<int> assigned(size, 0);
  count_t total = 0;
  std::vector<std::size_t> index_of(static_cast<std::size_t>(g.vertex_count()) + 1, size);
  for (std::size_t i = 0; i < size; ++i) index_of[static_cast<std::size_t>(comp[i])] = i;

  std::size_t depth = 0;
  assigned[0] = 1;
  if (size == 1) return static_cast<count_t>(q);
  auto feasible = [&](std::size_t at, int color) {
    for (int u : g.neighbors(comp[at])) {
      const std::size_t j = index_of[static_cast<std::size_t>(u)];
      if (j < at && assigned[j] == color) return false;
    }
    return true;
  };
  depth = 1;
  assigned[1] = 0;
  while (true) {
    int c = assigned[depth] + 1;
    while (c <= q && !feasible(depth, c)) ++c;
    if (c > q) {
      assigned[depth] = 0;
      if (--depth == 0) break;
      continue;
    }
    assigned[depth] = c;
    if (depth + 1 == size) {
      ++total;
      continue;
    }
    ++depth;
    assigned[depth] = 0;
  }
  return total * static_cast<count_t>(q);
}

}  // namespace detail

// Exact number of proper q-colorings by backtracking, one connected component
// at a time.  Capped at 16 vertices; beyond that the caller is told to use
// the Monte Carlo estimator instead.
inline count_t count_colorings_exact(const Graph& g, int q) {
  check_config(q >= 1, "count_colorings_exact: q must be >= 1");
  check_config(g.vertex_count() <= 16,
               "count_colorings_exact: exact counting is capped at 16 vertices; "
               "use the Monte Carlo estimator for larger graphs");
  check_config(g.vertex_count() == 0 ||
                   static_cast<double>(g.vertex_count()) * std::log2(static_cast<double>(q)) < 126.0,
               "count_colorings_exact: q^n exceeds the 128-bit counter");
  count_t total = 1;
  for (const auto& comp : detail::connected_components(g))
    total *= detail::count_component(g, comp, q);
  return total;
}

// Closed-form lower bound ((delta+1)/e)^n on the number of proper
// (delta+1)-colorings of any graph with max degree delta.
inline double coloring_bound(int n, int delta) {
  check_config(n >= 0 && delta >= 0, "coloring_bound: bad parameters");
  return std::pow(static_cast<double>(delta + 1) / std::exp(1.0), static_cast<double>(n));
}

struct FractionEstimate {
  double fraction = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

// Monte Carlo estimate of the fraction of uniformly random q-colorings that
// are proper; std_error is the binomial standard error of the estimate.
inline FractionEstimate estimate_proper_fraction(const Graph& g, int q, std::uint64_t trials,
                                                 std::uint64_t seed) {
  check_config(q >= 1 && trials >= 1, "estimate_proper_fraction: bad parameters");
  SharedRandomStream rng(seed);
  const int n = g.vertex_count();
  std::vector<int> colors(static_cast<std::size_t>(n) + 1, 0);
  std::uint64_t proper = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (int v = 1; v <= n; ++v)
      colors[static_cast<std::size_t>(v)] =
          static_cast<int>(rng.uniform(static_cast<std::uint64_t>(q))) + 1;
    bool ok = true;
    for (const auto& e : g.edges())
      if (colors[static_cast<std::size_t>(e.u)] == colors[static_cast<std::size_t>(e.v)]) {
        ok = false;
        break;
      }
    proper += ok ? 1 : 0;
  }
  FractionEstimate est;
  est.trials = trials;
  est.fraction = static_cast<double>(proper) / static_cast<double>(trials);
  est.std_error = std::sqrt(est.fraction * (1.0 - est.fraction) / static_cast<double>(trials));
  return est;
}

// A small set of colorings such that every max-degree-<=delta graph on n
// vertices has at least one proper witness in the set, plus the witness
// index per graph.  Grown adaptively: random (delta+1)-colorings are drawn
// until every graph in the (degree-filtered) enumeration is covered.
struct CoverSet {
  std::vector<Graph> graphs;
  std::vector<Coloring> colorings;
  std::vector<std::size_t> witness;  // witness[i] indexes colorings for graphs[i]
};

inline CoverSet build_cover_set(int n, int delta, std::uint64_t seed) {
  check_config(n >= 1 && n <= 5, "build_cover_set: enumeration is capped at n <= 5");
  check_config(delta >= 0 && delta <= 4, "build_cover_set: delta is capped at 4");
  const int q = delta + 1;

  std::vector<std::pair<int, int>> pairs;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) pairs.emplace_back(u, v);

  CoverSet cover;
  for (std::uint64_t bitsmask = 0; bitsmask < (1ULL << pairs.size()); ++bitsmask) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (bitsmask & (1ULL << i)) edges.push_back(Edge{pairs[i].first, pairs[i].second});
    Graph g(n, std::move(edges));
    if (g.max_degree() <= delta) cover.graphs.push_back(std::move(g));
  }
  cover.witness.assign(cover.graphs.size(), static_cast<std::size_t>(-1));

  SharedRandomStream rng(seed);
  std::size_t uncovered = cover.graphs.size();
  const std::uint64_t sample_cap = 10'000'000;
  for (std::uint64_t round = 0; uncovered > 0; ++round) {
    check_protocol(round < sample_cap, "build_cover_set: failed to cover within sample cap");
    Coloring c(n);
    for (int v = 1; v <= n; ++v)
      c.set(v, static_cast<int>(rng.uniform(static_cast<std::uint64_t>(q))) + 1);
    bool used = false;
    for (std::size_t i = 0; i < cover.graphs.size(); ++i) {
      if (cover.witness[i] != static_cast<std::size_t>(-1)) continue;
      if (verify_coloring(cover.graphs[i], c, q)) {
        if (!used) {
          cover.colorings.push_back(c);
          used = true;
        }
        cover.witness[i] = cover.colorings.size() - 1;
        --uncovered;
      }
    }
  }
  return cover;
}

}  // namespace chromacomm::counting
