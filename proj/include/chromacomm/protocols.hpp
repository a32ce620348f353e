#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "chromacomm/channel.hpp"
#include "chromacomm/errors.hpp"
#include "chromacomm/graph.hpp"
#include "chromacomm/slackint.hpp"

namespace chromacomm::protocols {

// Outcome of one protocol execution on one endpoint.  In-memory runs carry
// the full transcript and the coloring both parties derived (asserted equal);
// socket endpoints carry their own copy, equal across endpoints.
struct ProtocolRun {
  Coloring coloring;
  Transcript transcript;
  std::vector<int> order;                    // vertex visiting order
  std::vector<std::uint64_t> per_vertex_bits;  // aligned with `order`
  std::uint64_t total_bits = 0;
  int rounds = 0;
};

// Centralized reference: color in the given order, always picking the
// smallest color unused in the already-colored neighborhood.  Returns nullopt
// if some vertex needs a color above q (never happens for q >= delta+1).
inline std::optional<Coloring> greedy_oracle(const Graph& g, const std::vector<int>& order,
                                             int q) {
  check_config(static_cast<int>(order.size()) == g.vertex_count(),
               "greedy_oracle: order length != vertex count");
  Coloring coloring(g.vertex_count());
  std::vector<char> used(static_cast<std::size_t>(q) + 2, 0);
  for (int v : order) {
    for (int u : g.neighbors(v))
      if (coloring[u] != 0 && coloring[u] <= q) used[static_cast<std::size_t>(coloring[u])] = 1;
    int c = 1;
    while (c <= q && used[static_cast<std::size_t>(c)]) ++c;
    for (int u : g.neighbors(v))
      if (coloring[u] != 0 && coloring[u] <= q) used[static_cast<std::size_t>(coloring[u])] = 0;
    if (c > q) return std::nullopt;
    coloring.set(v, c);
  }
  return coloring;
}

// Expected bits per vertex of the rejection protocol on disjoint unions of
// (delta+1)-cliques: two bits per trial, harmonic-number many trials.
inline double expected_rejection_cost(int delta) {
  check_config(delta >= 0, "expected_rejection_cost: negative delta");
  double h = 0.0;
  for (int j = 1; j <= delta + 1; ++j) h += 1.0 / j;
  return 2.0 * h;
}

namespace detail {

// One endpoint's private view: its adjacency half plus its copy of the
// evolving coloring (every assignment is public, so the copies must agree --
// asserted when both live in one process).
struct PartyView {
  const PartitionedGraph* pg = nullptr;
  Party party = Party::alice;
  Coloring view;
};

inline PerParty<PartyView> make_views(const PartitionedGraph& pg, Session& session) {
  PerParty<PartyView> views;
  for (Party p : {Party::alice, Party::bob})
    if (session.has_state_for(p))
      views.emplace(p, PartyView{&pg, p, Coloring(pg.base().vertex_count())});
  return views;
}

// Colors already assigned among p's neighbors of v, as a mask over 1..m.
inline void fill_used_colors(const PartyView& pv, int v, slackint::ElementMask& mask) {
  std::fill(mask.begin(), mask.end(), 0);
  for (int u : pv.pg->neighbors(pv.party, v)) {
    const int c = pv.view[u];
    if (c != 0) mask[static_cast<std::size_t>(c)] = 1;
  }
}

// Closing checks shared by all three protocols: both-party agreement when
// simulated, properness of whatever edges this endpoint can see, and
// per-vertex bit accounting that sums to the transcript total.
inline ProtocolRun finish(const PartitionedGraph& pg, Session& session,
                          PerParty<PartyView>& views, std::vector<int> order,
                          std::vector<std::uint64_t> per_vertex_bits,
                          std::uint64_t bits_at_start) {
  std::optional<Coloring> result;
  for (Party p : {Party::alice, Party::bob})
    if (views.has(p)) {
      const Coloring& mine = views.at(p).view;
      check_protocol(mine.fully_assigned(), "protocol ended with uncolored vertices");
      for (const auto& e : pg.edges(p))
        check_protocol(mine[e.u] != mine[e.v], "protocol produced a monochromatic edge");
      if (result)
        check_protocol(*result == mine, "parties derived different colorings");
      else
        result = mine;
    }
  if (views.has(Party::alice) && views.has(Party::bob))
    check_protocol(verify_coloring(pg.base(), *result, pg.delta() + 1),
                   "protocol output failed full verification");

  std::uint64_t sum = 0;
  for (std::uint64_t b : per_vertex_bits) sum += b;
  check_protocol(sum == session.total_bits() - bits_at_start,
                 "per-vertex bit accounting does not sum to total");

  ProtocolRun run;
  run.coloring = std::move(*result);
  run.transcript = session.transcript();
  run.order = std::move(order);
  run.per_vertex_bits = std::move(per_vertex_bits);
  run.total_bits = session.total_bits();
  run.rounds = session.transcript().rounds();
  return run;
}

}  // namespace detail

struct RejectionOptions {
  // Abort if a single vertex burns this many trials; at q = delta+1 the
  // success chance per trial is >= 1/q, so the cap is astronomically safe.
  std::uint64_t max_trials_per_vertex = 1'000'000;
};

// Rejection-sampling protocol: visit vertices in a shared random order; per
// vertex, repeatedly draw a shared color and have each party answer one bit
// ("is it used among my neighbors of v?") until both answer no.
inline ProtocolRun color_rejection(const PartitionedGraph& pg, Session& session,
                                   const RejectionOptions& opt = {}) {
  const int n = pg.base().vertex_count();
  const int q = pg.delta() + 1;
  const std::uint64_t bits_at_start = session.total_bits();
  auto views = detail::make_views(pg, session);
  std::vector<int> order = session.shared_permutation(n);
  std::vector<std::uint64_t> per_vertex_bits;
  per_vertex_bits.reserve(static_cast<std::size_t>(n));

  for (int v : order) {
    const std::uint64_t before = session.total_bits();
    for (std::uint64_t trial = 1;; ++trial) {
      check_protocol(trial <= opt.max_trials_per_vertex,
                     "color_rejection: per-vertex trial cap exceeded");
      const int c = static_cast<int>(session.shared_uniform(static_cast<std::uint64_t>(q))) + 1;
      auto used_by = [&](Party p) -> std::uint64_t {
        for (int u : pg.neighbors(p, v))
          if (views.at(p).view[u] == c) return 1;
        return 0;
      };
      const std::uint64_t hit_a =
          session.exchange(Party::alice, "rej/a", 1, [&] { return used_by(Party::alice); });
      const std::uint64_t hit_b =
          session.exchange(Party::bob, "rej/b", 1, [&] { return used_by(Party::bob); });
      if (hit_a == 0 && hit_b == 0) {
        for (Party p : {Party::alice, Party::bob})
          if (views.has(p)) views.at(p).view.set(v, c);
        break;
      }
    }
    per_vertex_bits.push_back(session.total_bits() - before);
  }
  return detail::finish(pg, session, views, std::move(order), std::move(per_vertex_bits),
                        bits_at_start);
}

struct MainOptions {
  Rational c_sample = Rational(150);
};

// Sampled-slack protocol: visit vertices in a shared random order; per vertex
// solve a slack-interval instance over the palette {1..delta+1}, where X and
// Y are the colors already used in each party's half of v's neighborhood.
// The left-degree promise |X| + |Y| <= delta guarantees slack >= 1.
inline ProtocolRun color_main(const PartitionedGraph& pg, Session& session,
                              const MainOptions& opt = {}) {
  const int n = pg.base().vertex_count();
  const int m = pg.delta() + 1;
  const std::uint64_t bits_at_start = session.total_bits();
  auto views = detail::make_views(pg, session);
  std::vector<int> order = session.shared_permutation(n);
  std::vector<std::uint64_t> per_vertex_bits;
  per_vertex_bits.reserve(static_cast<std::size_t>(n));

  PerParty<slackint::ElementMask> used;
  for (Party p : {Party::alice, Party::bob})
    if (views.has(p)) used.emplace(p, static_cast<std::size_t>(m) + 1, 0);

  for (int v : order) {
    const std::uint64_t before = session.total_bits();
    for (Party p : {Party::alice, Party::bob})
      if (views.has(p)) detail::fill_used_colors(views.at(p), v, used.at(p));

    if (views.has(Party::alice) && views.has(Party::bob)) {
      // Slack promise: dedup'd used-color counts never exceed the number of
      // already-colored neighbors, which is at most delta.
      std::uint64_t size_x = 0, size_y = 0;
      for (int c = 1; c <= m; ++c) {
        size_x += used.at(Party::alice)[static_cast<std::size_t>(c)];
        size_y += used.at(Party::bob)[static_cast<std::size_t>(c)];
      }
      std::uint64_t colored_neighbors = 0;
      for (Party p : {Party::alice, Party::bob})
        for (int u : pg.neighbors(p, v))
          if (views.at(p).view[u] != 0) ++colored_neighbors;
      check_protocol(size_x + size_y <= colored_neighbors &&
                         colored_neighbors <= static_cast<std::uint64_t>(pg.delta()),
                     "color_main: slack promise violated");
    }

    const int c = slackint::sampled_slack_protocol(session, m, used, opt.c_sample);
    for (Party p : {Party::alice, Party::bob})
      if (views.has(p)) views.at(p).view.set(v, c);
    per_vertex_bits.push_back(session.total_bits() - before);
  }
  return detail::finish(pg, session, views, std::move(order), std::move(per_vertex_bits),
                        bits_at_start);
}

// Deterministic baseline: identity order, one full-palette binary search per
// vertex, no shared randomness consumed.  Worst case 2*ceil(log2(delta+2)) *
// ceil(log2(delta+1)) bits per vertex.
inline ProtocolRun color_deterministic(const PartitionedGraph& pg, Session& session) {
  const int n = pg.base().vertex_count();
  const int m = pg.delta() + 1;
  const std::uint64_t bits_at_start = session.total_bits();
  auto views = detail::make_views(pg, session);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  std::vector<std::uint64_t> per_vertex_bits;
  per_vertex_bits.reserve(static_cast<std::size_t>(n));

  std::vector<int> palette(static_cast<std::size_t>(m));
  std::iota(palette.begin(), palette.end(), 1);
  PerParty<slackint::ElementMask> used;
  for (Party p : {Party::alice, Party::bob})
    if (views.has(p)) used.emplace(p, static_cast<std::size_t>(m) + 1, 0);

  for (int v : order) {
    const std::uint64_t before = session.total_bits();
    for (Party p : {Party::alice, Party::bob})
      if (views.has(p)) detail::fill_used_colors(views.at(p), v, used.at(p));
    const int c = slackint::binary_search_protocol(session, std::span<const int>(palette), used);
    for (Party p : {Party::alice, Party::bob})
      if (views.has(p)) views.at(p).view.set(v, c);
    per_vertex_bits.push_back(session.total_bits() - before);
  }
  return detail::finish(pg, session, views, std::move(order), std::move(per_vertex_bits),
                        bits_at_start);
}

enum class ProtocolKind { rejection, main, deterministic };

inline const char* protocol_name(ProtocolKind k) {
  switch (k) {
    case ProtocolKind::rejection: return "rejection";
    case ProtocolKind::main: return "main";
    case ProtocolKind::deterministic: return "deterministic";
  }
  return "?";
}

inline ProtocolRun run_protocol(ProtocolKind kind, const PartitionedGraph& pg, Session& session,
                                const Rational& c_sample = Rational(150)) {
  switch (kind) {
    case ProtocolKind::rejection: return color_rejection(pg, session);
    case ProtocolKind::main: return color_main(pg, session, MainOptions{c_sample});
    case ProtocolKind::deterministic: return color_deterministic(pg, session);
  }
  throw config_error("run_protocol: unknown protocol");
}

}  // namespace chromacomm::protocols
