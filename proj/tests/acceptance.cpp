// Acceptance suite: one self-contained check per criterion, selected by the
// single command-line argument (1..10); no argument runs all of them.  Each
// criterion prints measurement detail and one final PASS/FAIL verdict line.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chromacomm/counting.hpp"
#include "chromacomm/graph.hpp"
#include "chromacomm/harness.hpp"
#include "chromacomm/lowerbound.hpp"
#include "chromacomm/protocols.hpp"
#include "chromacomm/slackint.hpp"

using namespace chromacomm;

namespace {

struct Failure {
  std::string what;
};

// ---------------------------------------------------------------------------
// Shared workload helpers
// ---------------------------------------------------------------------------

struct GridCell {
  harness::FamilyConfig family;
  PartitionMode mode = PartitionMode::uniform;
};

// The correctness grid: bounded-degree families swept over delta, structured
// families at fixed sizes, everything crossed with all four partition modes.
std::vector<GridCell> correctness_grid() {
  std::vector<harness::FamilyConfig> bases;
  for (int delta : {1, 3, 7, 15, 31}) {
    bases.push_back({harness::HarnessFamily::clique_union, 96, delta, 0.5});
    bases.push_back({harness::HarnessFamily::random_bounded, 96, delta, 0.5});
  }
  bases.push_back({harness::HarnessFamily::path, 257, 0, 0});
  bases.push_back({harness::HarnessFamily::cycle, 256, 0, 0});
  bases.push_back({harness::HarnessFamily::star, 32, 0, 0});

  std::vector<GridCell> cells;
  for (const auto& fam : bases)
    for (auto mode : {PartitionMode::uniform, PartitionMode::all_alice, PartitionMode::all_bob,
                      PartitionMode::interleave})
      cells.push_back({fam, mode});
  return cells;
}

// Enumerates every disjoint (X, Y) assignment over 1..m with |X|+|Y| <= m-1.
template <class Fn>
void for_each_disjoint_instance(int m, Fn&& fn) {
  std::vector<int> assign(static_cast<std::size_t>(m), 0);
  for (;;) {
    slackint::SlackIntInstance inst;
    inst.m = m;
    for (int e = 1; e <= m; ++e) {
      if (assign[static_cast<std::size_t>(e - 1)] == 1) inst.x_set.push_back(e);
      if (assign[static_cast<std::size_t>(e - 1)] == 2) inst.y_set.push_back(e);
    }
    const int used = static_cast<int>(inst.x_set.size() + inst.y_set.size());
    if (used <= m - 1) {
      inst.k = m - used;
      fn(inst);
    }
    int i = 0;
    while (i < m && assign[static_cast<std::size_t>(i)] == 2)
      assign[static_cast<std::size_t>(i++)] = 0;
    if (i == m) break;
    ++assign[static_cast<std::size_t>(i)];
  }
}

bool element_in(int e, const std::vector<int>& xs) {
  return std::find(xs.begin(), xs.end(), e) != xs.end();
}

// Runs the full correctness grid for one protocol; returns runs performed.
// Properness and cross-party agreement are also asserted inside the library
// on every run; this re-verifies properness independently here.
std::uint64_t run_grid(protocols::ProtocolKind kind, int seeds_per_cell,
                       std::uint64_t& failures) {
  std::uint64_t runs = 0;
  const auto cells = correctness_grid();
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    for (int srep = 0; srep < seeds_per_cell; ++srep) {
      const auto seed = static_cast<std::uint64_t>(1000 * ci + srep + 1);
      const Graph g = harness::build_family_graph(cells[ci].family, seed);
      const auto pg = partition_edges(g, cells[ci].mode, seed);
      MemorySession session(seed);
      const auto run = protocols::run_protocol(kind, pg, session);
      ++runs;
      if (!verify_coloring(g, run.coloring, pg.delta() + 1)) ++failures;
    }
  }
  return runs;
}

// Mean bits/vertex for a protocol on 1024-vertex clique unions.
double clique_mean(protocols::ProtocolKind kind, int delta, int seeds, const Rational& c_sample,
                   std::uint64_t seed_base) {
  const Graph g = gen_clique_union(1024 / (delta + 1), delta);
  double total = 0;
  for (int i = 0; i < seeds; ++i) {
    const auto seed = seed_base + static_cast<std::uint64_t>(i);
    const auto pg = partition_edges(g, PartitionMode::uniform, seed);
    MemorySession session(seed);
    const auto run = protocols::run_protocol(kind, pg, session, c_sample);
    total += static_cast<double>(run.total_bits) / g.vertex_count();
  }
  return total / seeds;
}

// All labeled graphs on n vertices (every subset of the C(n,2) possible
// edges), emitted through fn.
template <class Fn>
void for_each_labeled_graph(int n, Fn&& fn) {
  std::vector<Edge> all;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) all.push_back(Edge{u, v});
  const std::uint64_t subsets = 1ULL << all.size();
  for (std::uint64_t bits = 0; bits < subsets; ++bits) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (bits & (1ULL << i)) edges.push_back(all[i]);
    fn(Graph(n, std::move(edges)));
  }
}

// Counting-bound and Monte-Carlo agreement check for one graph; returns false
// and appends a description on failure.
bool check_counts(const Graph& g, std::uint64_t mc_trials, std::uint64_t mc_seed,
                  std::vector<Failure>& failures) {
  const int q = g.max_degree() + 1;
  const double exact = static_cast<double>(counting::count_colorings_exact(g, q));
  const double bound = counting::coloring_bound(g.vertex_count(), g.max_degree());
  bool ok = true;
  if (exact < bound) {
    failures.push_back({"exact " + std::to_string(exact) + " < bound " + std::to_string(bound)});
    ok = false;
  }
  const auto est = counting::estimate_proper_fraction(g, q, mc_trials, mc_seed);
  const double total = std::pow(static_cast<double>(q), g.vertex_count());
  const double diff = std::abs(est.fraction * total - exact);
  if (est.std_error > 0.0) {
    if (diff > 5.0 * est.std_error * total) {
      failures.push_back({"MC estimate off by " + std::to_string(diff / (est.std_error * total)) +
                          " standard errors"});
      ok = false;
    }
  } else if (diff != 0.0) {
    failures.push_back({"MC estimate has zero spread but misses the exact count"});
    ok = false;
  }
  return ok;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

bool criterion_1() {
  std::uint64_t failures = 0, total_runs = 0;
  for (auto kind : {protocols::ProtocolKind::rejection, protocols::ProtocolKind::main,
                    protocols::ProtocolKind::deterministic}) {
    const std::uint64_t runs = run_grid(kind, 20, failures);
    total_runs += runs;
    std::cout << "  " << protocols::protocol_name(kind) << ": " << runs
              << " runs across 52 (family, delta, partition) cells\n";
  }
  std::cout << "  total runs: " << total_runs << ", improper or disagreeing colorings: "
            << failures << "\n";
  return failures == 0 && total_runs >= 3000;
}

bool criterion_2() {
  std::uint64_t instances = 0, wrong = 0;
  for (int m = 1; m <= 8; ++m) {
    for_each_disjoint_instance(m, [&](const slackint::SlackIntInstance& inst) {
      ++instances;
      std::vector<int> universe(static_cast<std::size_t>(m));
      for (int e = 1; e <= m; ++e) universe[static_cast<std::size_t>(e - 1)] = e;
      {
        MemorySession s(1);
        const int got = slackint::binary_search_protocol(s, universe, inst.x_set, inst.y_set);
        if (element_in(got, inst.x_set) || element_in(got, inst.y_set)) ++wrong;
      }
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        MemorySession s(seed);
        const int got = slackint::sampled_slack_protocol(s, inst);
        if (element_in(got, inst.x_set) || element_in(got, inst.y_set)) ++wrong;
      }
    });
  }
  std::cout << "  " << instances << " exhaustive instances (m <= 8), 1 deterministic + 10 "
            << "sampled runs each, wrong answers: " << wrong << "\n";
  return wrong == 0 && instances > 0;
}

bool criterion_3() {
  // The per-search bound is asserted inline inside the search itself (it
  // throws on violation) and counted.  Re-drive the criterion-1 and
  // criterion-2 workloads and confirm a large count with zero violations.
  const std::uint64_t before = slackint::bound_checks_performed.load();
  bool clean = true;
  try {
    std::uint64_t grid_failures = 0;
    run_grid(protocols::ProtocolKind::main, 5, grid_failures);
    run_grid(protocols::ProtocolKind::deterministic, 5, grid_failures);
    clean = grid_failures == 0;
    for (int m = 1; m <= 8; ++m) {
      for_each_disjoint_instance(m, [&](const slackint::SlackIntInstance& inst) {
        std::vector<int> universe(static_cast<std::size_t>(m));
        for (int e = 1; e <= m; ++e) universe[static_cast<std::size_t>(e - 1)] = e;
        MemorySession a(1), b(2);
        (void)slackint::binary_search_protocol(a, universe, inst.x_set, inst.y_set);
        (void)slackint::sampled_slack_protocol(b, inst);
      });
    }
  } catch (const std::exception& err) {
    std::cout << "  bound assertion fired: " << err.what() << "\n";
    return false;
  }
  const std::uint64_t checked = slackint::bound_checks_performed.load() - before;
  std::cout << "  binary searches bound-checked inline: " << checked << ", violations: 0\n";
  return clean && checked > 50000;
}

bool criterion_4() {
  bool ok = true;
  for (int delta : {7, 15, 31}) {
    const double mean =
        clique_mean(protocols::ProtocolKind::rejection, delta, 200, Rational(150), 100);
    const double ref = protocols::expected_rejection_cost(delta);
    const double rel = std::abs(mean / ref - 1.0);
    std::cout << "  delta=" << delta << ": mean=" << harness::format_fixed(mean, 4)
              << " reference=" << harness::format_fixed(ref, 4)
              << " rel-err=" << harness::format_fixed(100 * rel, 2) << "% (limit 5%)\n";
    ok = ok && rel <= 0.05;
  }
  return ok;
}

bool criterion_5() {
  const double rej_7 = clique_mean(protocols::ProtocolKind::rejection, 7, 200, Rational(150), 300);
  const double rej_127 =
      clique_mean(protocols::ProtocolKind::rejection, 127, 200, Rational(150), 300);
  const double main_7 = clique_mean(protocols::ProtocolKind::main, 7, 200, Rational(150), 300);
  const double main_127 = clique_mean(protocols::ProtocolKind::main, 127, 200, Rational(150), 300);
  const double ratio_rej = rej_127 / rej_7;
  const double ratio_main = main_127 / main_7;
  std::cout << "  rejection: " << harness::format_fixed(rej_7, 4) << " -> "
            << harness::format_fixed(rej_127, 4)
            << " bits/vertex, ratio=" << harness::format_fixed(ratio_rej, 4)
            << " (required >= 2.0; analytic reference "
            << harness::format_fixed(protocols::expected_rejection_cost(127) /
                                         protocols::expected_rejection_cost(7),
                                     5)
            << ")\n";
  std::cout << "  sampled-slack: " << harness::format_fixed(main_7, 4) << " -> "
            << harness::format_fixed(main_127, 4)
            << " bits/vertex, ratio=" << harness::format_fixed(ratio_main, 4)
            << " (required <= 2.0)\n";
  // Context for the measured ratios: with the default sampling constant every
  // guess at m <= 150 uses p = 1, so the per-vertex cost equals one full test
  // plus one full binary search and scales with log^2(delta).  A smaller
  // constant engages sampling; reported for comparison, not gated on.
  const double small_7 = clique_mean(protocols::ProtocolKind::main, 7, 50, Rational(2), 300);
  const double small_127 = clique_mean(protocols::ProtocolKind::main, 127, 50, Rational(2), 300);
  std::cout << "  informational, sampling constant 2: "
            << harness::format_fixed(small_7, 4) << " -> " << harness::format_fixed(small_127, 4)
            << " bits/vertex, ratio=" << harness::format_fixed(small_127 / small_7, 4) << "\n";
  return ratio_main <= 2.0 && ratio_rej >= 2.0;
}

bool criterion_6() {
  const auto rows = harness::experiment_slack_concentration(1, 10'000);
  bool ok = true;
  for (const auto& r : rows) {
    std::cout << "  m=" << r.m << " k=" << r.k << " " << r.pattern << ": failure freq "
              << harness::format_fixed(r.failure_freq, 4) << " (limit "
              << harness::format_fixed(r.threshold, 4) << ")\n";
    ok = ok && r.ok && std::abs(r.threshold - 0.515) < 1e-12;
  }
  return ok && rows.size() == 12;
}

bool criterion_7() {
  // Exhaustive per-gadget soundness over all 3^4 colorings.
  std::uint64_t proper_checked = 0, decode_wrong = 0;
  for (int bit : {0, 1}) {
    Graph g(4, lowerbound::gadget_edges(bit));
    for (int c1 = 1; c1 <= 3; ++c1)
      for (int c2 = 1; c2 <= 3; ++c2)
        for (int c3 = 1; c3 <= 3; ++c3)
          for (int c4 = 1; c4 <= 3; ++c4) {
            if (!verify_coloring(g, Coloring::from_values({c1, c2, c3, c4}), 3)) continue;
            ++proper_checked;
            if (lowerbound::decode_bit(c1, c2, c3, c4) != bit) ++decode_wrong;
          }
  }
  // Greedy roundtrip for every length-8 string.
  std::uint64_t greedy_wrong = 0;
  for (int value = 0; value < 256; ++value) {
    std::string bits;
    for (int i = 0; i < 8; ++i) bits += static_cast<char>('0' + ((value >> i) & 1));
    const auto enc = lowerbound::encode_bits(bits);
    std::vector<int> order(static_cast<std::size_t>(enc.graph.vertex_count()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i) + 1;
    const auto coloring = protocols::greedy_oracle(enc.graph, order, 3);
    if (!coloring || lowerbound::decode_bits(*coloring, 8) != bits) ++greedy_wrong;
  }
  // Protocol roundtrip for random length-64 strings.
  std::uint64_t protocol_wrong = 0;
  SharedRandomStream rng(4242);
  for (int rep = 0; rep < 100; ++rep) {
    std::string bits;
    for (int i = 0; i < 64; ++i) bits += static_cast<char>('0' + (rng.next_u64() & 1));
    const auto pg = lowerbound::encode_bits_partitioned(bits);
    MemorySession s(rng.next_u64());
    const auto run = protocols::color_main(pg, s);
    if (lowerbound::decode_bits(run.coloring, 64) != bits) ++protocol_wrong;
  }
  std::cout << "  proper gadget colorings decoded: " << proper_checked
            << " (wrong: " << decode_wrong << "), greedy roundtrips wrong: " << greedy_wrong
            << "/256, protocol roundtrips wrong: " << protocol_wrong << "/100\n";
  return proper_checked > 0 && decode_wrong == 0 && greedy_wrong == 0 && protocol_wrong == 0;
}

bool criterion_8() {
  std::vector<Failure> failures;
  std::uint64_t graphs = 0;
  for (int n = 1; n <= 4; ++n)
    for_each_labeled_graph(n, [&](const Graph& g) {
      ++graphs;
      check_counts(g, 100'000, 7000 + graphs, failures);
    });
  const std::uint64_t exhaustive = graphs;
  SharedRandomStream rng(808);
  for (int rep = 0; rep < 500; ++rep) {
    const int n = 5 + static_cast<int>(rng.uniform(2));  // 5 or 6
    std::vector<Edge> edges;
    for (int u = 1; u <= n; ++u)
      for (int v = u + 1; v <= n; ++v)
        if (rng.uniform(4) < 2) edges.push_back(Edge{u, v});  // each edge w.p. 1/2
    Graph g(n, std::move(edges));
    ++graphs;
    check_counts(g, 20'000, 9000 + static_cast<std::uint64_t>(rep), failures);
  }
  std::cout << "  graphs checked: " << graphs << " (" << exhaustive
            << " exhaustive on n <= 4, 500 sampled on n in {5,6}), failures: " << failures.size()
            << "\n";
  for (std::size_t i = 0; i < std::min<std::size_t>(failures.size(), 5); ++i)
    std::cout << "    " << failures[i].what << "\n";
  return failures.empty() && exhaustive == 75;
}

bool criterion_9() {
  std::uint64_t mismatches = 0;
  for (int i = 0; i < 50; ++i) {
    const int n = 8 + (i * 7) % 33;
    const int delta = 3 + i % 6;
    const auto seed = static_cast<std::uint64_t>(5000 + i);
    const Graph g = gen_random_bounded(n, delta, 0.5, seed);
    const auto pg = partition_edges(g, PartitionMode::uniform, seed);

    MemorySession mem(seed);
    const auto mem_run = protocols::color_main(pg, mem);
    const auto dual = harness::run_protocol_over_loopback(protocols::ProtocolKind::main, pg, seed);
    if (!(dual.alice.coloring == mem_run.coloring) ||
        dual.alice.total_bits != mem_run.total_bits ||
        !(dual.bob.coloring == mem_run.coloring))
      ++mismatches;
  }
  std::cout << "  50 (graph, seed) pairs run over loopback sockets and in memory, mismatches: "
            << mismatches << "\n";
  return mismatches == 0;
}

bool criterion_10() {
  harness::ExperimentConfig cfg;
  cfg.name = "determinism";
  cfg.protocol = protocols::ProtocolKind::main;
  cfg.family = harness::FamilyConfig{harness::HarnessFamily::random_bounded, 48, 5, 0.5};
  cfg.partition = PartitionMode::uniform;
  cfg.base_seed = 11;
  cfg.trials = 25;

  bool ok = true;
  for (auto kind : {protocols::ProtocolKind::rejection, protocols::ProtocolKind::main,
                    protocols::ProtocolKind::deterministic}) {
    cfg.protocol = kind;
    cfg.output_path = "acceptance10_a.csv";
    harness::run_experiment(cfg);
    cfg.output_path = "acceptance10_b.csv";
    harness::run_experiment(cfg);
    const std::string a = read_file("acceptance10_a.csv");
    const std::string b = read_file("acceptance10_b.csv");
    const bool same = !a.empty() && a == b;
    std::cout << "  " << protocols::protocol_name(kind) << ": " << cfg.trials
              << "-trial config rerun " << (same ? "byte-identical" : "DIFFERS") << " ("
              << a.size() << " bytes)\n";
    ok = ok && same;
  }
  std::remove("acceptance10_a.csv");
  std::remove("acceptance10_b.csv");

  // Histogram output of the tail experiment, same treatment.
  (void)harness::experiment_tail(1, 25, "acceptance10_hist_a.csv");
  (void)harness::experiment_tail(1, 25, "acceptance10_hist_b.csv");
  const std::string ha = read_file("acceptance10_hist_a.csv");
  const bool hist_same = !ha.empty() && ha == read_file("acceptance10_hist_b.csv");
  std::cout << "  tail histogram rerun " << (hist_same ? "byte-identical" : "DIFFERS") << "\n";
  std::remove("acceptance10_hist_a.csv");
  std::remove("acceptance10_hist_b.csv");
  return ok && hist_same;
}

struct Criterion {
  int id;
  const char* name;
  bool (*run)();
};

const Criterion kCriteria[] = {
    {1, "zero-error correctness across families, degrees, partitions", criterion_1},
    {2, "exhaustive slack-interval oracle equivalence (m <= 8)", criterion_2},
    {3, "inline binary-search bit bound, zero violations", criterion_3},
    {4, "rejection cost within 5% of the harmonic reference", criterion_4},
    {5, "cost-ratio contrast between the two randomized protocols", criterion_5},
    {6, "slack-test failure concentration under sampling", criterion_6},
    {7, "bit-gadget encode/color/decode roundtrips", criterion_7},
    {8, "coloring counts dominate the closed-form bound; MC agrees", criterion_8},
    {9, "socket and in-memory transports are bit-identical", criterion_9},
    {10, "experiment reruns produce byte-identical CSV", criterion_10},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 10) {
      std::cerr << "usage: acceptance [1..10]\n";
      return 2;
    }
  }
  bool all_ok = true;
  for (const auto& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    std::cout << "CRITERION " << c.id << ": " << c.name << "\n";
    bool ok = false;
    try {
      ok = c.run();
    } catch (const std::exception& err) {
      std::cout << "  unexpected error: " << err.what() << "\n";
    }
    std::cout << "CRITERION " << c.id << ": " << (ok ? "PASS" : "FAIL") << "\n";
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
