// chromacomm: run two-party (delta+1)-coloring protocols, experiments, the
// bit-encoding gadget roundtrip, and coloring counters from the command line.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "chromacomm/counting.hpp"
#include "chromacomm/graph.hpp"
#include "chromacomm/harness.hpp"
#include "chromacomm/lowerbound.hpp"
#include "chromacomm/protocols.hpp"

namespace cc = chromacomm;
using nlohmann::json;

namespace {

cc::protocols::ProtocolKind parse_protocol(const std::string& s) {
  if (s == "rejection") return cc::protocols::ProtocolKind::rejection;
  if (s == "main") return cc::protocols::ProtocolKind::main;
  if (s == "deterministic") return cc::protocols::ProtocolKind::deterministic;
  throw CLI::ValidationError("--protocol must be rejection|main|deterministic");
}

cc::harness::HarnessFamily parse_family(const std::string& s) {
  if (s == "clique-union") return cc::harness::HarnessFamily::clique_union;
  if (s == "random") return cc::harness::HarnessFamily::random_bounded;
  if (s == "path") return cc::harness::HarnessFamily::path;
  if (s == "cycle") return cc::harness::HarnessFamily::cycle;
  if (s == "star") return cc::harness::HarnessFamily::star;
  throw CLI::ValidationError("--family must be clique-union|random|path|cycle|star");
}

cc::PartitionMode parse_partition(const std::string& s) {
  if (s == "uniform") return cc::PartitionMode::uniform;
  if (s == "all-alice") return cc::PartitionMode::all_alice;
  if (s == "all-bob") return cc::PartitionMode::all_bob;
  if (s == "interleave") return cc::PartitionMode::interleave;
  throw CLI::ValidationError("--partition must be uniform|all-alice|all-bob|interleave");
}

// "A..B" inclusive.
std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const std::uint64_t one = std::stoull(s);
    return {one, one};
  }
  const std::uint64_t a = std::stoull(s.substr(0, dots));
  const std::uint64_t b = std::stoull(s.substr(dots + 2));
  if (b < a) throw CLI::ValidationError("--seeds range must satisfy A <= B");
  return {a, b};
}

cc::Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  cc::check_io(in.good(), "cannot open graph file " + path);
  return cc::read_graph(in);
}

int cmd_run(const std::string& protocol, const std::string& family, int n, int delta,
            double edge_prob, const std::string& partition, const std::string& seeds,
            const std::string& transport, const std::string& csv, const std::string& c_sample,
            bool timing) {
  cc::harness::ExperimentConfig cfg;
  cfg.name = "run";
  cfg.protocol = parse_protocol(protocol);
  cfg.family = cc::harness::FamilyConfig{parse_family(family), n, delta, edge_prob};
  cfg.partition = parse_partition(partition);
  const auto [a, b] = parse_seed_range(seeds);
  cfg.base_seed = a;
  cfg.trials = b - a + 1;
  cfg.c_sample = cc::parse_rational(c_sample);
  if (transport == "memory")
    cfg.transport = cc::harness::Transport::memory;
  else if (transport == "socket")
    cfg.transport = cc::harness::Transport::socket;
  else
    throw CLI::ValidationError("--transport must be memory|socket");
  cfg.output_path = csv;
  cfg.timing = timing;

  const auto records = cc::harness::run_experiment(cfg);
  cc::harness::print_summary(std::cout,
                             std::string("bits/vertex [") + protocol + ", " + family + "]",
                             cc::harness::summarize_bits_per_vertex(records));
  std::uint64_t total_rounds = 0;
  for (const auto& r : records) total_rounds += static_cast<std::uint64_t>(r.rounds);
  std::cout << "proper colorings: " << records.size() << "/" << records.size()
            << ", mean rounds: "
            << cc::harness::format_fixed(
                   static_cast<double>(total_rounds) / static_cast<double>(records.size()), 1)
            << '\n';
  if (!csv.empty()) std::cout << "wrote " << csv << '\n';
  return 0;
}

int cmd_exp_clique_scaling(std::uint64_t seed, std::uint64_t trials, const std::string& csv,
                           const std::string& c_sample) {
  const auto rows =
      cc::harness::experiment_clique_scaling(seed, trials, csv, cc::parse_rational(c_sample));
  std::cout << "protocol,delta,n,mean_bits_per_vertex,stddev,rejection_reference,"
               "deterministic_worst_case\n";
  for (const auto& r : rows)
    std::cout << r.protocol << ',' << r.delta << ',' << r.n << ','
              << cc::harness::format_fixed(r.mean_bits_per_vertex, 4) << ','
              << cc::harness::format_fixed(r.stddev_bits_per_vertex, 4) << ','
              << cc::harness::format_fixed(r.rejection_reference, 4) << ','
              << cc::harness::format_fixed(r.deterministic_worst_case, 1) << '\n';
  if (!csv.empty()) std::cout << "wrote " << csv << '\n';
  return 0;
}

int cmd_exp_slack_concentration(std::uint64_t seed, std::uint64_t draws) {
  const auto rows = cc::harness::experiment_slack_concentration(seed, draws);
  bool all_ok = true;
  std::cout << "m,k,pattern,p,draws,failures,failure_freq,threshold,ok\n";
  for (const auto& r : rows) {
    std::cout << r.m << ',' << r.k << ',' << r.pattern << ',' << r.p.to_string() << ',' << r.draws
              << ',' << r.failures << ',' << cc::harness::format_fixed(r.failure_freq, 4) << ','
              << cc::harness::format_fixed(r.threshold, 4) << ',' << (r.ok ? "yes" : "NO") << '\n';
    all_ok = all_ok && r.ok;
  }
  return all_ok ? 0 : 1;
}

int cmd_exp_tail(std::uint64_t seed, std::uint64_t seeds, const std::string& csv) {
  const auto t = cc::harness::experiment_tail(seed, seeds, csv);
  std::cout << "tail of main-protocol cost on clique-union n=" << t.n << " delta=" << t.delta
            << " over " << t.seeds << " seeds\n";
  cc::harness::print_summary(std::cout, "bits/vertex", t.bits_per_vertex);
  std::cout << "p50=" << cc::harness::format_fixed(t.p50, 4)
            << " p90=" << cc::harness::format_fixed(t.p90, 4)
            << " p99=" << cc::harness::format_fixed(t.bits_per_vertex.p99, 4) << '\n';
  if (!csv.empty()) std::cout << "wrote " << csv << '\n';
  return 0;
}

int cmd_lowerbound_roundtrip(const std::string& bits_arg, std::uint64_t seed) {
  std::string bits = bits_arg;
  if (bits.rfind("random:", 0) == 0) {
    const int count = std::stoi(bits.substr(7));
    cc::check_config(count >= 1, "random bit count must be >= 1");
    cc::SharedRandomStream rng(seed);
    bits.clear();
    for (int i = 0; i < count; ++i) bits += static_cast<char>('0' + (rng.next_u64() & 1));
  }
  const auto pg = cc::lowerbound::encode_bits_partitioned(bits);
  cc::MemorySession session(seed);
  const auto run = cc::protocols::color_main(pg, session);
  const std::string recovered =
      cc::lowerbound::decode_bits(run.coloring, static_cast<int>(bits.size()));
  std::cout << "bits:      " << bits << '\n';
  std::cout << "recovered: " << recovered << '\n';
  std::cout << "transcript bits: " << run.total_bits << '\n';
  const bool ok = recovered == bits;
  std::cout << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-party (delta+1)-coloring protocol laboratory"};
  app.require_subcommand(1);

  // --- run ---------------------------------------------------------------
  std::string protocol = "main", family = "clique-union", partition = "uniform";
  std::string seeds = "1..1", transport = "memory", csv, c_sample = "150";
  int n = 32, delta = 3;
  double edge_prob = 0.5;
  bool timing = false;
  auto* run = app.add_subcommand("run", "run a coloring protocol over a seed range");
  run->add_option("--protocol", protocol, "rejection|main|deterministic");
  run->add_option("--family", family, "clique-union|random|path|cycle|star");
  run->add_option("--n", n, "vertex count (clique-union rounds down to whole cliques)");
  run->add_option("--delta", delta, "max degree target (clique-union, random)");
  run->add_option("--edge-prob", edge_prob, "edge probability for the random family");
  run->add_option("--partition", partition, "uniform|all-alice|all-bob|interleave");
  run->add_option("--seeds", seeds, "seed range A..B (inclusive) or a single seed");
  run->add_option("--transport", transport, "memory|socket");
  run->add_option("--csv", csv, "write per-trial records to this CSV file");
  run->add_option("--c-sample", c_sample, "sampling constant (rational, e.g. 150 or 3/2)");
  run->add_flag("--timing", timing, "record wall times in the CSV (breaks byte determinism)");

  // --- exp ---------------------------------------------------------------
  auto* exp = app.add_subcommand("exp", "canned experiments");
  exp->require_subcommand(1);
  std::uint64_t exp_seed = 1, exp_trials = 200, exp_draws = 10'000, tail_seeds = 10'000;
  std::string exp_csv, exp_c_sample = "150";
  auto* exp_cs = exp->add_subcommand("clique-scaling", "bits/vertex vs delta on clique unions");
  exp_cs->add_option("--seed", exp_seed, "base seed");
  exp_cs->add_option("--trials", exp_trials, "seeds per (protocol, delta) cell");
  exp_cs->add_option("--csv", exp_csv, "write all trial records to this CSV file");
  exp_cs->add_option("--c-sample", exp_c_sample, "sampling constant for the main protocol");
  auto* exp_sc = exp->add_subcommand("slack-concentration", "slack-test failure frequencies");
  exp_sc->add_option("--seed", exp_seed, "base seed");
  exp_sc->add_option("--draws", exp_draws, "sample draws per (m, k, pattern) cell");
  auto* exp_tail = exp->add_subcommand("tail", "cost distribution of the main protocol");
  exp_tail->add_option("--seed", exp_seed, "base seed");
  exp_tail->add_option("--seeds", tail_seeds, "number of seeds");
  exp_tail->add_option("--csv", exp_csv, "write the histogram to this CSV file");

  // --- lowerbound --------------------------------------------------------
  auto* lb = app.add_subcommand("lowerbound", "bit-encoding gadget tools");
  lb->require_subcommand(1);
  std::string lb_bits = "random:16";
  std::uint64_t lb_seed = 1;
  auto* lb_rt = lb->add_subcommand(
      "roundtrip", "encode a bit string into gadgets, color it, decode it back");
  lb_rt->add_option("--bits", lb_bits, "a 0/1 string, or random:<count>");
  lb_rt->add_option("--seed", lb_seed, "seed for the protocol run (and random bits)");

  // --- count -------------------------------------------------------------
  auto* count = app.add_subcommand("count", "proper-coloring counters (JSON lines on stdout)");
  count->require_subcommand(1);
  std::string graph_file;
  int count_q = 0, count_n = 3, count_delta = 2;
  std::uint64_t count_trials = 100'000, count_seed = 1;
  auto* count_exact = count->add_subcommand("exact", "exact count by backtracking (n <= 16)");
  count_exact->add_option("--graph-file", graph_file, "graph in text format")->required();
  count_exact->add_option("--q", count_q, "number of colors (default delta+1)");
  auto* count_mc = count->add_subcommand("mc", "Monte Carlo proper-fraction estimate");
  count_mc->add_option("--graph-file", graph_file, "graph in text format")->required();
  count_mc->add_option("--q", count_q, "number of colors (default delta+1)");
  count_mc->add_option("--trials", count_trials, "number of sampled colorings");
  count_mc->add_option("--seed", count_seed, "sampling seed");
  auto* count_bound = count->add_subcommand("bound", "closed-form lower bound ((delta+1)/e)^n");
  count_bound->add_option("--n", count_n, "vertex count");
  count_bound->add_option("--delta", count_delta, "max degree");
  auto* count_cover = count->add_subcommand("cover", "witness cover set over all small graphs");
  count_cover->add_option("--n", count_n, "vertex count (<= 5)");
  count_cover->add_option("--delta", count_delta, "max degree cap (<= 4)");
  count_cover->add_option("--seed", count_seed, "sampling seed");

  // --- gen ---------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "emit a graph (or partition) in text format");
  std::string gen_family = "clique-union", gen_partition, gen_out;
  int gen_n = 32, gen_delta = 3;
  double gen_edge_prob = 0.5;
  std::uint64_t gen_seed = 1;
  gen->add_option("--family", gen_family, "clique-union|random|path|cycle|star");
  gen->add_option("--n", gen_n, "vertex count");
  gen->add_option("--delta", gen_delta, "max degree target");
  gen->add_option("--edge-prob", gen_edge_prob, "edge probability for the random family");
  gen->add_option("--seed", gen_seed, "generation seed");
  gen->add_option("--partition", gen_partition,
                  "also split edges: uniform|all-alice|all-bob|interleave");
  gen->add_option("-o,--out", gen_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run)
      return cmd_run(protocol, family, n, delta, edge_prob, partition, seeds, transport, csv,
                     c_sample, timing);
    if (*exp_cs) return cmd_exp_clique_scaling(exp_seed, exp_trials, exp_csv, exp_c_sample);
    if (*exp_sc) return cmd_exp_slack_concentration(exp_seed, exp_draws);
    if (*exp_tail) return cmd_exp_tail(exp_seed, tail_seeds, exp_csv);
    if (*lb_rt) return cmd_lowerbound_roundtrip(lb_bits, lb_seed);

    if (*count_exact) {
      const cc::Graph g = load_graph(graph_file);
      const int q = count_q > 0 ? count_q : g.max_degree() + 1;
      json out = {{"op", "exact"},
                  {"n", g.vertex_count()},
                  {"m", g.edge_count()},
                  {"delta", g.max_degree()},
                  {"q", q},
                  {"count", cc::counting::count_to_string(cc::counting::count_colorings_exact(g, q))}};
      std::cout << out.dump() << '\n';
      return 0;
    }
    if (*count_mc) {
      const cc::Graph g = load_graph(graph_file);
      const int q = count_q > 0 ? count_q : g.max_degree() + 1;
      const auto est = cc::counting::estimate_proper_fraction(g, q, count_trials, count_seed);
      const double total = std::pow(static_cast<double>(q), g.vertex_count());
      json out = {{"op", "mc"},          {"n", g.vertex_count()},
                  {"q", q},              {"trials", est.trials},
                  {"seed", count_seed},  {"fraction", est.fraction},
                  {"std_error", est.std_error}, {"estimated_count", est.fraction * total}};
      std::cout << out.dump() << '\n';
      return 0;
    }
    if (*count_bound) {
      json out = {{"op", "bound"},
                  {"n", count_n},
                  {"delta", count_delta},
                  {"bound", cc::counting::coloring_bound(count_n, count_delta)}};
      std::cout << out.dump() << '\n';
      return 0;
    }
    if (*count_cover) {
      const auto cover = cc::counting::build_cover_set(count_n, count_delta, count_seed);
      bool verified = true;
      for (std::size_t i = 0; i < cover.graphs.size(); ++i)
        verified = verified && cc::verify_coloring(cover.graphs[i],
                                                   cover.colorings[cover.witness[i]],
                                                   count_delta + 1);
      json out = {{"op", "cover"},
                  {"n", count_n},
                  {"delta", count_delta},
                  {"seed", count_seed},
                  {"graphs", cover.graphs.size()},
                  {"colorings", cover.colorings.size()},
                  {"verified", verified}};
      std::cout << out.dump() << '\n';
      return verified ? 0 : 1;
    }
    if (*gen) {
      const cc::harness::FamilyConfig fam{parse_family(gen_family), gen_n, gen_delta,
                                          gen_edge_prob};
      const cc::Graph g = cc::harness::build_family_graph(fam, gen_seed);
      std::ostringstream text;
      if (gen_partition.empty()) {
        cc::write_graph(text, g);
      } else {
        cc::write_partition(text, cc::partition_edges(g, parse_partition(gen_partition), gen_seed));
      }
      if (gen_out.empty()) {
        std::cout << text.str();
      } else {
        std::ofstream file(gen_out, std::ios::binary);
        cc::check_io(file.good(), "cannot open " + gen_out);
        file << text.str();
        std::cout << "wrote " << gen_out << '\n';
      }
      return 0;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
