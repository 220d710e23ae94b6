// Command-line workbench: graph and query generation, index building,
// querying, benchmarking and observation statistics.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oreach/baselines.hpp"
#include "oreach/graph.hpp"
#include "oreach/index.hpp"
#include "oreach/workbench.hpp"

namespace {

using namespace oreach;

GraphFormat resolve_format(const std::string& flag, const std::string& path) {
  if (!flag.empty()) {
    if (auto f = parse_format_name(flag)) return *f;
    throw Error("unknown graph format '" + flag + "'");
  }
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".gra") == 0
             ? GraphFormat::kGra
             : GraphFormat::kEdgeList;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error("cannot write " + path);
  return out;
}

// Input graph plus its condensation; queries in file ids go through the
// dense remap and then the SCC map.
struct LoadedGraph {
  ParsedGraph parsed;
  CondensationMap cond;

  static LoadedGraph load(const std::string& path, const std::string& format) {
    LoadedGraph g;
    g.parsed = load_graph(path, resolve_format(format, path));
    if (g.parsed.self_loops_dropped + g.parsed.duplicates_dropped > 0) {
      std::cerr << "warning: dropped " << g.parsed.self_loops_dropped
                << " self-loops and " << g.parsed.duplicates_dropped
                << " duplicate edges\n";
    }
    g.cond = scc_condense(g.parsed.graph);
    return g;
  }

  Vertex dense(std::uint64_t original) const {
    if (auto v = parsed.to_dense(original)) return *v;
    throw Error("query vertex " + std::to_string(original) +
                " is not in the graph");
  }

  // Maps a query set in file ids onto condensed ids.
  QuerySet condensed(const QuerySet& qs) const {
    QuerySet out = qs;
    for (QueryPair& q : out.pairs) {
      q = {cond.scc_of[dense(q.s)], cond.scc_of[dense(q.t)]};
    }
    return out;
  }
};

QuerySet load_queries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  QuerySet qs = parse_queries(in);
  qs.name = std::filesystem::path(path).stem().string();
  return qs;
}

int run_gen_graph(Vertex n, std::uint64_t m, std::uint64_t seed,
                  const std::string& format, const std::string& out_path) {
  const DiGraph g = gen_random_dag(n, m, seed);
  std::ofstream out = open_out(out_path);
  write_graph(out, g, resolve_format(format, out_path));
  std::cerr << "wrote G(" << n << ", " << m << ") to " << out_path << '\n';
  return 0;
}

int run_gen_queries(const std::string& graph_path, const std::string& format,
                    const std::string& kind_name, std::size_t count,
                    std::uint64_t seed, const std::string& out_path) {
  const auto kind = parse_query_kind(kind_name);
  if (!kind) throw Error("unknown query kind '" + kind_name + "'");
  const ParsedGraph parsed = load_graph(graph_path, resolve_format(format, graph_path));
  ReachOracle oracle(parsed.graph);
  QuerySet qs = gen_queries(parsed.graph, *kind, count, seed, oracle);
  if (parsed.remapped()) {
    for (QueryPair& q : qs.pairs) {
      q = {parsed.original_ids[q.s], parsed.original_ids[q.t]};
    }
  }
  std::ofstream out = open_out(out_path);
  write_queries(out, qs);
  return 0;
}

int run_build(const std::string& graph_path, const std::string& format,
              const IndexParams& params, const std::string& out_index,
              const std::string& out_remap) {
  const LoadedGraph g = LoadedGraph::load(graph_path, format);
  const auto start = std::chrono::steady_clock::now();
  const ReachIndex ix = build_index(g.cond.dag, params);
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  std::ofstream out = open_out(out_index, true);
  write_index(out, ix);
  if (!out_remap.empty()) {
    std::ofstream remap = open_out(out_remap);
    write_remap(remap, g.parsed);
  }
  std::cerr << "built index over " << ix.num_vertices() << " SCCs ("
            << g.parsed.graph.num_vertices() << " vertices) in " << ms
            << " ms, " << ix.record_bytes() << " B per vertex\n";
  return 0;
}

ReachIndex load_index(const std::string& path, const DiGraph* dag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_index(in, dag);
}

int run_query(const std::string& index_path, const std::string& graph_path,
              const std::string& format, const std::string& pairs_path,
              const std::string& fallback_name) {
  const auto kind = parse_fallback_name(fallback_name);
  if (!kind) throw Error("unknown fallback '" + fallback_name + "'");
  const LoadedGraph g = LoadedGraph::load(graph_path, format);
  const ReachIndex ix = load_index(index_path, &g.cond.dag);
  const QuerySet original = load_queries(pairs_path);
  const QuerySet qs = g.condensed(original);
  const auto resolver = make_resolver(*kind, ix);

  std::size_t mismatches = 0;
  std::cout << "s\tt\treachable\tanswered_by\n";
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const QueryPair& orig = original.pairs[i];
    const QueryPair& q = qs.pairs[i];
    QueryOutcome outcome;
    if (orig.s != orig.t && q.s == q.t) {
      outcome.reachable = true;
      outcome.answered_by = Observation::kB3;
    } else {
      outcome = query(ix, q.s, q.t, *resolver);
    }
    std::cout << orig.s << '\t' << orig.t << '\t' << (outcome.reachable ? 1 : 0)
              << '\t' << name_of(outcome.answered_by) << '\n';
    if (original.has_expected() &&
        (original.expected[i] != 0) != outcome.reachable) {
      ++mismatches;
    }
  }
  if (mismatches > 0) {
    std::cerr << "error: " << mismatches
              << " answers disagree with the expected column\n";
    return 2;
  }
  return 0;
}

int run_bench(const std::string& graph_path, const std::string& format,
              const std::vector<std::string>& query_paths,
              const std::vector<std::string>& algo_names, BenchConfig config,
              const std::string& out_tsv) {
  const LoadedGraph g = LoadedGraph::load(graph_path, format);
  std::vector<Algorithm> algos;
  for (const std::string& name : algo_names) {
    const auto a = parse_algorithm(name);
    if (!a) throw Error("unknown algorithm '" + name + "'");
    algos.push_back(*a);
  }
  std::vector<QuerySet> sets;
  for (const std::string& path : query_paths) {
    sets.push_back(g.condensed(load_queries(path)));
  }
  const BenchReport report = bench(g.cond.dag, algos, sets, config);
  if (out_tsv.empty() || out_tsv == "-") {
    write_bench_tsv(std::cout, report);
  } else {
    std::ofstream out = open_out(out_tsv);
    write_bench_tsv(out, report);
  }
  return 0;
}

int run_stats(const std::string& index_path, const std::string& graph_path,
              const std::string& format,
              const std::vector<std::string>& query_paths) {
  std::optional<LoadedGraph> g;
  if (!graph_path.empty()) g = LoadedGraph::load(graph_path, format);
  const ReachIndex ix = load_index(index_path, g ? &g->cond.dag : nullptr);
  std::unique_ptr<QueryResolver> resolver;
  if (g) resolver = make_resolver(FallbackKind::kPrunedBiBfs, ix);
  bool header = true;
  for (const std::string& path : query_paths) {
    QuerySet qs = load_queries(path);
    if (g) {
      qs = g->condensed(qs);
    } else {
      for (const QueryPair& q : qs.pairs) {
        if (q.s >= ix.num_vertices() || q.t >= ix.num_vertices()) {
          throw Error("query vertex out of range for the index");
        }
      }
    }
    const ObservationStats stats = collect_stats(ix, qs, resolver.get());
    stats_report(std::cout, stats, qs.name, header);
    header = false;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"O'Reach reachability index workbench"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  std::string format;
  std::string out_path;

  auto* gen_graph = app.add_subcommand("gen-graph", "Generate a random G(n, m) DAG");
  Vertex n = 0;
  std::uint64_t m = 0;
  std::uint64_t seed = 0;
  gen_graph->add_option("--n", n, "Vertex count")->required();
  gen_graph->add_option("--m", m, "Edge count")->required();
  gen_graph->add_option("--seed", seed, "Random seed");
  gen_graph->add_option("--format", format, "edge-list or gra (default: by extension)");
  gen_graph->add_option("--out", out_path, "Output graph file")->required();

  auto* gen_q = app.add_subcommand("gen-queries", "Generate a labelled query set");
  std::string graph_path;
  std::string kind = "random";
  std::size_t count = 10000;
  gen_q->add_option("--graph", graph_path, "Input graph")->required();
  gen_q->add_option("--format", format, "Graph format");
  gen_q->add_option("--kind", kind, "positive, negative, random or mixed");
  gen_q->add_option("--count", count, "Pairs per set (mixed: per half)");
  gen_q->add_option("--seed", seed, "Random seed");
  gen_q->add_option("--out", out_path, "Output query file")->required();

  auto* build = app.add_subcommand("build", "Build and serialize an index");
  IndexParams params;
  std::string index_path;
  std::string remap_path;
  build->add_option("--graph", graph_path, "Input graph")->required();
  build->add_option("--format", format, "Graph format");
  build->add_option("--t", params.t, "Extended topological orderings");
  build->add_option("--k", params.k, "Supportive vertices");
  build->add_option("--p", params.p, "Candidates per supportive vertex");
  build->add_option("--h", params.h, "Slim level threshold");
  build->add_option("--seed", params.seed, "Random seed");
  build->add_option("--out-index", index_path, "Output index file")->required();
  build->add_option("--out-remap", remap_path, "Write the id remap table here");

  auto* query_cmd = app.add_subcommand("query", "Answer queries with an index");
  std::string pairs_path;
  std::string fallback = "pbibfs";
  query_cmd->add_option("--index", index_path, "Index file")->required();
  query_cmd->add_option("--graph", graph_path, "Graph the index was built from")->required();
  query_cmd->add_option("--format", format, "Graph format");
  query_cmd->add_option("--pairs", pairs_path, "Query file")->required();
  query_cmd->add_option("--fallback", fallback, "pbibfs, bibfs or bfs")
      ->check(CLI::IsMember({"pbibfs", "bibfs", "bfs"}));

  auto* bench_cmd = app.add_subcommand("bench", "Time algorithms on query sets");
  std::vector<std::string> query_paths;
  std::vector<std::string> algos = {"matrix", "oreach"};
  BenchConfig config;
  std::string tsv_path;
  bench_cmd->add_option("--graph", graph_path, "Input graph")->required();
  bench_cmd->add_option("--format", format, "Graph format");
  bench_cmd->add_option("--queries", query_paths, "Query files")->required();
  bench_cmd->add_option("--algos", algos,
                        "matrix, bfs, bibfs, oreach, oreach+bibfs, oreach+bfs");
  bench_cmd->add_option("--reps", config.repetitions, "Repetitions per measurement");
  bench_cmd->add_option("--seeds", config.seeds, "Index seeds for O'Reach variants");
  bench_cmd->add_option("--t", config.params.t, "Extended topological orderings");
  bench_cmd->add_option("--k", config.params.k, "Supportive vertices");
  bench_cmd->add_option("--p", config.params.p, "Candidates per supportive vertex");
  bench_cmd->add_option("--h", config.params.h, "Slim level threshold");
  bench_cmd->add_option("--out-tsv", tsv_path, "Report file (default: stdout)");

  auto* stats_cmd = app.add_subcommand("stats", "Observation effectiveness per query set");
  stats_cmd->add_option("--index", index_path, "Index file")->required();
  stats_cmd->add_option("--queries", query_paths, "Query files")->required();
  stats_cmd->add_option("--graph", graph_path,
                        "Graph the index was built from; without it query ids "
                        "are condensed ids and undecided queries are not searched");
  stats_cmd->add_option("--format", format, "Graph format");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_graph) return run_gen_graph(n, m, seed, format, out_path);
    if (*gen_q) {
      return run_gen_queries(graph_path, format, kind, count, seed, out_path);
    }
    if (*build) return run_build(graph_path, format, params, index_path, remap_path);
    if (*query_cmd) {
      return run_query(index_path, graph_path, format, pairs_path, fallback);
    }
    if (*bench_cmd) {
      return run_bench(graph_path, format, query_paths, algos, config, tsv_path);
    }
    if (*stats_cmd) return run_stats(index_path, graph_path, format, query_paths);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
