#include <doctest.h>

#include <set>
#include <sstream>

#include "oracle.hpp"
#include "oreach/workbench.hpp"

using namespace oreach;

namespace {

const std::vector<Edge> kDiamond = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_SUITE("workbench") {

TEST_CASE("complete and empty random DAGs") {
  const DiGraph full = gen_random_dag(4, 6, 1);
  CHECK(full.num_edges() == 6);
  CHECK(reachability_rho(build_matrix(full)) == 0.5);
  CHECK(gen_random_dag(10, 0, 1).num_edges() == 0);
  CHECK_THROWS_AS(gen_random_dag(4, 7, 1), CapacityError);
}

TEST_CASE("property: random DAGs are acyclic with exactly m edges") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Vertex n = 2 + static_cast<Vertex>(seed * 37 % 200);
    const std::uint64_t max_m = std::uint64_t{n} * (n - 1) / 2;
    const std::uint64_t m = (seed * 7919) % (max_m + 1);
    const DiGraph g = gen_random_dag(n, m, seed);
    CHECK(g.num_edges() == m);
    CHECK_NOTHROW(topological_levels(g));
    CHECK(gen_random_dag(n, m, seed) == g);
  }
  const DiGraph big = gen_random_dag(1 << 10, 1 << 12, 3);
  CHECK(big.num_edges() == (1 << 12));
  CHECK_NOTHROW(topological_levels(big));
}

TEST_CASE("diamond negatives") {
  const DiGraph d = DiGraph::from_edges(4, kDiamond);
  ReachOracle oracle(d);
  const QuerySet qs = gen_queries(d, QueryKind::kNegative, 7, 1, oracle);
  REQUIRE(qs.size() == 7);
  const oracle::Closure closure(d);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    CHECK(qs.pairs[i].s != qs.pairs[i].t);
    CHECK_FALSE(closure(qs.pairs[i].s, qs.pairs[i].t));
    CHECK(qs.expected[i] == 0);
  }
}

TEST_CASE("positive queries on an edgeless graph are infeasible") {
  const DiGraph e = DiGraph::from_edges(5, {});
  ReachOracle oracle(e);
  CHECK_THROWS_AS(gen_queries(e, QueryKind::kPositive, 1, 1, oracle),
                  InfeasibleError);
}

TEST_CASE("property: generated labels match the closure") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 12; ++round) {
    const DiGraph g = oracle::random_dag(40, 0.08, rng);
    const oracle::Closure closure(g);
    ReachOracle by_matrix(g);
    ReachOracle by_search(g, 0);
    CHECK(by_matrix.uses_matrix());
    CHECK_FALSE(by_search.uses_matrix());
    for (QueryKind kind : {QueryKind::kPositive, QueryKind::kNegative,
                           QueryKind::kRandom, QueryKind::kMixed}) {
      const QuerySet a = gen_queries(g, kind, 100, round, by_matrix);
      const QuerySet b = gen_queries(g, kind, 100, round, by_search);
      CHECK(a.pairs == b.pairs);
      for (std::size_t i = 0; i < a.size(); ++i) {
        const bool truth = closure(a.pairs[i].s, a.pairs[i].t);
        REQUIRE(a.expected[i] == truth);
        if (kind == QueryKind::kPositive) CHECK(truth);
        if (kind == QueryKind::kNegative) CHECK_FALSE(truth);
      }
      if (kind == QueryKind::kMixed) {
        CHECK(a.size() == 200);
        CHECK(std::count(a.expected.begin(), a.expected.end(), 1) == 100);
      } else {
        CHECK(a.size() == 100);
      }
    }
  }
}

TEST_CASE("query files round trip") {
  const DiGraph d = DiGraph::from_edges(4, kDiamond);
  ReachOracle oracle(d);
  const QuerySet qs = gen_queries(d, QueryKind::kMixed, 5, 2, oracle);
  std::stringstream buf;
  write_queries(buf, qs);
  CHECK(buf.str().front() == '#');
  const QuerySet back = parse_queries(buf);
  CHECK(back.pairs == qs.pairs);
  CHECK(back.expected == qs.expected);

  std::istringstream plain("0 3\n\n# note\n1 2\n");
  const QuerySet unlabelled = parse_queries(plain);
  CHECK(unlabelled.size() == 2);
  CHECK_FALSE(unlabelled.has_expected());
}

TEST_CASE("malformed query files") {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      parse_queries(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("0 1\n2\n") == 2);
  CHECK(line_of("0 1 1 1\n") == 1);
  CHECK(line_of("0 1 2\n") == 1);
  CHECK(line_of("0 1 1\n1 2\n") == 2);
  CHECK(line_of("0 x\n") == 1);
}

TEST_CASE("names") {
  for (QueryKind k : {QueryKind::kPositive, QueryKind::kNegative,
                      QueryKind::kRandom, QueryKind::kMixed}) {
    CHECK(parse_query_kind(name_of(k)) == k);
  }
  for (Algorithm a : {Algorithm::kMatrix, Algorithm::kBfs, Algorithm::kBiBfs,
                      Algorithm::kOReach, Algorithm::kOReachBiBfs,
                      Algorithm::kOReachBfs}) {
    CHECK(parse_algorithm(name_of(a)) == a);
  }
  CHECK(name_of(Algorithm::kOReach) == "oreach");
  CHECK(is_seeded(Algorithm::kOReachBfs));
  CHECK_FALSE(is_seeded(Algorithm::kMatrix));
  CHECK_FALSE(parse_query_kind("all").has_value());
}

TEST_CASE("bench report") {
  const DiGraph g = gen_random_dag(300, 900, 5);
  ReachOracle oracle(g);
  std::vector<QuerySet> sets = {gen_queries(g, QueryKind::kNegative, 50, 1, oracle),
                                gen_queries(g, QueryKind::kPositive, 50, 2, oracle)};
  sets.push_back(QuerySet{});
  sets.back().name = "empty";
  const std::vector<Algorithm> algos = {Algorithm::kMatrix, Algorithm::kBiBfs,
                                        Algorithm::kOReach};
  BenchConfig config;
  config.repetitions = 1;
  config.seeds = {0, 1};
  const BenchReport report = bench(g, algos, sets, config);
  REQUIRE(report.rows.size() == 9);
  for (const BenchRow& row : report.rows) {
    CHECK(row.avg_query_us.has_value() == (row.queries > 0));
    CHECK(row.repetitions == 1);
    if (row.algorithm == "oreach") {
      CHECK(row.aggregation == "mean-of-medians");
      CHECK(row.seeds == 2);
      CHECK(row.index_bytes == 52 + 4 * 16 + 64 * 300);
      if (row.queries > 0) {
        // Two seeds, each query counted once per seed.
        CHECK(row.stats.total == 2 * row.queries);
        CHECK(row.fallback_rate.has_value());
      }
    } else {
      CHECK(row.aggregation == "median");
      CHECK_FALSE(row.fallback_rate.has_value());
    }
  }
  std::ostringstream tsv;
  write_bench_tsv(tsv, report);
  const auto lines = lines_of(tsv.str());
  CHECK(lines.size() == 10);
  CHECK(lines[0].rfind("algorithm\tquery_set", 0) == 0);
  CHECK(tsv.str().find("\tNA\t") != std::string::npos);
}

TEST_CASE("bench rejects wrong expectations") {
  const DiGraph d = DiGraph::from_edges(4, kDiamond);
  QuerySet lie;
  lie.name = "lie";
  lie.pairs = {{0, 3}};
  lie.expected = {0};
  const std::vector<QuerySet> sets = {lie};
  for (Algorithm a : {Algorithm::kMatrix, Algorithm::kOReach}) {
    const std::vector<Algorithm> algos = {a};
    BenchConfig config;
    config.repetitions = 1;
    config.seeds = {0};
    CHECK_THROWS_AS(bench(d, algos, sets, config), CorrectnessError);
  }
}

TEST_CASE("stats on a path are decided by levels") {
  std::vector<Edge> path;
  for (Vertex v = 0; v + 1 < 12; ++v) path.push_back({v, v + 1});
  const DiGraph g = DiGraph::from_edges(12, path);
  ReachOracle oracle(g);
  const QuerySet neg = gen_queries(g, QueryKind::kNegative, 200, 4, oracle);
  const ReachIndex ix = build_index(g, IndexParams{});
  const ObservationStats stats = collect_stats(ix, neg, nullptr);
  std::uint64_t test2 = 0;
  for (std::uint64_t c : stats.first_hit[2]) test2 += c;
  CHECK(test2 == 200);
  CHECK(stats.fallback == 0);
}

TEST_CASE("stats conserve queries over all diamond pairs") {
  const DiGraph d = DiGraph::from_edges(4, kDiamond);
  QuerySet all;
  all.name = "all";
  for (Vertex s = 0; s < 4; ++s) {
    for (Vertex t = 0; t < 4; ++t) {
      if (s != t) all.pairs.push_back({s, t});
    }
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ReachIndex ix = build_index(d, IndexParams{1, 1, 4, 8, seed});
    const auto resolver = make_resolver(FallbackKind::kPrunedBiBfs, ix);
    const ObservationStats stats = collect_stats(ix, all, resolver.get());
    CHECK(stats.first_hits() + stats.fallback == 12);
    CHECK(stats.positive == 5);
    CHECK(stats.overlap_queries == 12);
  }
}

TEST_CASE("stats table") {
  std::ostringstream empty;
  stats_report(empty, ObservationStats{}, "none");
  CHECK(lines_of(empty.str()).size() == 1);

  const DiGraph d = DiGraph::from_edges(4, kDiamond);
  QuerySet qs;
  qs.name = "one";
  qs.pairs = {{3, 0}};
  const ReachIndex ix = build_index(d, IndexParams{});
  std::ostringstream out;
  stats_report(out, collect_stats(ix, qs, nullptr), "one");
  const auto lines = lines_of(out.str());
  // Header, one row per observation from EQ to S3, and the fallback row.
  CHECK(lines.size() == 1 + 15 + 1);
  CHECK(out.str().find("one\tB5\t1\t1.000000") != std::string::npos);
}

}  // TEST_SUITE
