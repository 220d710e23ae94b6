#include "oreach/workbench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_set>

namespace oreach {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid]
                                : (values[mid - 1] + values[mid]) / 2.0;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

// Key of an unordered pair u < v.
std::uint64_t pair_key(Vertex u, Vertex v, Vertex n) {
  return static_cast<std::uint64_t>(u) * n + v;
}

}  // namespace

DiGraph gen_random_dag(Vertex n, std::uint64_t m, std::uint64_t seed) {
  const std::uint64_t total =
      n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (m > total) {
    throw CapacityError("G(n, m) with n = " + std::to_string(n) +
                        " admits at most " + std::to_string(total) +
                        " edges, asked for " + std::to_string(m));
  }
  Rng rng(seed);
  std::uniform_int_distribution<Vertex> vertex(0, n == 0 ? 0 : n - 1);
  // Rejection-sample whichever of the edge set or its complement is smaller.
  const bool sample_complement = m > total / 2;
  const std::uint64_t want = sample_complement ? total - m : m;
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(want * 2);
  std::vector<std::uint64_t> order;
  order.reserve(want);
  while (chosen.size() < want) {
    Vertex u = vertex(rng);
    Vertex v = vertex(rng);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (chosen.insert(pair_key(u, v, n)).second) order.push_back(pair_key(u, v, n));
  }
  std::vector<Edge> edges;
  edges.reserve(m);
  if (sample_complement) {
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) {
        if (!chosen.contains(pair_key(u, v, n))) edges.push_back({u, v});
      }
    }
  } else {
    for (std::uint64_t key : order) {
      edges.push_back({static_cast<Vertex>(key / n), static_cast<Vertex>(key % n)});
    }
  }
  return DiGraph::from_edges(n, edges);
}

std::optional<QueryKind> parse_query_kind(std::string_view name) {
  if (name == "positive") return QueryKind::kPositive;
  if (name == "negative") return QueryKind::kNegative;
  if (name == "random") return QueryKind::kRandom;
  if (name == "mixed") return QueryKind::kMixed;
  return std::nullopt;
}

std::string_view name_of(QueryKind kind) noexcept {
  switch (kind) {
    case QueryKind::kPositive: return "positive";
    case QueryKind::kNegative: return "negative";
    case QueryKind::kRandom: return "random";
    case QueryKind::kMixed: return "mixed";
  }
  return "random";
}

ReachOracle::ReachOracle(const DiGraph& g, std::uint64_t matrix_cap_bytes) {
  if (matrix_bytes(g.num_vertices()) <= matrix_cap_bytes) {
    matrix_ = build_matrix(g, Execution::kParallel, matrix_cap_bytes);
  } else {
    search_.emplace(g);
  }
}

bool ReachOracle::operator()(Vertex s, Vertex t) {
  if (matrix_) return matrix_->reachable(s, t);
  return search_->reachable(s, t);
}

QuerySet gen_queries(const DiGraph& g, QueryKind kind, std::size_t count,
                     std::uint64_t seed, ReachOracle& oracle) {
  const Vertex n = g.num_vertices();
  QuerySet qs;
  qs.name = std::string(name_of(kind));
  qs.kind = kind;
  qs.seed = seed;
  if (count == 0) return qs;
  if (n < 2) throw InfeasibleError("query generation needs at least 2 vertices");

  if (kind == QueryKind::kMixed) {
    QuerySet pos = gen_queries(g, QueryKind::kPositive, count,
                               derive_seed(seed, 1), oracle);
    QuerySet neg = gen_queries(g, QueryKind::kNegative, count,
                               derive_seed(seed, 2), oracle);
    std::vector<std::size_t> order(2 * count);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, 3));
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      const QuerySet& from = i < count ? pos : neg;
      const std::size_t j = i < count ? i : i - count;
      qs.pairs.push_back(from.pairs[j]);
      qs.expected.push_back(from.expected[j]);
    }
    return qs;
  }

  Rng rng(seed);
  std::uniform_int_distribution<Vertex> vertex(0, n - 1);
  const std::uint64_t budget = static_cast<std::uint64_t>(n) * (n - 1);
  std::uint64_t misses = 0;
  while (qs.pairs.size() < count) {
    const Vertex s = vertex(rng);
    const Vertex t = vertex(rng);
    if (s == t) continue;
    const bool reachable = oracle(s, t);
    const bool accept = kind == QueryKind::kRandom ||
                        (kind == QueryKind::kPositive) == reachable;
    if (!accept) {
      if (++misses >= budget) {
        throw InfeasibleError("no " + std::string(name_of(kind)) +
                              " query found after " + std::to_string(budget) +
                              " draws");
      }
      continue;
    }
    misses = 0;
    qs.pairs.push_back({s, t});
    qs.expected.push_back(reachable ? 1 : 0);
  }
  return qs;
}

void write_queries(std::ostream& out, const QuerySet& qs) {
  out << "# kind=" << name_of(qs.kind) << " seed=" << qs.seed
      << " count=" << qs.size() << '\n';
  for (std::size_t i = 0; i < qs.size(); ++i) {
    out << qs.pairs[i].s << ' ' << qs.pairs[i].t;
    if (qs.has_expected()) out << ' ' << static_cast<int>(qs.expected[i]);
    out << '\n';
  }
}

QuerySet parse_queries(std::istream& in) {
  QuerySet qs;
  std::string buffer;
  std::size_t line_no = 0;
  std::optional<bool> labelled;
  while (std::getline(in, buffer)) {
    ++line_no;
    const std::string_view line = trim(buffer);
    if (line.empty() || line.front() == '#') continue;
    std::uint64_t fields[3] = {0, 0, 0};
    int got = 0;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      if (p == end) break;
      if (got == 3) throw ParseError(line_no, "too many columns");
      const auto [next, ec] = std::from_chars(p, end, fields[got]);
      if (ec != std::errc{} || (next < end && *next != ' ' && *next != '\t')) {
        throw ParseError(line_no, "expected 's t [expected]'");
      }
      p = next;
      ++got;
    }
    if (got < 2) throw ParseError(line_no, "expected 's t [expected]'");
    if (fields[0] > kNoVertex - 1 || fields[1] > kNoVertex - 1) {
      throw ParseError(line_no, "vertex id does not fit in 32 bits");
    }
    const bool has_label = got == 3;
    if (labelled && *labelled != has_label) {
      throw ParseError(line_no, "expected column present on some lines only");
    }
    labelled = has_label;
    if (has_label && fields[2] > 1) {
      throw ParseError(line_no, "expected bit must be 0 or 1");
    }
    qs.pairs.push_back({static_cast<Vertex>(fields[0]),
                        static_cast<Vertex>(fields[1])});
    if (has_label) qs.expected.push_back(static_cast<std::uint8_t>(fields[2]));
  }
  return qs;
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "matrix") return Algorithm::kMatrix;
  if (name == "bfs") return Algorithm::kBfs;
  if (name == "bibfs") return Algorithm::kBiBfs;
  if (name == "oreach") return Algorithm::kOReach;
  if (name == "oreach+bibfs") return Algorithm::kOReachBiBfs;
  if (name == "oreach+bfs") return Algorithm::kOReachBfs;
  return std::nullopt;
}

std::string_view name_of(Algorithm algo) noexcept {
  switch (algo) {
    case Algorithm::kMatrix: return "matrix";
    case Algorithm::kBfs: return "bfs";
    case Algorithm::kBiBfs: return "bibfs";
    case Algorithm::kOReach: return "oreach";
    case Algorithm::kOReachBiBfs: return "oreach+bibfs";
    case Algorithm::kOReachBfs: return "oreach+bfs";
  }
  return "?";
}

bool is_seeded(Algorithm algo) noexcept {
  return algo == Algorithm::kOReach || algo == Algorithm::kOReachBiBfs ||
         algo == Algorithm::kOReachBfs;
}

namespace {

FallbackKind fallback_of(Algorithm algo) {
  switch (algo) {
    case Algorithm::kOReachBiBfs: return FallbackKind::kBiBfs;
    case Algorithm::kOReachBfs: return FallbackKind::kBfs;
    default: return FallbackKind::kPrunedBiBfs;
  }
}

void verify(const QuerySet& qs, std::size_t i, bool answer, Algorithm algo) {
  if (qs.has_expected() && (qs.expected[i] != 0) != answer) {
    throw CorrectnessError(std::string(name_of(algo)) + " answered " +
                           (answer ? "reachable" : "unreachable") + " for (" +
                           std::to_string(qs.pairs[i].s) + ", " +
                           std::to_string(qs.pairs[i].t) + ") in set '" +
                           qs.name + "'");
  }
}

// Runs `answer` over the set in the given order and returns µs per query.
template <typename Answer>
double time_queries(const QuerySet& qs, std::span<const std::size_t> order,
                    Algorithm algo, Answer&& answer) {
  std::vector<std::uint8_t> got(order.size());
  const auto start = Clock::now();
  for (std::size_t j = 0; j < order.size(); ++j) {
    const QueryPair& q = qs.pairs[order[j]];
    got[j] = answer(q.s, q.t) ? 1 : 0;
  }
  const double us = elapsed_ms(start) * 1000.0;
  for (std::size_t j = 0; j < order.size(); ++j) {
    verify(qs, order[j], got[j] != 0, algo);
  }
  return us / static_cast<double>(order.size());
}

}  // namespace

BenchReport bench(const DiGraph& dag, std::span<const Algorithm> algorithms,
                  std::span<const QuerySet> query_sets,
                  const BenchConfig& config) {
  BenchReport report;
  const std::uint32_t reps = std::max<std::uint32_t>(1, config.repetitions);

  // One permutation per (set, repetition), shared by all algorithms.
  std::vector<std::vector<std::vector<std::size_t>>> orders(query_sets.size());
  for (std::size_t qi = 0; qi < query_sets.size(); ++qi) {
    for (std::uint32_t r = 0; r < reps; ++r) {
      std::vector<std::size_t> order(query_sets[qi].size());
      std::iota(order.begin(), order.end(), 0);
      Rng rng(derive_seed(query_sets[qi].seed, 1000 + r));
      std::shuffle(order.begin(), order.end(), rng);
      orders[qi].push_back(std::move(order));
    }
  }

  for (Algorithm algo : algorithms) {
    std::vector<BenchRow> rows(query_sets.size());
    for (std::size_t qi = 0; qi < query_sets.size(); ++qi) {
      rows[qi].algorithm = std::string(name_of(algo));
      rows[qi].query_set = query_sets[qi].name;
      rows[qi].queries = query_sets[qi].size();
      rows[qi].repetitions = reps;
    }

    if (!is_seeded(algo)) {
      double build_ms = 0;
      std::uint64_t bytes = 0;
      std::optional<ReachMatrix> mx;
      std::optional<BfsSearch> bfs;
      std::optional<BiBfsSearch> bibfs;
      const auto start = Clock::now();
      if (algo == Algorithm::kMatrix) {
        mx = build_matrix(dag, Execution::kParallel, config.matrix_cap_bytes);
        bytes = matrix_bytes(dag.num_vertices());
      } else if (algo == Algorithm::kBfs) {
        bfs.emplace(dag);
      } else {
        bibfs.emplace(dag);
      }
      build_ms = elapsed_ms(start);
      auto answer = [&](Vertex s, Vertex t) {
        if (mx) return matrix_query(*mx, s, t);
        if (bfs) return bfs->reachable(s, t);
        return bibfs->reachable(s, t);
      };
      for (std::size_t qi = 0; qi < query_sets.size(); ++qi) {
        BenchRow& row = rows[qi];
        row.seeds = 1;
        row.aggregation = "median";
        row.build_ms = build_ms;
        row.index_bytes = bytes;
        if (query_sets[qi].size() == 0) continue;
        std::vector<double> per_rep;
        for (std::uint32_t r = 0; r < reps; ++r) {
          per_rep.push_back(time_queries(query_sets[qi], orders[qi][r], algo, answer));
        }
        row.avg_query_us = median(per_rep);
      }
    } else {
      const std::vector<std::uint64_t> seeds =
          config.seeds.empty() ? std::vector<std::uint64_t>{config.params.seed}
                               : config.seeds;
      std::vector<std::vector<double>> per_seed(query_sets.size());
      double build_total = 0;
      std::uint64_t bytes = 0;
      for (std::uint64_t seed : seeds) {
        IndexParams params = config.params;
        params.seed = seed;
        const auto start = Clock::now();
        const ReachIndex ix = build_index(dag, params);
        build_total += elapsed_ms(start);
        bytes = index_header_bytes(ix) +
                static_cast<std::uint64_t>(ix.num_vertices()) * ix.record_bytes();
        const auto resolver = make_resolver(fallback_of(algo), ix);
        for (std::size_t qi = 0; qi < query_sets.size(); ++qi) {
          const QuerySet& qs = query_sets[qi];
          if (qs.size() == 0) continue;
          // Statistics come from an untimed pass in original order.
          for (const QueryPair& q : qs.pairs) {
            query(ix, q.s, q.t, *resolver, &rows[qi].stats);
          }
          std::vector<double> per_rep;
          for (std::uint32_t r = 0; r < reps; ++r) {
            per_rep.push_back(time_queries(
                qs, orders[qi][r], algo, [&](Vertex s, Vertex t) {
                  return query(ix, s, t, *resolver).reachable;
                }));
          }
          per_seed[qi].push_back(median(per_rep));
        }
      }
      for (std::size_t qi = 0; qi < query_sets.size(); ++qi) {
        BenchRow& row = rows[qi];
        row.seeds = static_cast<std::uint32_t>(seeds.size());
        row.aggregation = "mean-of-medians";
        row.build_ms = build_total / static_cast<double>(seeds.size());
        row.index_bytes = bytes;
        row.fallback_rate = row.stats.fallback_rate();
        if (!per_seed[qi].empty()) {
          row.avg_query_us =
              std::accumulate(per_seed[qi].begin(), per_seed[qi].end(), 0.0) /
              static_cast<double>(per_seed[qi].size());
        }
      }
    }
    for (BenchRow& row : rows) report.rows.push_back(std::move(row));
  }
  return report;
}

void write_bench_tsv(std::ostream& out, const BenchReport& report) {
  out << "algorithm\tquery_set\tqueries\treps\tseeds\taggregation\t"
         "avg_query_us\tbuild_ms\tindex_bytes\tfallback_rate\n";
  out << std::fixed;
  for (const BenchRow& row : report.rows) {
    out << row.algorithm << '\t' << row.query_set << '\t' << row.queries
        << '\t' << row.repetitions << '\t' << row.seeds << '\t'
        << row.aggregation << '\t';
    if (row.avg_query_us) {
      out << std::setprecision(4) << *row.avg_query_us;
    } else {
      out << "NA";
    }
    out << '\t' << std::setprecision(3) << row.build_ms << '\t'
        << row.index_bytes << '\t';
    if (row.fallback_rate) {
      out << std::setprecision(6) << *row.fallback_rate;
    } else {
      out << "NA";
    }
    out << '\n';
  }
}

void stats_report(std::ostream& out, const ObservationStats& stats,
                  std::string_view query_set, bool header) {
  if (header) {
    out << "query_set\tobservation\tfirst_hit\tfirst_hit_share\toverlap\t"
           "overlap_share\n";
  }
  if (stats.total == 0) return;
  auto share = [](std::uint64_t part, std::uint64_t whole) {
    return whole == 0 ? 0.0
                      : static_cast<double>(part) / static_cast<double>(whole);
  };
  out << std::fixed << std::setprecision(6);
  for (std::size_t o = index_of(Observation::kSameVertex);
       o < index_of(Observation::kFallback); ++o) {
    const auto obs = static_cast<Observation>(o);
    const std::uint64_t first = stats.first_hits(obs);
    out << query_set << '\t' << name_of(obs) << '\t' << first << '\t'
        << share(first, stats.total) << '\t' << stats.overlap[o] << '\t'
        << share(stats.overlap[o], stats.overlap_queries) << '\n';
  }
  out << query_set << '\t' << name_of(Observation::kFallback) << '\t'
      << stats.fallback << '\t' << share(stats.fallback, stats.total)
      << "\t0\t" << share(0, stats.overlap_queries) << '\n';
}

ObservationStats collect_stats(const ReachIndex& ix, const QuerySet& qs,
                               QueryResolver* fallback) {
  ObservationStats stats;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const QueryPair& q = qs.pairs[i];
    stats.record_overlap(observation_overlap(ix, q.s, q.t));
    if (fallback != nullptr) {
      query(ix, q.s, q.t, *fallback, &stats);
      continue;
    }
    // Without a graph, undecided queries count as fallbacks and take their
    // answer from the expected column when there is one.
    const TestHit h = try_observations(ix, q.s, q.t);
    QueryOutcome outcome;
    if (h.decision.decisive()) {
      outcome.reachable = h.decision.verdict == Verdict::kReachable;
      outcome.answered_by = h.decision.by;
      outcome.test = h.test;
    } else {
      outcome.reachable = qs.has_expected() && qs.expected[i] != 0;
      outcome.answered_by = Observation::kFallback;
    }
    stats.record(outcome);
  }
  return stats;
}

}  // namespace oreach
