#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oreach/baselines.hpp"
#include "oreach/graph.hpp"
#include "oreach/index.hpp"

namespace oreach {

// G(n, m) with every edge oriented from the smaller to the larger id.
// Throws CapacityError when m > n(n-1)/2.
DiGraph gen_random_dag(Vertex n, std::uint64_t m, std::uint64_t seed);

enum class QueryKind : std::uint8_t { kPositive, kNegative, kRandom, kMixed };

std::optional<QueryKind> parse_query_kind(std::string_view name);
std::string_view name_of(QueryKind kind) noexcept;

struct QueryPair {
  Vertex s = 0;
  Vertex t = 0;

  friend bool operator==(const QueryPair&, const QueryPair&) = default;
};

struct QuerySet {
  std::string name;
  QueryKind kind = QueryKind::kRandom;
  std::uint64_t seed = 0;
  std::vector<QueryPair> pairs;
  std::vector<std::uint8_t> expected;  // empty, or one ground-truth bit per pair

  std::size_t size() const noexcept { return pairs.size(); }
  bool has_expected() const noexcept { return !expected.empty(); }
};

// Ground truth for query generation and verification: the full matrix when
// it fits under the cap, otherwise a bidirectional BFS per pair.
class ReachOracle {
 public:
  explicit ReachOracle(const DiGraph& g,
                       std::uint64_t matrix_cap_bytes = kDefaultMatrixCapBytes);

  bool operator()(Vertex s, Vertex t);
  bool uses_matrix() const noexcept { return matrix_.has_value(); }

 private:
  std::optional<ReachMatrix> matrix_;
  std::optional<BiBfsSearch> search_;
};

// Uniform non-trivial pairs filtered by kind. Mixed sets are a shuffled union
// of `count` positive and `count` negative pairs. Throws InfeasibleError when
// n(n-1) consecutive draws are all rejected.
QuerySet gen_queries(const DiGraph& g, QueryKind kind, std::size_t count,
                     std::uint64_t seed, ReachOracle& oracle);

// "s t [expected]" per line; '#' lines are comments.
void write_queries(std::ostream& out, const QuerySet& qs);
QuerySet parse_queries(std::istream& in);

enum class Algorithm : std::uint8_t {
  kMatrix,
  kBfs,
  kBiBfs,
  kOReach,        // pruned BiBFS fallback
  kOReachBiBfs,   // plain BiBFS fallback
  kOReachBfs,     // plain BFS fallback
};

std::optional<Algorithm> parse_algorithm(std::string_view name);
std::string_view name_of(Algorithm algo) noexcept;
bool is_seeded(Algorithm algo) noexcept;

struct BenchConfig {
  std::uint32_t repetitions = 5;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  IndexParams params;
  std::uint64_t matrix_cap_bytes = kDefaultMatrixCapBytes;
};

struct BenchRow {
  std::string algorithm;
  std::string query_set;
  std::uint64_t queries = 0;
  std::uint32_t repetitions = 0;
  std::uint32_t seeds = 0;
  std::string aggregation;             // "median" or "mean-of-medians"
  std::optional<double> avg_query_us;  // unset for empty query sets
  double build_ms = 0;
  std::uint64_t index_bytes = 0;
  std::optional<double> fallback_rate;  // O'Reach variants only
  ObservationStats stats;
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

// Times every (algorithm, query set) combination. Each repetition runs the
// queries sequentially in a repetition-specific shuffled order. Answers are
// checked against expected bits where present; a mismatch throws
// CorrectnessError.
BenchReport bench(const DiGraph& dag, std::span<const Algorithm> algorithms,
                  std::span<const QuerySet> query_sets,
                  const BenchConfig& config);

void write_bench_tsv(std::ostream& out, const BenchReport& report);

// First-hit and overlap counts per observation, one row each.
void stats_report(std::ostream& out, const ObservationStats& stats,
                  std::string_view query_set, bool header = true);

// Runs every query of the set through the index, recording first-hit and
// overlap statistics. Fallback answers use the given resolver.
ObservationStats collect_stats(const ReachIndex& ix, const QuerySet& qs,
                               QueryResolver* fallback);

}  // namespace oreach
