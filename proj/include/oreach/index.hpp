#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "oreach/baselines.hpp"
#include "oreach/graph.hpp"
#include "oreach/observation.hpp"
#include "oreach/supportive.hpp"
#include "oreach/toporder.hpp"

namespace oreach {

struct IndexParams {
  std::uint32_t t = 4;   // extended topological orderings
  std::uint32_t k = 16;  // supportive vertices
  std::uint32_t p = 75;  // candidates per supportive vertex
  std::uint32_t h = 8;   // slim level threshold
  std::uint64_t seed = 0;

  friend bool operator==(const IndexParams&, const IndexParams&) = default;
};

// Serialized bytes per vertex: WCC id, two levels, three integers per
// ordering, and two ceil(k/8)-byte masks.
constexpr std::size_t index_record_bytes(std::uint32_t t,
                                         std::uint32_t k) noexcept {
  return 12 + 12 * static_cast<std::size_t>(t) + 2 * ((k + std::size_t{7}) / 8);
}

// The full index over a DAG. The first ceil(t/2) orderings have the forward
// flavor, the rest the backward flavor. `graph` is borrowed and must outlive
// the index; it is null for an index loaded without its graph, which can
// then only answer through observations.
struct ReachIndex {
  IndexParams params;
  std::vector<Vertex> wcc;
  LevelAssignment levels;
  std::vector<ExtTopOrder> orderings;
  SupportSet supports;
  const DiGraph* graph = nullptr;

  Vertex num_vertices() const noexcept {
    return static_cast<Vertex>(wcc.size());
  }
  std::size_t record_bytes() const noexcept {
    return index_record_bytes(params.t, params.k);
  }
};

// Seed of the i-th random stream derived from the index seed. Stream i < t
// drives ordering i; stream t drives candidate selection.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

// Steps: weak components, topological levels, t randomized extended
// orderings (built in parallel, one RNG stream each), then k supportive
// vertices. Deterministic per (dag, params). Throws AcyclicityError.
ReachIndex build_index(const DiGraph& dag, const IndexParams& params,
                       Execution exec = Execution::kParallel);

// Result of the constant-time test pipeline. `test` is the 1-based position
// in the pipeline of the deciding test, 0 when none decided.
struct TestHit {
  Decision decision;
  std::uint8_t test = 0;
};

inline constexpr std::size_t kTestCount = 7;

struct QueryOutcome {
  bool reachable = false;
  Observation answered_by = Observation::kNone;
  std::uint8_t test = 0;    // 0 for fallback answers
  std::uint64_t work = 0;   // vertices expanded by the fallback
};

// Answer counters. first_hit[test][obs] counts queries decided by obs in
// that test; overlap[obs] counts queries obs alone could have decided.
struct ObservationStats {
  std::array<std::array<std::uint64_t, kObservationCount>, kTestCount + 1>
      first_hit{};
  std::array<std::uint64_t, kObservationCount> overlap{};
  std::uint64_t fallback = 0;
  std::uint64_t fallback_work = 0;
  std::uint64_t total = 0;
  std::uint64_t overlap_queries = 0;
  std::uint64_t positive = 0;
  std::uint64_t negative = 0;

  void record(const QueryOutcome& outcome) noexcept;
  void record_overlap(std::uint32_t observation_mask) noexcept;

  std::uint64_t first_hits() const noexcept;
  std::uint64_t first_hits(Observation o) const noexcept;
  std::optional<double> fallback_rate() const noexcept;

  ObservationStats& operator+=(const ObservationStats& other) noexcept;
};

// Tests 1..7 in fixed order: s = t; levels (B5, B6); S1; first ordering;
// S2/S3; remaining orderings; different weak components (B2). Returns on the
// first decisive test. Touches no adjacency storage.
TestHit try_observations(const ReachIndex& ix, Vertex s, Vertex t) noexcept;

// Bit set of every observation able to decide (s, t), not just the first.
std::uint32_t observation_overlap(const ReachIndex& ix, Vertex s,
                                  Vertex t) noexcept;

// Exact resolver used when no observation decides a query. Each instance
// owns its scratch buffers; use one per concurrent query stream.
class QueryResolver {
 public:
  virtual ~QueryResolver() = default;
  virtual std::string_view name() const noexcept = 0;
  virtual bool resolve(Vertex s, Vertex t, SearchWork& work) = 0;
};

// Bidirectional BFS that runs the observation tests on every newly seen
// vertex: subquery (v, t) on the forward side, (s, v) on the backward side.
// A positive subquery ends the search, a negative one prunes v.
class PrunedBiBfs final : public QueryResolver {
 public:
  explicit PrunedBiBfs(const ReachIndex& ix);
  std::string_view name() const noexcept override { return "pbibfs"; }
  bool resolve(Vertex s, Vertex t, SearchWork& work) override;

 private:
  const ReachIndex* ix_;
  const DiGraph* g_;
  std::vector<std::uint32_t> fwd_seen_;
  std::vector<std::uint32_t> bwd_seen_;
  std::uint32_t epoch_ = 0;
  std::vector<Vertex> fwd_queue_;
  std::vector<Vertex> bwd_queue_;
};

class BiBfsResolver final : public QueryResolver {
 public:
  explicit BiBfsResolver(const DiGraph& g) : search_(g) {}
  std::string_view name() const noexcept override { return "bibfs"; }
  bool resolve(Vertex s, Vertex t, SearchWork& work) override {
    return search_.reachable(s, t, &work);
  }

 private:
  BiBfsSearch search_;
};

class BfsResolver final : public QueryResolver {
 public:
  explicit BfsResolver(const DiGraph& g) : search_(g) {}
  std::string_view name() const noexcept override { return "bfs"; }
  bool resolve(Vertex s, Vertex t, SearchWork& work) override {
    return search_.reachable(s, t, &work);
  }

 private:
  BfsSearch search_;
};

enum class FallbackKind : std::uint8_t { kPrunedBiBfs, kBiBfs, kBfs };

std::optional<FallbackKind> parse_fallback_name(std::string_view name);

// Throws Error when the index has no graph attached.
std::unique_ptr<QueryResolver> make_resolver(FallbackKind kind,
                                             const ReachIndex& ix);

// Observations first, then the fallback. Always exact.
QueryOutcome query(const ReachIndex& ix, Vertex s, Vertex t,
                   QueryResolver& fallback, ObservationStats* stats = nullptr);

// One-shot pruned bidirectional search, including the observation tests on
// (s, t) itself.
bool pruned_bibfs(const ReachIndex& ix, Vertex s, Vertex t,
                  ObservationStats* stats = nullptr);

// Little-endian layout:
//   header  "OREACHIX" | version u32 | n u32 | t u32 | k u32 | p u32 | h u32
//           | seed u64 | graph checksum u64 | supports u32 | support ids u32*
//   records per vertex: wcc u32 | F u32 | B u32
//           | per ordering: pos u32, high-or-low u32, max-or-min u32
//           | fwd mask ceil(k/8) B | bwd mask ceil(k/8) B
inline constexpr std::uint32_t kIndexFormatVersion = 1;
inline constexpr std::size_t kIndexFixedHeaderBytes = 52;

std::size_t index_header_bytes(const ReachIndex& ix) noexcept;

std::vector<std::byte> serialize_index(const ReachIndex& ix);
void write_index(std::ostream& out, const ReachIndex& ix);

// When dag is given, its checksum and size must match the header. Throws
// FormatError on any mismatch or truncation.
ReachIndex deserialize_index(std::span<const std::byte> bytes,
                             const DiGraph* dag);
ReachIndex read_index(std::istream& in, const DiGraph* dag);

}  // namespace oreach
