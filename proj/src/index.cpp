#include "oreach/index.hpp"

#include <string>

namespace oreach {
namespace {

constexpr std::uint32_t bit(Observation o) noexcept {
  return std::uint32_t{1} << index_of(o);
}

TestHit hit(Decision d, std::uint8_t test) noexcept { return {d, test}; }

// Every observation of one ordering that applies to (s, t), s != t.
std::uint32_t ordering_overlap(const ExtTopOrder& ord, Vertex s,
                               Vertex t) noexcept {
  std::uint32_t mask = 0;
  const Vertex ps = ord.pos[s];
  const Vertex pt = ord.pos[t];
  if (pt < ps) mask |= bit(Observation::kB4);
  if (ord.flavor == Flavor::kForward) {
    if (ps <= pt && pt <= ord.hi_or_lo[s]) mask |= bit(Observation::kT1);
    if (pt > ord.mx_or_mn[s]) mask |= bit(Observation::kT2);
    if (pt == ord.mx_or_mn[s]) mask |= bit(Observation::kT3);
  } else {
    if (ord.hi_or_lo[t] <= ps && ps <= pt) mask |= bit(Observation::kT4);
    if (ps < ord.mx_or_mn[t]) mask |= bit(Observation::kT5);
    if (ps == ord.mx_or_mn[t]) mask |= bit(Observation::kT6);
  }
  return mask;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  // splitmix64 finalizer over (seed, stream).
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ReachIndex build_index(const DiGraph& dag, const IndexParams& params,
                       Execution exec) {
  ReachIndex ix;
  ix.params = params;
  ix.graph = &dag;
  ix.wcc = weak_components(dag);
  ix.levels = topological_levels(dag);

  const std::uint32_t forward_count = (params.t + 1) / 2;
  ix.orderings.resize(params.t);
  auto make = [&](std::uint32_t i) {
    const std::uint64_t seed = derive_seed(params.seed, i);
    ix.orderings[i] = i < forward_count ? random_forward_order(dag, seed)
                                        : random_backward_order(dag, seed);
  };
  if (exec == Execution::kSerial) {
    for (std::uint32_t i = 0; i < params.t; ++i) make(i);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(params.t); ++i) {
      make(static_cast<std::uint32_t>(i));
    }
  }

  Rng rng(derive_seed(params.seed, params.t));
  const CandidatePool pool =
      select_candidates(dag, ix.levels, params.k, params.p, params.h, rng);
  ix.supports = pick_supports(pool, dag, params.k, exec);
  return ix;
}

TestHit try_observations(const ReachIndex& ix, Vertex s, Vertex t) noexcept {
  // Test 1
  if (s == t) return hit(Decision::reachable(Observation::kSameVertex), 1);
  // Test 2. Distinct vertices on the same level cannot reach each other, so
  // both comparisons are non-strict.
  if (ix.levels.fwd[t] <= ix.levels.fwd[s]) {
    return hit(Decision::unreachable(Observation::kB5), 2);
  }
  if (ix.levels.bwd[s] <= ix.levels.bwd[t]) {
    return hit(Decision::unreachable(Observation::kB6), 2);
  }
  // Test 3
  if (const Decision d = support_positive(ix.supports, s, t); d.decisive()) {
    return hit(d, 3);
  }
  // Test 4
  if (!ix.orderings.empty()) {
    if (const Decision d = answer_T(ix.orderings.front(), s, t); d.decisive()) {
      return hit(d, 4);
    }
  }
  // Test 5
  if (const Decision d = support_negative(ix.supports, s, t); d.decisive()) {
    return hit(d, 5);
  }
  // Test 6
  for (std::size_t i = 1; i < ix.orderings.size(); ++i) {
    if (const Decision d = answer_T(ix.orderings[i], s, t); d.decisive()) {
      return hit(d, 6);
    }
  }
  // Test 7
  if (ix.wcc[s] != ix.wcc[t]) {
    return hit(Decision::unreachable(Observation::kB2), 7);
  }
  return {};
}

std::uint32_t observation_overlap(const ReachIndex& ix, Vertex s,
                                  Vertex t) noexcept {
  if (s == t) return bit(Observation::kSameVertex);
  std::uint32_t mask = 0;
  if (ix.levels.fwd[t] <= ix.levels.fwd[s]) mask |= bit(Observation::kB5);
  if (ix.levels.bwd[s] <= ix.levels.bwd[t]) mask |= bit(Observation::kB6);
  if (support_positive(ix.supports, s, t).decisive()) {
    mask |= bit(Observation::kS1);
  }
  const auto& ss = ix.supports;
  const auto s_out = ss.fwd_mask(s);
  const auto t_out = ss.fwd_mask(t);
  const auto s_in = ss.bwd_mask(s);
  const auto t_in = ss.bwd_mask(t);
  for (std::size_t i = 0; i < s_out.size(); ++i) {
    if ((s_out[i] & ~t_out[i]) != 0) mask |= bit(Observation::kS2);
    if ((~s_in[i] & t_in[i]) != 0) mask |= bit(Observation::kS3);
  }
  for (const ExtTopOrder& ord : ix.orderings) {
    mask |= ordering_overlap(ord, s, t);
  }
  if (ix.wcc[s] != ix.wcc[t]) mask |= bit(Observation::kB2);
  return mask;
}

void ObservationStats::record(const QueryOutcome& outcome) noexcept {
  ++total;
  ++(outcome.reachable ? positive : negative);
  if (outcome.answered_by == Observation::kFallback) {
    ++fallback;
    fallback_work += outcome.work;
  } else {
    ++first_hit[outcome.test][index_of(outcome.answered_by)];
  }
}

void ObservationStats::record_overlap(std::uint32_t observation_mask) noexcept {
  ++overlap_queries;
  for (std::size_t o = 0; o < kObservationCount; ++o) {
    if ((observation_mask >> o) & 1U) ++overlap[o];
  }
}

std::uint64_t ObservationStats::first_hits() const noexcept {
  std::uint64_t sum = 0;
  for (const auto& per_test : first_hit) {
    for (std::uint64_t c : per_test) sum += c;
  }
  return sum;
}

std::uint64_t ObservationStats::first_hits(Observation o) const noexcept {
  std::uint64_t sum = 0;
  for (const auto& per_test : first_hit) sum += per_test[index_of(o)];
  return sum;
}

std::optional<double> ObservationStats::fallback_rate() const noexcept {
  if (total == 0) return std::nullopt;
  return static_cast<double>(fallback) / static_cast<double>(total);
}

ObservationStats& ObservationStats::operator+=(
    const ObservationStats& other) noexcept {
  for (std::size_t test = 0; test < first_hit.size(); ++test) {
    for (std::size_t o = 0; o < kObservationCount; ++o) {
      first_hit[test][o] += other.first_hit[test][o];
    }
  }
  for (std::size_t o = 0; o < kObservationCount; ++o) {
    overlap[o] += other.overlap[o];
  }
  fallback += other.fallback;
  fallback_work += other.fallback_work;
  total += other.total;
  overlap_queries += other.overlap_queries;
  positive += other.positive;
  negative += other.negative;
  return *this;
}

PrunedBiBfs::PrunedBiBfs(const ReachIndex& ix)
    : ix_(&ix),
      g_(ix.graph),
      fwd_seen_(ix.num_vertices(), 0),
      bwd_seen_(ix.num_vertices(), 0) {
  if (g_ == nullptr) throw Error("pruned BiBFS needs the index's graph");
  fwd_queue_.reserve(ix.num_vertices());
  bwd_queue_.reserve(ix.num_vertices());
}

bool PrunedBiBfs::resolve(Vertex s, Vertex t, SearchWork& work) {
  work = {};
  if (s == t) return true;
  if (++epoch_ == 0) {
    std::fill(fwd_seen_.begin(), fwd_seen_.end(), 0);
    std::fill(bwd_seen_.begin(), bwd_seen_.end(), 0);
    epoch_ = 1;
  }
  const std::uint32_t epoch = epoch_;
  fwd_queue_.assign(1, s);
  bwd_queue_.assign(1, t);
  fwd_seen_[s] = epoch;
  bwd_seen_[t] = epoch;
  std::size_t fwd_head = 0;
  std::size_t bwd_head = 0;

  // A vertex seen from both sides lies on an s-t path. Pruned vertices stay
  // marked: a pruned forward vertex is still reached from s, and a pruned
  // backward vertex still reaches t.
  while (fwd_head < fwd_queue_.size() && bwd_head < bwd_queue_.size()) {
    ++work.expanded;
    for (Vertex v : g_->out(fwd_queue_[fwd_head++])) {
      ++work.edges_scanned;
      if (bwd_seen_[v] == epoch) return true;
      if (fwd_seen_[v] == epoch) continue;
      fwd_seen_[v] = epoch;
      const Verdict verdict = try_observations(*ix_, v, t).decision.verdict;
      if (verdict == Verdict::kReachable) return true;
      if (verdict == Verdict::kUnknown) fwd_queue_.push_back(v);
    }
    if (fwd_head == fwd_queue_.size()) break;

    ++work.expanded;
    for (Vertex v : g_->in(bwd_queue_[bwd_head++])) {
      ++work.edges_scanned;
      if (fwd_seen_[v] == epoch) return true;
      if (bwd_seen_[v] == epoch) continue;
      bwd_seen_[v] = epoch;
      const Verdict verdict = try_observations(*ix_, s, v).decision.verdict;
      if (verdict == Verdict::kReachable) return true;
      if (verdict == Verdict::kUnknown) bwd_queue_.push_back(v);
    }
  }
  return false;
}

std::optional<FallbackKind> parse_fallback_name(std::string_view name) {
  if (name == "pbibfs") return FallbackKind::kPrunedBiBfs;
  if (name == "bibfs") return FallbackKind::kBiBfs;
  if (name == "bfs") return FallbackKind::kBfs;
  return std::nullopt;
}

std::unique_ptr<QueryResolver> make_resolver(FallbackKind kind,
                                             const ReachIndex& ix) {
  if (ix.graph == nullptr) {
    throw Error("index has no graph attached; fallback search unavailable");
  }
  switch (kind) {
    case FallbackKind::kPrunedBiBfs:
      return std::make_unique<PrunedBiBfs>(ix);
    case FallbackKind::kBiBfs:
      return std::make_unique<BiBfsResolver>(*ix.graph);
    case FallbackKind::kBfs:
      return std::make_unique<BfsResolver>(*ix.graph);
  }
  throw Error("unknown fallback kind");
}

QueryOutcome query(const ReachIndex& ix, Vertex s, Vertex t,
                   QueryResolver& fallback, ObservationStats* stats) {
  QueryOutcome outcome;
  const TestHit h = try_observations(ix, s, t);
  if (h.decision.decisive()) {
    outcome.reachable = h.decision.verdict == Verdict::kReachable;
    outcome.answered_by = h.decision.by;
    outcome.test = h.test;
  } else {
    SearchWork work;
    outcome.reachable = fallback.resolve(s, t, work);
    outcome.answered_by = Observation::kFallback;
    outcome.work = work.expanded;
  }
  if (stats != nullptr) stats->record(outcome);
  return outcome;
}

bool pruned_bibfs(const ReachIndex& ix, Vertex s, Vertex t,
                  ObservationStats* stats) {
  PrunedBiBfs search(ix);
  return query(ix, s, t, search, stats).reachable;
}

}  // namespace oreach
