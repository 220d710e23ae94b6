#include "oreach/supportive.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace oreach {
namespace {

// BFS scratch with epoch-stamped visited marks, so repeated searches do not
// pay O(n) clearing.
class CountingBfs {
 public:
  explicit CountingBfs(Vertex n) : seen_(n, 0) { queue_.reserve(n); }

  template <typename Neighbors>
  std::uint64_t count_from(Vertex root, Neighbors neighbors) {
    if (++epoch_ == 0) {
      std::fill(seen_.begin(), seen_.end(), 0);
      epoch_ = 1;
    }
    queue_.clear();
    queue_.push_back(root);
    seen_[root] = epoch_;
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      for (Vertex w : neighbors(queue_[head])) {
        if (seen_[w] != epoch_) {
          seen_[w] = epoch_;
          queue_.push_back(w);
        }
      }
    }
    return queue_.size();
  }

  // Vertices reached by the last count_from call.
  std::span<const Vertex> reached() const noexcept { return queue_; }

 private:
  std::vector<std::uint32_t> seen_;
  std::uint32_t epoch_ = 0;
  std::vector<Vertex> queue_;
};

ReachCounts count_one(const DiGraph& dag, Vertex v, CountingBfs& bfs) {
  ReachCounts c;
  c.out = bfs.count_from(v, [&dag](Vertex u) { return dag.out(u); });
  c.in = bfs.count_from(v, [&dag](Vertex u) { return dag.in(u); });
  return c;
}

// Moves `want` uniformly chosen elements of `pool` to `out`.
void draw_uniform(std::vector<Vertex>& pool, std::size_t want, Rng& rng,
                  CandidateSource tag, CandidatePool& out) {
  want = std::min(want, pool.size());
  // Partial Fisher-Yates over the first `want` slots.
  for (std::size_t i = 0; i < want; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
    out.candidates.push_back(pool[i]);
    out.sources.push_back(tag);
  }
}

}  // namespace

CandidatePool select_candidates(const DiGraph& dag,
                                const LevelAssignment& levels, std::uint32_t k,
                                std::uint32_t p, std::uint32_t h, Rng& rng) {
  const Vertex n = dag.num_vertices();
  const std::size_t limit =
      std::min<std::uint64_t>(static_cast<std::uint64_t>(k) * p, n);
  CandidatePool pool;
  if (limit == 0) return pool;

  std::vector<char> taken(n, 0);
  auto take_slim = [&](const std::vector<std::uint32_t>& level_of,
                       std::uint32_t max_level) {
    std::vector<std::uint32_t> population(max_level + 1, 0);
    for (Vertex v = 0; v < n; ++v) ++population[level_of[v]];
    // Bucket vertices by level; within a level ids stay ascending.
    std::vector<std::uint32_t> start(max_level + 2, 0);
    for (std::uint32_t l = 0; l <= max_level; ++l) {
      start[l + 1] = start[l] + population[l];
    }
    std::vector<Vertex> by_level(n);
    std::vector<std::uint32_t> cursor(start.begin(), start.end() - 1);
    for (Vertex v = 0; v < n; ++v) by_level[cursor[level_of[v]]++] = v;
    for (std::uint32_t l = 0; l <= max_level; ++l) {
      if (population[l] > h) continue;
      for (std::uint32_t i = start[l]; i < start[l + 1]; ++i) {
        if (pool.size() == limit) return;
        const Vertex v = by_level[i];
        if (taken[v]) continue;
        taken[v] = 1;
        pool.candidates.push_back(v);
        pool.sources.push_back(CandidateSource::kSlimLevel);
      }
    }
  };
  take_slim(levels.fwd, levels.fwd_max);
  take_slim(levels.bwd, levels.bwd_max);

  if (pool.size() < limit) {
    std::vector<Vertex> central;
    for (Vertex v = 0; v < n; ++v) {
      if (!taken[v] && is_central_level(levels.fwd[v], levels.fwd_max)) {
        central.push_back(v);
      }
    }
    const std::size_t before = pool.size();
    draw_uniform(central, limit - pool.size(), rng,
                 CandidateSource::kRandomCentral, pool);
    for (std::size_t i = before; i < pool.size(); ++i) {
      taken[pool.candidates[i]] = 1;
    }
  }
  if (pool.size() < limit) {
    std::vector<Vertex> rest;
    for (Vertex v = 0; v < n; ++v) {
      if (!taken[v]) rest.push_back(v);
    }
    draw_uniform(rest, limit - pool.size(), rng, CandidateSource::kRandomFill,
                 pool);
  }
  return pool;
}

std::uint64_t VertexBits::count() const noexcept {
  std::uint64_t total = 0;
  for (std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

ReachSets reach_sets(const DiGraph& dag, Vertex v) {
  const Vertex n = dag.num_vertices();
  ReachSets sets{VertexBits(n), VertexBits(n)};
  CountingBfs bfs(n);
  bfs.count_from(v, [&dag](Vertex u) { return dag.out(u); });
  for (Vertex w : bfs.reached()) sets.out.set(w);
  bfs.count_from(v, [&dag](Vertex u) { return dag.in(u); });
  for (Vertex w : bfs.reached()) sets.in.set(w);
  return sets;
}

std::vector<ReachCounts> candidate_reach_counts(
    const DiGraph& dag, std::span<const Vertex> candidates, Execution exec) {
  std::vector<ReachCounts> counts(candidates.size());
  const Vertex n = dag.num_vertices();
  if (exec == Execution::kSerial) {
    CountingBfs bfs(n);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      counts[i] = count_one(dag, candidates[i], bfs);
    }
    return counts;
  }
#pragma omp parallel
  {
    CountingBfs bfs(n);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(candidates.size());
         ++i) {
      counts[i] = count_one(dag, candidates[i], bfs);
    }
  }
  return counts;
}

SupportSet::SupportSet(Vertex n, std::uint32_t k_requested,
                       std::vector<Vertex> supports)
    : k_requested_(k_requested),
      supports_(std::move(supports)),
      words_((k_requested + 63) / 64),
      fwd_(static_cast<std::size_t>(n) * words_, 0),
      bwd_(static_cast<std::size_t>(n) * words_, 0) {}

SupportSet pick_supports(const CandidatePool& pool, const DiGraph& dag,
                         std::uint32_t k, Execution exec) {
  const std::vector<ReachCounts> counts =
      candidate_reach_counts(dag, pool.candidates, exec);

  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const std::uint64_t pa = counts[a].product();
    const std::uint64_t pb = counts[b].product();
    if (pa != pb) return pa > pb;
    return pool.candidates[a] < pool.candidates[b];
  });
  const std::size_t keep = std::min<std::size_t>(k, order.size());
  std::vector<Vertex> chosen;
  chosen.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    chosen.push_back(pool.candidates[order[i]]);
  }

  SupportSet ss(dag.num_vertices(), k, chosen);
  CountingBfs bfs(dag.num_vertices());
  for (std::uint32_t slot = 0; slot < chosen.size(); ++slot) {
    const std::uint64_t bit = std::uint64_t{1} << (slot % 64);
    const std::size_t word = slot / 64;
    bfs.count_from(chosen[slot], [&dag](Vertex u) { return dag.out(u); });
    for (Vertex w : bfs.reached()) ss.fwd_mask(w)[word] |= bit;
    bfs.count_from(chosen[slot], [&dag](Vertex u) { return dag.in(u); });
    for (Vertex w : bfs.reached()) ss.bwd_mask(w)[word] |= bit;
  }
  return ss;
}

}  // namespace oreach
